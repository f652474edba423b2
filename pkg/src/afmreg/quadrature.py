"""Adaptive one-dimensional integration.

Two engines:

* ``integrate`` -- globally adaptive Gauss-Kronrod 7/15 with optional
  structure hints (a Lorentzian peak location/width and a Bessel-type
  oscillation rate) that seed the initial subdivision.  Panels are
  evaluated in batches, so integrands must accept numpy arrays.

* ``integrate_oscillatory`` -- adaptive Filon rule for
  int f(x) e^{i omega x} dx with a smooth envelope f.  The phase factor
  is integrated exactly against a per-panel parabola, so the cost is set
  by the envelope, not by omega.  Used by the decoherence-rate kernels
  whose oscillation rate (the elapsed time tau) can reach 1e7.

The s -> 0 limit of Lorentzian integrands is the caller's business: the
closed-form expressions exist for that case and the integrator never
tries to take the limit itself.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, IntegrandError

# 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-node layout on [-1, 1], ascending.
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK_FULL = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    abs_error_estimate: float
    subdivisions: int


@dataclass(frozen=True)
class KernelSpec:
    """Structure hints for the adaptive subdivision.

    peak_location/peak_width describe a Lorentzian factor
    1/((x - peak)^2 + width^2); oscillation_rate is the phase rate of a
    Bessel-type factor, giving ~pi/rate spacing between its zeros.
    """

    peak_location: float | None = None
    peak_width: float | None = None
    oscillation_rate: float | None = None

    def __post_init__(self):
        if self.peak_location is not None:
            if self.peak_width is None or self.peak_width <= 0:
                raise ValueError("peak_width must be positive when peak_location is set")


def _gk_batch(f, lefts, rights):
    """Evaluate GK15 on a batch of panels. Returns (kronrod, error) arrays."""
    lefts = np.asarray(lefts, dtype=float)
    rights = np.asarray(rights, dtype=float)
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))
        loc = pts[bad[0][0], bad[0][1]]
        raise IntegrandError(f"non-finite integrand sample at x = {loc!r}", location=float(loc))
    resk = half * (vals @ _WK_FULL)
    resg = half * (vals @ _WG_FULL)
    # QUADPACK-style error scaling keeps the estimate sharp when |K - G|
    # is already tiny.
    mean = resk / (2.0 * half)
    resasc = half * (np.abs(vals - mean[:, None]) @ _WK_FULL)
    raw = np.abs(resk - resg)
    err = np.where(
        (resasc != 0) & (raw != 0),
        resasc * np.minimum(1.0, (200.0 * raw / np.where(resasc == 0, 1.0, resasc)) ** 1.5),
        raw,
    )
    return resk, err


def _initial_breakpoints(a, b, hint):
    pts = [a, b]
    if hint is not None:
        if hint.oscillation_rate and hint.oscillation_rate > 0:
            spacing = np.pi / hint.oscillation_rate
            n = int(np.ceil((b - a) / spacing))
            n = min(n, 4096)
            if n > 1:
                pts.extend(np.linspace(a, b, n + 1)[1:-1].tolist())
        if hint.peak_location is not None:
            w = hint.peak_width
            for m in (1.0, 3.0, 10.0):
                for p in (hint.peak_location - m * w, hint.peak_location + m * w):
                    if a < p < b:
                        pts.append(p)
            if a < hint.peak_location < b:
                pts.append(hint.peak_location)
    pts = np.unique(np.asarray(pts, dtype=float))
    return pts


def integrate(f, a, b, tol=1e-9, hint=None, max_subdivisions=20000):
    """Adaptively integrate f over the finite interval [a, b].

    f must be vectorized (accept a 1-D numpy array).  Succeeds when the
    accumulated error estimate drops under max(tol, tol*|value|);
    otherwise raises ConvergenceError carrying the best estimate.
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError("integrate: need finite a < b")
    if tol <= 0:
        raise ValueError("integrate: tol must be positive")

    pts = _initial_breakpoints(a, b, hint)
    lefts = pts[:-1]
    rights = pts[1:]
    vals, errs = _gk_batch(f, lefts, rights)
    heap = []
    for lo, hi, v, e in zip(lefts, rights, vals, errs):
        heapq.heappush(heap, (-e, lo, hi, v))
    total_v = float(vals.sum())
    total_e = float(errs.sum())
    n_panels = len(lefts)

    while total_e > max(tol, tol * abs(total_v)):
        if n_panels >= max_subdivisions:
            raise ConvergenceError(
                f"subdivision cap {max_subdivisions} exceeded (error estimate {total_e:.3e})",
                best_estimate=total_v,
                error_estimate=total_e,
                subdivisions=n_panels,
            )
        # split the worst panels in one vectorized batch
        batch = []
        first_err = None
        for _ in range(min(64, len(heap))):
            neg_e, lo, hi, v = heapq.heappop(heap)
            batch.append((lo, hi, v, -neg_e))
            if first_err is None:
                first_err = -neg_e
            if not heap or -heap[0][0] < 0.25 * first_err:
                break
        lo_arr = np.array([p[0] for p in batch])
        hi_arr = np.array([p[1] for p in batch])
        mid_arr = 0.5 * (lo_arr + hi_arr)
        halves_l = np.stack([lo_arr, mid_arr], axis=1).reshape(-1)
        halves_r = np.stack([mid_arr, hi_arr], axis=1).reshape(-1)
        vals, errs = _gk_batch(f, halves_l, halves_r)
        for (lo, hi, v_old, e_old), i in zip(batch, range(0, 2 * len(batch), 2)):
            total_v += vals[i] + vals[i + 1] - v_old
            total_e += errs[i] + errs[i + 1] - e_old
            heapq.heappush(heap, (-errs[i], halves_l[i], halves_r[i], vals[i]))
            heapq.heappush(heap, (-errs[i + 1], halves_l[i + 1], halves_r[i + 1], vals[i + 1]))
        n_panels += len(batch)
        # recompute the running sums occasionally to shed cancellation noise
        if n_panels % 2048 < len(batch):
            total_v = float(sum(item[3] for item in heap))
            total_e = float(sum(-item[0] for item in heap))

    return IntegrationResult(value=total_v, abs_error_estimate=total_e, subdivisions=n_panels)


# ----------------------------------------------------------------------
# Filon rule for smooth-envelope oscillatory integrals
# ----------------------------------------------------------------------

def _filon_moments(theta):
    """M_k(theta) = int_{-1}^{1} t^k e^{i theta t} dt for k = 0, 1, 2."""
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 0.5
    t2 = theta * theta
    # series (|theta| < 0.5): absolute accuracy << 1e-16 with 5 terms
    m0_s = 2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0
                  + t2 * t2 * t2 * t2 / 362880.0)
    m1_s = 2.0 * theta * (1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0 - t2 * t2 * t2 / 45360.0)
    m2_s = 2.0 * (1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        st = np.sin(theta)
        ct = np.cos(theta)
        m0_c = 2.0 * st / theta
        m1_c = 2.0 * (st - theta * ct) / t2
        m2_c = 2.0 * ((t2 - 2.0) * st + 2.0 * theta * ct) / (t2 * theta)
    m0 = np.where(small, m0_s, m0_c)
    m1 = 1j * np.where(small, m1_s, m1_c)
    m2 = np.where(small, m2_s, m2_c)
    return m0, m1, m2


def _filon_batch(f_vals, lefts, rights, omega):
    """Parabolic Filon on panels given f at (left, mid, right) per panel."""
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    f0, f1, f2 = f_vals[:, 0], f_vals[:, 1], f_vals[:, 2]
    c0 = f1
    c1 = 0.5 * (f2 - f0)
    c2 = 0.5 * (f0 + f2) - f1
    m0, m1, m2 = _filon_moments(omega * half)
    phase = np.exp(1j * omega * mid)
    return half * phase * (c0 * m0 + c1 * m1 + c2 * m2)


@dataclass(frozen=True)
class OscillatoryResult:
    cos_part: float
    sin_part: float
    abs_error_estimate: float
    subdivisions: int

    @property
    def complex_value(self):
        return self.cos_part + 1j * self.sin_part


def integrate_oscillatory(f, a, b, omega, tol=1e-9, breakpoints=None,
                          min_panels=32, max_subdivisions=20000):
    """Compute int_a^b f(x) e^{i omega x} dx for a smooth envelope f.

    Returns the cosine and sine projections.  Panel error is estimated by
    comparing each panel against its two halves; panels are refined
    greedily.  breakpoints seed the initial mesh (peak clusters etc.).
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError("integrate_oscillatory: need finite a < b")

    pts = [a, b]
    if breakpoints is not None:
        pts.extend(p for p in np.asarray(breakpoints, dtype=float) if a < p < b)
    base = np.unique(np.asarray(pts))
    # top up to min_panels with a uniform mesh
    if len(base) - 1 < min_panels:
        base = np.unique(np.concatenate([base, np.linspace(a, b, min_panels + 1)]))

    def eval_panels(lefts, rights):
        mids = 0.5 * (lefts + rights)
        quarters_l = 0.5 * (lefts + mids)
        quarters_r = 0.5 * (mids + rights)
        xs = np.stack([lefts, quarters_l, mids, quarters_r, rights], axis=1)
        vals = np.asarray(f(xs.ravel()), dtype=float).reshape(xs.shape)
        if not np.all(np.isfinite(vals)):
            bad = np.argwhere(~np.isfinite(vals))
            loc = xs[bad[0][0], bad[0][1]]
            raise IntegrandError(f"non-finite integrand sample at x = {loc!r}",
                                 location=float(loc))
        coarse = _filon_batch(vals[:, [0, 2, 4]], lefts, rights, omega)
        fine = (_filon_batch(vals[:, [0, 1, 2]], lefts, mids, omega)
                + _filon_batch(vals[:, [2, 3, 4]], mids, rights, omega))
        err = np.abs(fine - coarse)
        return fine, err

    lefts, rights = base[:-1], base[1:]
    vals, errs = eval_panels(lefts, rights)
    heap = []
    for lo, hi, v, e in zip(lefts, rights, vals, errs):
        heapq.heappush(heap, (-e, lo, hi, v.real, v.imag))
    total = complex(vals.sum())
    total_e = float(errs.sum())
    n_panels = len(lefts)

    while total_e > max(tol, tol * abs(total)):
        if n_panels >= max_subdivisions:
            raise ConvergenceError(
                f"oscillatory subdivision cap {max_subdivisions} exceeded "
                f"(error estimate {total_e:.3e})",
                best_estimate=total, error_estimate=total_e, subdivisions=n_panels,
            )
        batch = []
        first_err = None
        for _ in range(min(64, len(heap))):
            neg_e, lo, hi, vr, vi = heapq.heappop(heap)
            batch.append((lo, hi, complex(vr, vi), -neg_e))
            if first_err is None:
                first_err = -neg_e
            if not heap or -heap[0][0] < 0.25 * first_err:
                break
        lo_arr = np.array([p[0] for p in batch])
        hi_arr = np.array([p[1] for p in batch])
        mid_arr = 0.5 * (lo_arr + hi_arr)
        halves_l = np.stack([lo_arr, mid_arr], axis=1).reshape(-1)
        halves_r = np.stack([mid_arr, hi_arr], axis=1).reshape(-1)
        vals, errs = eval_panels(halves_l, halves_r)
        for (lo, hi, v_old, e_old), i in zip(batch, range(0, 2 * len(batch), 2)):
            total += vals[i] + vals[i + 1] - v_old
            total_e += errs[i] + errs[i + 1] - e_old
            heapq.heappush(heap, (-errs[i], halves_l[i], halves_r[i],
                                  vals[i].real, vals[i].imag))
            heapq.heappush(heap, (-errs[i + 1], halves_l[i + 1], halves_r[i + 1],
                                  vals[i + 1].real, vals[i + 1].imag))
        n_panels += len(batch)
        if n_panels % 2048 < len(batch):
            total = complex(sum(complex(it[3], it[4]) for it in heap))
            total_e = float(sum(-it[0] for it in heap))

    return OscillatoryResult(cos_part=total.real, sin_part=total.imag,
                             abs_error_estimate=total_e, subdivisions=n_panels)
