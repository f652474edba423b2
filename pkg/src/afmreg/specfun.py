"""Special-function kernel: J0, Y0, K0, complex E1, si and ci.

Every function is computed by two independent routes -- a truncated
power series below a fixed crossover and an asymptotic/continued-fraction
form above it.  The routes overlap in a window around the crossover and
must agree there to 1e-9; the test suite leans on that cross-route check
instead of an external reference library.

Conventions:
  * si(x) = -int_x^inf sin(t)/t dt  (so si(0+) = -pi/2, si = Si - pi/2)
  * ci(x) = -int_x^inf cos(t)/t dt  (the usual Ci)
  * e1(z) is the principal branch, |arg z| < pi.

All entry points accept scalars or numpy arrays and are pure/reentrant.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286060651209

# Series/asymptotic crossovers.  Chosen so both routes deliver <=1e-13
# relative in a +-1 window around the switch (see the overlap tests).
_J0_CROSS = 14.0
_K0_CROSS = 4.0
_E1_CROSS = 4.0
_SICI_CROSS = 4.0

_LD = np.longdouble


def _as_array(x, dtype=float):
    arr = np.asarray(x, dtype=dtype)
    return arr, (arr.ndim == 0)


def _maybe_scalar(out, scalar):
    return out[()] if scalar else out


# ----------------------------------------------------------------------
# Bessel J0 / Y0
# ----------------------------------------------------------------------

def _j0_series(x):
    """Power series sum_k (-1)^k (x^2/4)^k / (k!)^2, long-double accumulation."""
    x = np.asarray(x, dtype=_LD)
    q = x * x / 4.0
    term = np.ones_like(q)
    total = np.ones_like(q)
    for k in range(1, 48):
        term = term * (-q) / (_LD(k) * _LD(k))
        total = total + term
    return np.asarray(total, dtype=float)


def _y0_series(x):
    """Y0 = (2/pi)[(ln(x/2)+gamma) J0(x) + sum_k (-1)^{k+1} H_k (x^2/4)^k/(k!)^2]."""
    x = np.asarray(x, dtype=_LD)
    q = x * x / 4.0
    term = np.ones_like(q)
    hk = _LD(0.0)
    total = np.zeros_like(q)
    for k in range(1, 48):
        term = term * (-q) / (_LD(k) * _LD(k))
        hk = hk + 1.0 / _LD(k)
        total = total - term * hk
    j0v = _j0_series(np.asarray(x, dtype=float))
    lead = (np.log(np.asarray(x, dtype=float) / 2.0) + EULER_GAMMA) * j0v
    return (2.0 / np.pi) * (lead + np.asarray(total, dtype=float))


def _hankel_sum(x, max_terms=40):
    """Complex asymptotic sum S(x) = sum_m i^m (0,m) x^-m, optimally truncated.

    (0,m) follows the recurrence (0,m) = (0,m-1) * (-(2m-1)^2) / (8m).
    J0 = sqrt(2/(pi x)) Re[e^{i(x - pi/4)} S];  Y0 takes the Im part.
    """
    x = np.asarray(x, dtype=float)
    term = np.ones(x.shape, dtype=complex)
    total = np.ones(x.shape, dtype=complex)
    prev_mag = np.full(x.shape, np.inf)
    active = np.ones(x.shape, dtype=bool)
    inv = 1.0 / x
    for m in range(1, max_terms + 1):
        term = term * (1j * inv) * (-((2 * m - 1) ** 2) / (8.0 * m))
        mag = np.abs(term)
        # freeze elements whose terms started growing (optimal truncation)
        active &= mag < prev_mag
        total = np.where(active, total + term, total)
        prev_mag = np.where(active, mag, prev_mag)
        if not active.any():
            break
    return total


def _j0_y0_large(x):
    s = _hankel_sum(x)
    chi = x - 0.25 * np.pi
    phase = np.cos(chi) + 1j * np.sin(chi)
    amp = np.sqrt(2.0 / (np.pi * x))
    z = amp * phase * s
    return z.real, z.imag


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Even in x; absolute error below 1e-12 on [0, 1e4].
    """
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j0: non-finite argument")
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax <= _J0_CROSS
    if small.any():
        out[small] = _j0_series(ax[small])
    if (~small).any():
        out[~small] = _j0_y0_large(ax[~small])[0]
    return _maybe_scalar(out, scalar)


def bessel_y0(x):
    """Bessel function of the second kind (Neumann function), order zero.

    Requires x > 0; absolute error below 1e-10 on (1e-8, 1e4).
    """
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_y0: non-finite argument")
    if np.any(arr <= 0.0):
        raise DomainError("bessel_y0: requires x > 0 (logarithmic singularity)")
    out = np.empty_like(arr)
    small = arr <= _J0_CROSS
    if small.any():
        out[small] = _y0_series(arr[small])
    if (~small).any():
        out[~small] = _j0_y0_large(arr[~small])[1]
    return _maybe_scalar(out, scalar)


# ----------------------------------------------------------------------
# Macdonald function K0
# ----------------------------------------------------------------------

def _i0_series_ld(x):
    q = x * x / 4.0
    term = np.ones_like(q)
    total = np.ones_like(q)
    for k in range(1, 60):
        term = term * q / (_LD(k) * _LD(k))
        total = total + term
    return total


def _k0_series(x):
    """K0 = -(ln(x/2)+gamma) I0(x) + sum_k H_k (x^2/4)^k/(k!)^2."""
    xl = np.asarray(x, dtype=_LD)
    q = xl * xl / 4.0
    term = np.ones_like(q)
    hk = _LD(0.0)
    total = np.zeros_like(q)
    for k in range(1, 60):
        term = term * q / (_LD(k) * _LD(k))
        hk = hk + 1.0 / _LD(k)
        total = total + term * hk
    i0 = _i0_series_ld(xl)
    lead = -(np.log(xl / 2.0) + _LD(EULER_GAMMA)) * i0
    return np.asarray(lead + total, dtype=float)


def _k0_cf(x, max_iter=200, eps=1e-16):
    """Steed-type continued fraction for K0, stable for x >~ 2."""
    x = np.asarray(x, dtype=float)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    delh = d.copy()
    h = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = np.full_like(x, a1)
    a = np.full_like(x, -a1)
    s = 1.0 + q * delh
    converged = np.zeros(x.shape, dtype=bool)
    for i in range(2, max_iter):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        converged |= np.abs(dels) < eps * np.abs(s)
        if converged.all():
            break
    return np.sqrt(np.pi / (2.0 * x)) * np.exp(-x) / s


def bessel_k0(x):
    """Modified Bessel function of the second kind (Macdonald), order zero.

    Requires x > 0; relative error below 1e-10 on (1e-8, 700); underflows
    to zero for very large arguments.
    """
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_k0: non-finite argument")
    if np.any(arr <= 0.0):
        raise DomainError("bessel_k0: requires x > 0")
    out = np.empty_like(arr)
    small = arr <= _K0_CROSS
    if small.any():
        out[small] = _k0_series(arr[small])
    if (~small).any():
        with np.errstate(under="ignore"):
            out[~small] = _k0_cf(arr[~small])
    return _maybe_scalar(out, scalar)


# ----------------------------------------------------------------------
# Exponential integral E1 on the principal branch
# ----------------------------------------------------------------------

def _e1_series(z):
    """E1(z) = -gamma - ln z - sum_{n>=1} (-z)^n / (n n!), |z| <= ~4."""
    z = np.asarray(z, dtype=complex)
    term = np.ones_like(z)
    total = np.zeros_like(z)
    for n in range(1, 40):
        term = term * (-z) / n
        total = total + term / n
    return -EULER_GAMMA - np.log(z) - total


def _e1_cf(z, max_iter=400, eps=1e-16):
    """Modified Lentz evaluation of E1(z) = e^{-z}/(z+1- 1/(z+3- 4/(...))).

    Converges for |z| >~ 3 away from the negative real axis.
    """
    z = np.asarray(z, dtype=complex)
    tiny = 1e-290
    b = z + 1.0
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    f = d.copy()
    converged = np.zeros(z.shape, dtype=bool)
    for j in range(1, max_iter):
        a = -float(j) * float(j)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        c = np.where(c == 0, tiny, c)
        delta = c * d
        f = f * delta
        converged |= np.abs(delta - 1.0) < eps
        if converged.all():
            break
    with np.errstate(under="ignore"):
        return np.exp(-z) * f


def exp_integral_e1(z):
    """Exponential integral E1(z) = int_z^inf e^{-t}/t dt, principal branch.

    Requires z != 0 and |arg z| < pi (the negative real axis is the cut).
    Relative error below 1e-9 for 1e-6 <= |z| <= 700.
    """
    arr, scalar = _as_array(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("exp_integral_e1: non-finite argument")
    if np.any(arr == 0):
        raise DomainError("exp_integral_e1: divergent at z = 0")
    if np.any((arr.real < 0) & (arr.imag == 0)):
        raise DomainError("exp_integral_e1: argument on the branch cut (arg z = pi)")
    out = np.empty_like(arr)
    small = np.abs(arr) <= _E1_CROSS
    if small.any():
        out[small] = _e1_series(arr[small])
    if (~small).any():
        out[~small] = _e1_cf(arr[~small])
    return _maybe_scalar(out, scalar)


# ----------------------------------------------------------------------
# si / ci (tail-integral convention)
# ----------------------------------------------------------------------

def _si_series(x):
    """Si(x) = sum_k (-1)^k x^{2k+1} / ((2k+1)(2k+1)!), small |x|."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    term = x.copy()
    total = x / 1.0
    fact_term = x.copy()
    for k in range(1, 30):
        fact_term = fact_term * (-x2) / ((2 * k) * (2 * k + 1))
        total = total + fact_term / (2 * k + 1)
    del term
    return total


def _ci_series(x):
    """Ci(x) = gamma + ln x + sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!), small x."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    fact_term = np.ones_like(x)
    total = np.zeros_like(x)
    for k in range(1, 30):
        fact_term = fact_term * (-x2) / ((2 * k - 1) * (2 * k))
        total = total + fact_term / (2 * k)
    return EULER_GAMMA + np.log(x) + total


def _sici_large(x):
    """si and ci for x > crossover via E1(ix) = -ci(x) + i si(x)."""
    e1ix = _e1_cf(1j * np.asarray(x, dtype=float))
    return e1ix.imag, -e1ix.real


def sin_integral_si(x):
    """si(x) = -int_x^inf sin(t)/t dt = Si(x) - pi/2; defined for all finite x."""
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("sin_integral_si: non-finite argument")
    ax = np.abs(arr)
    si_abs = np.empty_like(ax)
    small = ax <= _SICI_CROSS
    if small.any():
        si_abs[small] = _si_series(ax[small]) - 0.5 * np.pi
    if (~small).any():
        si_abs[~small] = _sici_large(ax[~small])[0]
    # Si is odd: si(-x) = -Si(x) - pi/2
    si_pos = si_abs
    out = np.where(arr >= 0, si_pos, -(si_pos + 0.5 * np.pi) - 0.5 * np.pi)
    return _maybe_scalar(out, scalar)


def cos_integral_ci(x):
    """ci(x) = -int_x^inf cos(t)/t dt; requires x > 0."""
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("cos_integral_ci: non-finite argument")
    if np.any(arr <= 0.0):
        raise DomainError("cos_integral_ci: requires x > 0")
    out = np.empty_like(arr)
    small = arr <= _SICI_CROSS
    if small.any():
        out[small] = _ci_series(arr[small])
    if (~small).any():
        out[~small] = _sici_large(arr[~small])[1]
    return _maybe_scalar(out, scalar)
