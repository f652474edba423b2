"""Dimensionless model parameters, magnon spectrum and register geometry.

Unit conventions: all fields are measured in units of the exchange field
B_E, energies in units of hbar*omega_E with omega_E = gamma_S * B_E, and
time as tau = omega_E * t.  The in-plane magnon spectrum is the parabolic
isotropic form E(q) = sqrt(b_C^2 + q^2/12), extrapolated over the whole
disk |q| <= pi; that extrapolation is a deliberate model assumption, not
an accident.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DomainError
from .quadrature import integrate

#: electron gyromagnetic ratio, rad/s/T
GAMMA_S = 175.88e9


def critical_field(b_a: float) -> float:
    """Spin-flop critical field b_C = sqrt(2 b_A + b_A^2) in units of B_E."""
    if not (0.0 < b_a < 1.0):
        raise DomainError(f"critical_field: need 0 < b_A < 1, got {b_a}")
    return math.sqrt(2.0 * b_a + b_a * b_a)


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless constants of the antiferromagnet plus register.

    b_a : anisotropy field / B_E, in (0, 1)
    b : uniform external field / B_E, in (0, b_C)
    g : field gradient times in-plane lattice constant / B_E (>= 0;
        zero selects the homogeneous-field limit)
    s : magnon damping / adiabatic switching rate (> 0)
    a : hyperfine constant A / omega_E (~1e-3)
    gamma_ratio : nuclear-to-electron gyromagnetic ratio (~1e-3)
    omega_e : exchange angular frequency in rad/s, used only when
        converting to physical units; optional
    """

    b_a: float
    b: float
    g: float
    s: float
    a: float
    gamma_ratio: float = 1e-3
    omega_e: float | None = None

    def __post_init__(self):
        b_c = critical_field(self.b_a)
        if not (0.0 < self.b < b_c):
            raise DomainError(
                f"ModelParams: need 0 < b < b_C = {b_c:.6g}, got b = {self.b}")
        if self.g < 0.0:
            raise DomainError("ModelParams: gradient g must be non-negative")
        if self.s <= 0.0:
            raise DomainError("ModelParams: damping s must be positive")
        if self.a <= 0.0:
            raise DomainError("ModelParams: hyperfine constant a must be positive")
        if self.s > 0.1 * (b_c - self.b):
            warnings.warn(
                "damping s exceeds 10% of the gap b_C - b; the adiabatic "
                "switching assumption s << b_C - b is strained",
                stacklevel=2)

    @property
    def b_c(self) -> float:
        return critical_field(self.b_a)

    @property
    def b_c_sq(self) -> float:
        return 2.0 * self.b_a + self.b_a * self.b_a

    @property
    def a_sq(self) -> float:
        return self.a * self.a

    @property
    def band_top(self) -> float:
        """Upper edge of the flat-band reference sqrt(1 + b_C^2)."""
        return math.sqrt(1.0 + self.b_c_sq)

    @property
    def xi_max(self) -> float:
        """Upper integration limit sqrt(b_C^2 + pi^2/12) - b_C in xi-space."""
        return math.sqrt(self.b_c_sq + math.pi * math.pi / 12.0) - self.b_c

    @classmethod
    def from_critical_field(cls, b_c_sq: float, g: float, s: float,
                            a_sq: float = 1e-6, delta_b0: float = 1e-3,
                            b: float | None = None, gamma_ratio: float = 1e-3,
                            omega_e: float | None = None) -> "ModelParams":
        """Build params from b_C^2 and either b or the site-0 detuning.

        This is the natural parametrization of the reference curves,
        which quote b_C^2, g, s and per-site detunings instead of b_A, b.
        """
        if b_c_sq <= 0 or b_c_sq >= 3.0:
            raise ConfigError(f"b_c_sq out of range (0, 3): {b_c_sq}")
        b_a = math.sqrt(1.0 + b_c_sq) - 1.0
        b_c = math.sqrt(b_c_sq)
        if b is None:
            b = b_c - delta_b0
        return cls(b_a=b_a, b=b, g=g, s=s, a=math.sqrt(a_sq),
                   gamma_ratio=gamma_ratio, omega_e=omega_e)

    def with_(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class QubitPairGeometry:
    """Two register sites k < l and the local detuning at site k.

    delta_b_k = b_C - b - g*k is the detuning of the local field at the
    first site from the critical field.
    """

    k: int
    l: int
    delta_b_k: float
    period: int = 100

    def __post_init__(self):
        if self.l < self.k:
            raise DomainError("QubitPairGeometry: need l >= k")
        if self.period <= 0:
            raise DomainError("QubitPairGeometry: period must be positive")

    @property
    def separation(self) -> int:
        return self.l - self.k

    @classmethod
    def from_sites(cls, k: int, l: int, params: ModelParams,
                   period: int = 100) -> "QubitPairGeometry":
        delta = params.b_c - params.b - params.g * k
        return cls(k=k, l=l, delta_b_k=delta, period=period)

    @classmethod
    def from_detuning(cls, delta_b_k: float, separation: int,
                      period: int = 100) -> "QubitPairGeometry":
        """Fixture-style construction: pin the detuning, put the pair at
        sites (0, separation)."""
        return cls(k=0, l=int(separation), delta_b_k=delta_b_k, period=period)

    def midpoint_detuning(self, params: ModelParams) -> float:
        """Detuning of the midpoint field: delta_b_k - g*(l-k)/2."""
        return self.delta_b_k - params.g * self.separation / 2.0

    def delta_b_l(self, params: ModelParams) -> float:
        """Detuning at the second site: delta_b_k - g*(l-k)."""
        return self.delta_b_k - params.g * self.separation


class Regime(enum.Enum):
    GAPPED = "Gapped"
    TURNING_POINT = "TurningPoint"
    OSCILLATORY = "Oscillatory"


def magnon_energy(q_perp_sq, params: ModelParams):
    """Lower-branch reference energy E(q) = sqrt(b_C^2 + q^2/12).

    Accepts scalars or arrays; the Zeeman-split branches are E(q) +- b,
    see magnon_branches.
    """
    q2 = np.asarray(q_perp_sq, dtype=float)
    if np.any(q2 < 0.0):
        raise DomainError("magnon_energy: q_perp_sq must be non-negative")
    out = np.sqrt(params.b_c_sq + q2 / 12.0)
    return out[()] if out.ndim == 0 else out


def magnon_branches(q_perp_sq, params: ModelParams):
    """The two Zeeman-split branches (E - b, E + b)."""
    e = magnon_energy(q_perp_sq, params)
    return e - params.b, e + params.b


def coeff_magnitudes(energy, params: ModelParams):
    """Squared transformation-coefficient magnitudes (u^2, v^2).

    u^2 = (sqrt(1+b_C^2)/E + 1)/(4 pi g), v^2 the same with -1;
    u^2 - v^2 = 1/(2 pi g) is the per-mode normalization.
    """
    if params.g <= 0.0:
        raise DomainError("coeff_magnitudes: requires a strictly positive gradient")
    e = np.asarray(energy, dtype=float)
    if np.any(e < params.b_c * (1.0 - 1e-12)):
        raise DomainError("coeff_magnitudes: energy below the band gap b_C")
    ratio = params.band_top / e
    denom = 4.0 * math.pi * params.g
    u_sq = (ratio + 1.0) / denom
    v_sq = (ratio - 1.0) / denom
    if np.ndim(u_sq) == 0:
        return float(u_sq), float(v_sq)
    return u_sq, v_sq


def spin_contraction(params: ModelParams, tol: float = 1e-10) -> float:
    """Ground-state flipped-spin fraction per site.

    psi = (1/(2 pi)^2) int (sqrt(1+b_C^2) - E(q))/(2 E(q)) d^2q over the
    disk |q| <= pi, evaluated radially with the measure
    d^2q = 24 pi E dE.
    """
    top = params.band_top
    b_c = params.b_c

    def radial(e):
        return (top - e) / (2.0 * e) * e

    lo, hi = b_c, math.sqrt(params.b_c_sq + math.pi * math.pi / 12.0)
    res = integrate(radial, lo, hi, tol=tol)
    psi = 24.0 * math.pi / (2.0 * math.pi) ** 2 * res.value
    assert psi < 0.5, "spin contraction should stay well below 1/2"
    return psi


#: half-width of the regime band around mu^2 = 0, in units of 24 b_C s
TURNING_POINT_BAND = 1.0


def turning_point_params(geom: QubitPairGeometry, params: ModelParams):
    """Squared decay parameter mu^2 = 24 b_C (delta_b_k - g(l-k)/2) and
    the regime it selects.

    The TurningPoint band |mu^2| < 24 b_C s ties "too close to call"
    to the magnon damping, the infrared regulator of the perturbation
    theory.
    """
    mu_sq = 24.0 * params.b_c * geom.midpoint_detuning(params)
    band = TURNING_POINT_BAND * 24.0 * params.b_c * params.s
    if abs(mu_sq) < band:
        regime = Regime.TURNING_POINT
    elif mu_sq > 0:
        regime = Regime.GAPPED
    else:
        regime = Regime.OSCILLATORY
    return mu_sq, regime


class Quantity(enum.Enum):
    TIME = "time"
    FIELD = "field"
    RATE = "rate"


def to_physical(params: ModelParams, value: float, quantity: Quantity | str) -> float:
    """Convert a dimensionless value to physical units.

    time: tau -> seconds (t = tau / omega_E)
    field: b -> Tesla (B = b * B_E with B_E = omega_E / gamma_S)
    rate: dimensionless rate -> 1/s (times omega_E)
    """
    if params.omega_e is None or params.omega_e <= 0:
        raise ConfigError("to_physical: omega_e is not set on ModelParams")
    q = Quantity(quantity)
    if q is Quantity.TIME:
        return value / params.omega_e
    if q is Quantity.FIELD:
        return value * params.omega_e / GAMMA_S
    return value * params.omega_e
