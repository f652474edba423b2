"""Indirect magnon-mediated coupling between two register spins.

The headline quantity is the dimensionless coupling

    V(delta_b_k, n) = int_0^ximax dxi
        (sqrt(1+b_C^2) + b_C + xi) * (xi + Dmid) * J0(theta(xi) n)
        / ((xi + Dmid)^2 + s^2)

with n = l - k, Dmid = delta_b_k - g n / 2 the midpoint detuning and
theta(xi) = sqrt(12 xi (xi + 2 b_C)) the radial phase of the in-plane
modes.  V is quoted in normalized units; multiply by 3 a^2 / (2 pi)
(``coupling_to_energy``) to recover the bare coupling energy.

Away from the turning point mu^2 = 24 b_C Dmid = 0 the integral
collapses onto Macdonald (mu^2 > 0) or Neumann (mu^2 < 0) closed forms,
which the exact evaluator is cross-validated against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, RegimeError
from .model import GAMMA_S, ModelParams, QubitPairGeometry, Regime, turning_point_params
from .quadrature import KernelSpec, integrate
from .specfun import EULER_GAMMA, bessel_j0, bessel_k0, bessel_y0

#: vacuum magnetic permeability over 4 pi, T m / A
MU0_OVER_4PI = 1e-7
HBAR = 1.054571817e-34


class CouplingRegime(enum.Enum):
    EXACT_QUADRATURE = "ExactQuadrature"
    MACDONALD = "Macdonald"
    NEUMANN = "Neumann"
    LOG_GAPPED = "LogGapped"
    LOG_OSCILLATORY = "LogOscillatory"


@dataclass(frozen=True)
class CouplingResult:
    """Coupling value in normalized units plus regime diagnostics.

    mu_or_nu is sqrt(|mu^2|); argument is mu_or_nu * (l - k).
    asymptote_diagnostic carries the far-field (exponential or sine)
    form where one exists.  perturbation_theory_unreliable marks values
    inside the turning-point band, where second-order perturbation
    theory is not trustworthy.
    """

    value: float
    regime: CouplingRegime
    mu_or_nu: float
    argument: float
    asymptote_diagnostic: float | None = None
    perturbation_theory_unreliable: bool = False


def band_prefactor(params: ModelParams) -> float:
    """2 (sqrt(1 + b_C^2) + b_C), the band-edge weight of the closed forms."""
    return 2.0 * (params.band_top + params.b_c)


def coupling_to_energy(value: float, params: ModelParams) -> float:
    """Convert normalized V to the bare coupling energy U = 3 a^2/(2 pi) V."""
    return 3.0 * params.a_sq / (2.0 * math.pi) * value


def _bessel_phase(xi, b_c, separation):
    return np.sqrt(12.0 * xi * (xi + 2.0 * b_c)) * separation


def lorentzian_re(x, s):
    """Re 1/(x + i s) = x / (x^2 + s^2); the resonance kernel of the
    exact integrand, kept as a helper so the equivalence with the
    complex-Lorentzian form stays testable."""
    return x / (x * x + s * s)


def coupling_exact_value(delta_b_k: float, separation: int, params: ModelParams,
                         s: float | None = None, tol: float = 1e-9) -> float:
    """Exact quadrature of the coupling integral for one pair.

    s overrides the damping (the self-energy oracle uses s -> 0+).
    """
    if separation < 0:
        raise DomainError("coupling_exact_value: separation must be >= 0")
    s_val = params.s if s is None else float(s)
    if s_val <= 0:
        raise DomainError("coupling_exact_value: damping must be positive")
    b_c = params.b_c
    d_mid = delta_b_k - params.g * separation / 2.0
    envelope = params.band_top + b_c
    xi_max = params.xi_max

    if separation == 0:
        def f(xi):
            return (envelope + xi) * lorentzian_re(xi + d_mid, s_val)
    else:
        def f(xi):
            return ((envelope + xi) * lorentzian_re(xi + d_mid, s_val)
                    * bessel_j0(_bessel_phase(xi, b_c, separation)))

    hint = KernelSpec(
        peak_location=-d_mid if 0.0 < -d_mid < xi_max else None,
        peak_width=s_val if 0.0 < -d_mid < xi_max else None,
        oscillation_rate=math.sqrt(24.0 * b_c) * separation if separation else None,
    )
    return integrate(f, 0.0, xi_max, tol=tol, hint=hint).value


def coupling_exact(geom: QubitPairGeometry, params: ModelParams,
                   tol: float = 1e-9) -> CouplingResult:
    """Exact coupling with regime metadata for the pair geometry."""
    mu_sq, regime = turning_point_params(geom, params)
    value = coupling_exact_value(geom.delta_b_k, geom.separation, params, tol=tol)
    mu_or_nu = math.sqrt(abs(mu_sq))
    return CouplingResult(
        value=value,
        regime=CouplingRegime.EXACT_QUADRATURE,
        mu_or_nu=mu_or_nu,
        argument=mu_or_nu * geom.separation,
        perturbation_theory_unreliable=(regime is Regime.TURNING_POINT),
    )


def coupling_macdonald(geom: QubitPairGeometry, params: ModelParams) -> CouplingResult:
    """Gapped-side closed form 2(sqrt(1+b_C^2)+b_C) K0(mu |l-k|).

    The non-singular background integral is dropped, as in the closed
    form itself; the exact evaluator keeps it.  The far-field
    sqrt(pi/(2 mu n)) exp(-mu n) form rides along as a diagnostic.
    """
    mu_sq, regime = turning_point_params(geom, params)
    if mu_sq <= 0:
        raise RegimeError("coupling_macdonald: requires mu^2 > 0 (gapped side)")
    mu = math.sqrt(mu_sq)
    arg = mu * geom.separation
    pref = band_prefactor(params)
    value = pref * bessel_k0(arg)
    far = pref * math.sqrt(math.pi / (2.0 * arg)) * math.exp(-arg) if arg > 0 else math.inf
    return CouplingResult(
        value=value, regime=CouplingRegime.MACDONALD, mu_or_nu=mu, argument=arg,
        asymptote_diagnostic=far,
        perturbation_theory_unreliable=(regime is Regime.TURNING_POINT))


def coupling_neumann(geom: QubitPairGeometry, params: ModelParams) -> CouplingResult:
    """Oscillatory-side closed form -2(sqrt(1+b_C^2)+b_C) (pi/2) Y0(nu |l-k|).

    The sine-wave far field -2(...) sqrt(pi/(2 nu n)) sin(nu n - pi/4)
    (the Y0 large-argument form) is exposed as a diagnostic; its zeros
    sit at nu n = (m + 1/4) pi.
    """
    mu_sq, regime = turning_point_params(geom, params)
    if mu_sq >= 0:
        raise RegimeError("coupling_neumann: requires mu^2 < 0 (oscillatory side)")
    nu = math.sqrt(-mu_sq)
    arg = nu * geom.separation
    pref = band_prefactor(params)
    value = -pref * (math.pi / 2.0) * bessel_y0(arg)
    sine = -pref * math.sqrt(math.pi / (2.0 * arg)) * math.sin(arg - math.pi / 4.0)
    return CouplingResult(
        value=value, regime=CouplingRegime.NEUMANN, mu_or_nu=nu, argument=arg,
        asymptote_diagnostic=sine,
        perturbation_theory_unreliable=(regime is Regime.TURNING_POINT))


def coupling_log_limit(geom: QubitPairGeometry, params: ModelParams) -> CouplingResult:
    """Small-argument logarithmic limits 2(...)(ln(2/x) - C) of both sides."""
    mu_sq, regime = turning_point_params(geom, params)
    if mu_sq == 0:
        raise RegimeError("coupling_log_limit: mu^2 = 0 has no finite log limit")
    root = math.sqrt(abs(mu_sq))
    arg = root * geom.separation
    if arg <= 0:
        raise DomainError("coupling_log_limit: requires a positive argument")
    value = band_prefactor(params) * (math.log(2.0 / arg) - EULER_GAMMA)
    kind = CouplingRegime.LOG_GAPPED if mu_sq > 0 else CouplingRegime.LOG_OSCILLATORY
    return CouplingResult(
        value=value, regime=kind, mu_or_nu=root, argument=arg,
        perturbation_theory_unreliable=(regime is Regime.TURNING_POINT))


def coupling_asymptotic(geom: QubitPairGeometry, params: ModelParams) -> CouplingResult:
    """Dispatch to the Macdonald or Neumann form by the sign of mu^2."""
    mu_sq, _ = turning_point_params(geom, params)
    if mu_sq > 0:
        return coupling_macdonald(geom, params)
    if mu_sq < 0:
        return coupling_neumann(geom, params)
    raise RegimeError("coupling_asymptotic: exactly at the turning point")


def self_energy(delta_b_k: float, params: ModelParams) -> float:
    """Single-site value (l = k, s -> 0) in normalized units:

    (sqrt(1+b_C^2) + b_C - delta) ln((ximax + delta)/delta) + ximax
    """
    if delta_b_k <= 0:
        raise DomainError("self_energy: requires delta_b_k > 0")
    u = params.xi_max
    k_weight = params.band_top + params.b_c - delta_b_k
    return k_weight * math.log((u + delta_b_k) / delta_b_k) + u


def dipole_ratio(geom: QubitPairGeometry, params: ModelParams,
                 a_x_nm: float = 1.0) -> float:
    """Ratio of the direct nuclear dipole coupling to the indirect
    far-field coupling at R = mu |l - k|.

    Uses the backbone-field ratio D = gamma_I B_I / (gamma_S B_E) with
    B_I = (mu0/4pi) gamma_I hbar / a_x^3.
    """
    mu_sq, regime = turning_point_params(geom, params)
    if regime is not Regime.GAPPED:
        raise RegimeError("dipole_ratio: far-field form needs the gapped regime")
    if params.omega_e is None or params.omega_e <= 0:
        raise ConfigError("dipole_ratio: omega_e must be set to fix B_E")
    mu = math.sqrt(mu_sq)
    big_r = mu * geom.separation
    if big_r <= 0:
        raise DomainError("dipole_ratio: requires mu |l - k| > 0")
    b_e = params.omega_e / GAMMA_S
    gamma_i = params.gamma_ratio * GAMMA_S
    b_i = MU0_OVER_4PI * gamma_i * HBAR / (a_x_nm * 1e-9) ** 3
    d_ratio = params.gamma_ratio * b_i / b_e
    pref = band_prefactor(params) / 2.0  # sqrt(1+b_C^2)+b_C
    return (math.sqrt(2.0 * math.pi) * d_ratio * mu ** 3
            / (3.0 * params.a_sq * pref * big_r ** 2.5 * math.exp(-big_r)))
