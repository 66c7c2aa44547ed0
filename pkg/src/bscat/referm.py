"""Free-fermion oracle at z = 1/2.

Both models map to free fermions hybridized with the impurity at the point
z = 1/2, giving closed-form reflection coefficients, a finite-temperature
conductance integral, and a one-dimensional integral for the energy-resolved
spectrum.  These are computed here independently of the form-factor pipeline
and serve as cross-checks for it.  Frequencies in units of T_B = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .model import ModelKind
from .quadrature import adaptive_1d


def _lambda_cut(model: ModelKind) -> float:
    """Fermionic hybridization scale Lambda in units of T_B."""
    if model is ModelKind.BoundarySineGordon:
        return 0.5
    return 2.0


@dataclass(frozen=True)
class RefermParams:
    """Free-fermion parameters of a model at z = 1/2."""

    model: ModelKind
    lambda_cut: float
    temperature: float = 0.0

    def __post_init__(self):
        if self.lambda_cut <= 0:
            raise DomainError(f"lambda_cut must be positive, got {self.lambda_cut}")
        if self.temperature < 0:
            raise DomainError(f"temperature must be >= 0, got {self.temperature}")
        expected = _lambda_cut(self.model)
        if abs(self.lambda_cut - expected) > 1e-12:
            raise DomainError(
                f"lambda_cut for {self.model} must be {expected} T_B "
                f"(got {self.lambda_cut})"
            )


def make_referm_params(model: ModelKind, temperature: float = 0.0) -> RefermParams:
    return RefermParams(
        model=model, lambda_cut=_lambda_cut(model), temperature=temperature
    )


def r_half_closed(omega: float, model: ModelKind) -> complex:
    """Closed-form reflection coefficient at z = 1/2 (principal-branch log)."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    lam = _lambda_cut(model)
    if model is ModelKind.BoundarySineGordon:
        return 1.0 - (4j * lam / omega) * cmath.log(1.0 - 1j * omega / (2.0 * lam))
    return 1.0 - (2j * lam / (omega + 1j * lam)) * cmath.log(
        1.0 - 1j * omega / (lam / 2.0)
    )


def _t_tilde(nu: complex, model: ModelKind) -> complex:
    """Reduced impurity transmission factor T~^{cq}(nu)."""
    lam = _lambda_cut(model)
    if model is ModelKind.BoundarySineGordon:
        return 2j * lam / (nu + 2j * lam)
    return 1j * lam / (nu + 1j * lam / 2.0)


def _kernel(omega: float, big_omega: float, model: ModelKind) -> complex:
    """Particle-hole pair transmission kernel entering the conductance."""
    t1 = _t_tilde(big_omega, model)
    t2 = _t_tilde(omega - big_omega, model)
    if model is ModelKind.BoundarySineGordon:
        return 1.0 - t1 - t2
    return (1.0 - t1) * (1.0 - t2)


def conductance_finite_T(
    omega: float, temperature: float, model: ModelKind
) -> complex:
    """Reflection coefficient r(omega; T) from the finite-temperature
    conductance integral; reduces to r_half_closed at T = 0."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")

    if temperature == 0.0:
        # tanh weights become step functions selecting 0 < Omega < omega
        def f0(x: float) -> complex:
            return _kernel(omega, x, model) - 1.0

        val = adaptive_1d(f0, 0.0, omega, tol=1e-13).value
        return 1.0 + val / omega

    def f(x: float) -> complex:
        w = math.tanh(x / (2.0 * temperature)) + math.tanh(
            (omega - x) / (2.0 * temperature)
        )
        return w * (_kernel(omega, x, model) - 1.0)

    # the weight decays like e^{-|x|/T} outside (0, omega)
    pad = 40.0 * temperature + 10.0
    val = adaptive_1d(f, -pad, omega + pad, tol=1e-13).value
    return 1.0 + val / (2.0 * omega)


def spectrum_half(omega_p: float, omega: float, model: ModelKind) -> float:
    """Energy-resolved inelastic spectrum gamma(omega_p | omega) at z = 1/2."""
    if not (0.0 < omega_p < omega):
        raise DomainError(
            f"need 0 < omega_p < omega, got omega_p={omega_p}, omega={omega}"
        )

    def f(x: float) -> complex:
        a = _kernel(omega, x, model)
        b = _kernel(-omega, x + omega_p - omega, model)
        return a * b - 1.0

    val = adaptive_1d(f, 0.0, omega - omega_p, tol=1e-13).value
    return float((-2.0 / (omega * omega_p)) * val.real)
