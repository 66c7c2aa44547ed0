"""Reflection coefficient r(omega), inelastic rate gamma and phase shift delta.

The reflection coefficient is assembled from excitation-sector terms (single
breathers, the soliton-antisoliton pair, breather 1+2, pair + breather 1),
each a delta-constrained integral of reflection amplitudes times squared form
factors.  Frequencies are in units of the boundary scale T_B = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import DomainError, InsufficientData, UnwrapError
from .formfactors import f_12, f_pm, f_pm1, f_breather1, r0_weights
from .model import ModelSpec, breather, mass_ratio
from .quadrature import integrate_simplex
from .reflection import r_bsg_breather, r_kondo_breather, soliton_pair_bracket

TWO_PI = 2.0 * math.pi

# relative tolerances of the term integrals (absolute tol scales with omega)
_TOL_2D = 1e-9
_TOL_3D = 1e-6


@dataclass(frozen=True)
class ReflectionBreakdown:
    """r(omega) and its excitation-sector terms at a single frequency."""

    omega: float
    terms: Dict[str, complex]
    total: complex
    truncation_bound: float  # 1 - sum of the included free-theory weights


@dataclass(frozen=True)
class RateCurve:
    """gamma(omega) = -ln|r|^2 and the continuously unwrapped phase shift."""

    omegas: Tuple[float, ...]
    gamma: Tuple[float, ...]
    delta: Tuple[float, ...]
    err: Tuple[float, ...]


def _r_diag_breather(lam: float, m: int, spec: ModelSpec) -> complex:
    if spec.is_bsg:
        return r_bsg_breather(lam, m, spec)
    return r_kondo_breather(lam, m, spec)


def r_term_breather(omega: float, m: int, spec: ModelSpec) -> complex:
    """Single-breather term: |f_m(0)|^2/(2 pi mu_m^2) R_m^m(ln(omega/mu_m))."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if m % 2 == 0 or not (1 <= m <= spec.n_breathers):
        raise DomainError(f"breather term needs odd m <= {spec.n_breathers}, got {m}")
    mu = mass_ratio(breather(m), spec)
    weight = abs(f_breather1(m, 0.0, spec)) ** 2 / (TWO_PI * mu * mu)
    return weight * _r_diag_breather(math.log(omega / mu), m, spec)


def r_term_soliton_pair(omega: float, spec: ModelSpec) -> complex:
    """Soliton-antisoliton pair term: energy-simplex integral of the pair
    reflection bracket times |f_{+-}|^2."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")

    def integrand(pt):
        e1, e2 = pt.parts
        l1, l2 = math.log(e1), math.log(e2)
        return soliton_pair_bracket(l1, l2, spec) * abs(f_pm(l1, l2, spec)) ** 2

    tol = _TOL_2D * max(1.0, omega)
    return 2.0 * integrate_simplex(2, omega, integrand, tol=tol).value / omega


def r_term_12(omega: float, spec: ModelSpec) -> complex:
    """Breather-1 + breather-2 term with mass-ratio-shifted arguments."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if spec.n_breathers < 2:
        return 0.0 + 0.0j
    mu1 = mass_ratio(breather(1), spec)
    mu2 = mass_ratio(breather(2), spec)
    lmu1, lmu2 = math.log(mu1), math.log(mu2)

    def integrand(pt):
        e1, e2 = pt.parts
        l1, l2 = math.log(e1) - lmu1, math.log(e2) - lmu2
        return (
            _r_diag_breather(l1, 1, spec)
            * _r_diag_breather(l2, 2, spec)
            * abs(f_12(l1, l2, spec)) ** 2
        )

    tol = _TOL_2D * max(1.0, omega)
    return 2.0 * integrate_simplex(2, omega, integrand, tol=tol).value / omega


def r_term_pm1(omega: float, spec: ModelSpec) -> complex:
    """Soliton pair + breather-1 term (integer p only)."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if spec.p_int is None:
        raise DomainError("the pair+breather term requires integer p")
    if spec.n_breathers < 1:
        return 0.0 + 0.0j
    phase = cmath.exp(-1j * math.pi / (2.0 * spec.z))
    mu1 = mass_ratio(breather(1), spec)
    lmu1 = math.log(mu1)
    from .reflection import r_bsg_soliton, r_kondo_soliton

    def pair_plus_bracket(l1: float, l2: float) -> complex:
        if spec.is_kondo:
            return phase * r_kondo_soliton(l1, spec) * r_kondo_soliton(l2, spec)
        flip = r_bsg_soliton(l1, True, spec) * r_bsg_soliton(l2, True, spec)
        diag = r_bsg_soliton(l1, False, spec) * r_bsg_soliton(l2, False, spec)
        return phase * flip + diag / phase

    def integrand(pt):
        e1, e2, e3 = pt.parts
        l1, l2 = math.log(e1), math.log(e2)
        l3 = math.log(e3) - lmu1
        return (
            pair_plus_bracket(l1, l2)
            * _r_diag_breather(l3, 1, spec)
            * abs(f_pm1(l1, l2, l3, spec)) ** 2
        )

    tol = _TOL_3D * max(1.0, omega)
    return 6.0 * integrate_simplex(3, omega, integrand, tol=tol).value / omega


def reflection_coefficient(omega: float, spec: ModelSpec) -> ReflectionBreakdown:
    """r(omega) as the sum of all terms applicable at this coupling."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    terms: Dict[str, complex] = {}
    for m in range(1, spec.n_breathers + 1, 2):
        terms[f"m={m}"] = r_term_breather(omega, m, spec)
    terms["+-"] = r_term_soliton_pair(omega, spec)
    if spec.n_breathers >= 2:
        terms["12"] = r_term_12(omega, spec)
    if spec.p_int is not None and spec.n_breathers >= 1:
        terms["+-1"] = r_term_pm1(omega, spec)
    total = sum(terms.values())
    bound = max(0.0, 1.0 - sum(r0_weights(spec).values()))
    return ReflectionBreakdown(
        omega=omega, terms=terms, total=total, truncation_bound=bound
    )


def rates_from_r(
    breakdowns: Sequence[ReflectionBreakdown], normalize: bool = True
) -> RateCurve:
    """gamma = -ln|r|^2 and delta = -arg(r)/2, unwrapped downward from the
    highest frequency (where delta = 0 is unambiguous in both models).

    With normalize=True, r is divided by the included free-theory weight sum
    (1 - truncation_bound) so that gamma -> 0 at high frequency instead of
    saturating at the truncation floor.
    """
    if not breakdowns:
        raise InsufficientData("no reflection data")
    bds = sorted(breakdowns, key=lambda b: b.omega)
    omegas = [b.omega for b in bds]
    rs = []
    for b in bds:
        r = b.total
        if normalize:
            floor = 1.0 - b.truncation_bound
            if floor <= 0:
                raise DomainError("truncation bound >= 1: nothing to normalize by")
            r = r / floor
        rs.append(r)
    gamma = [-math.log(abs(r) ** 2) if abs(r) > 0 else math.inf for r in rs]

    # unwrap from high omega downward
    phases = [-cmath.phase(r) / 2.0 for r in rs]
    delta = [0.0] * len(rs)
    delta[-1] = phases[-1]
    for k in range(len(rs) - 2, -1, -1):
        d = phases[k]
        # choose the pi-periodic branch closest to the neighbor above
        n = round((delta[k + 1] - d) / math.pi)
        d = d + n * math.pi
        if abs(d - delta[k + 1]) > math.pi / 2.0:
            raise UnwrapError(
                f"phase step {abs(d - delta[k+1]):.3f} > pi/2 between omega = "
                f"{omegas[k]} and {omegas[k+1]}: grid too coarse"
            )
        delta[k] = d
    err = [2.0 * b.truncation_bound for b in bds]
    return RateCurve(
        omegas=tuple(omegas), gamma=tuple(gamma), delta=tuple(delta), err=tuple(err)
    )


def fit_power_law(
    curve: RateCurve, window: Tuple[float, float]
) -> Tuple[float, float]:
    """Least-squares slope of log gamma vs log omega over the window; returns
    (exponent, r_squared)."""
    lo, hi = window
    xs, ys = [], []
    for w, g in zip(curve.omegas, curve.gamma):
        if lo <= w <= hi and g > 0:
            xs.append(math.log(w))
            ys.append(math.log(g))
    if len(xs) < 8:
        raise InsufficientData(
            f"need >= 8 grid points with gamma > 0 in [{lo}, {hi}], got {len(xs)}"
        )
    x = np.array(xs)
    y = np.array(ys)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def default_omega_grid(n: int = 60, lo: float = 1e-3, hi: float = 1e3) -> List[float]:
    """Log-spaced frequency grid in units of T_B."""
    return list(np.geomspace(lo, hi, n))
