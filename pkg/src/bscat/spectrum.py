"""Energy-resolved inelastic decay spectrum gamma(omega'|omega).

The spectrum is expanded in labeled diagrams: each diagram assigns excitation
content to the four operator vertices of the 3-point response function, with
one form factor per vertex, reflection factors on the boundary-scattered
lines (conjugated on the incoming side, plain on the outgoing side), and the
energies of the internal lines fixed by sharp conservation at every vertex.
Absorbed lines carry a crossing shift i*pi^- regulated by a small offset and
removed by linear extrapolation.  Frequencies in units of T_B = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .formfactors import f_111, f_breather1, f_pm, f_pm1
from .model import ModelSpec, breather, mass_ratio
from .quadrature import adaptive_1d
from .reflection import r_bsg_breather, r_kondo_breather, soliton_pair_bracket
from .smatrix import s0
from .twopoint import reflection_coefficient

TWO_PI = 2.0 * math.pi
_MEASURE = (2.0 * math.pi) ** 4

# crossing-shift regulator: evaluate at delta and delta/2, extrapolate to 0
_REG_DELTA = 1e-6

# absolute tolerance scale of the 1D omega-integrals inside each diagram
_TOL_DIAGRAM = 1e-10


class SpectrumDiagram(Enum):
    """Labeled diagrams of the spectrum expansion."""

    G1_1 = "g1_1"  # soliton pair at every vertex; the only diagram at z >= 1/2
    G1_2 = "g1_2"  # 2D principal-value variant (subleading, off by default)
    G1_3 = "g1_3"  # delta-reduced 6-excitation variant (integer p)
    G2_1 = "g2_1"  # breather-1 emission + soliton pair (integer p)
    G2_2 = "g2_2"  # 2D principal-value variant (subleading, off by default)
    G3A = "g3a"  # pair + breather-1 in, breather-1 out (integer p)
    G3B = "g3b"  # 5-excitation variant (not evaluated)
    G4A = "g4a"  # three breather-1 in, breather-1 out
    G4B = "g4b"  # 5-excitation variant (not evaluated)
    G5A = "g5a"  # pair + breather-1 with a direct soliton line (integer p)
    G5B = "g5b"  # 2D variant (not evaluated)


@dataclass(frozen=True)
class SpectrumCurve:
    """gamma(omega'|omega) on a grid of omega', with per-diagram breakdown."""

    omega: float
    omega_primes: Tuple[float, ...]
    values: Tuple[float, ...]
    per_diagram: Dict[SpectrumDiagram, Tuple[float, ...]]
    sum_rule_ratio: float
    gamma_disc: float  # coefficient of the elastic delta(omega'-omega) term


def _check_args(omega_p: float, omega: float) -> None:
    if not (0.0 < omega_p < omega):
        raise DomainError(
            f"need 0 < omega_p < omega, got omega_p={omega_p}, omega={omega}"
        )


def _r1(lam: complex, spec: ModelSpec) -> complex:
    if spec.is_bsg:
        return r_bsg_breather(lam, 1, spec)
    return r_kondo_breather(lam, 1, spec)


def _require_breather1(spec: ModelSpec, name: str) -> None:
    if spec.n_breathers < 1:
        raise DomainError(f"diagram {name} needs the m=1 breather (z < 1/2)")


def _require_integer_p(spec: ModelSpec, name: str) -> None:
    if spec.p_int is None:
        raise DomainError(f"diagram {name} requires integer p = 1/z")


def _regulated(fpart: Callable[[float], float]) -> float:
    """Linear extrapolation of the regulated crossing shift to zero offset."""
    return 2.0 * fpart(_REG_DELTA / 2.0) - fpart(_REG_DELTA)


def _integrate_omega(
    integrand: Callable[[float], float], omega_p: float, omega: float
) -> float:
    width = omega - omega_p
    tol = _TOL_DIAGRAM * max(1.0, omega)
    return float(adaptive_1d(integrand, 0.0, width, tol=tol).value.real)


def diagram_g1_1(omega_p: float, omega: float, spec: ModelSpec) -> float:
    """Soliton-pair diagram: the only contribution at z >= 1/2."""
    _check_args(omega_p, omega)

    def integrand(big: float) -> float:
        if big <= 0.0 or big >= omega - omega_p:
            return 0.0
        l1 = math.log(omega - big)
        l2 = math.log(big)
        l3 = math.log(omega - omega_p - big)
        l4 = math.log(omega_p + big)
        rpart = (
            soliton_pair_bracket(l1, l2, spec).conjugate()
            * soliton_pair_bracket(l3, l4, spec)
            - 1.0
        ).real
        if rpart == 0.0:
            return 0.0

        def fpart(delta: float) -> float:
            shift = 1j * (math.pi - delta)
            prod = (
                f_pm(l3, l1 + shift, spec)
                * f_pm(l4, l2 + shift, spec)
                * f_pm(l1, l2, spec)
                * f_pm(l4, l3, spec)
            )
            return prod.real

        fval = _regulated(fpart)
        energies = (omega - big) * big * (omega - omega_p - big) * (omega_p + big)
        return rpart * fval / (_MEASURE * energies)

    val = _integrate_omega(integrand, omega_p, omega)
    return 2.0 / (omega_p * omega) * val


def diagram_g2_1(omega_p: float, omega: float, spec: ModelSpec) -> float:
    """Breather-1 emission interfering with a soliton pair (integer p)."""
    _check_args(omega_p, omega)
    _require_breather1(spec, "g2_1")
    _require_integer_p(spec, "g2_1")
    lmu = math.log(mass_ratio(breather(1), spec))
    l1 = math.log(omega)

    def integrand(big: float) -> float:
        if big <= 0.0 or big >= omega - omega_p:
            return 0.0
        l2 = math.log(omega - omega_p - big)
        l3 = math.log(big)
        l4 = math.log(omega - big)
        rpart = (
            _r1(l1 - lmu, spec).conjugate() * soliton_pair_bracket(l3, l4, spec)
            - 1.0
        ).real
        if rpart == 0.0:
            return 0.0

        def fpart(delta: float) -> float:
            shift = 1j * (math.pi - delta)
            prod = (
                f_breather1(1, l1 - lmu, spec)
                * f_pm1(l3, l2, l1 + shift - lmu, spec)
                * f_pm(l4, l2 + shift, spec)
                * f_pm(l4, l3, spec)
            )
            return prod.real

        fval = _regulated(fpart)
        energies = omega * (omega - omega_p - big) * big * (omega - big)
        return rpart * fval / (_MEASURE * energies)

    val = _integrate_omega(integrand, omega_p, omega)
    return -4.0 / (omega_p * omega) * val


def diagram_g1_3(omega_p: float, omega: float, spec: ModelSpec) -> float:
    """Delta-reduced six-soliton diagram (integer p only)."""
    _check_args(omega_p, omega)
    _require_integer_p(spec, "g1_3")

    def integrand(big: float) -> float:
        if big <= 0.0 or big >= omega - omega_p:
            return 0.0
        l1 = math.log(big)
        l2 = math.log(omega - big)
        l3 = math.log(omega_p + big)
        l4 = math.log(omega - omega_p - big)
        rpart = (
            soliton_pair_bracket(l1, l2, spec).conjugate()
            * soliton_pair_bracket(l3, l4, spec)
            - 1.0
        ).real
        if rpart == 0.0:
            return 0.0
        sfac = (s0(l4 - l1, spec) - s0(l2 - l1, spec)) * (
            s0(l1 - l4, spec) - s0(l3 - l4, spec)
        )

        def fpart(delta: float) -> float:
            shift = 1j * (math.pi - delta)
            prod = (
                f_pm(l1, l3 + shift, spec)
                * f_pm(l4, l2 + shift, spec)
                * f_pm(l2, l1, spec)
                * f_pm(l3, l4, spec)
                * sfac
            )
            return prod.real

        fval = _regulated(fpart)
        energies = big * (omega - big) * (omega_p + big) * (omega - omega_p - big)
        return rpart * fval / (_MEASURE * energies)

    val = _integrate_omega(integrand, omega_p, omega)
    return 0.5 / (omega_p * omega) * val


def diagram_g3a(omega_p: float, omega: float, spec: ModelSpec) -> float:
    """Soliton pair + breather-1 absorbed, breather-1 emitted (integer p)."""
    _check_args(omega_p, omega)
    _require_breather1(spec, "g3a")
    _require_integer_p(spec, "g3a")
    lmu = math.log(mass_ratio(breather(1), spec))
    lg = math.log(omega_p)
    lp = math.log(omega)
    r_out = _r1(lp - lmu, spec)
    r_in = _r1(lg - lmu, spec).conjugate()
    f_out = f_breather1(1, lp - lmu, spec)
    phase = cmath.exp(-1j * math.pi / (2.0 * spec.z))

    def plus_bracket(lam1: float, lam2: float) -> complex:
        """Pair bracket with the relative sign of the two channels flipped,
        as required for the pair lines that straddle the photon vertices."""
        if spec.is_kondo:
            from .reflection import r_kondo_soliton

            return phase * r_kondo_soliton(lam1, spec) * r_kondo_soliton(lam2, spec)
        from .reflection import r_bsg_soliton

        flip = r_bsg_soliton(lam1, True, spec) * r_bsg_soliton(lam2, True, spec)
        diag = r_bsg_soliton(lam1, False, spec) * r_bsg_soliton(lam2, False, spec)
        return phase * flip + diag / phase

    def integrand(big: float) -> float:
        if big <= 0.0 or big >= omega - omega_p:
            return 0.0
        l1 = math.log(big)
        l2 = math.log(omega - omega_p - big)
        rpart = (
            r_in * plus_bracket(l1, l2).conjugate() * r_out - 1.0
        ).real
        if rpart == 0.0:
            return 0.0

        def fpart(delta: float) -> float:
            shift = 1j * (math.pi - delta)
            prod = (
                f_pm1(l1, l2, lg - lmu, spec)
                * f_breather1(1, lg + shift - lmu, spec)
                * f_pm1(l2 + shift, l1 + shift, lp - lmu, spec)
                * f_out
            )
            return prod.real

        fval = _regulated(fpart)
        energies = omega_p * big * (omega - omega_p - big) * omega
        return rpart * fval / (_MEASURE * energies)

    val = _integrate_omega(integrand, omega_p, omega)
    return -8.0 / (omega_p * omega) * val


def diagram_g4a(omega_p: float, omega: float, spec: ModelSpec) -> float:
    """Three breather-1 absorbed, breather-1 emitted; symmetry factor 1/2."""
    _check_args(omega_p, omega)
    _require_breather1(spec, "g4a")
    lmu = math.log(mass_ratio(breather(1), spec))
    lg = math.log(omega_p) - lmu
    lp = math.log(omega) - lmu
    r_out = _r1(lp, spec)
    r_g = _r1(lg, spec).conjugate()
    f_out = f_breather1(1, lp, spec)

    def integrand(big: float) -> float:
        if big <= 0.0 or big >= omega - omega_p:
            return 0.0
        l1 = math.log(big) - lmu
        l2 = math.log(omega - omega_p - big) - lmu
        rpart = (
            r_g * (_r1(l1, spec) * _r1(l2, spec)).conjugate() * r_out - 1.0
        ).real
        if rpart == 0.0:
            return 0.0

        def fpart(delta: float) -> float:
            shift = 1j * (math.pi - delta)
            prod = (
                f_111(l1, l2, lg, spec)
                * f_breather1(1, lg + shift, spec)
                * f_111(l2 + shift, l1 + shift, lp, spec)
                * f_out
            )
            return prod.real

        fval = _regulated(fpart)
        energies = omega_p * big * (omega - omega_p - big) * omega
        return rpart * fval / (_MEASURE * energies)

    val = _integrate_omega(integrand, omega_p, omega)
    return -2.0 / (omega_p * omega) * val


def diagram_g5a(omega_p: float, omega: float, spec: ModelSpec) -> float:
    """Pair + breather-1 with one soliton line passing the photon vertices.

    The direct line reflects once; its conjugated and plain reflection factors
    pair up across the two photon-vertex brackets, leaving a mixed bracket of
    the remaining two soliton lines (boundary unitarity removes the direct
    line's own factors).
    """
    _check_args(omega_p, omega)
    _require_breather1(spec, "g5a")
    _require_integer_p(spec, "g5a")
    lmu = math.log(mass_ratio(breather(1), spec))
    lg = math.log(omega_p) - lmu
    r_g = _r1(lg, spec).conjugate()

    def mixed_bracket(l_in: float, l_out: float) -> complex:
        """Difference of the two reflection channels of the split pair, with
        the absorbed member conjugated; no channel phases survive because the
        direct line's own factors cancel by boundary unitarity."""
        if spec.is_kondo:
            from .reflection import r_kondo_soliton

            return (
                r_kondo_soliton(l_in, spec).conjugate()
                * r_kondo_soliton(l_out, spec)
            )
        from .reflection import r_bsg_soliton

        flip = (
            r_bsg_soliton(l_in, True, spec).conjugate()
            * r_bsg_soliton(l_out, True, spec)
        )
        diag = (
            r_bsg_soliton(l_in, False, spec).conjugate()
            * r_bsg_soliton(l_out, False, spec)
        )
        return flip - diag

    def integrand(big: float) -> float:
        if big <= 0.0 or big >= omega - omega_p:
            return 0.0
        l_blue = math.log(big)
        l_red = math.log(omega - omega_p - big)
        l_purple = math.log(omega_p + big)
        rpart = (r_g * mixed_bracket(l_blue, l_purple) - 1.0).real
        if rpart == 0.0:
            return 0.0

        def fpart(delta: float) -> float:
            shift = 1j * (math.pi - delta)
            prod = (
                f_pm1(l_red, l_blue, lg, spec)
                * f_breather1(1, lg + shift, spec)
                * f_pm(l_purple, l_blue + shift, spec)
                * f_pm(l_purple, l_red, spec)
            )
            return prod.real

        fval = _regulated(fpart)
        energies = omega_p * big * (omega - omega_p - big) * (omega_p + big)
        return rpart * fval / (_MEASURE * energies)

    val = _integrate_omega(integrand, omega_p, omega)
    return 8.0 / (omega_p * omega) * val


_DIAGRAM_FUNCS: Dict[SpectrumDiagram, Callable[[float, float, ModelSpec], float]] = {
    SpectrumDiagram.G1_1: diagram_g1_1,
    SpectrumDiagram.G2_1: diagram_g2_1,
    SpectrumDiagram.G1_3: diagram_g1_3,
    SpectrumDiagram.G3A: diagram_g3a,
    SpectrumDiagram.G4A: diagram_g4a,
    SpectrumDiagram.G5A: diagram_g5a,
}


def active_diagrams(spec: ModelSpec) -> List[SpectrumDiagram]:
    """Default diagram set: the pair diagram alone unless the m=1 breather
    exists at integer p, where the interference and breather diagrams enter."""
    out = [SpectrumDiagram.G1_1]
    if spec.p_int is not None and spec.n_breathers >= 1:
        out += [
            SpectrumDiagram.G2_1,
            SpectrumDiagram.G1_3,
            SpectrumDiagram.G3A,
            SpectrumDiagram.G4A,
            SpectrumDiagram.G5A,
        ]
    return out


def spectrum_point(
    omega_p: float,
    omega: float,
    spec: ModelSpec,
    diagrams: Sequence[SpectrumDiagram] | None = None,
) -> float:
    """gamma(omega'|omega) summed over the active diagrams."""
    if diagrams is None:
        diagrams = active_diagrams(spec)
    return math.fsum(
        _DIAGRAM_FUNCS[d](omega_p, omega, spec) for d in diagrams
    )


def sum_rule_check(
    omega: float,
    spec: ModelSpec,
    diagrams: Sequence[SpectrumDiagram] | None = None,
    tol: float = 1e-5,
) -> float:
    """Ratio of the energy integral of the spectrum to the inelastic loss
    omega * (1 - |r|^2); unity expresses energy conservation.

    The omega' integral uses the substitution omega' = omega u^2, which
    regularizes the integrable 1/omega' endpoint of the boundary sine-Gordon
    spectrum.
    """
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if diagrams is None:
        diagrams = active_diagrams(spec)

    def f(u: float) -> float:
        omega_p = omega * u * u
        if omega_p <= 0.0 or omega_p >= omega:
            return 0.0
        g = spectrum_point(omega_p, omega, spec, diagrams)
        return omega_p * g * 2.0 * omega * u

    lhs = float(adaptive_1d(f, 0.0, 1.0, tol=tol * omega).value.real)
    bd = reflection_coefficient(omega, spec)
    floor = 1.0 - bd.truncation_bound
    r = bd.total / floor
    rhs = omega * (1.0 - abs(r) ** 2)
    return lhs / rhs


def default_omega_prime_grid(omega: float, n: int = 40) -> List[float]:
    """Grid in (0, omega) log-dense at both endpoints."""
    half = n // 2
    low = omega * np.geomspace(1e-4, 0.5, half)
    high = omega * (1.0 - np.geomspace(1e-4, 0.5, n - half))
    return sorted(set(low.tolist() + high.tolist()))


def spectrum_curve(
    omega: float,
    spec: ModelSpec,
    grid_size: int = 40,
    diagrams: Sequence[SpectrumDiagram] | None = None,
    compute_sum_rule: bool = True,
) -> SpectrumCurve:
    """Spectrum on a grid of omega', with per-diagram breakdown and the
    sum-rule ratio; the elastic delta-function coefficient is reported as
    gamma_disc = -(1 - |r|^2)."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if diagrams is None:
        diagrams = active_diagrams(spec)
    grid = default_omega_prime_grid(omega, grid_size)
    per: Dict[SpectrumDiagram, List[float]] = {d: [] for d in diagrams}
    totals: List[float] = []
    for omega_p in grid:
        vals = [_DIAGRAM_FUNCS[d](omega_p, omega, spec) for d in diagrams]
        for d, v in zip(diagrams, vals):
            per[d].append(v)
        totals.append(math.fsum(vals))
    ratio = (
        sum_rule_check(omega, spec, diagrams) if compute_sum_rule else math.nan
    )
    bd = reflection_coefficient(omega, spec)
    r = bd.total / (1.0 - bd.truncation_bound)
    return SpectrumCurve(
        omega=omega,
        omega_primes=tuple(grid),
        values=tuple(totals),
        per_diagram={d: tuple(v) for d, v in per.items()},
        sum_rule_ratio=ratio,
        gamma_disc=-(1.0 - abs(r) ** 2),
    )
