"""Boundary reflection matrices in the massless limit.

Single-excitation amplitudes R_e^{e'}(lambda) for both models (solitons may
flip charge off the boundary; breathers reflect diagonally), products over
excitation sets including the right-left exchange phases, and the conjugation
identity R(lambda + i pi) = conj(R(lambda)) as a checkable residual.

All rapidities are measured from the boundary rapidity (boundary scale
T_B = 1 throughout).
"""

from __future__ import annotations

import cmath
import itertools
import math
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from .errors import DomainError, ToleranceNotMet
from .model import Excitation, ExcitationKind, ModelSpec, validate_excitation
from .quadrature import integrate_semi_infinite
from .smatrix import s_rl_limit

_POLE_TOL = 1e-12
# beyond this the phase integral equals its limit to better than 1e-12
_ASYMPTOTE_RE = 20.0


def _rs_phase_domain(spec: ModelSpec) -> float:
    """Exponential decay budget of the R_s phase integrand at Im lambda = 0."""
    xi = spec.xi
    return min(3.0 * xi, xi + 2.0 * math.pi)


@lru_cache(maxsize=200_000)
def _rs_phase_cached(lam_r: float, lam_i: float, xi: float) -> complex:
    return _rs_phase_direct(complex(lam_r, lam_i), xi)


def _rs_phase_direct(lam: complex, xi: float) -> complex:
    if abs(math.pi - xi) < 1e-14:
        return 0.0 + 0.0j  # the integrand vanishes identically at z = 1/2
    decay = min(3.0 * xi, xi + 2.0 * math.pi) - 2.0 * abs(lam.imag)
    if decay <= 0.0:
        raise DomainError(
            f"R_s phase integral diverges at Im lambda = {lam.imag} (xi = {xi})"
        )
    if abs(lam.real) > _ASYMPTOTE_RE:
        # the kernel is even in x, so the large-|Re lambda| limit has no
        # power-law corrections; the error is exponentially small.
        return complex(math.copysign(1.0, lam.real) * math.pi * (math.pi - xi) / (4.0 * xi))

    def f(x: float) -> complex:
        if x == 0.0:
            return complex(lam) * (math.pi - xi) / xi
        return (
            cmath.sin(2.0 * x * lam)
            / x
            * math.sinh((math.pi - xi) * x)
            / (math.sinh(2.0 * xi * x) * math.cosh(math.pi * x))
        )

    try:
        return integrate_semi_infinite(f, decay_rate=decay, tol=1e-11).value
    except ToleranceNotMet as exc:
        # highly oscillatory tails can stall the estimate near roundoff;
        # the partial result is still far more accurate than required
        if exc.abs_error_estimate < 1e-8:
            return exc.value
        raise


def r_s(lam: complex, spec: ModelSpec) -> complex:
    """Scalar factor of the boundary sine-Gordon soliton reflection amplitudes."""
    lam = complex(lam)
    pm1 = spec.p - 1.0
    den = 2.0 * cmath.cosh(pm1 * lam / 2.0 - 1j * math.pi / 4.0)
    if abs(den) < _POLE_TOL:
        raise DomainError(f"R_s pole at lambda = {lam}")
    phase = _rs_phase_cached(lam.real, lam.imag, spec.xi)
    return cmath.exp(-1j * math.pi / 4.0) / den * cmath.exp(1j * phase)


def r_bsg_soliton(lam: complex, flip: bool, spec: ModelSpec) -> complex:
    """Soliton reflection amplitude: charge-flipping R_+-^-+ (flip=True) or
    charge-preserving R_+-^+- (flip=False); both are even under charge parity."""
    lam = complex(lam)
    if abs(lam.imag) > math.pi + 1e-12:
        raise DomainError(f"|Im lambda| > pi unsupported (got {lam.imag})")
    pm1 = spec.p - 1.0
    rs = r_s(lam, spec)
    if flip:
        return 1j * cmath.exp(pm1 * lam / 2.0) * rs
    return cmath.exp(-pm1 * lam / 2.0) * rs


def r_bsg_breather(lam: complex, m: int, spec: ModelSpec) -> complex:
    """Diagonal breather-m reflection amplitude of the boundary sine-Gordon model."""
    if not (1 <= m <= spec.n_breathers):
        raise DomainError(f"breather m={m} invalid (n_breathers={spec.n_breathers})")
    lam = complex(lam)
    xi = spec.xi
    base = lam / 2.0 - 1j * math.pi / 4.0

    def tanh_safe(w: complex) -> complex:
        v = cmath.tanh(w)
        return v

    if m % 2 == 1:  # m = 2k - 1
        k = (m + 1) // 2
        out = tanh_safe(base)
        for j in range(1, k):
            num = tanh_safe(base - 1j * xi * j / 2.0)
            den = tanh_safe(base + 1j * xi * j / 2.0)
            if abs(den) < _POLE_TOL:
                raise DomainError(f"breather reflection pole at lambda = {lam}")
            out *= num / den
        return out
    k = m // 2
    out = 1.0 + 0.0j
    for j in range(1, k + 1):
        num = tanh_safe(base - 1j * xi / 2.0 * (j - 0.5))
        den = tanh_safe(base + 1j * xi / 2.0 * (j - 0.5))
        if abs(den) < _POLE_TOL:
            raise DomainError(f"breather reflection pole at lambda = {lam}")
        out *= num / den
    return out


def r_kondo_soliton(lam: complex, spec: ModelSpec, flip: bool = True) -> complex:
    """Kondo soliton reflection amplitude; the charge-preserving entry vanishes."""
    if not flip:
        return 0.0 + 0.0j
    lam = complex(lam)
    e = cmath.exp(lam)
    den = e + 1j
    if abs(den) < _POLE_TOL:
        raise DomainError(f"Kondo soliton reflection pole at lambda = {lam}")
    return cmath.exp(1j * math.pi / (4.0 * spec.z)) * (e - 1j) / den


def r_kondo_breather(lam: complex, m: int, spec: ModelSpec) -> complex:
    """Diagonal breather-m reflection amplitude of the Kondo model."""
    if not (1 <= m <= spec.n_breathers):
        raise DomainError(f"breather m={m} invalid (n_breathers={spec.n_breathers})")
    lam = complex(lam)
    num = cmath.tanh(lam / 2.0 - 1j * spec.xi * m / 4.0)
    den = cmath.tanh(lam / 2.0 + 1j * spec.xi * m / 4.0)
    if abs(den) < _POLE_TOL:
        raise DomainError(f"Kondo breather reflection pole at lambda = {lam}")
    return num / den


def r_amplitude(
    lam: complex, in_exc: Excitation, out_exc: Excitation, spec: ModelSpec
) -> complex:
    """Single-excitation reflection amplitude R_in^out(lambda); zero unless the
    bulk masses of the labels coincide."""
    validate_excitation(in_exc, spec)
    validate_excitation(out_exc, spec)
    B = ExcitationKind.Breather
    if (in_exc.kind is B) != (out_exc.kind is B):
        return 0.0 + 0.0j
    if in_exc.kind is B:
        if in_exc.m != out_exc.m:
            return 0.0 + 0.0j
        if spec.is_bsg:
            return r_bsg_breather(lam, in_exc.m, spec)
        return r_kondo_breather(lam, in_exc.m, spec)
    flip = in_exc.charge != out_exc.charge
    if spec.is_bsg:
        return r_bsg_soliton(lam, flip, spec)
    return r_kondo_soliton(lam, spec, flip=flip)


def soliton_pair_bracket(lam1: complex, lam2: complex, spec: ModelSpec) -> complex:
    """Reflection combination of an outgoing soliton-antisoliton pair:
    exp(-i pi/2z) R_+^-(l1) R_-^+(l2) - exp(+i pi/2z) R_+^+(l1) R_+^+(l2)."""
    phase = cmath.exp(-1j * math.pi / (2.0 * spec.z))
    if spec.is_kondo:
        return phase * r_kondo_soliton(lam1, spec) * r_kondo_soliton(lam2, spec)
    flip = r_bsg_soliton(lam1, True, spec) * r_bsg_soliton(lam2, True, spec)
    diag = r_bsg_soliton(lam1, False, spec) * r_bsg_soliton(lam2, False, spec)
    return phase * flip - diag / phase


def _out_label_choices(exc: Excitation, spec: ModelSpec) -> Tuple[Excitation, ...]:
    if exc.kind is ExcitationKind.Breather:
        return (exc,)
    return (exc, exc.conjugate)


def r_product(
    excs: Sequence[Tuple[Excitation, float]], spec: ModelSpec
) -> Dict[Tuple[Excitation, ...], complex]:
    """Product of reflection amplitudes over an ordered excitation set, summed
    label structure: maps each outgoing label assignment to

        prod_{l<k} S~_{e_k e'_l} * prod_k R_{e_k}^{e'_k}(lambda_k),

    where S~ is the right-left massless exchange limit.  Rapidities must be
    pre-shifted by the caller's mass-ratio convention.
    """
    for exc, _ in excs:
        validate_excitation(exc, spec)
    n = len(excs)
    singles = []
    for exc, lam in excs:
        row = {}
        for out in _out_label_choices(exc, spec):
            row[out] = r_amplitude(lam, exc, out, spec)
        singles.append(row)
    result: Dict[Tuple[Excitation, ...], complex] = {}
    for combo in itertools.product(*(row.keys() for row in singles)):
        value = 1.0 + 0.0j
        for k in range(n):
            value *= singles[k][combo[k]]
        for l in range(n - 1):
            for k in range(l + 1, n):
                value *= s_rl_limit(excs[k][0], combo[l], spec)
        result[tuple(combo)] = value
    return result


def r_conjugation_check(
    excs: Sequence[Tuple[Excitation, float]], spec: ModelSpec
) -> float:
    """Residual of the crossing identity Rprod(lambda + i pi) = conj(Rprod(lambda)).

    The identity holds on charge-neutral excitation sets, entry by entry over
    the charge-conserving outgoing label assignments (the only entries entering
    observables); the input set must therefore be charge-neutral.
    """
    total_charge = sum(exc.charge for exc, _ in excs)
    if total_charge != 0:
        raise DomainError(
            "conjugation check requires a charge-neutral excitation set "
            f"(got total charge {total_charge})"
        )
    base = r_product(excs, spec)
    shifted = r_product(
        [(exc, complex(lam, math.pi)) for exc, lam in excs], spec
    )
    residual = 0.0
    for combo, value in base.items():
        if sum(e.charge for e in combo) != 0:
            continue
        residual = max(residual, abs(shifted[combo] - value.conjugate()))
    return residual
