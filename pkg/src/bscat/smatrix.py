"""Bulk two-particle S-matrix of the sine-Gordon model (massless kinematics).

Soliton-sector amplitudes are built from the scalar factor S0(theta) given by
a semi-infinite integral; breather-soliton and breather-breather amplitudes
are finite products of elementary factors.  Right-left massless limits and
left-mover conjugation are exposed for the pipeline.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from .errors import DomainError
from .model import Excitation, ExcitationKind, ModelSpec, validate_excitation
from .quadrature import integrate_semi_infinite

_POLE_TOL = 1e-12
_STRIP_MARGIN = 0.35  # switch to the crossing continuation near the strip edge


def _s0_integral(theta: complex, spec: ModelSpec) -> complex:
    """Direct evaluation of the S0 phase integral inside its convergence strip."""
    xi = spec.xi
    decay = min(xi, math.pi) - abs(theta.imag)
    if decay <= 0:
        raise DomainError(
            f"S0 integral diverges at Im theta = {theta.imag} (strip half-width "
            f"{min(xi, math.pi)})"
        )

    def f(x):
        if x == 0.0:
            # x -> 0 limit: sin(x theta)/x -> theta, sinh/sinh -> (pi-xi)/xi
            return complex(theta) * (math.pi - xi) / xi
        return (
            cmath.sin(x * theta)
            / x
            * math.sinh((math.pi - xi) / 2.0 * x)
            / (math.sinh(xi * x / 2.0) * math.cosh(math.pi * x / 2.0))
        )

    res = integrate_semi_infinite(f, decay_rate=decay, tol=1e-12)
    return -cmath.exp(-1j * res.value)


def _sin_ratio(theta: complex, spec: ModelSpec) -> complex:
    """sin(-(pi/xi) i theta) / sin((pi/xi)(pi + i theta)), with the integer-p limit."""
    a = math.pi / spec.xi  # = p - 1
    num = cmath.sin(-a * 1j * theta)
    den = cmath.sin(a * (math.pi + 1j * theta))
    if abs(den) < _POLE_TOL:
        if spec.p_int is not None and abs(num) < _POLE_TOL:
            return complex((-1.0) ** spec.p_int)
        raise DomainError(f"soliton S-matrix pole at theta = {theta}")
    return num / den


def s0(theta: complex, spec: ModelSpec) -> complex:
    """Scalar (anti)soliton exchange factor S0(theta), |Im theta| <= pi."""
    theta = complex(theta)
    if abs(theta.imag) > math.pi + 1e-12:
        raise DomainError(f"|Im theta| > pi unsupported (got {theta.imag})")
    strip = min(spec.xi, math.pi)
    if abs(theta.imag) < strip - _STRIP_MARGIN:
        return _s0_integral(theta, spec)
    # Continuation via crossing: S0(theta) = S0(i pi - theta) * sin((pi/xi)(pi + i theta)) / sin(-(pi/xi) i theta)
    reflected = 1j * math.pi - theta
    if abs(reflected.imag) < abs(theta.imag) - 1e-12:
        return _s0_integral(reflected, spec) / _sin_ratio(theta, spec)
    raise DomainError(
        f"S0 not evaluable at theta = {theta} for z = {spec.z}: outside the "
        "convergence strip of both the direct integral and its crossing image"
    )


def s_soliton(theta: complex, channel: str, spec: ModelSpec) -> complex:
    """Soliton-sector S-matrix entry.

    channel in {"pp", "mm", "pm_pm", "mp_mp", "pm_mp", "mp_pm"}: the first two
    letters are the incoming pair (p = soliton, m = antisoliton), the suffix
    the outgoing pair for the mixed channels.
    """
    theta = complex(theta)
    if channel in ("pp", "mm"):
        return s0(theta, spec)
    if channel in ("pm_pm", "mp_mp"):
        if spec.p_int is not None:
            return ((-1.0) ** spec.p_int) * s0(theta, spec)
        return s0(theta, spec) * _sin_ratio(theta, spec)
    if channel in ("pm_mp", "mp_pm"):
        if spec.p_int is not None:
            return 0.0j
        a = math.pi / spec.xi
        den = cmath.sin(a * (math.pi + 1j * theta))
        if abs(den) < _POLE_TOL:
            raise DomainError(f"soliton S-matrix pole at theta = {theta}")
        return s0(theta, spec) * math.sin(math.pi**2 / spec.xi) / den
    raise DomainError(f"unknown soliton channel {channel!r}")


def s_breather_soliton(theta: complex, m: int, spec: ModelSpec) -> complex:
    """Breather-m / (anti)soliton exchange amplitude (diagonal)."""
    if not (1 <= m <= spec.n_breathers):
        raise DomainError(f"breather m={m} invalid (n_breathers={spec.n_breathers})")
    theta = complex(theta)
    xi = spec.xi
    c = 1j * math.cos(xi / 2.0)
    # overall sign (-1)^m: each elementary factor tends to -1 as theta -> +infinity,
    # so this sign is required by the massless right-left limit S~ = 1 and by the
    # fusion bootstrap S_{m+} = prod of shifted S_{1+} factors.
    out = complex((-1.0) ** m)
    for j in range(1, m + 1):
        sh = cmath.sinh(theta - 1j * xi / 2.0 * (m + 1 - 2 * j))
        den = c - sh
        if abs(den) < _POLE_TOL:
            raise DomainError(
                f"breather-soliton S-matrix pole at theta = {theta} (factor j={j})"
            )
        out *= (c + sh) / den
    return out


def _tanh_ratio(theta: complex, alpha: float) -> complex:
    """F_alpha(theta) = tanh((theta + i alpha)/2) / tanh((theta - i alpha)/2)."""
    num = cmath.tanh((theta + 1j * alpha) / 2.0)
    den = cmath.tanh((theta - 1j * alpha) / 2.0)
    if abs(den) < _POLE_TOL:
        raise DomainError(
            f"breather-breather S-matrix pole at theta = {theta} (alpha = {alpha})"
        )
    return num / den


def s_breather_breather(theta: complex, m1: int, m2: int, spec: ModelSpec) -> complex:
    """Breather-m1 / breather-m2 exchange amplitude (diagonal).

    S = F_{(m1+m2) xi/2} * F_{|m1-m2| xi/2} * prod_{j=1}^{min-1} F_{(|m1-m2|+2j) xi/2}^2
    with F_alpha(theta) = tanh((theta+i alpha)/2)/tanh((theta-i alpha)/2); this
    form is fixed by the fusion bootstrap from S_{11} and satisfies unitarity
    and |S| = 1 on the real line.
    """
    for m in (m1, m2):
        if not (1 <= m <= spec.n_breathers):
            raise DomainError(
                f"breather m={m} invalid (n_breathers={spec.n_breathers})"
            )
    theta = complex(theta)
    xi = spec.xi
    d = abs(m1 - m2)
    s = m1 + m2
    out = _tanh_ratio(theta, s * xi / 2.0)
    if d > 0:
        out *= _tanh_ratio(theta, d * xi / 2.0)
    for j in range(1, min(m1, m2)):
        out *= _tanh_ratio(theta, (d + 2 * j) * xi / 2.0) ** 2
    return out


def s_rl_limit(e1: Excitation, e2: Excitation, spec: ModelSpec) -> complex:
    """Massless right-left exchange limit (diagonal): e^{-i pi/(2z)} for equal
    soliton charges, its conjugate for opposite charges, 1 with any breather."""
    validate_excitation(e1, spec)
    validate_excitation(e2, spec)
    if e1.kind is ExcitationKind.Breather or e2.kind is ExcitationKind.Breather:
        return 1.0 + 0.0j
    phase = cmath.exp(-1j * math.pi / (2.0 * spec.z))
    if e1.charge == e2.charge:
        return phase
    return phase.conjugate()


def s_entry(
    e1: Excitation,
    e2: Excitation,
    o1: Excitation,
    o2: Excitation,
    theta: complex,
    spec: ModelSpec,
) -> complex:
    """General S-matrix entry S_{e1 e2}^{o1 o2}(theta); zero unless allowed."""
    for e in (e1, e2, o1, o2):
        validate_excitation(e, spec)
    k = (e1.kind, e2.kind)
    ko = (o1.kind, o2.kind)
    B = ExcitationKind.Breather
    S_, A_ = ExcitationKind.Soliton, ExcitationKind.Antisoliton
    if B in k or B in ko:
        # diagonal in breather content
        if (e1, e2) != (o1, o2):
            return 0.0j
        if e1.kind is B and e2.kind is B:
            return s_breather_breather(theta, e1.m, e2.m, spec)
        if e1.kind is B:
            return s_breather_soliton(theta, e1.m, spec)
        return s_breather_soliton(theta, e2.m, spec)
    # soliton sector: U(1) conservation
    if e1.charge + e2.charge != o1.charge + o2.charge:
        return 0.0j
    if k == (S_, S_) or k == (A_, A_):
        return s0(theta, spec) if (o1, o2) == (e1, e2) else 0.0j
    if (o1, o2) == (e1, e2):
        return s_soliton(theta, "pm_pm" if k == (S_, A_) else "mp_mp", spec)
    return s_soliton(theta, "pm_mp" if k == (S_, A_) else "mp_pm", spec)


@lru_cache(maxsize=100_000)
def s0_cached(theta_r: float, theta_i: float, z: float, kind) -> complex:
    """Memoized S0 on hashed (theta, z); used by hot integrand loops."""
    from .model import ModelSpec

    return s0(complex(theta_r, theta_i), ModelSpec(kind=kind, z=z))
