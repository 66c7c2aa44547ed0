"""Shared numerical integration engines.

Deterministic adaptive Gauss-Kronrod (G7/K15) quadrature for complex-valued
integrands, an energy-simplex integrator implementing the delta-constrained
measure prod dE_i/E_i / (2pi)^n / n!, and a symmetric-excision principal-value
integrator.  All engines are pure functions of their inputs: identical calls
produce bit-identical results (fixed subdivision order, heap keyed with
deterministic tie-breaks).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError, ToleranceNotMet

TWO_PI = 2.0 * math.pi

# Kronrod-15 nodes on [-1, 1] (positive half) and weights; embedded Gauss-7 weights.
_XK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class EnergySimplexPoint:
    """A point on the energy simplex {E_i > 0, sum E_i = total}."""

    total: float
    parts: tuple
    jacobian: float  # product of 1/E_i factors from dlambda = dE/E


def _gk15(f, a: float, b: float):
    """One Gauss-Kronrod 7-15 panel on [a, b]; returns (K15, |K15-G7|, nevals)."""
    h = 0.5 * (b - a)
    c = 0.5 * (a + b)
    fk = [0.0] * 15
    resk = 0.0 + 0.0j
    resg = 0.0 + 0.0j
    # center node
    fc = f(c)
    resk += _WK[7] * fc
    resg += _WG[3] * fc
    for i in range(7):
        x = h * _XK[i]
        f1 = f(c - x)
        f2 = f(c + x)
        resk += _WK[i] * (f1 + f2)
        if i % 2 == 1:  # Kronrod nodes 1,3,5 are the Gauss-7 nodes
            resg += _WG[i // 2] * (f1 + f2)
    resk *= h
    resg *= h
    return resk, abs(resk - resg), 15


def adaptive_1d(
    integrand: Callable[[float], complex],
    a: float,
    b: float,
    tol: float,
    max_intervals: int = 4000,
) -> QuadResult:
    """Adaptive G7/K15 bisection with absolute tolerance `tol`.

    Deterministic: the worst-error interval (ties broken by left endpoint)
    is always split next, and the final sum is accumulated in interval order.
    """
    if not (a < b):
        raise DomainError(f"need a < b, got [{a}, {b}]")
    val, err, n = _gk15(integrand, a, b)
    # heap entries: (-err, a, b, value, err); tuple comparison falls through
    # to `a` for ties, which is deterministic.
    heap = [(-err, a, b, val, err)]
    total_err = err
    nevals = n
    while total_err > tol and len(heap) < max_intervals:
        neg_e, ia, ib, ival, ierr = heapq.heappop(heap)
        total_err -= ierr
        mid = 0.5 * (ia + ib)
        if mid <= ia or mid >= ib:
            # interval at floating-point resolution; keep as converged
            heapq.heappush(heap, (0.0, ia, ib, ival, 0.0))
            continue
        v1, e1, n1 = _gk15(integrand, ia, mid)
        v2, e2, n2 = _gk15(integrand, mid, ib)
        nevals += n1 + n2
        heapq.heappush(heap, (-e1, ia, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, ib, v2, e2))
        total_err += e1 + e2
    # deterministic accumulation: sort by left endpoint
    intervals = sorted(heap, key=lambda t: t[1])
    value = 0.0 + 0.0j
    total_err = 0.0
    for _, _, _, ival, ierr in intervals:
        value += ival
        total_err += ierr
    result = QuadResult(value=value, abs_error_estimate=total_err, evaluations=nevals)
    # small slack: re-summation can move the estimate a few ulp past tol
    if total_err > tol * (1.0 + 1e-6):
        raise ToleranceNotMet(
            f"adaptive_1d: error estimate {total_err:.3e} exceeds tol {tol:.3e}",
            value=value,
            abs_error_estimate=total_err,
        )
    return result


def _integrate_half(g, tol):
    """Integral of g(u) over u in (0, 1/sqrt(2)], used by the u^2 endpoint maps."""
    return adaptive_1d(g, 0.0, 1.0 / math.sqrt(2.0), tol)


def integrate_simplex(
    n_parts: int,
    total: float,
    integrand: Callable[[EnergySimplexPoint], complex],
    tol: float = 1e-9,
) -> QuadResult:
    """Integrate over {E_i > 0, sum E_i = total} with measure
    prod(dE_i / E_i) / (2 pi)^n / n!  (one dE eliminated by the delta).

    The integrand receives an EnergySimplexPoint and returns the physical
    integrand WITHOUT the 1/E jacobian (applied internally via pt.jacobian).
    Endpoint corners are mapped with the substitution E = total * u^2, which
    renders integrands whose values vanish linearly (or as E^(1/2) per
    soliton leg) smooth at the corners.
    """
    if n_parts not in (1, 2, 3):
        raise DomainError(f"n_parts must be 1, 2 or 3, got {n_parts}")
    if total <= 0:
        raise DomainError(f"total must be positive, got {total}")
    norm = 1.0 / (TWO_PI**n_parts * math.factorial(n_parts))

    if n_parts == 1:
        pt = EnergySimplexPoint(total, (total,), 1.0 / total)
        val = integrand(pt) * pt.jacobian * norm
        return QuadResult(value=val, abs_error_estimate=0.0, evaluations=1)

    if n_parts == 2:
        w = total

        def g_left(u):
            e1 = w * u * u
            e2 = w - e1
            if e1 <= 0.0 or e2 <= 0.0:
                return 0.0j
            pt = EnergySimplexPoint(w, (e1, e2), 1.0 / (e1 * e2))
            return integrand(pt) * pt.jacobian * (2.0 * w * u)

        def g_right(u):
            e2 = w * u * u
            e1 = w - e2
            if e1 <= 0.0 or e2 <= 0.0:
                return 0.0j
            pt = EnergySimplexPoint(w, (e1, e2), 1.0 / (e1 * e2))
            return integrand(pt) * pt.jacobian * (2.0 * w * u)

        r1 = _integrate_half(g_left, tol / 2.0)
        r2 = _integrate_half(g_right, tol / 2.0)
        return QuadResult(
            value=(r1.value + r2.value) * norm,
            abs_error_estimate=(r1.abs_error_estimate + r2.abs_error_estimate)
            * abs(norm),
            evaluations=r1.evaluations + r2.evaluations,
        )

    # n_parts == 3: outer integral over E3, inner over E1 with E2 = total-E3-E1.
    w = total
    inner_tol = tol / 4.0

    def inner(e3):
        rem = w - e3
        if rem <= 0.0:
            return 0.0j

        def g_left(u):
            e1 = rem * u * u
            e2 = rem - e1
            if e1 <= 0.0 or e2 <= 0.0:
                return 0.0j
            pt = EnergySimplexPoint(w, (e1, e2, e3), 1.0 / (e1 * e2 * e3))
            return integrand(pt) * pt.jacobian * (2.0 * rem * u)

        def g_right(u):
            e2 = rem * u * u
            e1 = rem - e2
            if e1 <= 0.0 or e2 <= 0.0:
                return 0.0j
            pt = EnergySimplexPoint(w, (e1, e2, e3), 1.0 / (e1 * e2 * e3))
            return integrand(pt) * pt.jacobian * (2.0 * rem * u)

        r1 = _integrate_half(g_left, inner_tol)
        r2 = _integrate_half(g_right, inner_tol)
        return r1.value + r2.value

    nevals = [0]

    def g_outer_left(u):
        e3 = w * u * u
        nevals[0] += 1
        return inner(e3) * (2.0 * w * u)

    def g_outer_right(u):
        e3 = w * (1.0 - u * u)
        nevals[0] += 1
        return inner(e3) * (2.0 * w * u)

    r1 = _integrate_half(g_outer_left, tol / 2.0)
    r2 = _integrate_half(g_outer_right, tol / 2.0)
    return QuadResult(
        value=(r1.value + r2.value) * norm,
        abs_error_estimate=(r1.abs_error_estimate + r2.abs_error_estimate) * abs(norm),
        evaluations=r1.evaluations + r2.evaluations,
    )


_PV_EXCISIONS = (1e-3, 5e-4, 2.5e-4)


def integrate_near_pole(
    integrand: Callable[[float], complex],
    pole_locations: Sequence[float],
    interval: tuple,
    tol: float = 1e-8,
) -> QuadResult:
    """Principal value of `integrand` over `interval` with simple poles inside.

    Symmetric excision (x0 - h, x0 + h) around each pole; the remainder is
    integrated adaptively.  The excised result is linear in h for simple
    poles, so two Richardson steps over h in {1e-3, 5e-4, 2.5e-4} eliminate
    the O(h) and O(h^2) terms.
    """
    a, b = interval
    poles = sorted(pole_locations)
    if not poles:
        return adaptive_1d(integrand, a, b, tol)
    for x0 in poles:
        if not (a < x0 < b):
            raise DomainError(f"pole {x0} not strictly inside [{a}, {b}]")
    for p1, p2 in zip(poles, poles[1:]):
        if p2 - p1 < 4.0 * _PV_EXCISIONS[0]:
            raise DomainError("poles too close for the fixed excision radii")

    def excised(h):
        cuts = [a]
        for x0 in poles:
            cuts.extend([x0 - h, x0 + h])
        cuts.append(b)
        val = 0.0 + 0.0j
        err = 0.0
        nev = 0
        for lo, hi in zip(cuts[::2], cuts[1::2]):
            if hi <= lo:
                continue
            r = adaptive_1d(integrand, lo, hi, tol / (len(poles) + 1))
            val += r.value
            err += r.abs_error_estimate
            nev += r.evaluations
        return val, err, nev

    vals = []
    tot_err = 0.0
    tot_nev = 0
    for h in _PV_EXCISIONS:
        v, e, n = excised(h)
        vals.append(v)
        tot_err += e
        tot_nev += n
    # Richardson: h halves each step, I(h) = PV + c1 h + c2 h^2 + ...
    r1 = 2.0 * vals[1] - vals[0]
    r2 = 2.0 * vals[2] - vals[1]
    value = (4.0 * r2 - r1) / 3.0
    extrap_err = abs(r2 - r1)
    return QuadResult(
        value=value,
        abs_error_estimate=tot_err + extrap_err,
        evaluations=tot_nev,
    )


def integrate_semi_infinite(
    integrand: Callable[[float], complex],
    decay_rate: float,
    tol: float = 1e-11,
    target: float = 1e-16,
) -> QuadResult:
    """Integral over (0, inf) of an integrand bounded by C e^{-decay_rate x}.

    Truncates at x_max where the analytic exponential bound reaches `target`
    and integrates [0, x_max] adaptively.  The integrand must be finite at 0
    (callers supply the x -> 0 limit of dx/x kernels).
    """
    if decay_rate <= 0:
        raise DomainError(f"decay_rate must be positive, got {decay_rate}")
    x_max = -math.log(target) / decay_rate
    return adaptive_1d(integrand, 0.0, x_max, tol)
