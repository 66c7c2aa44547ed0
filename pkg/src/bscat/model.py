"""Model parameters, excitation taxonomy, mass ratios and unit conventions.

All downstream frequencies are measured in units of the boundary scale T_B
(i.e. T_B = 1, boundary rapidity lambda_B = 0).  The converter from physical
junction parameters to T_B lives here and nowhere else.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.special import gamma as _gamma

from .errors import DomainError

_P_INT_TOL = 1e-9


class ModelKind(enum.Enum):
    BoundarySineGordon = "bsg"
    Kondo = "kondo"


@dataclass(frozen=True)
class ModelSpec:
    """Immutable model description: kind, coupling z and derived constants."""

    kind: ModelKind
    z: float
    xi: float = field(init=False)
    p: float = field(init=False)
    p_int: int | None = field(init=False)
    n_breathers: int = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.z < 1.0):
            raise DomainError(f"coupling z must lie in (0, 1), got {self.z}")
        p = 1.0 / self.z
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "xi", math.pi / (p - 1.0))
        p_round = round(p)
        p_int = p_round if abs(p - p_round) < _P_INT_TOL else None
        object.__setattr__(self, "p_int", p_int)
        n_b = (p_int - 2) if p_int is not None else (math.ceil(p) - 2)
        object.__setattr__(self, "n_breathers", max(0, n_b))

    @property
    def is_bsg(self) -> bool:
        return self.kind is ModelKind.BoundarySineGordon

    @property
    def is_kondo(self) -> bool:
        return self.kind is ModelKind.Kondo


class ExcitationKind(enum.Enum):
    Soliton = "+"
    Antisoliton = "-"
    Breather = "b"


@dataclass(frozen=True)
class Excitation:
    """Soliton (+), antisoliton (-) or breather (neutral bound state, index m)."""

    kind: ExcitationKind
    m: int = 0

    def __post_init__(self):
        if self.kind is ExcitationKind.Breather:
            if self.m < 1:
                raise DomainError(f"breather index must be >= 1, got {self.m}")
        elif self.m != 0:
            raise DomainError("m is only meaningful for breathers")

    @property
    def charge(self) -> int:
        if self.kind is ExcitationKind.Soliton:
            return 1
        if self.kind is ExcitationKind.Antisoliton:
            return -1
        return 0

    @property
    def conjugate(self) -> "Excitation":
        if self.kind is ExcitationKind.Soliton:
            return Excitation(ExcitationKind.Antisoliton)
        if self.kind is ExcitationKind.Antisoliton:
            return Excitation(ExcitationKind.Soliton)
        return self

    @property
    def conj_sign(self) -> int:
        """Charge-conjugation matrix element: +1 for (anti)solitons, (-1)^m for breathers."""
        if self.kind is ExcitationKind.Breather:
            return -1 if self.m % 2 else 1
        return 1


SOLITON = Excitation(ExcitationKind.Soliton)
ANTISOLITON = Excitation(ExcitationKind.Antisoliton)


def breather(m: int) -> Excitation:
    return Excitation(ExcitationKind.Breather, m)


def make_model(kind: ModelKind | str, z: float) -> ModelSpec:
    """Construct a validated ModelSpec for coupling z in (0, 1); the kind may
    be given as a ModelKind or its string value ("bsg" / "kondo")."""
    if not isinstance(kind, ModelKind):
        kind = ModelKind(kind)
    return ModelSpec(kind=kind, z=z)


def validate_excitation(exc: Excitation, spec: ModelSpec) -> None:
    if exc.kind is ExcitationKind.Breather and exc.m > spec.n_breathers:
        raise DomainError(
            f"breather m={exc.m} does not exist at z={spec.z} "
            f"(n_breathers={spec.n_breathers})"
        )


def mass_ratio(exc: Excitation, spec: ModelSpec) -> float:
    """Bulk mass ratio: 1 for (anti)solitons, 2 sin(m xi / 2) for breather m."""
    validate_excitation(exc, spec)
    if exc.kind is ExcitationKind.Breather:
        return 2.0 * math.sin(exc.m * spec.xi / 2.0)
    return 1.0


def t_b_from_physical(epsilon_J: float, cutoff_Lambda: float, z: float) -> float:
    """Boundary scale T_B from junction energy, UV cutoff and coupling z.

    T_B = Gamma(z/(2(1-z))) / (sqrt(pi) Gamma(1/(2(1-z))))
          * (pi * epsilon_J / (Gamma(z) Lambda^z))^(1/(1-z))
    """
    if epsilon_J <= 0 or cutoff_Lambda <= 0:
        raise DomainError("epsilon_J and cutoff_Lambda must be positive")
    if not (0.0 < z < 1.0):
        raise DomainError(f"z must lie in (0, 1), got {z}")
    if z > 0.999:
        raise DomainError("z too close to 1: the exponent 1/(1-z) diverges")
    pref = _gamma(z / (2.0 * (1.0 - z))) / (
        math.sqrt(math.pi) * _gamma(1.0 / (2.0 * (1.0 - z)))
    )
    bracket = math.pi * epsilon_J / (_gamma(z) * cutoff_Lambda**z)
    return float(pref * bracket ** (1.0 / (1.0 - z)))
