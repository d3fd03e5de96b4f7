"""Integral Weierstrass models and their standard invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple


class SingularModel(ValueError):
    pass


class Invariants(NamedTuple):
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j: Fraction


def invariants(a1: int, a2: int, a3: int, a4: int, a6: int) -> Invariants:
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc == 0:
        raise SingularModel(f"singular model [{a1},{a2},{a3},{a4},{a6}]")
    return Invariants(b2, b4, b6, b8, c4, c6, disc, Fraction(c4**3, disc))


@dataclass(frozen=True)
class CurveModel:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`` over Q.

    ``base_field == "Qi"`` means the Q-model base-changed to Q(i); the
    coefficients are always the rational ones.
    """

    label: str
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    base_field: str = "Q"

    def __post_init__(self):
        if self.base_field not in ("Q", "Qi"):
            raise ValueError(f"unsupported base field {self.base_field!r}")
        invariants(*self.ainvs)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def over(self, field: str) -> CurveModel:
        return CurveModel(self.label, *self.ainvs, base_field=field)


def curve_invariants(E: CurveModel) -> Invariants:
    return invariants(*E.ainvs)


def rst_transform(ainvs, r: int, s: int, t: int) -> tuple[int, int, int, int, int]:
    """Coefficients after ``x = x' + r``, ``y = y' + s x' + t``."""
    a1, a2, a3, a4, a6 = ainvs
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
    )


def scale(ainvs, u: int) -> tuple:
    """Coefficients after ``x = u^2 x'``, ``y = u^3 y'``: ``a_i -> a_i / u^i`` (exact rationals)."""
    a1, a2, a3, a4, a6 = ainvs
    return tuple(Fraction(a, u**k) for a, k in zip((a1, a2, a3, a4, a6), (1, 2, 3, 4, 6)))
