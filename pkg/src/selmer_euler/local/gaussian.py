"""Places of Q(i) and base change of local data from Q."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from math import isqrt

from sympy import isprime

from .curves import CurveModel
from .points import bad_primes
from .tate import AtP, Kind, LocalData, classify_local, tate_algorithm


class Splitting(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class Place:
    label: str
    ell: int
    Nv: int
    splitting: Splitting


def _gaussian_label(a: int, b: int, sign: str) -> str:
    im = "i" if b == 1 else f"{b}i"
    return f"{a}{sign}{im}"


def two_squares(ell: int) -> tuple[int, int]:
    """``(a, b)`` with ``a^2 + b^2 = ell`` and ``a > b > 0``, for primes ``ell = 1 mod 4``."""
    for b in range(1, isqrt(ell // 2) + 1):
        a2 = ell - b * b
        a = isqrt(a2)
        if a * a == a2:
            return (a, b) if a > b else (b, a)
    raise ValueError(f"{ell} is not a sum of two squares")


def splitting_in_Qi(ell: int) -> tuple[Splitting, tuple[Place, ...]]:
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    if ell == 2:
        return Splitting.RAMIFIED, (Place("1+i", 2, 2, Splitting.RAMIFIED),)
    if ell % 4 == 3:
        return Splitting.INERT, (Place(str(ell), ell, ell * ell, Splitting.INERT),)
    a, b = two_squares(ell)
    return Splitting.SPLIT, (
        Place(_gaussian_label(a, b, "+"), ell, ell, Splitting.SPLIT),
        Place(_gaussian_label(a, b, "-"), ell, ell, Splitting.SPLIT),
    )


def places_above(ell: int, field: str) -> tuple[Place, ...]:
    if field == "Q":
        return (Place(str(ell), ell, ell, Splitting.SPLIT),)
    return splitting_in_Qi(ell)[1]


def _mult_c(kind: Kind, n: int) -> int:
    if kind is Kind.SPLIT:
        return n
    return 2 if n % 2 == 0 else 1


def base_change_local_data(d: LocalData, ell: int, splitting: Splitting) -> list[LocalData]:
    """Local data at the places of Q(i) above ``ell`` from the data over Q_l."""
    places = splitting_in_Qi(ell)[1]
    if splitting is Splitting.SPLIT:
        return [replace(d, place=pl.label) for pl in places]

    pl = places[0]
    if splitting is Splitting.INERT:
        Nv = ell * ell
        if d.kind is Kind.GOOD:
            return [replace(d, place=pl.label, Nv=Nv, a=d.a * d.a - 2 * ell)]
        if d.kind.multiplicative:
            # the quadratic unramified extension splits the nonsplit torus
            n = d.ord_delta_min
            return [replace(d, place=pl.label, Nv=Nv, kind=Kind.SPLIT, a=1, c=n)]
        return [replace(d, place=pl.label, Nv=Nv, notes=d.notes + ("c_v copied from Q_l, not recomputed over F_l^2",))]

    # ramified (1+i): e = 2, residue field F_2 unchanged
    n = 2 * d.ord_delta_min
    review = ("ramified place: provisional values, check by hand",)
    if d.kind is Kind.GOOD:
        return [replace(d, place=pl.label, needs_review=True, notes=d.notes + review)]
    if d.kind.multiplicative:
        return [replace(d, place=pl.label, kodaira=f"I{n}", ord_delta_min=n, c=_mult_c(d.kind, n),
                        needs_review=True, notes=d.notes + review)]
    return [replace(d, place=pl.label, needs_review=True,
                    notes=d.notes + review + ("additive reduction may change under ramified base change",))]


def local_data(E: CurveModel, ell: int) -> list[LocalData]:
    """Local data at every place of the base field above ``ell``."""
    d = tate_algorithm(E, ell)
    if E.base_field == "Q":
        return [d]
    return base_change_local_data(d, ell, splitting_in_Qi(ell)[0])


def bad_places(E: CurveModel) -> list[LocalData]:
    out = []
    for ell in bad_primes(E):
        out.extend(x for x in local_data(E, ell) if x.kind is not Kind.GOOD)
    return out


def classify_places(E: CurveModel, p: int) -> dict[str, AtP]:
    """Reduction type at each place of the base field above p."""
    return {d.place: classify_local(d, p) for d in local_data(E, p)}


def prime_below(label: str) -> int:
    """Rational prime under a place label such as "19", "1+i", "2-i" or "3+2i"."""
    if label.isdigit():
        return int(label)
    if label == "1+i":
        return 2
    re_part, _, im = label.replace("-", "+").partition("+")
    b = int(im[:-1] or 1)
    return int(re_part) ** 2 + b * b


def place_sort_key(label: str) -> tuple[int, str]:
    return (prime_below(label), label)


def place_data(E: CurveModel, label: str) -> LocalData:
    for d in local_data(E, prime_below(label)):
        if d.place == label:
            return d
    raise KeyError(f"{label} is not a place of {E.base_field}")
