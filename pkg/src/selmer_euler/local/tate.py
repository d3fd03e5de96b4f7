"""Tate's algorithm over Q_l and the per-prime local data record."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum

from .curves import CurveModel, invariants, rst_transform
from .points import trace_of_frobenius


class Kind(str, Enum):
    GOOD = "good"
    SPLIT = "split-mult"
    NONSPLIT = "nonsplit-mult"
    ADDITIVE = "additive"

    @property
    def multiplicative(self) -> bool:
        return self in (Kind.SPLIT, Kind.NONSPLIT)


@dataclass(frozen=True)
class LocalData:
    """Local invariants of E at one place v.

    ``place`` names the place ("19", "2+i", "1+i", ...); ``ell`` is the
    residue characteristic and ``Nv`` the size of the residue field.
    """

    place: str
    ell: int
    Nv: int
    kodaira: str
    f: int
    c: int
    kind: Kind
    a: int
    ord_delta_min: int
    needs_review: bool = False
    notes: tuple[str, ...] = field(default=(), compare=False)

    def local_polynomial(self) -> tuple[int, ...]:
        """Coefficients of P_v(E, X) = det(1 - Frob_v X | V_p(E)^{I_v}), constant first."""
        if self.kind is Kind.GOOD:
            return (1, -self.a, self.Nv)
        if self.kind.multiplicative:
            return (1, -self.a)
        return (1,)


def _ord(n: int, ell: int) -> int | float:
    if n == 0:
        return float("inf")
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def _quad_has_root(a: int, b: int, c: int, ell: int) -> bool:
    """Does a X^2 + b X + c have a root in F_l?"""
    a, b, c = a % ell, b % ell, c % ell
    if ell == 2:
        return c == 0 or (a + b + c) % 2 == 0
    if a == 0:
        return b != 0 or c == 0
    d = (b * b - 4 * a * c) % ell
    return d == 0 or pow(d, (ell - 1) // 2, ell) == 1


def _poly_mod(f: list[int], g: list[int], ell: int) -> list[int]:
    """Remainder of f by g over F_l; coefficient lists, highest degree first."""
    f = [c % ell for c in f]
    inv = pow(g[0], -1, ell)
    while len(f) >= len(g):
        k = f[0] * inv % ell
        for i in range(len(g)):
            f[i] = (f[i] - k * g[i]) % ell
        f.pop(0)
    while f and f[0] == 0:
        f.pop(0)
    return f


def _poly_mulmod(f, g, m, ell):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return _poly_mod(out, m, ell)


def _cubic_root_count(b: int, c: int, d: int, ell: int) -> int:
    """Number of distinct roots of X^3 + bX^2 + cX + d in F_l."""
    if ell < 500:
        return sum(1 for x in range(ell) if (x * x * x + b * x * x + c * x + d) % ell == 0)
    m = [1, b % ell, c % ell, d % ell]
    # deg gcd(m, X^l - X)
    result, base, e = [1], [1, 0], ell
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, ell)
        base = _poly_mulmod(base, base, m, ell)
        e >>= 1
    g = [0] * (3 - len(result)) + result
    g[-2] = (g[-2] - 1) % ell
    a = m
    while g and g[0] == 0:
        g.pop(0)
    while g:
        a, g = g, _poly_mod(a, g, ell)
    return len(a) - 1


@dataclass(frozen=True)
class TateResult:
    kodaira: str
    f: int
    c: int
    kind: Kind
    ord_delta_min: int
    minimal: tuple[int, int, int, int, int]


def tate(ainvs, ell: int) -> TateResult:
    """Tate's algorithm at the prime ``ell`` for an integral model."""
    a = tuple(int(x) for x in ainvs)
    half = pow(2, -1, ell) if ell != 2 else None
    while True:
        inv = invariants(*a)
        n = _ord(inv.disc, ell)
        if n == 0:
            return TateResult("I0", 0, 1, Kind.GOOD, 0, a)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, c4, c6 = inv.b2, inv.b4, inv.b6, inv.c4, inv.c6
        # move the singular point of the reduction to (0, 0)
        if ell == 2:
            if b2 % 2 == 0:
                r = a4 % 2
                t = (r * (1 + a2 + a4) + a6) % 2
            else:
                r = a3 % 2
                t = (r + a4) % 2
        elif ell == 3:
            r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if c4 % ell == 0:
                r = -pow(12, -1, ell) * b2 % ell
            else:
                r = -pow(12 * c4, -1, ell) * (c6 + b2 * c4) % ell
            t = -half * (a1 * r + a3) % ell
        a = rst_transform(a, r, 0, t)
        a1, a2, a3, a4, a6 = a
        assert a3 % ell == 0 and a4 % ell == 0 and a6 % ell == 0

        if c4 % ell:
            split = _quad_has_root(1, a1, -a2, ell)
            if split:
                return TateResult(f"I{n}", 1, n, Kind.SPLIT, n, a)
            return TateResult(f"I{n}", 1, 2 if n % 2 == 0 else 1, Kind.NONSPLIT, n, a)

        inv = invariants(*a)
        if _ord(a6, ell) < 2:
            return TateResult("II", n, 1, Kind.ADDITIVE, n, a)
        if _ord(inv.b8, ell) < 3:
            return TateResult("III", n - 1, 2, Kind.ADDITIVE, n, a)
        if _ord(inv.b6, ell) < 3:
            c = 3 if _quad_has_root(1, a3 // ell, -(a6 // ell**2), ell) else 1
            return TateResult("IV", n - 2, c, Kind.ADDITIVE, n, a)

        # arrange l | a1, a2; l^2 | a3, a4; l^3 | a6
        if ell == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        else:
            s = -a1 * half % ell
            t = -a3 * half
        a = rst_transform(a, 0, s, t)
        a1, a2, a3, a4, a6 = a
        assert a1 % ell == 0 and a2 % ell == 0 and a3 % ell**2 == 0 and a4 % ell**2 == 0 and a6 % ell**3 == 0

        b, c, d = a2 // ell, a4 // ell**2, a6 // ell**3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if w % ell:
            return TateResult("I0*", n - 4, 1 + _cubic_root_count(b, c, d, ell), Kind.ADDITIVE, n, a)

        if x % ell:
            # double root: move it to 0, then alternate y- and x-translations
            if ell == 2:
                r = c
            elif ell == 3:
                r = b * c
            else:
                r = (b * c - 9 * d) * pow(2 * x, -1, ell)
            a = rst_transform(a, ell * (r % ell), 0, 0)
            ix = iy = 3
            mx = my = ell * ell
            while True:
                a2t, a3t = a[1] // ell, a[2] // my
                a4t, a6t = a[3] // (ell * mx), a[4] // (mx * my)
                if (a3t * a3t + 4 * a6t) % ell:
                    cp = 4 if _quad_has_root(1, a3t, -a6t, ell) else 2
                    break
                y0 = a6t % 2 if ell == 2 else -a3t * half % ell
                a = rst_transform(a, 0, 0, my * y0)
                my *= ell
                iy += 1
                a2t, a3t = a[1] // ell, a[2] // my
                a4t, a6t = a[3] // (ell * mx), a[4] // (mx * my)
                if (a4t * a4t - 4 * a6t * a2t) % ell:
                    cp = 4 if _quad_has_root(a2t, a4t, a6t, ell) else 2
                    break
                x0 = (a6t * a2t) % 2 if ell == 2 else -a4t * pow(2 * a2t, -1, ell) % ell
                a = rst_transform(a, mx * x0, 0, 0)
                mx *= ell
                ix += 1
            m = ix + iy - 5
            return TateResult(f"I{m}*", n - m - 4, cp, Kind.ADDITIVE, n, a)

        # triple root: move it to 0
        if ell == 2:
            r = b
        elif ell == 3:
            r = -d
        else:
            r = -b * pow(3, -1, ell)
        a = rst_transform(a, ell * (r % ell), 0, 0)
        a1, a2, a3, a4, a6 = a
        assert a2 % ell**2 == 0 and a4 % ell**3 == 0 and a6 % ell**4 == 0
        a3t, a6t = a3 // ell**2, a6 // ell**4
        if (a3t * a3t + 4 * a6t) % ell:
            cp = 3 if _quad_has_root(1, a3t, -a6t, ell) else 1
            return TateResult("IV*", n - 6, cp, Kind.ADDITIVE, n, a)
        y0 = a6t % 2 if ell == 2 else -a3t * half % ell
        a = rst_transform(a, 0, 0, ell * ell * y0)
        a1, a2, a3, a4, a6 = a
        if _ord(a4, ell) < 4:
            return TateResult("III*", n - 7, 2, Kind.ADDITIVE, n, a)
        if _ord(a6, ell) < 6:
            return TateResult("II*", n - 8, 1, Kind.ADDITIVE, n, a)
        # non-minimal at ell: scale down and start again
        a = (a1 // ell, a2 // ell**2, a3 // ell**3, a4 // ell**4, a6 // ell**6)


class MemoTable:
    """Shared cache: lock-free reads, writes serialised by a lock."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            self._data.setdefault(key, value)
        return self._data[key]

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


LOCAL_MEMO = MemoTable()


def tate_algorithm(E: CurveModel, ell: int) -> LocalData:
    """Local data of E over Q_l (the rational model, whatever the base field tag)."""
    key = (E.label, E.ainvs, ell)
    hit = LOCAL_MEMO.get(key)
    if hit is not None:
        return hit
    res = tate(E.ainvs, ell)
    if res.kind is Kind.GOOD:
        a = trace_of_frobenius(res.minimal, ell)
    elif res.kind is Kind.SPLIT:
        a = 1
    elif res.kind is Kind.NONSPLIT:
        a = -1
    else:
        a = 0
    data = LocalData(str(ell), ell, ell, res.kodaira, res.f, res.c, res.kind, a, res.ord_delta_min)
    return LOCAL_MEMO.put(key, data)


class Reduction(str, Enum):
    ORDINARY = "good-ordinary"
    SUPERSINGULAR = "good-supersingular"
    SPLIT = "split-mult"
    NONSPLIT = "nonsplit-mult"
    ADDITIVE = "additive"


class UnsupportedPrime(ValueError):
    pass


@dataclass(frozen=True)
class AtP:
    """Reduction type at a place above p, plus the reason if it breaks semistability or a_v = 0."""

    reduction: Reduction
    a: int
    violation: str | None = None


def classify_local(d: LocalData, p: int) -> AtP:
    if p < 5:
        raise UnsupportedPrime("unsupported p for supersingular classification")
    if d.kind is Kind.ADDITIVE:
        return AtP(Reduction.ADDITIVE, 0, "additive reduction above p (semistability fails)")
    if d.kind is Kind.SPLIT:
        return AtP(Reduction.SPLIT, d.a)
    if d.kind is Kind.NONSPLIT:
        return AtP(Reduction.NONSPLIT, d.a)
    if d.a % p:
        return AtP(Reduction.ORDINARY, d.a)
    bad = None if d.a == 0 else f"a_v = {d.a} is divisible by p but nonzero"
    return AtP(Reduction.SUPERSINGULAR, d.a, bad)


def classify_at_p(E: CurveModel, p: int) -> AtP:
    """Reduction at p over Q.  For Q(i) use :func:`selmer_euler.local.gaussian.classify_places`."""
    if p < 5:
        raise UnsupportedPrime("unsupported p for supersingular classification")
    return classify_local(tate_algorithm(E, p), p)
