"""Naive point counting over F_q for q = l or l^2."""

from __future__ import annotations

from math import gcd, isqrt

from sympy import factorint, isprime, nextprime

from .curves import CurveModel, invariants

MAX_FIELD_SIZE = 10**6


class BadReduction(ValueError):
    pass


class FiniteField:
    """F_l or F_{l^2}; elements are encoded as integers ``a + b*l`` in ``[0, q)``."""

    def __init__(self, q: int):
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds the naive-counting cap {MAX_FIELD_SIZE}")
        if isprime(q):
            self.ell, self.degree = q, 1
        else:
            r = isqrt(q)
            if r * r != q or not isprime(r):
                raise ValueError(f"q={q} is neither a prime nor the square of a prime")
            self.ell, self.degree = r, 2
        self.q = q
        ell = self.ell
        if self.degree == 2:
            # F_l[theta] with theta^2 = c1*theta + c0 irreducible
            if ell == 2:
                self._c1, self._c0 = 1, 1
            else:
                d = 2
                while pow(d, (ell - 1) // 2, ell) != ell - 1:
                    d += 1
                self._c1, self._c0 = 0, d

    def embed(self, n: int) -> int:
        return n % self.ell

    def add(self, x: int, y: int) -> int:
        if self.degree == 1:
            return (x + y) % self.q
        ell = self.ell
        return (x % ell + y % ell) % ell + ((x // ell + y // ell) % ell) * ell

    def mul(self, x: int, y: int) -> int:
        if self.degree == 1:
            return x * y % self.q
        ell = self.ell
        a, b = x % ell, x // ell
        c, d = y % ell, y // ell
        bd = b * d
        return (a * c + bd * self._c0) % ell + ((a * d + b * c + bd * self._c1) % ell) * ell

    def squares(self) -> bytearray:
        table = bytearray(self.q)
        for z in range(self.q):
            table[self.mul(z, z)] = 1
        return table


def _reduced(ainvs, F: FiniteField) -> list[int]:
    return [F.embed(a) for a in ainvs]


def count_full(ainvs, q: int) -> int:
    """#E(F_q) by scanning every (x, y); valid in every characteristic."""
    F = FiniteField(q)
    a1, a2, a3, a4, a6 = _reduced(ainvs, F)
    add, mul = F.add, F.mul
    total = 1
    ys = range(q)
    # lhs(y) = y^2 + (a1 x + a3) y; tabulate y^2 once
    ysq = [mul(y, y) for y in ys]
    for x in range(q):
        x2 = mul(x, x)
        rhs = add(add(add(mul(x2, x), mul(a2, x2)), mul(a4, x)), a6)
        lin = add(mul(a1, x), a3)
        for y in ys:
            if add(ysq[y], mul(lin, y)) == rhs:
                total += 1
    return total


def count_char_sum(ainvs, q: int) -> int:
    """#E(F_q) = q + 1 + sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6); odd characteristic only."""
    F = FiniteField(q)
    if F.ell == 2:
        raise ValueError("character sum needs odd characteristic")
    inv = invariants(*ainvs)
    b2, b4, b6 = (F.embed(v) for v in (inv.b2, inv.b4, inv.b6))
    four, two_b4 = F.embed(4), F.embed(2 * inv.b4)
    add, mul = F.add, F.mul
    is_sq = F.squares()
    total = q + 1
    for x in range(q):
        x2 = mul(x, x)
        d = add(add(add(mul(four, mul(x2, x)), mul(b2, x2)), mul(two_b4, x)), b6)
        if d:
            total += 1 if is_sq[d] else -1
    return total


def trace_of_frobenius(ainvs, q: int) -> int:
    """``q + 1 - #E(F_q)`` for a model with good reduction at the prime below q."""
    ell = FiniteField(q).ell
    if invariants(*ainvs).disc % ell == 0:
        raise BadReduction(f"model has bad reduction at {ell}; use tate_algorithm for local data")
    n = count_full(ainvs, q) if ell <= 3 else count_char_sum(ainvs, q)
    a = q + 1 - n
    assert a * a <= 4 * q, f"Hasse bound violated: a={a}, q={q}"
    return a


def count_points(E: CurveModel, q: int) -> int:
    """Trace of Frobenius a_q of the given model over F_q."""
    return trace_of_frobenius(E.ainvs, q)


def bad_primes(E: CurveModel) -> list[int]:
    """Primes dividing the model discriminant (a superset of the bad primes)."""
    return sorted(factorint(abs(invariants(*E.ainvs).disc)))


def torsion_p_part_bound(E: CurveModel, p: int, n_primes: int = 20) -> int:
    """p-part of gcd #E(F_l) over good primes l != p: bounds the p-part of E(Q)_tors."""
    if E.base_field != "Q":
        raise ValueError("torsion bound is implemented over Q only")
    disc = invariants(*E.ainvs).disc
    g = 0
    ell, used = 2, 0
    while used < n_primes:
        if ell != p and disc % ell:
            g = gcd(g, ell + 1 - trace_of_frobenius(E.ainvs, ell))
            used += 1
        ell = nextprime(ell)
    out = 1
    while g % p == 0:
        g //= p
        out *= p
    return out
