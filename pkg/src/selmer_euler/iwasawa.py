"""Truncated arithmetic in the Iwasawa algebra Z_p[[T]].

Elements are stored as integer residues modulo ``p^N`` for the coefficients of
``1, T, ..., T^D``; every identity here holds modulo ``(p^N, T^(D+1))``.
Coefficients beyond ``T^D`` are treated as zero, so polynomial inputs of degree
at most ``D`` are represented exactly (up to the p-adic precision).

The generator ``gamma`` of Gamma is identified with ``1 + T`` and its
cyclotomic image ``kappa(gamma)`` defaults to ``1 + p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .padic import DEFAULT_PRECISION, INF, PadicNumber, PPower, padic_log, valuation

DEFAULT_TRUNCATION = 16


class InsufficientPrecision(ValueError):
    pass


class TruncationTooSmall(ValueError):
    pass


def _pint(x, p: int, mod: int) -> int:
    """Residue of a p-integral rational modulo ``mod``."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not a p-adic integer")
    return x.numerator * pow(x.denominator, -1, mod) % mod


@dataclass(frozen=True)
class LambdaElement:
    """``sum c_i T^i`` for ``i <= D``, coefficients known modulo ``p^N``."""

    p: int
    residues: tuple[int, ...]
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InsufficientPrecision("p-adic precision exhausted")
        mod = self.p**self.N
        object.__setattr__(self, "residues", tuple(c % mod for c in self.residues))

    @classmethod
    def from_coefficients(cls, p: int, coeffs: Sequence, D: int = DEFAULT_TRUNCATION,
                          N: int = DEFAULT_PRECISION) -> LambdaElement:
        coeffs = list(coeffs)
        if len(coeffs) > D + 1:
            raise TruncationTooSmall(f"{len(coeffs) - 1} exceeds truncation degree {D}")
        mod = p**N
        res = [c.residue(N) if isinstance(c, PadicNumber) else _pint(c, p, mod) for c in coeffs]
        return cls(p, tuple(res + [0] * (D + 1 - len(res))), N)

    @classmethod
    def one(cls, p: int, D: int = DEFAULT_TRUNCATION, N: int = DEFAULT_PRECISION) -> LambdaElement:
        return cls.from_coefficients(p, [1], D, N)

    @property
    def D(self) -> int:
        return len(self.residues) - 1

    @property
    def coeffs(self) -> tuple[PadicNumber, ...]:
        return tuple(PadicNumber.from_residue(c, self.p, self.N) for c in self.residues)

    def coefficient_valuation(self, i: int):
        c = self.residues[i]
        if c == 0:
            return INF
        return valuation(c, self.p)

    def is_zero(self) -> bool:
        return not any(self.residues)

    def degree(self) -> int:
        """Largest index with a coefficient nonzero at precision (-1 for zero)."""
        for i in range(self.D, -1, -1):
            if self.residues[i]:
                return i
        return -1

    def _check(self, other: LambdaElement):
        if self.p != other.p:
            raise ValueError("mismatched primes")

    def _combine(self, other: LambdaElement, sign: int) -> LambdaElement:
        self._check(other)
        D = min(self.D, other.D)
        N = min(self.N, other.N)
        return LambdaElement(self.p, tuple(a + sign * b for a, b in zip(self.residues[:D + 1], other.residues[:D + 1])), N)

    def __add__(self, other: LambdaElement) -> LambdaElement:
        return self._combine(other, 1)

    def __sub__(self, other: LambdaElement) -> LambdaElement:
        return self._combine(other, -1)

    def __mul__(self, other) -> LambdaElement:
        if isinstance(other, (int, Fraction)):
            k = _pint(other, self.p, self.p**self.N)
            return LambdaElement(self.p, tuple(c * k for c in self.residues), self.N)
        self._check(other)
        D = min(self.D, other.D)
        N = min(self.N, other.N)
        return LambdaElement(self.p, tuple(_mul(self.residues, other.residues, D, self.p**N)), N)

    __rmul__ = __mul__

    def shift(self, k: int) -> LambdaElement:
        """Multiply by ``T^k``, growing the truncation so nothing is lost."""
        return LambdaElement(self.p, (0,) * k + self.residues, self.N)

    def truncate(self, D: int) -> LambdaElement:
        return LambdaElement(self.p, self.residues[:D + 1], self.N)

    def at_zero(self) -> PadicNumber:
        return PadicNumber.from_residue(self.residues[0], self.p, self.N)

    def congruent(self, other: LambdaElement) -> bool:
        """Equality modulo the coarser of the two precisions."""
        return (self - other).is_zero()

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.residues):
            if c:
                c = c if c <= self.p**self.N // 2 else c - self.p**self.N
                terms.append(f"{c}" + ("" if i == 0 else "*T" if i == 1 else f"*T^{i}"))
        body = " + ".join(terms) or "0"
        return f"{body} + O({self.p}^{self.N}, T^{self.D + 1})"


def _mul(a: Sequence[int], b: Sequence[int], D: int, mod: int) -> list[int]:
    out = [0] * (D + 1)
    for i, x in enumerate(a[:D + 1]):
        if x:
            for j, y in enumerate(b[:D + 1 - i]):
                out[i + j] += x * y
    return [c % mod for c in out]


def _inverse(a: Sequence[int], D: int, mod: int) -> list[int]:
    """Inverse of a power series with unit constant term, mod T^(D+1)."""
    inv0 = pow(a[0], -1, mod)
    out = [inv0] + [0] * D
    for k in range(1, D + 1):
        s = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out[k] = -s * inv0 % mod
    return out


class Preparation(NamedTuple):
    mu: int
    lam: int
    distinguished: LambdaElement
    unit: LambdaElement


def weierstrass_prepare(f: LambdaElement) -> Preparation:
    """Factor ``f = p^mu * P * U`` with ``P`` distinguished of degree lambda."""
    p = f.p
    if f.is_zero():
        raise InsufficientPrecision("element is zero at the working precision")
    vals = [f.coefficient_valuation(i) for i in range(f.D + 1)]
    mu = min(vals)
    lam = vals.index(mu)
    if lam >= f.D:
        raise TruncationTooSmall(f"lambda={lam} is not below the truncation degree {f.D}")
    M = f.N - mu
    if M < 1:
        raise InsufficientPrecision("no digits left after removing p^mu")
    mod = p**M
    D = f.D
    g = [(c // p**mu) % mod for c in f.residues]
    unit = [1] + [0] * D
    # A = g / U splits as low + T^lam * high; multiplying U by high gains a digit each pass
    for _ in range(M + 2):
        A = _mul(g, _inverse(unit, D, mod), D, mod)
        high = A[lam:] + [0] * lam
        if high[0] == 1 and not any(high[1:D + 1 - lam]):
            # T^(D+1) is O(p^((D+1)//lam)) modulo P, so the unseen tail limits P to that many digits
            prec = M if lam == 0 else max(1, min(M, (D + 1) // lam))
            dist = [c % p**prec for c in A[:lam]] + [1] + [0] * (D - lam)
            return Preparation(mu, lam, LambdaElement(p, tuple(dist), prec), LambdaElement(p, tuple(unit), M))
        unit = _mul(unit, high, D, mod)
    raise ArithmeticError("Weierstrass preparation failed to converge")  # pragma: no cover


def vanishing_order(f: LambdaElement) -> tuple[int, PadicNumber]:
    """Order ``r`` of vanishing at T=0 and the value ``g(0)`` where ``f = T^r g``."""
    for r, c in enumerate(f.residues):
        if c:
            return r, PadicNumber.from_residue(c, f.p, f.N)
    raise InsufficientPrecision("element is zero at the working precision")


def truncated_euler_char(f: LambdaElement) -> PPower:
    """chi_t = |g(0)|_p^{-1}."""
    _, g0 = vanishing_order(f)
    return PPower(g0.valuation)


@dataclass(frozen=True)
class CharPolyData:
    f: LambdaElement
    mu: int
    lam: int
    r: int
    g0: PadicNumber

    @classmethod
    def from_element(cls, f: LambdaElement) -> CharPolyData:
        prep = weierstrass_prepare(f)
        r, g0 = vanishing_order(f)
        return cls(f, prep.mu, prep.lam, r, g0)

    @property
    def chi(self) -> PPower:
        return PPower(self.g0.valuation)


def chi_trivial_equivalence(d: CharPolyData) -> tuple[bool, bool]:
    """Both sides of: chi_t = 1  <=>  (mu = 0 and lambda = r), evaluated separately."""
    return d.g0.valuation == 0, (d.mu == 0 and d.lam == d.r)


def are_associate(a: LambdaElement, b: LambdaElement) -> bool:
    """Equal up to a unit of Lambda: same mu, lambda and distinguished polynomial."""
    pa, pb = weierstrass_prepare(a), weierstrass_prepare(b)
    if (pa.mu, pa.lam) != (pb.mu, pb.lam):
        return False
    return pa.distinguished.congruent(pb.distinguished)


def frobenius_exponent(Nv: int, p: int, N: int = DEFAULT_PRECISION, kappa: int | None = None) -> PadicNumber:
    """``t`` with ``kappa(gamma)^t = <Nv>``, i.e. Frob_v = gamma^t in Gamma."""
    if Nv % p == 0:
        raise ValueError(f"Nv={Nv} is divisible by p={p}")
    kappa = 1 + p if kappa is None else kappa
    log_k = padic_log(PadicNumber.from_rational(kappa, p, N))
    if log_k.is_zero() or log_k.valuation != 1:
        raise ValueError("kappa(gamma) must be a topological generator of 1 + pZ_p")
    return padic_log(PadicNumber.from_rational(Nv, p, N)) / log_k


def twist_euler_factor(P_coeffs: Sequence[int], Nv: int, p: int, D: int = DEFAULT_TRUNCATION,
                       N: int = DEFAULT_PRECISION, kappa: int | None = None) -> LambdaElement:
    """The element ``P_v(E, Nv^{-1} (1+T)^{t_v})`` of Lambda.

    ``P_coeffs`` lists the coefficients of the local polynomial ``P_v(E, X)``
    (constant term first).
    """
    t = frobenius_exponent(Nv, p, N, kappa)
    M = min(int(t.absolute_precision), N)
    t0 = t.residue(M)
    # binom(t, k) is known to M - v_p(k!) digits
    N_out = M - max(valuation(math.factorial(k), p) for k in range(1, D + 1)) if D else M
    if N_out < 1:
        raise InsufficientPrecision("binomial expansion exhausts the p-adic precision")
    mod = p**N_out
    nv_inv = pow(Nv, -1, mod)
    out = [0] * (D + 1)
    for j, a in enumerate(P_coeffs):
        if not a:
            continue
        scale = a * pow(nv_inv, j, mod)
        for k in range(D + 1):
            out[k] += scale * math.comb(j * t0, k)
    return LambdaElement(p, tuple(out), N_out)


def imprimitive_charpoly(f: LambdaElement, twists: Sequence[LambdaElement]) -> LambdaElement:
    """``f * prod h_v``: the characteristic element with the local conditions at Sigma removed."""
    out = f
    for h in twists:
        out = out * h
    return out


def akashi_series(f: LambdaElement, gamma_E: int) -> LambdaElement:
    """``T^gamma_E * f``."""
    if gamma_E < 0:
        raise ValueError("gamma_E must be non-negative")
    return f.shift(gamma_E)


def akashi_euler_char(ak: LambdaElement) -> PPower:
    """chi_t(G) = |beta|_p^{-1} for the leading term ``beta T^k`` of the Akashi series."""
    _, beta = vanishing_order(ak)
    return PPower(beta.valuation)
