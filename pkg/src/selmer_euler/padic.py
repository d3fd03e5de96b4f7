"""Fixed-precision arithmetic in Q_p.

A :class:`PadicNumber` is ``p^valuation * unit`` where ``unit`` is an integer
coprime to ``p`` known modulo ``p^precision``.  Zero carries an infinite
valuation; for zero the ``precision`` field holds the *absolute* precision
(the value is known to be ``0 mod p^precision``), and an exact zero has
``precision == INF``.

All arithmetic tracks precision; equality means "equal to the precision of the
operands".  The logarithm uses the Iwasawa branch, ``log_p(p) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

INF = math.inf

DEFAULT_PRECISION = 30


def valuation(x, p: int) -> int:
    """Return ``v`` with ``x = p^v * (unit)`` for a nonzero rational ``x``."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("undefined valuation: x = 0")
    return _ival(x.numerator, p) - _ival(x.denominator, p)


def _ival(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True, eq=False)
class PadicNumber:
    p: int
    valuation: int | float
    unit: int
    precision: int | float

    def __post_init__(self):
        if self.valuation != INF:
            if self.unit % self.p == 0:
                raise ValueError("unit part must be coprime to p")
            if self.precision < 1:
                raise ValueError("relative precision must be >= 1")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rational(cls, x, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
        """Encode an exact rational with ``precision`` significant digits."""
        x = Fraction(x)
        if x == 0:
            return cls(p, INF, 0, INF)
        v = valuation(x, p)
        mod = p**precision
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        return cls(p, v, num * pow(den, -1, mod) % mod, precision)

    @classmethod
    def from_residue(cls, value: int, p: int, absprec: int) -> PadicNumber:
        """The element of Z_p known to be ``value mod p^absprec``."""
        value %= p**absprec
        if value == 0:
            return cls(p, INF, 0, absprec)
        v = _ival(value, p)
        return cls(p, v, value // p**v, absprec - v)

    @classmethod
    def zero(cls, p: int, absprec=INF) -> PadicNumber:
        return cls(p, INF, 0, absprec)

    # -- basic properties ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self):
        if self.is_zero():
            return self.precision
        return self.valuation + self.precision

    def is_unit(self) -> bool:
        return self.valuation == 0

    def norm(self) -> Fraction:
        """|x|_p normalised by |p|_p = 1/p."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(1, self.p**self.valuation) if self.valuation >= 0 else Fraction(self.p ** -self.valuation)

    def lift(self) -> Fraction:
        """A rational representative ``p^v * unit``."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def residue(self, absprec: int) -> int:
        """Integer in ``[0, p^absprec)`` congruent to self; requires self in Z_p."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("not a p-adic integer")
        if absprec > self.absolute_precision:
            raise ValueError("requested more digits than are known")
        return self.unit * self.p**self.valuation % self.p**absprec

    def with_precision(self, precision) -> PadicNumber:
        """Drop to a lower relative precision."""
        if self.is_zero():
            return self
        precision = min(precision, self.precision)
        return PadicNumber(self.p, self.valuation, self.unit % self.p**precision, precision)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mismatched primes")
            return other
        if isinstance(other, (int, Rational)):
            x = Fraction(other)
            if x == 0:
                return PadicNumber.zero(self.p)
            v = valuation(x, self.p)
            rel = self.precision if not self.is_zero() else 1
            absp = self.absolute_precision
            need = max(rel, (absp - v) if absp != INF else rel, 1)
            if need == INF:
                need = DEFAULT_PRECISION
            return PadicNumber.from_rational(x, self.p, int(need))
        return NotImplemented

    def __neg__(self) -> PadicNumber:
        if self.is_zero():
            return self
        mod = self.p**self.precision
        return PadicNumber(self.p, self.valuation, -self.unit % mod, self.precision)

    def __add__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        absprec = min(self.absolute_precision, other.absolute_precision)
        if self.is_zero() and other.is_zero():
            return PadicNumber.zero(p, absprec)
        if self.is_zero():
            return other._cap_absolute(absprec)
        if other.is_zero():
            return self._cap_absolute(absprec)
        vmin = min(self.valuation, other.valuation)
        span = absprec - vmin
        total = (self.unit * p ** (self.valuation - vmin) + other.unit * p ** (other.valuation - vmin)) % p**span
        if total == 0:
            return PadicNumber.zero(p, absprec)
        v = _ival(total, p)
        return PadicNumber(p, vmin + v, total // p**v, span - v)

    __radd__ = __add__

    def __sub__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> PadicNumber:
        return (-self) + other

    def __mul__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                return PadicNumber.zero(p, self.precision + other.precision)
            z, x = (self, other) if self.is_zero() else (other, self)
            return PadicNumber.zero(p, z.precision + x.valuation)
        prec = min(self.precision, other.precision)
        return PadicNumber(p, self.valuation + other.valuation, self.unit * other.unit % p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> PadicNumber:
        if self.is_zero():
            raise ZeroDivisionError("p-adic zero has no inverse")
        mod = self.p**self.precision
        return PadicNumber(self.p, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by p-adic zero")
        if self.is_zero():
            return PadicNumber.zero(self.p, self.precision - other.valuation)
        return self * other.inverse()

    def __rtruediv__(self, other) -> PadicNumber:
        return self._coerce(other) / self

    def __pow__(self, n: int) -> PadicNumber:
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.from_rational(1, self.p, self.precision if not self.is_zero() else DEFAULT_PRECISION)
        if self.is_zero():
            return PadicNumber.zero(self.p, self.precision * n if self.precision != INF else INF)
        mod = self.p**self.precision
        return PadicNumber(self.p, self.valuation * n, pow(self.unit, n, mod), self.precision)

    def _cap_absolute(self, absprec) -> PadicNumber:
        if absprec == INF or self.absolute_precision <= absprec:
            return self
        if self.valuation >= absprec:
            return PadicNumber.zero(self.p, absprec)
        return self.with_precision(absprec - self.valuation)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.precision})" if self.precision != INF else "0"
        return f"{self.p}^{self.valuation}*{self.unit} + O({self.p}^{self.absolute_precision})"


@dataclass(frozen=True, order=True)
class PPower:
    """A quantity known only up to a p-adic unit: ``p^exponent``.

    ``exponent == INF`` stands for the value 0 (the convention |L_v(E,1)|_p = 0
    when the local Euler factor vanishes).
    """

    exponent: int | float

    @classmethod
    def of(cls, x, p: int) -> PPower:
        x = Fraction(x)
        return cls(INF) if x == 0 else cls(valuation(x, p))

    def __mul__(self, other: PPower) -> PPower:
        return PPower(self.exponent + other.exponent)

    def __truediv__(self, other: PPower) -> PPower:
        if other.exponent == INF:
            raise ZeroDivisionError("division by the zero p-power")
        return PPower(self.exponent - other.exponent)

    def is_one(self) -> bool:
        return self.exponent == 0

    def divisible_by_p(self) -> bool:
        return self.exponent >= 1

    def value(self, p: int):
        if self.exponent == INF:
            return 0
        return Fraction(p) ** self.exponent

    def __str__(self) -> str:
        return "0" if self.exponent == INF else f"p^{self.exponent}"


ONE = PPower(0)


def hensel_unit_root(a_p: int, p: int, N: int = DEFAULT_PRECISION) -> PadicNumber:
    """Unit root of ``X^2 - a_p X + p`` to ``N`` digits (ordinary case)."""
    if a_p % p == 0:
        raise ValueError(f"no unit root: p={p} divides a_p={a_p} (non-ordinary)")
    mod = p**N
    alpha = a_p % p
    # f'(alpha) = 2 alpha - a_p is a unit, so Newton converges quadratically
    while (alpha * alpha - a_p * alpha + p) % mod:
        f = alpha * alpha - a_p * alpha + p
        alpha = (alpha - f * pow(2 * alpha - a_p, -1, mod)) % mod
    return PadicNumber(p, 0, alpha, N)


def teichmuller(u: int, p: int, N: int = DEFAULT_PRECISION) -> PadicNumber:
    """The (p-1)-st root of unity congruent to ``u`` mod p."""
    if u % p == 0:
        raise ValueError("Teichmuller lift needs u coprime to p")
    mod = p**N
    w = u % p
    for _ in range(N):
        w = pow(w, p, mod)
    return PadicNumber(p, 0, w, N)


def principal_unit(u: int, p: int, N: int = DEFAULT_PRECISION) -> PadicNumber:
    """``<u> = u / omega(u)``, which is 1 mod p."""
    return PadicNumber.from_rational(u, p, N) / teichmuller(u, p, N)


def _log_principal(z: int, p: int, absprec: int) -> int:
    """sum (-1)^(k+1) z^k / k mod p^absprec, for z divisible by p."""
    if z % p**absprec == 0:
        return 0
    a = _ival(z, p)
    mod = p**absprec
    # beyond kmax every term has valuation a*k - v_p(k) >= absprec
    kmax = absprec + math.ceil(math.log(2 * absprec + 2, p)) + 1
    total = 0
    for k in range(1, kmax + 1):
        e = _ival(k, p)
        if a * k - e >= absprec:
            continue
        term = pow(z, k, p ** (absprec + e)) // p**e * pow(k // p**e, -1, mod)
        total += term if k % 2 else -term
    return total % mod


def padic_log(x: PadicNumber) -> PadicNumber:
    """Iwasawa-branch logarithm: ``log(p) = 0``, ``log(omega(u)) = 0``."""
    if x.is_zero():
        raise ValueError("log of zero")
    p = x.p
    A = x.precision
    # log(u) = log(u^(p-1)) / (p-1) kills the Teichmuller part
    z = (pow(x.unit, p - 1, p**A) - 1) % p**A
    val = _log_principal(z, p, A) * pow(p - 1, -1, p**A)
    return PadicNumber.from_residue(val, p, A)


def padic_exp(z: PadicNumber) -> PadicNumber:
    """Exponential series; converges for valuation(z) >= 1 (p odd)."""
    p = z.p
    if z.is_zero():
        return PadicNumber.from_rational(1, p, DEFAULT_PRECISION if z.precision == INF else int(z.precision))
    if z.valuation < 1:
        raise ValueError("exp does not converge for valuation < 1")
    A = int(z.absolute_precision)
    mod = p**A
    zi = z.residue(A)
    total = 1
    k = 1
    fact_unit = 1
    fact_val = 0
    while True:
        kk = k
        while kk % p == 0:
            kk //= p
            fact_val += 1
        fact_unit *= kk
        if z.valuation * k - (k - 1) / (p - 1) >= A:
            break
        term = pow(zi, k, p ** (A + fact_val)) // p**fact_val
        total += term * pow(fact_unit, -1, mod)
        k += 1
    return PadicNumber.from_residue(total, p, A)
