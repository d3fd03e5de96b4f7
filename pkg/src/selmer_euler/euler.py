"""Local L-factors, correction factors, truncated Euler characteristics and theorem checks."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .iwasawa import (CharPolyData, LambdaElement, akashi_euler_char, akashi_series, chi_trivial_equivalence,
                      imprimitive_charpoly, truncated_euler_char, twist_euler_factor)
from .local.curves import CurveModel
from .local.gaussian import place_data
from .local.tate import LocalData, Reduction
from .padic import DEFAULT_PRECISION, INF, PadicNumber, PPower, hensel_unit_root, padic_log, valuation


class WrongBranch(ValueError):
    pass


class ExceptionalZeroWarning(UserWarning):
    pass


class Verdict(str, Enum):
    CONSISTENT = "CONSISTENT"
    VIOLATION = "VIOLATION"


# --- local factors -------------------------------------------------------

def local_L_inverse(d: LocalData) -> Fraction:
    """L_v(E, 1)^{-1} = P_v(E, Nv^{-1})."""
    value = sum(Fraction(c, d.Nv**j) for j, c in enumerate(d.local_polynomial()))
    assert value != 0, f"L_v(E,1)^-1 vanished at {d.place}"
    return value


def phi_from_data(data: Iterable[LocalData], p: int) -> PPower:
    """prod |L_v(E,1)|_p over the given places, as a power of p."""
    exp = 0
    for d in data:
        if d.ell == p:
            raise ValueError(f"{d.place} lies above p")
        exp += valuation(local_L_inverse(d), p)
    return PPower(exp)


def phi_factor(E: CurveModel, sigma: Iterable[str], p: int) -> PPower:
    return phi_from_data((place_data(E, v) for v in sigma), p)


# --- the factor at p -----------------------------------------------------

def epsilon_p(a_p: int, kind: Reduction, p: int, N: int = DEFAULT_PRECISION) -> tuple[PadicNumber, int]:
    """``((1 - 1/alpha)^s, s)`` for good ordinary (s=2) or nonsplit multiplicative (s=1) reduction."""
    if kind is Reduction.ORDINARY:
        alpha, s = hensel_unit_root(a_p, p, N), 2
    elif kind is Reduction.NONSPLIT:
        if a_p != -1:
            raise ValueError("nonsplit multiplicative reduction has a_p = -1")
        alpha, s = PadicNumber.from_rational(-1, p, N), 1
    else:
        raise WrongBranch(f"wrong formula branch for {kind.value} reduction")
    eps = (1 - 1 / alpha) ** s
    if eps.is_zero() or eps.valuation > 0:
        warnings.warn(f"exceptional case: unit root alpha = 1 mod {p}, epsilon_p is not a unit",
                      ExceptionalZeroWarning, stacklevel=2)
    return eps, s


@lru_cache(maxsize=None)
def j_coefficients(K: int) -> tuple[int, ...]:
    """c(0..K) with j(q) - 1/q = sum c(n) q^n, from E4^3 / Delta."""
    M = K + 2
    e4 = [1] + [240 * sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, M)]

    def mul(a, b):
        out = [0] * M
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b[:M - i]):
                    out[i + k] += x * y
        return out

    # Delta / q = prod (1 - q^n)^24
    prod = [1] + [0] * (M - 1)
    for n in range(1, M):
        factor = [0] * M
        for k in range(0, 25):
            if n * k < M:
                factor[n * k] = math.comb(24, k) * (-1) ** k
        prod = mul(prod, factor)
    # 1/prod
    inv = [1] + [0] * (M - 1)
    for n in range(1, M):
        inv[n] = -sum(prod[k] * inv[n - k] for k in range(1, n + 1))
    series = mul(mul(mul(e4, e4), e4), inv)  # = q * j(q)
    return tuple(series[n + 1] for n in range(K + 1))


def _j_tail(q: PadicNumber, K: int) -> PadicNumber:
    coeffs = j_coefficients(K)
    total = PadicNumber.from_rational(coeffs[0], q.p, DEFAULT_PRECISION * 4)
    power = q
    for n in range(1, K + 1):
        total = total + power * coeffs[n]
        power = power * q
    return total


def j_of_q(q: PadicNumber, K: int | None = None) -> PadicNumber:
    """The forward series 1/q + 744 + 196884 q + ... ."""
    if q.valuation < 1:
        raise ValueError("q must have positive valuation")
    if K is None:
        K = math.ceil((q.absolute_precision + q.valuation) / q.valuation) + 1
    return 1 / q + _j_tail(q, K)


def tate_parameter(j: PadicNumber, N: int = DEFAULT_PRECISION) -> PadicNumber:
    """Tate parameter q with j(q) = j, by the fixed point q = 1 / (j - 744 - 196884 q - ...)."""
    if j.is_zero() or j.valuation >= 0:
        raise ValueError("not potentially multiplicative: valuation(j) must be negative")
    j = j.with_precision(min(j.precision, N))
    k = -j.valuation
    K = math.ceil(N / k) + 1
    q = 1 / j
    for _ in range(N // k + 3):
        nxt = 1 / (j - _j_tail(q, K))
        if nxt == q and nxt.precision == q.precision:
            break
        q = nxt
    return q


def l_invariant(q: PadicNumber) -> PadicNumber:
    """log_p(q) / ord_p(q) on the branch with log_p(p) = 0."""
    if q.is_zero() or q.valuation < 1:
        raise ValueError("the Tate parameter must have positive valuation")
    return padic_log(q) / q.valuation


def l_invariant_of_curve(E: CurveModel, p: int, N: int = DEFAULT_PRECISION) -> PadicNumber:
    from .local.curves import curve_invariants

    j = curve_invariants(E).j
    return l_invariant(tate_parameter(PadicNumber.from_rational(j, p, N), N))


# --- Euler characteristics -----------------------------------------------

@dataclass(frozen=True)
class ChiValue:
    """A truncated Euler characteristic, known only up to a p-adic unit."""

    exponent: int | float
    up_to_unit: bool = True
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def power(self) -> PPower:
        return PPower(self.exponent)

    def is_one(self) -> bool:
        return self.exponent == 0

    def __str__(self) -> str:
        return f"~ {self.power}"


def _p_part_exponent(n: int, p: int, what: str) -> int:
    if n < 1:
        raise ValueError(f"{what} must be a positive integer")
    v = valuation(n, p)
    if n != p**v:
        raise ValueError(f"{what} must be a power of p, got {n}")
    return v


@dataclass(frozen=True)
class EulerInputs:
    """Global data entering the p-adic BSD-type formula.

    ``regulator_unit_valuation`` is the valuation of the normalised regulator
    ``(log_p kappa(gamma))^{-r} R_p``.  ``sha_p_order=None`` means "assumed
    trivial" and is carried into the notes.
    """

    reduction_at_p: Reduction
    a_p: int
    rank: int
    tamagawa_product: int
    torsion_p_part: int = 1
    sha_p_order: int | None = None
    regulator_unit_valuation: int = 0
    sp_E: int = 0
    r_dag: int | None = None
    gamma_E: int | None = None
    l_invariant_valuation: int | float | None = None

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        if self.r_dag is None:
            object.__setattr__(self, "r_dag", self.rank)
        if not rank_bound_check(self.rank, self.r_dag, self.sp_E):
            raise ValueError(f"need r <= r_dag <= r + sp_E, got r={self.rank}, r_dag={self.r_dag}, sp_E={self.sp_E}")
        if self.tamagawa_product < 1:
            raise ValueError("Tamagawa product must be positive")
        if self.rank == 0 and self.regulator_unit_valuation:
            raise ValueError("rank 0 has regulator 1")


def chi_t_bsd(inp: EulerInputs, p: int, N: int = DEFAULT_PRECISION) -> ChiValue:
    """p-adic valuation of eps * Reg * #Sha * tau / #tors^2 (or the L-invariant variant)."""
    notes = []
    kind = inp.reduction_at_p
    if kind is Reduction.SUPERSINGULAR:
        raise WrongBranch("supersingular reduction: use chi_pm_supersingular")
    if kind is Reduction.ADDITIVE:
        raise WrongBranch("additive reduction at p is outside the formula")
    if inp.sha_p_order is None:
        sha = 0
        notes.append("Sha[p^inf] assumed trivial")
    else:
        sha = _p_part_exponent(inp.sha_p_order, p, "sha_p_order")
    tors = _p_part_exponent(inp.torsion_p_part, p, "torsion_p_part")
    exp = inp.regulator_unit_valuation + sha + valuation(inp.tamagawa_product, p) - 2 * tors
    if inp.rank:
        notes.append("p-adic regulator assumed nonzero")
    if kind is Reduction.SPLIT:
        if inp.l_invariant_valuation is None:
            raise ValueError("split multiplicative reduction needs the L-invariant")
        log_kappa = padic_log(PadicNumber.from_rational(1 + p, p, N))
        exp += inp.l_invariant_valuation - log_kappa.valuation
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            eps, _ = epsilon_p(inp.a_p, kind, p, N)
        for w in caught:
            warnings.warn(w.message, w.category, stacklevel=2)
            notes.append(str(w.message))
        exp += INF if eps.is_zero() else eps.valuation
    if exp < 0:
        raise ValueError(f"negative Euler characteristic exponent {exp}: inconsistent inputs")
    return ChiValue(exp, True, tuple(notes))


def chi_pm_supersingular(sel_p_order: int, tamagawa_product: int, p: int) -> ChiValue:
    """chi^{+-} ~ #Sel * prod c_v in the rank-0 supersingular setting."""
    return ChiValue(_p_part_exponent(sel_p_order, p, "Selmer order") + valuation(tamagawa_product, p))


# --- theorem checks ------------------------------------------------------

@dataclass(frozen=True)
class CongruenceCheck:
    verdict: Verdict
    clause: str

    def __str__(self) -> str:
        return f"{self.verdict.value} ({self.clause})"


def congruence_verdict(r1_dag: int, r2_dag: int, prod1: PPower, prod2: PPower | None) -> CongruenceCheck:
    """Compare Phi_i * chi_t(E_i) against the rank-dependent prediction."""
    if r1_dag == r2_dag:
        if prod2 is None:
            raise ValueError("equal ranks need both products")
        ok = prod1.is_one() == prod2.is_one()
        return CongruenceCheck(Verdict.CONSISTENT if ok else Verdict.VIOLATION, "equal ranks: trivial together")
    if r1_dag < r2_dag:
        ok = prod1.divisible_by_p()
        return CongruenceCheck(Verdict.CONSISTENT if ok else Verdict.VIOLATION, "smaller rank side divisible by p")
    if prod2 is None:
        raise ValueError("r1_dag > r2_dag needs the second product")
    ok = prod2.divisible_by_p()
    return CongruenceCheck(Verdict.CONSISTENT if ok else Verdict.VIOLATION, "smaller rank side divisible by p")


def invariant_transfer_check(mu1: int, lam1: int, mu2: int, lam2: int) -> Verdict:
    """mu vanishes for both or neither; when it does, the imprimitive lambdas agree."""
    if (mu1 == 0) != (mu2 == 0):
        return Verdict.VIOLATION
    if mu1 == 0 and lam1 != lam2:
        return Verdict.VIOLATION
    return Verdict.CONSISTENT


def rank_bound_check(r: int, r_dag: int, sp_E: int) -> bool:
    if sp_E == 0:
        return r_dag == r
    return r <= r_dag <= r + sp_E


# --- identities linking the two sides ------------------------------------

def twists_for(data: Sequence[LocalData], p: int, D: int, N: int) -> list[LambdaElement]:
    return [twist_euler_factor(d.local_polynomial(), d.Nv, p, D, N) for d in data]


def imprimitive_identity(f: LambdaElement, data: Sequence[LocalData]) -> tuple[int | float, int | float]:
    """``(v(Phi) + exponent chi_t(f), v(g^Sigma(0)))``; the two agree."""
    p = f.p
    twists = twists_for(data, p, f.D, f.N)
    g_sigma = imprimitive_charpoly(f, twists)
    lhs = phi_from_data(data, p).exponent + truncated_euler_char(f).exponent
    return lhs, truncated_euler_char(g_sigma).exponent


def imprimitive_triviality(f: LambdaElement, data: Sequence[LocalData]) -> tuple[bool, bool]:
    """Both sides of: Phi * chi_t = 1  <=>  (mu = 0 and lambda^Sigma = r)."""
    p = f.p
    g_sigma = imprimitive_charpoly(f, twists_for(data, p, f.D, f.N))
    lhs = (phi_from_data(data, p) * truncated_euler_char(f)).is_one()
    _, rhs = chi_trivial_equivalence(CharPolyData.from_element(g_sigma))
    return lhs, rhs


def akashi_consistency(f: LambdaElement, gamma_E: int) -> tuple[PPower, PPower]:
    """chi_t(G) from the Akashi leading term and chi_t(Gamma) from f."""
    return akashi_euler_char(akashi_series(f, gamma_E)), truncated_euler_char(f)
