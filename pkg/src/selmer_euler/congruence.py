"""Mod-p congruence tests and the imprimitive prime sets of a curve pair."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from sympy import primerange

from .local.curves import CurveModel
from .local.gaussian import bad_places, local_data
from .local.tate import Kind, LocalData, Reduction, classify_local

DEFAULT_BOUND = 1000


class HypothesisViolation(ValueError):
    """An input breaks one of the standing hypotheses (semistability at p, a_v = 0, ...)."""


class Irreducibility(str, Enum):
    ASSERTED = "asserted"
    HEURISTIC = "heuristically-checked"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CongruenceVerdict:
    congruent: bool
    bound: int
    witness: int | None = None
    reason: str = ""

    def __str__(self) -> str:
        if self.congruent:
            return f"congruent-up-to-bound {self.bound}"
        return f"not-congruent (witness {self.witness}: {self.reason})"


def residually_ramified(d: LocalData, p: int) -> bool:
    """Is E[p] ramified at v?  Tate-curve criterion for mult places; always for additive (p >= 5)."""
    if d.kind is Kind.GOOD:
        return False
    if d.kind is Kind.ADDITIVE:
        return True
    return d.ord_delta_min % p != 0


def _frobenius_trace_mod_p(d: LocalData) -> int:
    """Trace of Frobenius on E[p] at an unramified place."""
    if d.kind is Kind.GOOD:
        return d.a
    return d.a * (d.Nv + 1)


def compare_places(d1: LocalData, d2: LocalData, p: int) -> str | None:
    """Reason the two mod-p representations differ at v, or None if compatible."""
    r1, r2 = residually_ramified(d1, p), residually_ramified(d2, p)
    if r1 != r2:
        return "residual ramification differs"
    if not r1:
        t1, t2 = _frobenius_trace_mod_p(d1), _frobenius_trace_mod_p(d2)
        if (t1 - t2) % p:
            return f"Frobenius traces {t1} and {t2} differ mod {p}"
        return None
    # both ramified: Frobenius on the inertia-invariant line
    if d1.kind.multiplicative and d2.kind.multiplicative and (d1.a - d2.a) % p:
        return f"multiplicative signs {d1.a} and {d2.a} differ mod {p}"
    return None


def test_p_congruence(E1: CurveModel, E2: CurveModel, p: int, B: int = DEFAULT_BOUND) -> CongruenceVerdict:
    """Necessary-condition test for E1[p] ~ E2[p] at every place above l <= B, l != p."""
    if B < 50:
        raise ValueError("bound B must be at least 50")
    if E1.base_field != E2.base_field:
        raise ValueError("curves live over different base fields")
    for ell in primerange(2, B + 1):
        if ell == p:
            continue
        for d1, d2 in zip(local_data(E1, ell), local_data(E2, ell)):
            why = compare_places(d1, d2, p)
            if why:
                return CongruenceVerdict(False, B, ell, f"at {d1.place}: {why}")
    return CongruenceVerdict(True, B)


test_p_congruence.__test__ = False  # not a pytest test despite the name


def irreducibility_heuristic(E: CurveModel, p: int, B: int = DEFAULT_BOUND) -> Irreducibility:
    """HEURISTIC when some good l <= B has a_l != 1 + l mod p, UNKNOWN otherwise.

    Rules out only the pattern of a rational p-torsion point or a mu_p
    subgroup; never a proof of irreducibility.
    """
    for ell in primerange(2, B + 1):
        if ell == p:
            continue
        for d in local_data(E, ell):
            if d.kind is Kind.GOOD and (d.a - 1 - d.Nv) % p:
                return Irreducibility.HEURISTIC
    return Irreducibility.UNKNOWN


def supersingular_set(E: CurveModel, p: int) -> frozenset[str]:
    out = set()
    for d in local_data(E, p):
        at = classify_local(d, p)
        if at.reduction is Reduction.ADDITIVE:
            raise HypothesisViolation(f"semistability at p fails: additive reduction at {d.place}")
        if at.violation:
            raise HypothesisViolation(f"supersingular places need a_v = 0: {at.violation} at {d.place}")
        if at.reduction is Reduction.SUPERSINGULAR:
            out.add(d.place)
    return frozenset(out)


def residual_conductor_quotient_support(E: CurveModel, p: int) -> frozenset[str]:
    """Places v not above p that divide N_E / N-bar_E: multiplicative with p | ord_v(Delta_min)."""
    if p < 5:
        raise ValueError("residual conductor test needs p >= 5")
    return frozenset(d.place for d in bad_places(E)
                     if d.ell != p and d.kind.multiplicative and d.ord_delta_min % p == 0)


def mu_p_in_completion(v, p: int) -> bool:
    """mu_p lies in F_v iff Nv = 1 mod p; ``v`` is a LocalData/Place or the norm itself."""
    Nv = v if isinstance(v, int) else v.Nv
    if Nv % p == 0:
        raise ValueError("v lies above p")
    return Nv % p == 1


def sigma1_status(d: LocalData, p: int) -> str:
    """Why the place is (or is not) in Sigma_1(E); "member" when it is."""
    if d.ell == p:
        return "above p"
    if d.kind is Kind.GOOD:
        return "good reduction"
    if d.kind is Kind.ADDITIVE:
        return "additive: tame conductors agree"
    if d.ord_delta_min % p:
        return "E[p] ramified (p does not divide ord Delta)"
    if p != 3 and mu_p_in_completion(d, p) and d.kind is not Kind.SPLIT:
        return "mu_p in F_v but reduction not split"
    return "member"


def sigma1_of(E: CurveModel, p: int) -> frozenset[str]:
    """Places v with v not above p, v | N_E/N-bar_E, and split reduction whenever mu_p is in F_v."""
    return frozenset(d.place for d in bad_places(E) if sigma1_status(d, p) == "member")


def sigma1(E1: CurveModel, E2: CurveModel, p: int) -> frozenset[str]:
    return sigma1_of(E1, p) | sigma1_of(E2, p)


def sigma0(E1: CurveModel, E2: CurveModel, p: int) -> frozenset[str]:
    """Bad places of either curve away from p."""
    return frozenset(d.place for E in (E1, E2) for d in bad_places(E) if d.ell != p)


@dataclass(frozen=True)
class ResidualPair:
    p: int
    labels: tuple[str, str]
    field: str
    congruence: CongruenceVerdict
    irreducibility: Irreducibility
    sigma_ss: frozenset[str]
    sigma1: frozenset[str]
    sigma0: frozenset[str]
    review: tuple[str, ...] = field(default=())


def residual_pair(E1: CurveModel, E2: CurveModel, p: int, B: int = DEFAULT_BOUND,
                  irreducible: bool | None = None) -> ResidualPair:
    """Everything Sigma-related about the pair.  ``irreducible=True`` asserts that E[p] is irreducible."""
    if p < 5:
        raise ValueError("only p >= 5 is supported")
    verdict = test_p_congruence(E1, E2, p, B)
    if irreducible:
        irr = Irreducibility.ASSERTED
    else:
        h = [irreducibility_heuristic(E, p, B) for E in (E1, E2)]
        irr = Irreducibility.HEURISTIC if all(x is Irreducibility.HEURISTIC for x in h) else Irreducibility.UNKNOWN
    ss1, ss2 = supersingular_set(E1, p), supersingular_set(E2, p)
    if verdict.congruent and ss1 != ss2:
        verdict = CongruenceVerdict(False, B, p, "supersingular sets differ")
    review = tuple(f"{E.label} at {d.place}: {note}"
                   for E in (E1, E2) for d in bad_places(E) if d.needs_review for note in d.notes)
    return ResidualPair(p, (E1.label, E2.label), E1.base_field, verdict, irr, ss1,
                        sigma1(E1, E2, p), sigma0(E1, E2, p), review)
