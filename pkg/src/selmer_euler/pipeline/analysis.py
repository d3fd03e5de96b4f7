"""End-to-end analysis of a curve pair and database scans."""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

from sympy import isprime

from .. import __version__
from ..congruence import (DEFAULT_BOUND, HypothesisViolation, ResidualPair, mu_p_in_completion, residual_pair,
                          sigma1, sigma1_status, test_p_congruence)
from ..euler import (EulerInputs, Verdict, akashi_consistency, chi_pm_supersingular, chi_t_bsd,
                     congruence_verdict, imprimitive_identity, invariant_transfer_check, l_invariant_of_curve,
                     local_L_inverse, phi_from_data, rank_bound_check)
from ..iwasawa import DEFAULT_TRUNCATION, CharPolyData, LambdaElement, imprimitive_charpoly, twist_euler_factor
from ..local.curves import CurveModel
from ..local.gaussian import bad_places, classify_places, local_data, place_data, place_sort_key
from ..local.points import torsion_p_part_bound
from ..local.tate import Kind, LocalData, Reduction
from ..padic import DEFAULT_PRECISION, INF, PPower, valuation
from .cache import CacheStore
from .records import CurveDatabase

SCHEMA_VERSION = 1
UNDETERMINED = "UNDETERMINED"

EXIT_CONSISTENT = 0
EXIT_VIOLATION = 2
EXIT_HYPOTHESIS = 3


@dataclass
class AnalysisConfig:
    bound: int = DEFAULT_BOUND
    precision: int = DEFAULT_PRECISION
    truncation: int = DEFAULT_TRUNCATION
    assume_irreducible: bool = False
    cache: CacheStore | None = None

    def echo(self) -> dict:
        return {"bound": self.bound, "precision": self.precision, "truncation": self.truncation,
                "assume_irreducible": self.assume_irreducible}


@dataclass
class PairReport:
    schema_version: int
    tool_version: str
    config: dict
    pair: dict
    curves: list
    verdicts: dict
    assumptions: list
    exit_code: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> PairReport:
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})


# --- local data with optional disk cache ---------------------------------

def local_data_to_dict(d: LocalData) -> dict:
    out = asdict(d)
    out["kind"] = d.kind.value
    out["notes"] = list(d.notes)
    return out


def local_data_from_dict(d: dict) -> LocalData:
    d = dict(d)
    d["kind"] = Kind(d["kind"])
    d["notes"] = tuple(d["notes"])
    return LocalData(**d)


def cached_place_data(E: CurveModel, label: str, cache: CacheStore | None) -> LocalData:
    if cache is None:
        return place_data(E, label)
    raw = cache.memo("place_data", lambda: local_data_to_dict(place_data(E, label)),
                     list(E.ainvs), E.base_field, label)
    return local_data_from_dict(raw)


def _fmt(x) -> str | int | None:
    if x is None:
        return None
    if x == INF:
        return "inf"
    return x


def _ppower_dict(x: PPower | None) -> dict | None:
    return None if x is None else {"exponent": _fmt(x.exponent)}


# --- per-curve pieces ----------------------------------------------------

@dataclass
class _CurveWork:
    label: str
    section: dict
    r_dag: int | None
    product: PPower | None
    charpoly: CharPolyData | None = None
    hypothesis_failures: list = field(default_factory=list)


def _local_row(d: LocalData, p: int, in_sigma1: bool) -> dict:
    inv = local_L_inverse(d)
    row = local_data_to_dict(d)
    row.update({"L_inverse": str(inv), "scaled_value": str(inv * d.Nv), "in_sigma1": in_sigma1,
                "mu_p_in_completion": mu_p_in_completion(d, p), "sigma1_status": sigma1_status(d, p)})
    return row


def _chi_for_curve(rec, E: CurveModel, p: int, at_places: dict, tamagawa: int, cfg: AnalysisConfig,
                   notes: list, provenance: dict, section: dict):
    """Returns (ChiValue | None, r_dag | None, formula)."""
    field_ = E.base_field
    rank_key = "rank" if field_ == "Q" else "rank_qi"
    sha_key = "sha_p_order" if field_ == "Q" else "sha_p_order_qi"
    rank = rec.get(rank_key)
    if rank is None:
        notes.append(f"{rank_key} not supplied")
    else:
        provenance["rank"] = rec.provenance.get(rank_key, "user")
    at_p = at_places[sorted(at_places)[0]]
    red = at_p.reduction
    sp_E = sum(1 for at in at_places.values() if at.reduction is Reduction.SPLIT)
    section["rank"], section["sp_E"] = rank, sp_E
    r_dag = rec.get("r_dag")
    if r_dag is None and rank is not None and sp_E == 0:
        r_dag = rank
    elif r_dag is not None:
        provenance["r_dag"] = rec.provenance.get("r_dag", "user")
    sha = rec.get(sha_key)
    if sha is not None:
        provenance["sha_p_order"] = rec.provenance.get(sha_key, "user")

    if red is Reduction.SUPERSINGULAR:
        if rank != 0:
            notes.append("supersingular product formula needs rank 0")
            return None, r_dag, "supersingular-product"
        if sha is None:
            notes.append("Sha[p^inf] assumed trivial")
            sha = 1
        # rank 0: the p-primary Selmer group is Sha[p^inf]
        return chi_pm_supersingular(sha, tamagawa, p), r_dag, "supersingular-product"

    if field_ != "Q":
        notes.append("ordinary/multiplicative formula is implemented over Q only")
        return None, r_dag, "bsd"
    if rank is None:
        return None, r_dag, "bsd"
    reg = rec.get("regulator_unit_valuation")
    if reg is None:
        if rank:
            notes.append("regulator valuation not supplied for positive rank")
            return None, r_dag, "bsd"
        reg = 0
    else:
        provenance["regulator_unit_valuation"] = rec.provenance.get("regulator_unit_valuation", "user")
    tors = rec.get("torsion_order")
    if tors is None:
        tors_p = torsion_p_part_bound(E, p)
        provenance["torsion_p_part"] = "computed"
        notes.append("torsion p-part is an upper bound from point counts")
    else:
        tors_p = p ** valuation(tors, p)
        provenance["torsion_p_part"] = rec.provenance.get("torsion_order", "user")
    if sp_E and r_dag is None:
        notes.append("split reduction at p: r_dag must be supplied")
        return None, None, "bsd"
    lval = None
    if red is Reduction.SPLIT:
        L = l_invariant_of_curve(E, p, cfg.precision)
        lval = INF if L.is_zero() else L.valuation
        provenance["l_invariant"] = "computed"
    try:
        inputs = EulerInputs(red, at_p.a, rank, tamagawa, tors_p, sha, reg, sp_E, r_dag, rec.get("gamma_E"), lval)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            chi = chi_t_bsd(inputs, p, cfg.precision)
    except ValueError as exc:
        notes.append(f"inputs rejected: {exc}")
        return None, r_dag, "bsd"
    return chi, r_dag, "bsd"


def _analyze_curve(rec, E: CurveModel, p: int, residual: ResidualPair, cfg: AnalysisConfig) -> _CurveWork:
    notes: list[str] = []
    provenance: dict = {"local_data": "computed"}
    work_failures = []
    section: dict = {"label": rec.label, "field": E.base_field, "ainvs": list(rec.ainvs)}

    at_places = classify_places(E, p)
    section["reduction_at_p"] = {k: {"reduction": v.reduction.value, "a": v.a, "violation": v.violation}
                                 for k, v in sorted(at_places.items())}
    for place, at in sorted(at_places.items()):
        if at.violation:
            work_failures.append(f"{rec.label} at {place}: {at.violation}")

    sigma0 = sorted(residual.sigma0, key=place_sort_key)
    rows = [_local_row(cached_place_data(E, v, cfg.cache), p, v in residual.sigma1) for v in sigma0]
    section["local_table"] = rows
    bad = bad_places(E)
    tamagawa = 1
    for d in bad:
        tamagawa *= d.c
    section["tamagawa_product"] = tamagawa

    s1 = sorted(residual.sigma1, key=place_sort_key)
    phi = phi_from_data([cached_place_data(E, v, cfg.cache) for v in s1], p)
    section["phi"] = {"exponent": _fmt(phi.exponent), "places": s1}

    chi, r_dag, formula = None, None, None
    section["rank"], section["sp_E"] = None, None
    if not work_failures:
        chi, r_dag, formula = _chi_for_curve(rec, E, p, at_places, tamagawa, cfg, notes, provenance, section)
    section["chi"] = None if chi is None else {
        "exponent": _fmt(chi.exponent), "up_to_unit": chi.up_to_unit, "formula": formula,
        "notes": sorted(set(chi.notes))}
    section["r_dag"] = r_dag
    product = None if chi is None else phi * chi.power
    section["product"] = _ppower_dict(product)

    cp = None
    if rec.get("charpoly") is not None:
        f = LambdaElement.from_coefficients(p, rec.get("charpoly"), cfg.truncation, cfg.precision)
        provenance["charpoly"] = rec.provenance.get("charpoly", "user")
        data = [cached_place_data(E, v, cfg.cache) for v in s1]
        twists = [twist_euler_factor(d.local_polynomial(), d.Nv, p, cfg.truncation, cfg.precision) for d in data]
        cp = CharPolyData.from_element(imprimitive_charpoly(f, twists))
        lhs, rhs = imprimitive_identity(f, data)
        section["charpoly"] = {"mu": cp.mu, "lambda_sigma1": cp.lam, "r": cp.r,
                               "imprimitive_identity": [_fmt(lhs), _fmt(rhs)]}
        g = rec.get("gamma_E")
        if g is not None:
            ak, direct = akashi_consistency(f, g)
            section["charpoly"]["akashi"] = {"gamma_E": g, "from_akashi": _fmt(ak.exponent),
                                             "from_f": _fmt(direct.exponent)}
    section["notes"] = sorted(set(notes))
    section["provenance"] = dict(sorted(provenance.items()))
    return _CurveWork(rec.label, section, r_dag, product, cp, work_failures)


# --- pair analysis -------------------------------------------------------

def _pair_dict(residual: ResidualPair, p: int) -> dict:
    return {
        "p": p,
        "labels": list(residual.labels),
        "field": residual.field,
        "congruence": str(residual.congruence),
        "congruent": residual.congruence.congruent,
        "irreducibility": residual.irreducibility.value,
        "sigma_ss": sorted(residual.sigma_ss, key=place_sort_key),
        "sigma0": sorted(residual.sigma0, key=place_sort_key),
        "sigma1": sorted(residual.sigma1, key=place_sort_key),
        "review": list(residual.review),
    }


def _standing_assumptions(residual: ResidualPair) -> list[str]:
    out = [
        f"E1[p] and E2[p] compared only at places above primes <= {residual.congruence.bound}",
        f"irreducibility of E[p]: {residual.irreducibility.value}",
        "cotorsion of the signed Selmer groups over the cyclotomic Z_p-extension: assumed",
        "Akashi-series input (M_H(G) membership): assumed where gamma_E is supplied",
        "Selmer lambda/mu invariants: taken from supplied characteristic polynomials only",
    ]
    out.extend(f"manual review: {r}" for r in residual.review)
    return out


def analyze_pair(db: CurveDatabase, label1: str, label2: str, p: int, base_field: str = "Q",
                 config: AnalysisConfig | None = None) -> PairReport:
    cfg = config or AnalysisConfig()
    if p % 2 == 0 or not isprime(p):
        raise ValueError("p must be an odd prime")
    if p < 5:
        raise ValueError("only p >= 5 is supported")
    if base_field not in ("Q", "Qi"):
        raise ValueError("field must be Q or Qi")
    recs = [db[label1], db[label2]]
    models = [r.model(base_field) for r in recs]
    header = dict(schema_version=SCHEMA_VERSION, tool_version=__version__,
                  config={"p": p, "field": base_field, **cfg.echo()})

    try:
        residual = residual_pair(*models, p, cfg.bound, irreducible=cfg.assume_irreducible or None)
    except HypothesisViolation as exc:
        return PairReport(**header, pair={"p": p, "labels": [label1, label2], "field": base_field},
                          curves=[], verdicts={"hypotheses": f"FAILED: {exc}"}, assumptions=[],
                          exit_code=EXIT_HYPOTHESIS)
    pair = _pair_dict(residual, p)
    assumptions = _standing_assumptions(residual)
    if not residual.congruence.congruent:
        return PairReport(**header, pair=pair, curves=[], verdicts={"congruence": "NOT p-CONGRUENT"},
                          assumptions=assumptions, exit_code=EXIT_HYPOTHESIS)

    works = [_analyze_curve(r, E, p, residual, cfg) for r, E in zip(recs, models)]
    verdicts: dict = {"congruence": str(residual.congruence)}
    failures = [f for w in works for f in w.hypothesis_failures]
    exit_code = EXIT_CONSISTENT
    if failures:
        verdicts["hypotheses"] = "FAILED: " + "; ".join(failures)
        exit_code = EXIT_HYPOTHESIS

    w1, w2 = works
    if failures:
        verdicts["euler_characteristic_congruence"] = {"verdict": UNDETERMINED, "reason": "hypotheses fail"}
    elif w1.r_dag is None or w2.r_dag is None:
        verdicts["euler_characteristic_congruence"] = {"verdict": UNDETERMINED, "reason": "r_dag unknown"}
        exit_code = EXIT_HYPOTHESIS
    else:
        needed = [w1.product, w2.product] if w1.r_dag == w2.r_dag else \
            [w1.product] if w1.r_dag < w2.r_dag else [w2.product]
        if any(x is None for x in needed):
            verdicts["euler_characteristic_congruence"] = {"verdict": UNDETERMINED,
                                                           "reason": "Euler characteristic unavailable"}
            exit_code = EXIT_HYPOTHESIS
        else:
            tv = congruence_verdict(w1.r_dag, w2.r_dag, w1.product, w2.product)
            verdicts["euler_characteristic_congruence"] = {"verdict": tv.verdict.value, "clause": tv.clause}
            if tv.verdict is Verdict.VIOLATION:
                exit_code = EXIT_VIOLATION

    verdicts["rank_bound"] = {
        w.label: rank_bound_check(w.section["rank"], w.r_dag, w.section["sp_E"])
        for w in works if w.section["rank"] is not None and w.r_dag is not None}
    if w1.charpoly is not None and w2.charpoly is not None:
        v = invariant_transfer_check(w1.charpoly.mu, w1.charpoly.lam, w2.charpoly.mu, w2.charpoly.lam)
        verdicts["invariant_transfer"] = v.value
        if v is Verdict.VIOLATION and exit_code == EXIT_CONSISTENT:
            exit_code = EXIT_VIOLATION
    for w in works:
        ak = (w.section.get("charpoly") or {}).get("akashi")
        if ak is not None:
            verdicts.setdefault("akashi_consistency", {})[w.label] = ak["from_akashi"] == ak["from_f"]

    return PairReport(**header, pair=pair, curves=[w.section for w in works], verdicts=verdicts,
                      assumptions=assumptions, exit_code=exit_code)


# --- scanning ------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    labels: tuple[str, str]
    sigma1: tuple[str, ...]


def _scan_pair(r1, r2, p: int, B: int, base_field: str, cache: CacheStore | None):
    E1, E2 = r1.model(base_field), r2.model(base_field)

    def compute():
        v = test_p_congruence(E1, E2, p, B)
        if not v.congruent:
            return {"congruent": False}
        return {"congruent": True, "sigma1": sorted(sigma1(E1, E2, p), key=place_sort_key)}

    key = (sorted([list(E1.ainvs), list(E2.ainvs)]), p, B, base_field)
    raw = cache.memo("scan_pair", compute, *key) if cache else compute()
    if not raw["congruent"]:
        return None
    return Candidate((r1.label, r2.label), tuple(raw["sigma1"]))


def scan(db: CurveDatabase, p: int, B: int = DEFAULT_BOUND, base_field: str = "Q",
         cache: CacheStore | None = None, workers: int = 4) -> list[Candidate]:
    """All p-congruent pairs up to the bound, smallest Sigma_1 first."""
    if p % 2 == 0 or not isprime(p):
        raise ValueError("scan needs an odd prime p")
    pairs = list(combinations(db.records, 2))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        found = list(pool.map(lambda rr: _scan_pair(*rr, p, B, base_field, cache), pairs))
    hits = [c for c in found if c is not None]
    return sorted(hits, key=lambda c: (len(c.sigma1), c.labels))


def local_table(E: CurveModel, ell: int) -> list[dict]:
    """Local data rows for every place above ``ell`` (the ``local-data`` subcommand)."""
    rows = []
    for d in local_data(E, ell):
        row = local_data_to_dict(d)
        row["L_inverse"] = str(local_L_inverse(d))
        rows.append(row)
    return rows
