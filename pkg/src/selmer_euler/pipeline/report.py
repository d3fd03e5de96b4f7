"""Text and JSON renderings of a PairReport."""

from __future__ import annotations

import json

from .analysis import PairReport


def to_json(r: PairReport) -> str:
    return json.dumps(r.to_dict(), sort_keys=True, indent=2) + "\n"


def parse_report(text: str) -> PairReport:
    return PairReport.from_dict(json.loads(text))


def _set(xs) -> str:
    return "{" + ", ".join(xs) + "}"


def _power(d) -> str:
    if d is None:
        return "n/a"
    e = d["exponent"]
    return "0" if e == "inf" else f"p^{e}"


def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def to_text(r: PairReport) -> str:
    pair, cfg = r.pair, r.config
    out = [f"selmer-euler {r.tool_version} (report schema {r.schema_version})",
           f"pair {' / '.join(pair['labels'])}  p = {cfg['p']}  field = {cfg['field']}  bound = {cfg['bound']}"]
    if "congruence" in pair:
        out.append(f"congruence: {pair['congruence']}  (irreducibility: {pair['irreducibility']})")
        out.append(f"Sigma_ss = {_set(pair['sigma_ss'])}  Sigma_0 = {_set(pair['sigma0'])}  "
                   f"Sigma_1 = {_set(pair['sigma1'])}")
    for c in r.curves:
        out.append("")
        at_p = ", ".join(f"{k}: {v['reduction']}" for k, v in c["reduction_at_p"].items())
        out.append(f"{c['label']}  [{', '.join(map(str, c['ainvs']))}]  at p: {at_p}")
        rows = [["place", "Nv", "type", "f", "c", "kind", "a_v", "Nv*L_v(E,1)^-1", "Sigma_1"]]
        for row in c["local_table"]:
            flag = "yes" if row["in_sigma1"] else f"no: {row['sigma1_status']}"
            if row["needs_review"]:
                flag += " [review]"
            rows.append([row["place"], str(row["Nv"]), row["kodaira"], str(row["f"]), str(row["c"]),
                         row["kind"], str(row["a"]), row["scaled_value"], flag])
        out.extend(_table(rows))
        chi = c["chi"]
        chi_s = "n/a" if chi is None else f"~ {_power(chi)} ({chi['formula']})"
        out.append(f"  Tamagawa product {c['tamagawa_product']}; Phi = {_power(c['phi'])} over "
                   f"{_set(c['phi']['places'])}; chi_t {chi_s}; r_dag = {c['r_dag']}; "
                   f"Phi*chi_t = {_power(c['product'])}")
        if "charpoly" in c:
            cp = c["charpoly"]
            out.append(f"  characteristic element: mu = {cp['mu']}, lambda^Sigma_1 = {cp['lambda_sigma1']}, "
                       f"r = {cp['r']}")
        for note in c["notes"]:
            out.append(f"  note: {note}")
        out.append("  provenance: " + ", ".join(f"{k}={v}" for k, v in c["provenance"].items()))
    out.append("")
    out.append("verdicts:")
    for k, v in sorted(r.verdicts.items()):
        if isinstance(v, dict) and "verdict" in v:
            v = v["verdict"] + (f" ({v['clause']})" if "clause" in v else f" ({v.get('reason', '')})")
        elif isinstance(v, dict):
            v = ", ".join(f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in v.items()) or "n/a"
        out.append(f"  {k}: {v}")
    if r.assumptions:
        out.append("assumptions:")
        out.extend(f"  - {a}" for a in r.assumptions)
    out.append(f"exit code {r.exit_code}")
    return "\n".join(out) + "\n"


def emit_report(r: PairReport, fmt: str = "text") -> str:
    if fmt == "json":
        return to_json(r)
    if fmt == "text":
        return to_text(r)
    raise ValueError(f"unknown report format {fmt!r}")
