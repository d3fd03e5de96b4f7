"""Curve records: one ``key=value`` line per curve.

    # comment
    label=66a1 a1=1 a2=0 a3=1 a4=-6 a6=4 rank=0 sha_p_order=1 torsion_order=6

Unknown keys are rejected.  ``source=user|database`` sets the provenance of
the optional fields on that line (default ``database`` for files).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..local.curves import CurveModel, SingularModel, invariants

REQUIRED = ("label", "a1", "a2", "a3", "a4", "a6")
OPTIONAL_INTS = ("rank", "rank_qi", "r_dag", "sha_p_order", "sha_p_order_qi",
                 "regulator_unit_valuation", "torsion_order", "gamma_E")
OPTIONAL = OPTIONAL_INTS + ("charpoly", "source")
SOURCES = ("user", "database")


class RecordError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class CurveRecord:
    label: str
    ainvs: tuple[int, int, int, int, int]
    optional: dict = field(default_factory=dict, compare=False, hash=False)
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def get(self, key: str, default=None):
        return self.optional.get(key, default)

    def model(self, base_field: str = "Q") -> CurveModel:
        return CurveModel(self.label, *self.ainvs, base_field=base_field)


def parse_record_line(text: str, line: int | None = None) -> CurveRecord | None:
    text = text.split("#", 1)[0].strip()
    if not text:
        return None
    fields: dict[str, str] = {}
    for tok in text.split():
        key, eq, value = tok.partition("=")
        if not eq or not key or not value:
            raise RecordError(f"expected key=value, got {tok!r}", line)
        if key not in REQUIRED and key not in OPTIONAL:
            raise RecordError(f"unknown field {key!r}", line)
        if key in fields:
            raise RecordError(f"repeated field {key!r}", line)
        fields[key] = value
    for key in REQUIRED:
        if key not in fields:
            raise RecordError(f"missing field {key!r}", line)

    def as_int(key):
        try:
            return int(fields[key])
        except ValueError:
            raise RecordError(f"field {key!r} is not an integer: {fields[key]!r}", line) from None

    label = fields["label"]
    ainvs = tuple(as_int(k) for k in REQUIRED[1:])
    try:
        invariants(*ainvs)
    except SingularModel:
        raise RecordError(f"singular model for {label}", line) from None

    source = fields.get("source", "database")
    if source not in SOURCES:
        raise RecordError(f"source must be one of {SOURCES}", line)
    optional, provenance = {}, {}
    for key in OPTIONAL_INTS:
        if key in fields:
            optional[key] = as_int(key)
            provenance[key] = source
    if "charpoly" in fields:
        try:
            optional["charpoly"] = tuple(int(c) for c in fields["charpoly"].split(","))
        except ValueError:
            raise RecordError("charpoly must be comma-separated integers", line) from None
        provenance["charpoly"] = source
    for key in ("rank", "rank_qi", "r_dag", "gamma_E", "regulator_unit_valuation"):
        if optional.get(key, 0) < 0:
            raise RecordError(f"{key} must be non-negative", line)
    for key in ("sha_p_order", "sha_p_order_qi", "torsion_order"):
        if key in optional and optional[key] < 1:
            raise RecordError(f"{key} must be positive", line)
    return CurveRecord(label, ainvs, optional, provenance)


def parse_curve_records(path) -> list[CurveRecord]:
    return parse_curve_text(Path(path).read_text())


def parse_curve_text(text: str) -> list[CurveRecord]:
    out, seen = [], set()
    for n, line in enumerate(text.splitlines(), start=1):
        rec = parse_record_line(line, n)
        if rec is None:
            continue
        if rec.label in seen:
            raise RecordError(f"duplicate label {rec.label!r}", n)
        seen.add(rec.label)
        out.append(rec)
    return out


def format_record(rec: CurveRecord) -> str:
    parts = [f"label={rec.label}"] + [f"a{i}={a}" for i, a in zip((1, 2, 3, 4, 6), rec.ainvs)]
    for key in OPTIONAL_INTS:
        if key in rec.optional:
            parts.append(f"{key}={rec.optional[key]}")
    if "charpoly" in rec.optional:
        parts.append("charpoly=" + ",".join(map(str, rec.optional["charpoly"])))
    return " ".join(parts)


class CurveDatabase:
    def __init__(self, records: list[CurveRecord]):
        self.records = list(records)
        self._by_label = {r.label: r for r in self.records}

    @classmethod
    def load(cls, path) -> CurveDatabase:
        return cls(parse_curve_records(path))

    def __getitem__(self, label: str) -> CurveRecord:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"no curve labelled {label!r} in the database") from None

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def __len__(self) -> int:
        return len(self.records)
