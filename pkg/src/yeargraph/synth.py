"""Synthetic per-year recruitment tables with plantable ground-truth trends.

The generator stands in for real HR exports: one CSV per fiscal year, an id
column, a free-text property column, categorical attribute columns with
per-year drift weights and missing cells, and an optional multi-column
attribute group. Two kinds of trends can be planted so walkthrough tests have
known facts to assert against:

* migration: applicants carrying one secondary value shift from one primary
  value to another across a span of years (the "node drifts between anchors"
  pattern);
* emergence: a (primary value, secondary value) combination that never occurs
  before a given year starts occurring in that year.

Everything is driven by a single RNG seeded from the spec, so identical specs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import os
import random
from dataclasses import dataclass, field

import yaml

from yeargraph.config import (
    SCHEMA_VERSION,
    ColumnRule,
    IngestConfig,
    KIND_ATTRIBUTE,
    KIND_MULTI,
    KIND_PROPERTY,
    dump_config,
)
from yeargraph.errors import ConfigError

ID_COLUMN = "applicant_id"
NAME_COLUMN = "name"

_NAME_POOL = [
    "Asada", "Fujii", "Hara", "Ishii", "Kato", "Mori", "Nakano", "Ogawa",
    "Saito", "Takeda", "Ueda", "Watanabe", "Yamamoto",
]


@dataclass
class AttributeSpec:
    type: str
    values: list[str]
    missing_prob: float = 0.0
    drift: dict[int, list[float]] = field(default_factory=dict)  # year -> weights
    renamed_in: dict[int, str] = field(default_factory=dict)  # year -> header alias

    def validate(self) -> None:
        if not self.values:
            raise ConfigError(f"attribute {self.type!r}: empty value vocabulary")
        if not 0.0 <= self.missing_prob <= 1.0:
            raise ConfigError(f"attribute {self.type!r}: missing_prob must be in [0, 1]")
        for year, weights in self.drift.items():
            if len(weights) != len(self.values):
                raise ConfigError(
                    f"attribute {self.type!r}: drift weights for {year} must "
                    f"match the {len(self.values)} values"
                )


@dataclass
class MultiAttributeSpec:
    type: str
    columns: int
    values: list[str]
    fill_prob: float = 0.4

    def validate(self) -> None:
        if self.columns < 1:
            raise ConfigError(f"multi attribute {self.type!r}: needs >= 1 column")
        if not self.values:
            raise ConfigError(f"multi attribute {self.type!r}: empty value vocabulary")
        if not 0.0 <= self.fill_prob <= 1.0:
            raise ConfigError(f"multi attribute {self.type!r}: fill_prob must be in [0, 1]")


@dataclass
class Migration:
    primary_type: str
    from_value: str
    to_value: str
    secondary_type: str
    secondary_value: str
    start_year: int
    end_year: int
    count: int = 6  # forced rows per year


@dataclass
class Emergence:
    primary_type: str
    primary_value: str
    secondary_type: str
    secondary_value: str
    year: int
    count: int = 4  # forced rows per year from `year` on


@dataclass
class SyntheticSpec:
    years: list[int]
    applicants_per_year: int
    attributes: list[AttributeSpec]
    multi_attributes: list[MultiAttributeSpec] = field(default_factory=list)
    migrations: list[Migration] = field(default_factory=list)
    emergences: list[Emergence] = field(default_factory=list)
    seed: int = 0

    def validate(self) -> None:
        if not self.years:
            raise ConfigError("spec needs at least one year")
        if self.applicants_per_year < 0:
            raise ConfigError("applicants_per_year must be >= 0")
        names = [a.type for a in self.attributes] + [m.type for m in self.multi_attributes]
        if len(set(names)) != len(names):
            raise ConfigError("attribute types must be distinct")
        for a in self.attributes:
            a.validate()
        for m in self.multi_attributes:
            m.validate()
        by_type = {a.type: a for a in self.attributes}
        for mig in self.migrations:
            for t, v in (
                (mig.primary_type, mig.from_value),
                (mig.primary_type, mig.to_value),
                (mig.secondary_type, mig.secondary_value),
            ):
                if t not in by_type or v not in by_type[t].values:
                    raise ConfigError(f"migration references unknown value {v!r} of {t!r}")
            if mig.start_year >= mig.end_year:
                raise ConfigError("migration start_year must precede end_year")
        for eme in self.emergences:
            for t, v in (
                (eme.primary_type, eme.primary_value),
                (eme.secondary_type, eme.secondary_value),
            ):
                if t not in by_type or v not in by_type[t].values:
                    raise ConfigError(f"emergence references unknown value {v!r} of {t!r}")
            if len(by_type[eme.secondary_type].values) < 2:
                raise ConfigError("emergence needs >= 2 secondary values to scrub against")


def spec_from_dict(doc: dict) -> SyntheticSpec:
    if not isinstance(doc, dict):
        raise ConfigError("spec document must be a mapping")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {doc.get('schema_version')!r}")
    attrs = [
        AttributeSpec(
            type=str(a["type"]),
            values=[str(v) for v in a["values"]],
            missing_prob=float(a.get("missing_prob", 0.0)),
            drift={int(y): [float(w) for w in ws] for y, ws in a.get("drift", {}).items()},
            renamed_in={int(y): str(n) for y, n in a.get("renamed_in", {}).items()},
        )
        for a in doc.get("attributes", [])
    ]
    multis = [
        MultiAttributeSpec(
            type=str(m["type"]),
            columns=int(m["columns"]),
            values=[str(v) for v in m["values"]],
            fill_prob=float(m.get("fill_prob", 0.4)),
        )
        for m in doc.get("multi_attributes", [])
    ]
    planted = doc.get("planted", {}) or {}
    migrations = [Migration(**{**m}) for m in planted.get("migrations", [])]
    emergences = [Emergence(**{**e}) for e in planted.get("emergences", [])]
    spec = SyntheticSpec(
        years=[int(y) for y in doc.get("years", [])],
        applicants_per_year=int(doc.get("applicants_per_year", 0)),
        attributes=attrs,
        multi_attributes=multis,
        migrations=migrations,
        emergences=emergences,
        seed=int(doc.get("seed", 0)),
    )
    spec.validate()
    return spec


def load_spec(path: str) -> SyntheticSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read spec {path!r}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"spec {path!r} is not valid YAML: {exc}") from None
    return spec_from_dict(doc)


def _weights_for(attr: AttributeSpec, year: int) -> list[float]:
    return attr.drift.get(year, [1.0] * len(attr.values))


def _draw_value(rng: random.Random, attr: AttributeSpec, year: int) -> str:
    if attr.missing_prob > 0.0 and rng.random() < attr.missing_prob:
        return ""
    return rng.choices(attr.values, weights=_weights_for(attr, year), k=1)[0]


def generate_rows(spec: SyntheticSpec, year: int, rng: random.Random) -> list[dict[str, str]]:
    """All rows for one year, keyed by canonical column name."""
    rows: list[dict[str, str]] = []
    for i in range(spec.applicants_per_year):
        row = {
            ID_COLUMN: f"{year}-{i:04d}",
            NAME_COLUMN: f"{_NAME_POOL[i % len(_NAME_POOL)]} {i:03d}",
        }
        for attr in spec.attributes:
            row[attr.type] = _draw_value(rng, attr, year)
        for multi in spec.multi_attributes:
            for c in range(multi.columns):
                filled = rng.random() < multi.fill_prob
                row[f"{multi.type}{c + 1}"] = rng.choice(multi.values) if filled else ""
        rows.append(row)

    # planted trends override the drawn values on dedicated leading rows
    claim = 0
    for mig in spec.migrations:
        if not (mig.start_year <= year <= mig.end_year):
            claim += mig.count
            continue
        span = mig.end_year - mig.start_year
        fraction = (year - mig.start_year) / span
        for k in range(mig.count):
            if claim >= len(rows):
                break
            row = rows[claim]
            row[mig.secondary_type] = mig.secondary_value
            # deterministic split: the first ceil((1-f)*count) rows keep from_value
            row[mig.primary_type] = mig.to_value if k < fraction * mig.count else mig.from_value
            claim += 1
    for eme in spec.emergences:
        if year >= eme.year:
            for _ in range(eme.count):
                if claim >= len(rows):
                    break
                row = rows[claim]
                row[eme.primary_type] = eme.primary_value
                row[eme.secondary_type] = eme.secondary_value
                claim += 1

    # scrub emergent combinations from earlier years so they are truly absent
    for eme in spec.emergences:
        if year < eme.year:
            by_type = {a.type: a for a in spec.attributes}
            substitutes = [v for v in by_type[eme.secondary_type].values if v != eme.secondary_value]
            for row in rows:
                if (
                    row[eme.primary_type] == eme.primary_value
                    and row[eme.secondary_type] == eme.secondary_value
                ):
                    row[eme.secondary_type] = rng.choice(substitutes)
    return rows


def header_for(spec: SyntheticSpec, year: int) -> tuple[list[str], list[str]]:
    """(canonical column order, header as written for this year's file)."""
    canonical = [ID_COLUMN, NAME_COLUMN]
    canonical.extend(a.type for a in spec.attributes)
    for m in spec.multi_attributes:
        canonical.extend(f"{m.type}{c + 1}" for c in range(m.columns))
    written = [
        next(
            (a.renamed_in[year] for a in spec.attributes if a.type == col and year in a.renamed_in),
            col,
        )
        for col in canonical
    ]
    return canonical, written


def ingest_config_for(spec: SyntheticSpec, file_names: dict[int, str]) -> IngestConfig:
    rules = [ColumnRule(KIND_PROPERTY, NAME_COLUMN, (NAME_COLUMN,))]
    rules.extend(ColumnRule(KIND_ATTRIBUTE, a.type, (a.type,)) for a in spec.attributes)
    rules.extend(
        ColumnRule(KIND_MULTI, m.type, tuple(f"{m.type}{c + 1}" for c in range(m.columns)))
        for m in spec.multi_attributes
    )
    renames = {}
    for a in spec.attributes:
        for year, alias in a.renamed_in.items():
            renames[(year, alias)] = a.type
    config = IngestConfig(
        column_rules=rules,
        year_assignment={file_names[y]: y for y in spec.years},
        rename_map=renames,
        id_column=ID_COLUMN,
        trim_whitespace=True,
    )
    config.validate()
    return config


def generate_dataset(spec: SyntheticSpec, out_dir: str) -> tuple[list[str], str]:
    """Write one CSV per year plus the matching ingest config; returns paths."""
    spec.validate()
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(spec.seed)
    file_names = {year: f"fy{year}.csv" for year in spec.years}

    paths = []
    for year in spec.years:
        canonical, written = header_for(spec, year)
        rows = generate_rows(spec, year, rng)
        path = os.path.join(out_dir, file_names[year])
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(written)
            for row in rows:
                writer.writerow([row[col] for col in canonical])
        paths.append(path)

    config = ingest_config_for(spec, file_names)
    config_path = os.path.join(out_dir, "ingest.yaml")
    with open(config_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dump_config(config))
    return paths, config_path


def dump_spec(spec: SyntheticSpec) -> str:
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "seed": spec.seed,
        "years": list(spec.years),
        "applicants_per_year": spec.applicants_per_year,
        "attributes": [
            {
                "type": a.type,
                "values": list(a.values),
                "missing_prob": a.missing_prob,
                **({"drift": {y: list(w) for y, w in a.drift.items()}} if a.drift else {}),
                **({"renamed_in": dict(a.renamed_in)} if a.renamed_in else {}),
            }
            for a in spec.attributes
        ],
        "multi_attributes": [
            {"type": m.type, "columns": m.columns, "values": list(m.values), "fill_prob": m.fill_prob}
            for m in spec.multi_attributes
        ],
    }
    planted: dict = {}
    if spec.migrations:
        planted["migrations"] = [vars(m).copy() for m in spec.migrations]
    if spec.emergences:
        planted["emergences"] = [vars(e).copy() for e in spec.emergences]
    if planted:
        doc["planted"] = planted
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)
