"""Declarative per-dataset ingest configuration.

A config is a single YAML document that tells the ingester how to read a
family of per-year CSV files: which file belongs to which fiscal year, how
column names that drifted across years map back to canonical names, and how
each canonical column is classified (single-column attribute, applicant
property, or multi-column attribute group).

Example::

    schema_version: 1
    id_column: applicant_id
    trim_whitespace: true
    years:
      fy2019.csv: 2019
      fy2020.csv: 2020
    renames:
      - {year: 2019, from: english_level, to: english}
    columns:
      - {kind: property, name: name, match: name}
      - {kind: attribute, name: english, match: english}
      - kind: multi_attribute
        name: internship history
        match: [internship history1, internship history2, internship history3]
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from yeargraph.errors import ConfigError

SCHEMA_VERSION = 1

KIND_ATTRIBUTE = "attribute"
KIND_PROPERTY = "property"
KIND_MULTI = "multi_attribute"
_RULE_KINDS = (KIND_ATTRIBUTE, KIND_PROPERTY, KIND_MULTI)


@dataclass(frozen=True)
class ColumnRule:
    kind: str
    canonical_name: str
    match: tuple[str, ...]

    def validate(self) -> None:
        if self.kind not in _RULE_KINDS:
            raise ConfigError(f"rule {self.canonical_name!r}: unknown kind {self.kind!r}")
        if not self.canonical_name:
            raise ConfigError("column rule with empty canonical name")
        if self.kind == KIND_MULTI:
            if len(self.match) < 1:
                raise ConfigError(
                    f"rule {self.canonical_name!r}: multi_attribute needs >= 1 source column"
                )
        elif len(self.match) != 1:
            raise ConfigError(
                f"rule {self.canonical_name!r}: kind {self.kind} takes exactly 1 source column"
            )


@dataclass
class IngestConfig:
    column_rules: list[ColumnRule]
    year_assignment: dict[str, int] = field(default_factory=dict)
    rename_map: dict[tuple[int, str], str] = field(default_factory=dict)
    id_column: str | None = None
    trim_whitespace: bool = True

    def validate(self) -> None:
        names: set[str] = set()
        match_owner: dict[str, str] = {}
        for rule in self.column_rules:
            rule.validate()
            if rule.canonical_name in names:
                raise ConfigError(f"duplicate canonical name {rule.canonical_name!r}")
            names.add(rule.canonical_name)
            for m in rule.match:
                if m in match_owner:
                    raise ConfigError(
                        f"column {m!r} matched by two rules: "
                        f"{match_owner[m]!r} and {rule.canonical_name!r}"
                    )
                match_owner[m] = rule.canonical_name
        for path, year in self.year_assignment.items():
            if not isinstance(year, int) or year <= 0:
                raise ConfigError(f"year for {path!r} must be a positive integer, got {year!r}")

    def year_for(self, path: str) -> int:
        """Fiscal year assigned to an input file, matched by path then basename."""
        import os

        if path in self.year_assignment:
            return self.year_assignment[path]
        base = os.path.basename(path)
        if base in self.year_assignment:
            return self.year_assignment[base]
        raise ConfigError(f"no fiscal year assigned to input file {path!r}")

    def renamed(self, year: int, column: str) -> str:
        return self.rename_map.get((year, column), column)


def config_from_dict(doc: dict) -> IngestConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")

    rules = []
    for raw in doc.get("columns", []):
        if not isinstance(raw, dict):
            raise ConfigError(f"column rule must be a mapping, got {raw!r}")
        match = raw.get("match", raw.get("name"))
        if isinstance(match, str):
            match = [match]
        if not isinstance(match, list) or not all(isinstance(m, str) for m in match):
            raise ConfigError(f"rule {raw.get('name')!r}: match must be a string or list")
        rules.append(
            ColumnRule(
                kind=str(raw.get("kind", "")),
                canonical_name=str(raw.get("name", "")),
                match=tuple(match),
            )
        )

    renames: dict[tuple[int, str], str] = {}
    for raw in doc.get("renames", []):
        if not isinstance(raw, dict) or not {"year", "from", "to"} <= set(raw):
            raise ConfigError(f"rename entry needs year/from/to, got {raw!r}")
        key = (int(raw["year"]), str(raw["from"]))
        if key in renames:
            raise ConfigError(f"duplicate rename for {key!r}")
        renames[key] = str(raw["to"])

    years = doc.get("years", {})
    if not isinstance(years, dict):
        raise ConfigError("years must map file names to fiscal years")

    config = IngestConfig(
        column_rules=rules,
        year_assignment={str(k): v for k, v in years.items()},
        rename_map=renames,
        id_column=doc.get("id_column"),
        trim_whitespace=bool(doc.get("trim_whitespace", True)),
    )
    config.validate()
    return config


def load_config(path: str) -> IngestConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path!r} is not valid YAML: {exc}") from None
    return config_from_dict(doc)


def dump_config(config: IngestConfig) -> str:
    """Serialize a config back to YAML (used by the synthetic generator)."""
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if config.id_column:
        doc["id_column"] = config.id_column
    doc["trim_whitespace"] = config.trim_whitespace
    if config.year_assignment:
        doc["years"] = dict(sorted(config.year_assignment.items()))
    if config.rename_map:
        doc["renames"] = [
            {"year": year, "from": old, "to": new}
            for (year, old), new in sorted(config.rename_map.items())
        ]
    doc["columns"] = [
        {
            "kind": rule.kind,
            "name": rule.canonical_name,
            "match": list(rule.match),
        }
        for rule in config.column_rules
    ]
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)
