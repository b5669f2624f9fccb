"""Dataset ingestion: pull one numeric column out of a delimited text file.

Values are returned as the text tokens found in the file, not as floats, so
the quantizer can parse digits exactly and lossless runs stay lossless.

The packaged spec files under dataset_specs/ describe the benchmark
datasets (column, delimiter, missing-value policy); the data files
themselves are fetched by the user (see README) and located via a data
directory.  manifest.json records the sha256 of the files a report was
produced from so runs can be compared.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path

from .errors import MissingColumn, MissingValue, UnparseableRow

SKIP = "skip"
FORWARD_FILL = "forward-fill"
FAIL = "fail"

#: Tokens treated as absent values (case-insensitive).
MISSING_TOKENS = {"", "?", "na", "nan", "null"}

#: Delimiter value selecting str.split() whitespace behaviour.
WHITESPACE = "whitespace"


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    source_path: str
    column: int | str = 0
    delimiter: str = ","
    missing_policy: str = SKIP
    has_header: bool | None = None  # None: header iff column is named

    def __post_init__(self):
        if self.missing_policy not in (SKIP, FORWARD_FILL, FAIL):
            raise ValueError(f"unknown missing policy {self.missing_policy!r}")
        if self.delimiter != WHITESPACE and len(self.delimiter) != 1:
            raise ValueError(
                f"delimiter must be one character or {WHITESPACE!r}, got {self.delimiter!r}"
            )

    @property
    def header_expected(self) -> bool:
        if self.has_header is None:
            return isinstance(self.column, str)
        return self.has_header

    @classmethod
    def from_json(cls, path) -> "DatasetSpec":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        return cls(
            name=raw["name"],
            source_path=raw["source_path"],
            column=raw.get("column", 0),
            delimiter=raw.get("delimiter", ","),
            missing_policy=raw.get("missing_policy", SKIP),
            has_header=raw.get("has_header"),
        )

    def resolve(self, data_dir=None) -> "DatasetSpec":
        """Anchor a relative source path at the data directory."""
        p = Path(self.source_path)
        if not p.is_absolute() and data_dir is not None:
            p = Path(data_dir) / p
        return replace(self, source_path=str(p))


def packaged_spec(name: str) -> DatasetSpec:
    """Load one of the shipped benchmark dataset specs by name."""
    ref = resources.files(__package__) / "dataset_specs" / f"{name.lower()}.json"
    with resources.as_file(ref) as path:
        if not path.exists():
            raise FileNotFoundError(f"no packaged dataset spec named {name!r}")
        return DatasetSpec.from_json(path)


def packaged_manifest() -> dict:
    ref = resources.files(__package__) / "dataset_specs" / "manifest.json"
    with resources.as_file(ref) as path:
        with open(path, encoding="utf-8") as f:
            return json.load(f)


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _rows(path, delimiter):
    if delimiter == WHITESPACE:
        with open(path, encoding="utf-8", newline="") as f:
            for line in f:
                yield line.split()
    else:
        with open(path, encoding="utf-8", newline="") as f:
            yield from csv.reader(f, delimiter=delimiter)


def _is_numeric(token: str) -> bool:
    try:
        return Decimal(token).is_finite()
    except InvalidOperation:
        return False


def ingest(spec: DatasetSpec) -> list:
    """Extract the spec's column as a list of decimal text tokens.

    Missing values follow the spec's policy; anything else non-numeric
    raises UnparseableRow with its 1-based row number.
    """
    rows = _rows(spec.source_path, spec.delimiter)
    col = spec.column
    row_no = 0

    if spec.header_expected:
        header = next(rows, None)
        row_no = 1
        if header is None:
            raise MissingColumn(f"{spec.source_path} is empty")
        if isinstance(col, str):
            try:
                col = header.index(col)
            except ValueError:
                raise MissingColumn(
                    f"column {spec.column!r} not in header {header!r}"
                ) from None
    elif isinstance(col, str):
        raise MissingColumn("named column requires a header row")

    out = []
    last = None
    for row in rows:
        row_no += 1
        if not row:
            continue
        if col >= len(row):
            raise MissingColumn(
                f"row {row_no} has {len(row)} fields, column {col} requested"
            )
        token = row[col].strip()
        if token.lower() in MISSING_TOKENS:
            if spec.missing_policy == SKIP:
                continue
            if spec.missing_policy == FORWARD_FILL:
                if last is not None:
                    out.append(last)
                continue
            raise MissingValue(row_no)
        if not _is_numeric(token):
            raise UnparseableRow(row_no, token)
        out.append(token)
        last = token
    return out
