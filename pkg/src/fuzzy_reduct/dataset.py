"""Decision systems: objects x conditional features plus one decision column.

Nominal features are stored as integer category codes so that equality of
codes is equality of the original symbols. Real features are stored as
float64. Row and column order always follow the source file.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DatasetError


class FeatureKind(str, Enum):
    NOMINAL = "nominal"
    REAL = "real"


@dataclass(frozen=True)
class CsvSchema:
    """How to read a delimited table.

    ``kind_overrides`` maps column names to kinds; the key ``"*"`` applies to
    every conditional column not named explicitly.
    """

    delimiter: str = ","
    decision_column: str | None = None
    kind_overrides: Mapping[str, FeatureKind] = field(default_factory=dict)


def _parse_real(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _infer_kind(cells: Iterable[str]) -> FeatureKind:
    for cell in cells:
        if _parse_real(cell) is None:
            return FeatureKind.NOMINAL
    return FeatureKind.REAL


def _encode(cells: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    # categories in order of first appearance
    lookup: dict[str, int] = {}
    codes = np.empty(len(cells), dtype=np.float64)
    for row, cell in enumerate(cells):
        codes[row] = lookup.setdefault(cell, len(lookup))
    return codes, tuple(lookup)


def format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True, eq=False)
class DecisionSystem:
    """An immutable decision table.

    ``data`` holds one column per conditional feature: raw floats for real
    features, category codes (indices into ``categories[f]``) for nominal ones.
    """

    feature_names: tuple[str, ...]
    feature_kinds: tuple[FeatureKind, ...]
    data: np.ndarray
    categories: tuple[tuple[str, ...] | None, ...]
    labels: tuple[str, ...]
    decision_name: str = "q"

    def __post_init__(self):
        n_obj, n_feat = self.data.shape if self.data.ndim == 2 else (0, 0)
        if self.data.ndim != 2:
            raise DatasetError("value grid must be two-dimensional")
        if n_obj < 2:
            raise DatasetError("fewer than 2 rows")
        if n_feat < 1:
            raise DatasetError("at least one conditional feature is required")
        if len(self.feature_names) != n_feat or len(self.feature_kinds) != n_feat:
            raise DatasetError("feature names/kinds do not match the value grid")
        if len(self.categories) != n_feat:
            raise DatasetError("categories do not match the value grid")
        if len(self.labels) != n_obj:
            raise DatasetError("one decision label per object is required")
        if len(set(self.feature_names)) != n_feat:
            raise DatasetError("duplicate feature names")
        if self.decision_name in self.feature_names:
            raise DatasetError(f"decision column {self.decision_name!r} duplicates a feature name")
        if not np.all(np.isfinite(self.data)):
            raise DatasetError("value grid contains non-finite entries")
        self.data.setflags(write=False)

    @classmethod
    def from_table(
        cls,
        feature_names: Sequence[str],
        rows: Sequence[Sequence],
        labels: Sequence,
        kinds: Sequence[FeatureKind | str] | None = None,
        decision_name: str = "q",
    ) -> "DecisionSystem":
        """Build from in-memory rows (one sequence of values per object)."""
        names = tuple(str(n) for n in feature_names)
        columns = [[str(row[f]) if not isinstance(row[f], float) else repr(row[f]) for row in rows]
                   for f in range(len(names))]
        if kinds is None:
            kinds = [_infer_kind(col) for col in columns]
        return cls._from_text_columns(
            names, [FeatureKind(k) for k in kinds], columns, [str(v) for v in labels], decision_name
        )

    @classmethod
    def _from_text_columns(cls, names, kinds, columns, labels, decision_name):
        n_obj = len(labels)
        data = np.empty((n_obj, len(names)), dtype=np.float64)
        categories: list[tuple[str, ...] | None] = []
        for f, (name, kind, cells) in enumerate(zip(names, kinds, columns)):
            if kind is FeatureKind.REAL:
                for row, cell in enumerate(cells):
                    value = _parse_real(cell)
                    if value is None:
                        raise DatasetError(
                            f"non-numeric value {cell!r} in real column {name!r} at row {row + 1}"
                        )
                    data[row, f] = value
                categories.append(None)
            else:
                data[:, f], cats = _encode(cells)
                categories.append(cats)
        return cls(tuple(names), tuple(kinds), data, tuple(categories), tuple(labels), decision_name)

    # -- shape -----------------------------------------------------------

    @property
    def object_count(self) -> int:
        return self.data.shape[0]

    @property
    def feature_count(self) -> int:
        return self.data.shape[1]

    @cached_property
    def label_set(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.labels))

    @cached_property
    def decision_codes(self) -> np.ndarray:
        codes = np.array([self.label_set.index(lab) for lab in self.labels], dtype=np.int64)
        codes.setflags(write=False)
        return codes

    def feature_index(self, feature: int | str) -> int:
        if isinstance(feature, (int, np.integer)):
            if not 0 <= feature < self.feature_count:
                raise KeyError(f"feature index {feature} out of range")
            return int(feature)
        try:
            return self.feature_names.index(feature)
        except ValueError:
            raise KeyError(f"unknown feature {feature!r}") from None

    def is_real(self, f: int) -> bool:
        return self.feature_kinds[f] is FeatureKind.REAL

    # -- cached statistics -------------------------------------------------

    @cached_property
    def real_mask(self) -> np.ndarray:
        return np.array([k is FeatureKind.REAL for k in self.feature_kinds])

    @cached_property
    def feature_min(self) -> np.ndarray:
        return np.where(self.real_mask, self.data.min(axis=0), np.nan)

    @cached_property
    def feature_max(self) -> np.ndarray:
        return np.where(self.real_mask, self.data.max(axis=0), np.nan)

    @cached_property
    def feature_range(self) -> np.ndarray:
        return self.feature_max - self.feature_min

    def feature_std(self, ddof: int = 0) -> np.ndarray:
        """Per-feature standard deviation (population by default); NaN for nominal."""
        cache = self.__dict__.setdefault("_std_cache", {})
        if ddof not in cache:
            cache[ddof] = np.where(self.real_mask, self.data.std(axis=0, ddof=ddof), np.nan)
        return cache[ddof]

    @cached_property
    def constant_features(self) -> tuple[str, ...]:
        """Real features whose range is zero."""
        flags = self.real_mask & (self.feature_range == 0)
        return tuple(name for name, flag in zip(self.feature_names, flags) if flag)

    # -- values ------------------------------------------------------------

    def value(self, i: int, feature: int | str):
        f = self.feature_index(feature)
        raw = self.data[i, f]
        if self.is_real(f):
            return float(raw)
        return self.categories[f][int(raw)]

    def row(self, i: int) -> list:
        return [self.value(i, f) for f in range(self.feature_count)]

    def csv_schema(self, delimiter: str = ",") -> CsvSchema:
        """Schema that reloads a saved copy of this system with identical kinds."""
        overrides = dict(zip(self.feature_names, self.feature_kinds))
        return CsvSchema(delimiter, self.decision_name, overrides)

    def summary(self) -> dict:
        return {
            "objects": self.object_count,
            "features": self.feature_count,
            "decision": self.decision_name,
            "labels": list(self.label_set),
            "real_features": int(self.real_mask.sum()),
            "nominal_features": int((~self.real_mask).sum()),
            "constant_features": list(self.constant_features),
        }


def load_csv(path: str | Path, schema: CsvSchema | None = None) -> DecisionSystem:
    """Read a delimited table with a header row into a :class:`DecisionSystem`."""
    schema = schema or CsvSchema()
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        return _read(fh, schema)


def loads_csv(text: str, schema: CsvSchema | None = None) -> DecisionSystem:
    return _read(io.StringIO(text), schema or CsvSchema())


def _read(fh, schema: CsvSchema) -> DecisionSystem:
    rows = [row for row in csv.reader(fh, delimiter=schema.delimiter) if row]
    if len(rows) < 3:
        raise DatasetError("fewer than 2 rows")
    header = [cell.strip() for cell in rows[0]]
    body = rows[1:]

    for c, name in enumerate(header):
        if not name:
            raise DatasetError(f"empty column name at header column {c + 1}")
    seen = set()
    for name in header:
        if name in seen:
            raise DatasetError(f"duplicate feature name {name!r}")
        seen.add(name)
    if len(header) < 2:
        raise DatasetError("at least one conditional feature plus a decision column is required")

    decision = schema.decision_column or header[-1]
    if decision not in header:
        raise DatasetError(f"decision column {decision!r} not found in header")
    d_col = header.index(decision)

    grid = []
    for r, row in enumerate(body, start=1):
        cells = [cell.strip() for cell in row]
        for c in range(len(header)):
            if c >= len(cells) or cells[c] == "":
                raise DatasetError(f"missing cell at row {r}, column {c + 1} ({header[c]!r})")
        if len(cells) > len(header):
            raise DatasetError(f"row {r} has {len(cells)} cells, header has {len(header)}")
        grid.append(cells)

    overrides = {k: FeatureKind(v) for k, v in schema.kind_overrides.items()}
    for name in overrides:
        if name != "*" and name not in header:
            raise DatasetError(f"kind override for unknown column {name!r}")
    if overrides.get(decision, FeatureKind.NOMINAL) is not FeatureKind.NOMINAL:
        raise DatasetError("the decision column is always nominal")

    names, kinds, columns = [], [], []
    for c, name in enumerate(header):
        if c == d_col:
            continue
        cells = [row[c] for row in grid]
        kind = overrides.get(name) or overrides.get("*") or _infer_kind(cells)
        names.append(name)
        kinds.append(kind)
        columns.append(cells)
    labels = [row[d_col] for row in grid]
    return DecisionSystem._from_text_columns(names, kinds, columns, labels, decision)


def save_csv(ds: DecisionSystem, path: str | Path, delimiter: str = ",") -> None:
    """Write ``ds`` as a header plus one row per object, decision column last."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(dumps_csv(ds, delimiter))


def dumps_csv(ds: DecisionSystem, delimiter: str = ",") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([*ds.feature_names, ds.decision_name])
    for i in range(ds.object_count):
        writer.writerow([*(format_value(v) for v in ds.row(i)), ds.labels[i]])
    return buf.getvalue()
