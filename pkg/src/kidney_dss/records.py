"""Donor-record schema, labeled dataset container, CSV ingestion and summaries.

The seven donor features are fixed, ordered, and shared by every stage of the
pipeline.  A missing cell is represented as NaN inside ``Dataset.X`` and as
``None`` on ``DonorRecord``; missing never silently becomes zero.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import warnings
from dataclasses import dataclass, fields
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, ParseError, SchemaError, ValidationError

BINARY = "binary"
CONTINUOUS = "continuous"

#: Canonical feature order used across the whole pipeline.
FEATURE_NAMES: tuple[str, ...] = (
    "age",
    "gender",
    "per_gs",
    "per_kdpi",
    "cit_arrival",
    "hist_diabetes",
    "hist_htn",
)

#: Per-feature kind and closed valid range (None = unbounded on that side).
FEATURE_KINDS: dict[str, str] = {
    "age": CONTINUOUS,
    "gender": BINARY,
    "per_gs": CONTINUOUS,
    "per_kdpi": CONTINUOUS,
    "cit_arrival": CONTINUOUS,
    "hist_diabetes": BINARY,
    "hist_htn": BINARY,
}

FEATURE_BOUNDS: dict[str, tuple[float | None, float | None]] = {
    "age": (0.0, None),
    "gender": (0.0, 1.0),
    "per_gs": (0.0, 100.0),
    "per_kdpi": (0.0, 1.0),
    "cit_arrival": (0.0, None),
    "hist_diabetes": (0.0, 1.0),
    "hist_htn": (0.0, 1.0),
}

OUTCOME_COLUMN = "outcome"


class Outcome(enum.IntEnum):
    """Binary kidney outcome; TRANSPLANTED is the positive class (label 1)."""

    DISCARDED = 0
    TRANSPLANTED = 1


def feature_kind(name: str) -> str:
    """Kind of a feature column; synthetic extras (noise) count as continuous."""
    return FEATURE_KINDS.get(name, CONTINUOUS)


def validate_value(name: str, value: float) -> float:
    """Validate one feature value against its declared domain.

    Binary fields must be exactly 0 or 1.  Raises ValidationError otherwise.
    """
    if not math.isfinite(value):
        raise ValidationError(f"{name}: value {value!r} is not finite")
    if feature_kind(name) == BINARY:
        if value not in (0.0, 1.0):
            raise ValidationError(f"{name}: binary field must be 0 or 1, got {value!r}")
        return value
    lo, hi = FEATURE_BOUNDS.get(name, (None, None))
    if lo is not None and value < lo:
        raise ValidationError(f"{name}: value {value!r} below minimum {lo}")
    if hi is not None and value > hi:
        raise ValidationError(f"{name}: value {value!r} above maximum {hi}")
    return value


@dataclass
class DonorRecord:
    """One procured-kidney row; any field may be missing (None)."""

    age: float | None = None
    gender: float | None = None
    per_gs: float | None = None
    per_kdpi: float | None = None
    cit_arrival: float | None = None
    hist_diabetes: float | None = None
    hist_htn: float | None = None

    def validate(self) -> "DonorRecord":
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                validate_value(f.name, float(value))
        return self

    def as_vector(self) -> np.ndarray:
        """Feature vector in canonical order, NaN for missing fields."""
        return np.array(
            [math.nan if getattr(self, n) is None else float(getattr(self, n)) for n in FEATURE_NAMES],
            dtype=float,
        )


@dataclass(frozen=True)
class Dataset:
    """Ordered donor rows with parallel outcome labels.

    ``X`` is an (n, d) float array with NaN marking missing cells; ``y`` holds
    integer labels (1 = TRANSPLANTED).  Both are treated as immutable after
    construction and are safe to share across threads.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        y = np.array(self.y, dtype=int)
        if X.ndim != 2:
            raise DataError(f"feature matrix must be 2-D, got shape {X.shape}")
        if len(y) != X.shape[0]:
            raise DataError(f"{X.shape[0]} records but {len(y)} labels")
        if X.shape[1] != len(self.feature_names):
            raise DataError(
                f"{X.shape[1]} feature columns but {len(self.feature_names)} feature names"
            )
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, indices: Sequence[int] | np.ndarray) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.X[idx], self.y[idx], self.feature_names)

    def with_features(self, X: np.ndarray, feature_names: tuple[str, ...] | None = None) -> "Dataset":
        return Dataset(X, self.y, feature_names or self.feature_names)

    def records(self) -> list[DonorRecord]:
        """Rows as DonorRecord objects (canonical schema only)."""
        if self.feature_names[: len(FEATURE_NAMES)] != FEATURE_NAMES:
            raise SchemaError("dataset does not use the canonical donor schema")
        out = []
        for row in self.X:
            values = {
                name: (None if math.isnan(row[j]) else float(row[j]))
                for j, name in enumerate(FEATURE_NAMES)
            }
            out.append(DonorRecord(**values))
        return out

    @staticmethod
    def from_records(records: Iterable[DonorRecord], labels: Iterable[Outcome | int]) -> "Dataset":
        rows = [r.as_vector() for r in records]
        y = [int(label) for label in labels]
        if not rows:
            raise DataError("cannot build a dataset from zero records")
        return Dataset(np.vstack(rows), np.asarray(y, dtype=int))


@dataclass(frozen=True)
class DatasetSummary:
    """Per-feature, per-class means and counts plus missing-value counts."""

    n_rows: int
    class_counts: dict[int, int]
    means: dict[str, dict[int, float | None]]
    counts: dict[str, dict[int, int]]
    missing: dict[str, int]


def summarize(ds: Dataset) -> DatasetSummary:
    """Group statistics by outcome class; means use non-missing values only."""
    if ds.n_rows == 0:
        raise DataError("cannot summarize an empty dataset")
    class_counts = {int(c): int((ds.y == c).sum()) for c in (0, 1)}
    means: dict[str, dict[int, float | None]] = {}
    counts: dict[str, dict[int, int]] = {}
    missing: dict[str, int] = {}
    for j, name in enumerate(ds.feature_names):
        col = ds.X[:, j]
        missing[name] = int(np.isnan(col).sum())
        means[name] = {}
        counts[name] = {}
        for c in (0, 1):
            vals = col[(ds.y == c) & ~np.isnan(col)]
            counts[name][c] = int(vals.size)
            means[name][c] = float(vals.mean()) if vals.size else None
    return DatasetSummary(ds.n_rows, class_counts, means, counts, missing)


_TRUE_OUTCOMES = {"transplanted": Outcome.TRANSPLANTED, "discarded": Outcome.DISCARDED}


def _parse_outcome(token: str, row_index: int) -> Outcome:
    outcome = _TRUE_OUTCOMES.get(token.strip().lower())
    if outcome is None:
        raise SchemaError(
            f"row {row_index}: unknown outcome token {token!r} "
            f"(expected TRANSPLANTED or DISCARDED)"
        )
    return outcome


def _coerce_cell(name: str, raw: str, row_index: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"row {row_index}: field {name!r} has unreadable value {raw!r}") from None
    if name == "per_kdpi" and value > 1.0:
        # Table-style inputs sometimes carry KDPI as a percent; the model
        # consumes a fraction in [0, 1].
        if value <= 100.0:
            warnings.warn(
                f"row {row_index}: per_kdpi={value} > 1 interpreted as percent and divided by 100",
                stacklevel=3,
            )
            value = value / 100.0
    try:
        return validate_value(name, value)
    except ValidationError as exc:
        raise ValidationError(f"row {row_index}: {exc}") from None


def parse_csv(
    source: str | Path | IO[bytes] | IO[str] | bytes,
    columns: Mapping[str, str] | None = None,
) -> Dataset:
    """Read a labeled donor CSV into a Dataset.

    ``columns`` optionally remaps canonical field names to the file's actual
    headers.  Empty cells are missing values; row order is preserved.
    """
    if isinstance(source, (str, Path)):
        handle: IO[str] = open(source, "r", encoding="utf-8", newline="")
        close = True
    elif isinstance(source, bytes):
        handle = io.StringIO(source.decode("utf-8"))
        close = False
    elif isinstance(source, io.TextIOBase):
        handle, close = source, False
    else:  # byte stream
        handle = io.TextIOWrapper(source, encoding="utf-8", newline="")
        close = False

    remap = dict(columns or {})
    expected = {name: remap.get(name, name) for name in FEATURE_NAMES}
    outcome_col = remap.get(OUTCOME_COLUMN, OUTCOME_COLUMN)

    try:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("CSV has no header row") from None
        header = [h.strip() for h in header]
        positions: dict[str, int] = {}
        for name, col in expected.items():
            if col not in header:
                raise SchemaError(f"missing required column {col!r}")
            positions[name] = header.index(col)
        if outcome_col not in header:
            raise SchemaError(f"missing outcome column {outcome_col!r}")
        outcome_pos = header.index(outcome_col)

        rows: list[np.ndarray] = []
        labels: list[int] = []
        for i, raw_row in enumerate(reader):
            if len(raw_row) != len(header):
                raise ParseError(
                    f"row {i}: expected {len(header)} cells, found {len(raw_row)}"
                )
            vec = np.full(len(FEATURE_NAMES), np.nan)
            for j, name in enumerate(FEATURE_NAMES):
                raw = raw_row[positions[name]].strip()
                if raw != "":
                    vec[j] = _coerce_cell(name, raw, i)
            rows.append(vec)
            labels.append(int(_parse_outcome(raw_row[outcome_pos], i)))
    finally:
        if close:
            handle.close()

    if not rows:
        raise DataError("CSV contains a header but no data rows")
    return Dataset(np.vstack(rows), np.asarray(labels, dtype=int))


def write_csv(ds: Dataset, target: str | Path | IO[str]) -> None:
    """Write a Dataset as canonical UTF-8 CSV (empty cell = missing)."""
    if isinstance(target, (str, Path)):
        handle: IO[str] = open(target, "w", encoding="utf-8", newline="")
        close = True
    else:
        handle, close = target, False
    try:
        writer = csv.writer(handle)
        writer.writerow(list(ds.feature_names) + [OUTCOME_COLUMN])
        for row, label in zip(ds.X, ds.y):
            cells = ["" if math.isnan(v) else repr(float(v)) for v in row]
            cells.append(Outcome(int(label)).name)
            writer.writerow(cells)
    finally:
        if close:
            handle.close()
