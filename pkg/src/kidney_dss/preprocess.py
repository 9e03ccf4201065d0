"""Imputation, robust outlier flagging, min-max normalization, seeded splits.

All transformers are fit on training data only and then applied unchanged to
held-out data; fitted parameter objects are immutable and shareable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .records import BINARY, Dataset, feature_kind

#: Scale factor making MAD consistent with the standard deviation of a
#: normal reference distribution.
MAD_SCALE = 1.4826

DEFAULT_MAD_CUTOFF = 3.0


@dataclass(frozen=True)
class ImputationPolicy:
    """Missing-value fills: mean for continuous fields, mode for binary."""

    continuous_strategy: str = "mean"
    binary_strategy: str = "mode"
    fills: tuple[float, ...] | None = None
    feature_names: tuple[str, ...] | None = None

    @property
    def is_fitted(self) -> bool:
        return self.fills is not None


@dataclass(frozen=True)
class NormalizationParams:
    """Per-feature (min, max) of the training data."""

    e_min: tuple[float, ...]
    e_max: tuple[float, ...]

    def __post_init__(self):
        for lo, hi in zip(self.e_min, self.e_max):
            if lo > hi:
                raise DataError(f"normalization range inverted: min {lo} > max {hi}")


@dataclass(frozen=True)
class OutlierReport:
    """Row indices flagged per feature by the robust MAD rule."""

    flagged: dict[str, tuple[int, ...]]
    cutoff: float

    def total_flags(self) -> int:
        return sum(len(v) for v in self.flagged.values())


def fit_imputer(train: Dataset, policy: ImputationPolicy | None = None) -> ImputationPolicy:
    """Learn fill values from the training split.

    Continuous fills are the mean of non-missing values; binary fills are the
    mode with ties resolved to 0.  A feature with no observed values is an
    error.
    """
    policy = policy or ImputationPolicy()
    if policy.continuous_strategy != "mean" or policy.binary_strategy != "mode":
        raise DataError(
            f"unsupported imputation strategy "
            f"({policy.continuous_strategy!r}/{policy.binary_strategy!r})"
        )
    fills = []
    for j, name in enumerate(train.feature_names):
        col = train.X[:, j]
        observed = col[~np.isnan(col)]
        if observed.size == 0:
            raise DataError(f"feature {name!r} has no non-missing training values")
        if feature_kind(name) == BINARY:
            ones = int((observed == 1.0).sum())
            zeros = observed.size - ones
            fills.append(1.0 if ones > zeros else 0.0)
        else:
            fills.append(float(observed.mean()))
    return ImputationPolicy(
        policy.continuous_strategy,
        policy.binary_strategy,
        tuple(fills),
        tuple(train.feature_names),
    )


def impute_matrix(policy: ImputationPolicy, X: np.ndarray) -> np.ndarray:
    """Matrix form of ``apply_imputer``: NaN cells become the learned fills."""
    if not policy.is_fitted:
        raise DataError("imputation policy has no learned fill values")
    X = np.array(X, dtype=float)
    if X.shape[1] != len(policy.fills):
        raise DataError("imputer was fit on a different feature count")
    for j, fill in enumerate(policy.fills):
        col = X[:, j]
        col[np.isnan(col)] = fill
    return X


def apply_imputer(policy: ImputationPolicy, ds: Dataset) -> Dataset:
    """Replace missing cells with the learned fills; observed cells unchanged."""
    if policy.feature_names is not None and policy.feature_names != ds.feature_names:
        raise DataError("imputer was fit on a different feature set")
    return ds.with_features(impute_matrix(policy, ds.X))


def mad_flags(values, cutoff: float = DEFAULT_MAD_CUTOFF) -> tuple[int, ...]:
    """Indices of robust outliers: |x - median| / (1.4826 * MAD) > cutoff.

    MAD is the median absolute deviation around the median.  When MAD is zero
    (over half the values identical) the mean absolute deviation around the
    median is used instead; if that is also zero the column is constant and
    nothing is flagged.  NaN entries are ignored and never flagged.
    """
    arr = np.asarray(values, dtype=float)
    observed = arr[~np.isnan(arr)]
    if observed.size < 2:
        raise DataError(f"need at least 2 non-missing values, got {observed.size}")
    med = float(np.median(observed))
    abs_dev = np.abs(observed - med)
    mad = float(np.median(abs_dev))
    spread = mad if mad > 0 else float(abs_dev.mean())
    if spread == 0.0:
        return ()
    score = np.abs(arr - med) / (MAD_SCALE * spread)
    with np.errstate(invalid="ignore"):
        mask = score > cutoff
    mask &= ~np.isnan(arr)
    return tuple(int(i) for i in np.nonzero(mask)[0])


def detect_outliers(ds: Dataset, cutoff: float = DEFAULT_MAD_CUTOFF) -> OutlierReport:
    """MAD-flag every continuous feature column (binary columns are skipped)."""
    flagged: dict[str, tuple[int, ...]] = {}
    for j, name in enumerate(ds.feature_names):
        if feature_kind(name) == BINARY:
            continue
        flagged[name] = mad_flags(ds.X[:, j], cutoff)
    return OutlierReport(flagged, cutoff)


def winsorize_outliers(ds: Dataset, report: OutlierReport) -> Dataset:
    """Clip flagged values to the cutoff boundary around the column median.

    The boundary uses the same robust scale as ``mad_flags``; flagging itself
    never mutates data (flag-only is the default treatment).
    """
    X = ds.X.copy()
    for j, name in enumerate(ds.feature_names):
        idx = report.flagged.get(name, ())
        if not idx:
            continue
        col = X[:, j]
        observed = col[~np.isnan(col)]
        med = float(np.median(observed))
        abs_dev = np.abs(observed - med)
        mad = float(np.median(abs_dev))
        spread = mad if mad > 0 else float(abs_dev.mean())
        bound = report.cutoff * MAD_SCALE * spread
        col[list(idx)] = np.clip(col[list(idx)], med - bound, med + bound)
    return ds.with_features(X)


def fit_normalizer(train: Dataset) -> NormalizationParams:
    """Learn per-feature (min, max); requires imputation already applied."""
    if train.n_rows == 0:
        raise DataError("cannot fit a normalizer on an empty dataset")
    if np.isnan(train.X).any():
        raise DataError("normalizer input still contains missing values")
    return NormalizationParams(
        tuple(float(v) for v in train.X.min(axis=0)),
        tuple(float(v) for v in train.X.max(axis=0)),
    )


def normalize_matrix(params: NormalizationParams, X: np.ndarray) -> np.ndarray:
    """Matrix form of ``apply_normalizer``."""
    X = np.asarray(X, dtype=float)
    if X.shape[1] != len(params.e_min):
        raise DataError("normalizer was fit on a different feature count")
    lo = np.asarray(params.e_min)
    hi = np.asarray(params.e_max)
    span = hi - lo
    out = np.empty_like(X)
    for j in range(X.shape[1]):
        if span[j] == 0.0:
            out[:, j] = 0.5
        else:
            out[:, j] = np.clip((X[:, j] - lo[j]) / span[j], 0.0, 1.0)
    return out


def apply_normalizer(params: NormalizationParams, ds: Dataset) -> Dataset:
    """Scale each feature to [0, 1] by the training range.

    Out-of-range values (unseen data) are clipped into [0, 1]; a feature that
    was constant in training maps everywhere to 0.5.
    """
    return ds.with_features(normalize_matrix(params, ds.X))


def shuffle_split(
    ds: Dataset, train_fraction: float, seed: int, stratify: bool = False
) -> tuple[Dataset, Dataset]:
    """Deterministic shuffled partition into train and test.

    The permutation is Fisher-Yates as implemented by numpy's PCG64 generator
    seeded with ``seed``; train receives the first floor(train_fraction * n)
    shuffled rows.  With ``stratify`` the fraction is applied per class.
    Splits leaving no training rows, or fewer than 2 test rows (a one-row
    test side cannot host both outcome classes), are degenerate.
    """
    n = ds.n_rows
    if n < 2:
        raise DataError(f"need at least 2 rows to split, got {n}")
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    if stratify:
        train_idx: list[int] = []
        test_idx: list[int] = []
        for c in (0, 1):
            class_rows = [int(i) for i in perm if ds.y[i] == c]
            k = int(np.floor(train_fraction * len(class_rows)))
            train_idx.extend(class_rows[:k])
            test_idx.extend(class_rows[k:])
    else:
        k = int(np.floor(train_fraction * n))
        train_idx = [int(i) for i in perm[:k]]
        test_idx = [int(i) for i in perm[k:]]
    if len(train_idx) < 1 or len(test_idx) < 2:
        raise DataError(
            f"degenerate split: train={len(train_idx)} test={len(test_idx)} rows"
        )
    return ds.subset(train_idx), ds.subset(test_idx)
