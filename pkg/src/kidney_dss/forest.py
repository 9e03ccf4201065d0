"""Bootstrap forest of unpruned CART trees with OOB permutation importance.

Each tree owns an RNG stream derived from (seed, tree index), and each
permutation from (seed, tree index, feature index), so results never depend
on build or evaluation order; fitting trees concurrently would produce a
bit-identical forest.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, FitError
from .records import Dataset
from .trees import GINI, TreeConfig, TreeNode, grow_tree, tree_positive_proba

#: Stream tags keeping tree-build and permutation RNGs disjoint.
_BOOTSTRAP_STREAM = 0
_PERMUTE_STREAM = 1


@dataclass(frozen=True)
class ForestConfig:
    n_tree: int = 500
    mtry: int | None = None  # default ceil(sqrt(d))
    max_depth: int | None = None
    min_samples_leaf: int = 1
    bootstrap: bool = True  # disabled only for the single-tree debug identity

    def __post_init__(self):
        if self.n_tree < 1:
            raise FitError(f"n_tree must be >= 1, got {self.n_tree}")
        if self.mtry is not None and self.mtry < 1:
            raise FitError(f"mtry must be >= 1, got {self.mtry}")

    def resolved_mtry(self, n_features: int) -> int:
        if self.mtry is None:
            return min(n_features, math.ceil(math.sqrt(n_features)))
        return min(self.mtry, n_features)


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[TreeNode, ...]
    in_bag: tuple[tuple[int, ...], ...]  # unique sorted in-bag row indices per tree
    n_rows: int
    n_features: int
    mtry: int
    seed: int
    config: ForestConfig
    feature_names: tuple[str, ...] = field(default=())

    @property
    def n_tree(self) -> int:
        return len(self.trees)

    def oob_indices(self, tree_index: int) -> np.ndarray:
        mask = np.ones(self.n_rows, dtype=bool)
        mask[list(self.in_bag[tree_index])] = False
        return np.nonzero(mask)[0]

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Soft vote: mean of per-tree leaf probabilities of TRANSPLANTED."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise DataError(f"expected {self.n_features} features, got {X.shape[1]}")
        acc = np.zeros(X.shape[0])
        for root in self.trees:
            acc += tree_positive_proba(root, X)
        return acc / self.n_tree


@dataclass(frozen=True)
class ImportanceRanking:
    """Features ordered by mean OOB error increase under permutation."""

    features: tuple[str, ...]  # descending importance
    importances: tuple[float, ...]

    def rank_of(self, feature: str) -> int:
        return self.features.index(feature) + 1

    def rows(self):
        """(feature, importance, rank) triples in rank order."""
        return [
            (name, imp, rank + 1)
            for rank, (name, imp) in enumerate(zip(self.features, self.importances))
        ]


def _tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([_BOOTSTRAP_STREAM, seed, tree_index]))


def _permute_rng(seed: int, tree_index: int, feature: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([_PERMUTE_STREAM, seed, tree_index, feature])
    )


def fit_forest(train: Dataset, config: ForestConfig | None = None, seed: int = 0) -> ForestModel:
    """Fit n_tree bootstrap trees; in-bag sets are recorded for OOB work."""
    config = config or ForestConfig()
    if train.n_rows == 0:
        raise DataError("cannot fit a forest on an empty dataset")
    if np.isnan(train.X).any():
        raise DataError("forest input contains missing values; impute first")
    n = train.n_rows
    mtry = config.resolved_mtry(train.n_features)
    tree_config = TreeConfig(config.max_depth, config.min_samples_leaf)
    trees: list[TreeNode] = []
    in_bag: list[tuple[int, ...]] = []
    for t in range(config.n_tree):
        rng = _tree_rng(seed, t)
        if config.bootstrap:
            rows = rng.integers(0, n, size=n)
        else:
            rows = np.arange(n)
        root = grow_tree(
            train.X,
            train.y,
            tree_config,
            criterion=GINI,
            mtry=mtry,
            rng=rng,
            row_indices=rows,
        )
        trees.append(root)
        in_bag.append(tuple(int(i) for i in np.unique(rows)))
    return ForestModel(
        trees=tuple(trees),
        in_bag=tuple(in_bag),
        n_rows=n,
        n_features=train.n_features,
        mtry=mtry,
        seed=seed,
        config=config,
        feature_names=tuple(train.feature_names),
    )


def predict_forest(model: ForestModel, X: np.ndarray) -> np.ndarray:
    return model.predict_proba(X)


def oob_error(model: ForestModel, train: Dataset, threshold: float = 0.5) -> float:
    """Out-of-bag misclassification rate.

    Each row is scored by averaging the probabilities of the trees for which
    it is out of bag; rows that are in-bag everywhere are skipped with a
    warning.
    """
    if train.n_rows != model.n_rows:
        raise DataError(
            f"OOB error requires the original training data "
            f"({model.n_rows} rows, got {train.n_rows})"
        )
    totals = np.zeros(model.n_rows)
    counts = np.zeros(model.n_rows)
    for t, root in enumerate(model.trees):
        oob = model.oob_indices(t)
        if oob.size == 0:
            continue
        totals[oob] += tree_positive_proba(root, train.X[oob])
        counts[oob] += 1
    covered = counts > 0
    if not covered.any():
        raise DataError("no tree has out-of-bag rows; grow more trees or enable bootstrap")
    if not covered.all():
        warnings.warn(
            f"{int((~covered).sum())} rows are in-bag for every tree and are "
            f"skipped in the OOB error",
            stacklevel=2,
        )
    pred = totals[covered] / counts[covered] >= threshold
    return float((pred != (train.y[covered] == 1)).mean())


def per_tree_importance(model: ForestModel, train: Dataset, seed: int = 0) -> np.ndarray:
    """Per-tree, per-feature OOB error increases; trees without OOB rows are NaN.

    Exposed for dispersion checks; ``oob_importance`` is the aggregated view.
    """
    if train.n_rows != model.n_rows:
        raise DataError(
            f"importance requires the original training data "
            f"({model.n_rows} rows, got {train.n_rows})"
        )
    deltas = np.full((model.n_tree, model.n_features), np.nan)
    for t, root in enumerate(model.trees):
        oob = model.oob_indices(t)
        if oob.size == 0:
            continue
        X_oob = train.X[oob]
        hits = train.y[oob] == 1
        base_err = float(((tree_positive_proba(root, X_oob) >= 0.5) != hits).mean())
        for f in range(model.n_features):
            rng = _permute_rng(seed, t, f)
            X_perm = X_oob.copy()
            X_perm[:, f] = X_oob[rng.permutation(oob.size), f]
            perm_err = float(((tree_positive_proba(root, X_perm) >= 0.5) != hits).mean())
            deltas[t, f] = perm_err - base_err
    return deltas


def oob_importance(model: ForestModel, train: Dataset, seed: int = 0) -> ImportanceRanking:
    """Permutation importance computed tree by tree on out-of-bag rows.

    For each tree and feature, the feature's OOB values are permuted and the
    misclassification-rate increase over the tree's baseline OOB error is
    recorded; a feature's importance is the mean over trees that have OOB
    rows.  Deterministic for a fixed seed.
    """
    deltas = per_tree_importance(model, train, seed)
    used = ~np.isnan(deltas[:, 0])
    if not used.any():
        raise DataError("no tree has out-of-bag rows; grow more trees or enable bootstrap")
    covered = np.zeros(model.n_rows, dtype=bool)
    for t in np.nonzero(used)[0]:
        covered[model.oob_indices(int(t))] = True
    if not covered.all():
        skipped = int((~covered).sum())
        warnings.warn(
            f"{skipped} training rows are in-bag for every tree and never "
            f"contribute to OOB importance",
            stacklevel=2,
        )
    importances = deltas[used].mean(axis=0)
    names = model.feature_names or tuple(f"feature_{j}" for j in range(model.n_features))
    order = sorted(range(model.n_features), key=lambda j: (-importances[j], j))
    return ImportanceRanking(
        features=tuple(names[j] for j in order),
        importances=tuple(float(importances[j]) for j in order),
    )
