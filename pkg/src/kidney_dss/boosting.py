"""Gradient boosting for binary outcomes: functional gradient descent on
binomial deviance with regression-tree stages.

Stage m fits a tree to the residuals y - sigmoid(F_{m-1}), sets each leaf by a
single Newton step, and shrinks the update by the learning rate.  A halving
safeguard scales a stage's leaves back whenever the full update would raise
training deviance, so the deviance trace is non-increasing by construction.
No per-stage row subsampling is used; fitting is deterministic and the seed
argument is accepted only for interface symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DataError, FitError
from .records import Dataset
from .trees import MSE, TreeConfig, TreeNode, grow_tree, tree_regression_value

_MAX_LEAF_VALUE = 50.0  # log-odds beyond this saturate double-precision sigmoid
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class BoostingConfig:
    n_stages: int = 200
    learning_rate: float = 0.1
    max_depth: int | None = 3
    min_samples_leaf: int = 5

    def __post_init__(self):
        if self.n_stages < 0:
            raise FitError(f"n_stages must be >= 0, got {self.n_stages}")
        if self.learning_rate < 0:
            raise FitError(f"learning_rate must be >= 0, got {self.learning_rate}")


@dataclass(frozen=True)
class BoostedModel:
    f0: float  # log-odds of the training base rate
    base_rate: float
    learning_rate: float
    trees: tuple[TreeNode, ...]
    n_features: int
    feature_names: tuple[str, ...]
    config: BoostingConfig
    deviance_trace: tuple[float, ...]  # length n_stages + 1, entry 0 = prior
    residual_targets: tuple | None = None  # per-stage arrays when traced

    @property
    def n_stages(self) -> int:
        return len(self.trees)

    def _proba_from_offset(self, offset: np.ndarray) -> np.ndarray:
        # A zero accumulated adjustment is the prior prediction; returning the
        # stored base rate avoids the logit round-trip rounding error.
        return np.where(offset == 0.0, self.base_rate, expit(self.f0 + offset))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise DataError(f"expected {self.n_features} features, got {X.shape[1]}")
        total = np.zeros(X.shape[0])
        for root in self.trees:
            total += tree_regression_value(root, X)
        return self._proba_from_offset(self.learning_rate * total)


def _deviance(y: np.ndarray, F: np.ndarray) -> float:
    """Binomial deviance 2 * mean(softplus(F) - y*F), stable for large |F|."""
    return float(2.0 * np.mean(np.logaddexp(0.0, F) - y * F))


def _leaf_nodes(root: TreeNode) -> list[TreeNode]:
    leaves = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            leaves.append(node)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return leaves


def fit_gbc(
    train: Dataset,
    config: BoostingConfig | None = None,
    seed: int | None = None,
    keep_traces: bool = False,
) -> BoostedModel:
    """Fit the staged model; ``keep_traces`` retains per-stage residual targets."""
    config = config or BoostingConfig()
    y = train.y.astype(float)
    if train.n_rows == 0:
        raise DataError("cannot fit on an empty dataset")
    if np.isnan(train.X).any():
        raise DataError("boosting input contains missing values; impute first")
    base_rate = float(y.mean())
    if base_rate in (0.0, 1.0):
        raise DataError("training data contains a single outcome class")
    f0 = float(np.log(base_rate / (1.0 - base_rate)))
    tree_config = TreeConfig(config.max_depth, config.min_samples_leaf)

    F = np.full(train.n_rows, f0)
    devs = [_deviance(y, F)]
    trees: list[TreeNode] = []
    residual_targets: list[np.ndarray] = []
    for _ in range(config.n_stages):
        p = expit(F)
        residuals = y - p
        if keep_traces:
            residual_targets.append(residuals.copy())
        hess = p * (1.0 - p)

        def newton_value(rows, residuals=residuals, hess=hess):
            num = float(residuals[rows].sum())
            den = float(hess[rows].sum())
            if den <= 0.0:
                return 0.0
            return float(np.clip(num / den, -_MAX_LEAF_VALUE, _MAX_LEAF_VALUE))

        root = grow_tree(
            train.X, residuals, tree_config, criterion=MSE, leaf_value=newton_value
        )
        delta = tree_regression_value(root, train.X)
        new_F = F + config.learning_rate * delta
        new_dev = _deviance(y, new_F)
        halvings = 0
        leaves = None
        while (not np.isfinite(new_dev)) or new_dev > devs[-1]:
            if halvings >= _MAX_HALVINGS:
                leaves = leaves or _leaf_nodes(root)
                for leaf in leaves:
                    leaf.value = 0.0
                new_F = F
                new_dev = devs[-1]
                break
            leaves = leaves or _leaf_nodes(root)
            for leaf in leaves:
                leaf.value = float(leaf.value) * 0.5
            delta = delta * 0.5
            new_F = F + config.learning_rate * delta
            new_dev = _deviance(y, new_F)
            halvings += 1
        F = new_F
        devs.append(new_dev)
        trees.append(root)

    return BoostedModel(
        f0=f0,
        base_rate=base_rate,
        learning_rate=config.learning_rate,
        trees=tuple(trees),
        n_features=train.n_features,
        feature_names=tuple(train.feature_names),
        config=config,
        deviance_trace=tuple(devs),
        residual_targets=tuple(residual_targets) if keep_traces else None,
    )


def predict_gbc(model: BoostedModel, X: np.ndarray) -> np.ndarray:
    return model.predict_proba(X)


def staged_scores(model: BoostedModel, record: np.ndarray) -> np.ndarray:
    """Per-stage probabilities for one record, prior first.

    Length is n_stages + 1 and the final entry equals ``predict_gbc`` exactly.
    """
    x = np.asarray(record, dtype=float).reshape(1, -1)
    if x.shape[1] != model.n_features:
        raise DataError(f"expected {model.n_features} features, got {x.shape[1]}")
    out = np.empty(model.n_stages + 1)
    total = 0.0
    out[0] = model._proba_from_offset(np.array([0.0]))[0]
    for m, root in enumerate(model.trees, start=1):
        total += float(tree_regression_value(root, x)[0])
        out[m] = model._proba_from_offset(np.array([model.learning_rate * total]))[0]
    return out
