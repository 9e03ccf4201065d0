"""CART trees: greedy binary splits, grown unpruned unless limits are set.

One grower serves both the classification forest (Gini impurity, probability
leaves) and the boosting stages (variance reduction, custom leaf values).
Thresholds are midpoints between adjacent distinct sorted values; ties in
gain resolve to the lowest feature index, then the lowest threshold, so a
tree is a pure function of (data, config, feature sample order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DataError, FitError
from .records import Dataset

GINI = "gini"
MSE = "mse"


class TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature=-1, threshold=np.nan, left=None, right=None, value=None):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.value = value

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int | None = None
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise FitError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise FitError(f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}")


def _best_split(X, target, idx, features, min_leaf, criterion):
    """Best (feature, threshold, left_mask) over candidates, or None.

    Gain is impurity decrease (Gini) or sum-of-squares decrease (MSE); only
    strictly better gains replace the incumbent, which realizes the
    lowest-feature-index tie-break because features arrive in ascending order.
    """
    n = idx.size
    best_gain = -np.inf
    best = None
    for f in features:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        if xs[0] == xs[-1]:
            continue
        t = target[idx][order]
        k = np.arange(1, n)
        valid = xs[1:] != xs[:-1]
        if min_leaf > 1:
            valid &= (k >= min_leaf) & (k <= n - min_leaf)
        if not valid.any():
            continue
        if criterion == GINI:
            pos = np.cumsum(t)[:-1].astype(float)
            total_pos = float(t.sum())
            m = (n - k).astype(float)
            kf = k.astype(float)
            parent = 2.0 * total_pos * (n - total_pos) / n
            child = 2.0 * (pos * (kf - pos) / kf + (total_pos - pos) * (m - (total_pos - pos)) / m)
            gain = (parent - child) / n
        else:
            s1 = np.cumsum(t)[:-1]
            s2 = np.cumsum(t * t)[:-1]
            tot1 = float(t.sum())
            tot2 = float((t * t).sum())
            kf = k.astype(float)
            m = (n - k).astype(float)
            sse_left = s2 - s1 * s1 / kf
            sse_right = (tot2 - s2) - (tot1 - s1) ** 2 / m
            parent = tot2 - tot1 * tot1 / n
            gain = parent - (sse_left + sse_right)
        gain = np.where(valid, gain, -np.inf)
        pick = int(np.argmax(gain))  # first max = lowest threshold among ties
        if gain[pick] > best_gain:
            best_gain = float(gain[pick])
            thr = 0.5 * (xs[pick] + xs[pick + 1])
            best = (int(f), float(thr))
    if best is None:
        return None
    f, thr = best
    return f, thr, X[idx, f] <= thr


def grow_tree(
    X: np.ndarray,
    target: np.ndarray,
    config: TreeConfig,
    criterion: str = GINI,
    leaf_value: Callable[[np.ndarray], object] | None = None,
    mtry: int | None = None,
    rng: np.random.Generator | None = None,
    row_indices: np.ndarray | None = None,
) -> TreeNode:
    """Grow one tree over ``row_indices`` of X (all rows by default).

    ``leaf_value`` receives the row indices reaching a leaf and returns the
    stored value; the default is the class-probability pair for Gini and the
    target mean for MSE.  ``mtry`` limits the features examined per split,
    sampled without replacement from ``rng``.
    """
    n_features = X.shape[1]
    if leaf_value is None:
        if criterion == GINI:
            def leaf_value(rows):  # noqa: E731 - default closure
                p1 = float(target[rows].mean())
                return np.array([1.0 - p1, p1])
        else:
            def leaf_value(rows):
                return float(target[rows].mean())
    if mtry is None or mtry >= n_features:
        mtry = n_features
    if mtry < 1:
        raise FitError(f"mtry must be >= 1, got {mtry}")
    if mtry < n_features and rng is None:
        raise FitError("feature subsampling requires an RNG")

    idx0 = np.arange(X.shape[0]) if row_indices is None else np.asarray(row_indices)
    if idx0.size == 0:
        raise DataError("cannot grow a tree on zero rows")

    root = TreeNode()
    stack = [(root, idx0, 0)]
    while stack:
        node, idx, depth = stack.pop()
        t = target[idx]
        pure = bool((t == t[0]).all())
        depth_stop = config.max_depth is not None and depth >= config.max_depth
        size_stop = idx.size < 2 * config.min_samples_leaf
        split = None
        if not (pure or depth_stop or size_stop):
            if mtry < n_features:
                features = np.sort(rng.choice(n_features, size=mtry, replace=False))
            else:
                features = np.arange(n_features)
            split = _best_split(X, target, idx, features, config.min_samples_leaf, criterion)
        if split is None:
            node.value = leaf_value(idx)
            continue
        f, thr, left_mask = split
        node.feature = f
        node.threshold = thr
        node.left = TreeNode()
        node.right = TreeNode()
        stack.append((node.left, idx[left_mask], depth + 1))
        stack.append((node.right, idx[~left_mask], depth + 1))
    return root


def apply_tree(root: TreeNode, X: np.ndarray) -> list:
    """Leaf value for every row of X (vectorized routing)."""
    n = X.shape[0]
    out: list = [None] * n
    stack = [(root, np.arange(n))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            for i in idx:
                out[i] = node.value
            continue
        mask = X[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


def tree_positive_proba(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """P(label 1) per row for a classification tree."""
    n = X.shape[0]
    out = np.empty(n)
    stack = [(root, np.arange(n))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.value[1]
            continue
        mask = X[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


def tree_regression_value(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Leaf value per row for a regression tree."""
    n = X.shape[0]
    out = np.empty(n)
    stack = [(root, np.arange(n))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.value
            continue
        mask = X[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


def tree_depth(root: TreeNode) -> int:
    depth = 0
    stack = [(root, 0)]
    while stack:
        node, d = stack.pop()
        depth = max(depth, d)
        if not node.is_leaf:
            stack.append((node.left, d + 1))
            stack.append((node.right, d + 1))
    return depth


def tree_to_payload(root: TreeNode) -> list:
    """Flatten to a JSON-friendly node list (preorder, child indices)."""
    nodes: list = []

    def visit(node: TreeNode) -> int:
        slot = len(nodes)
        nodes.append(None)
        if node.is_leaf:
            value = node.value
            if isinstance(value, np.ndarray):
                value = [float(v) for v in value]
            else:
                value = float(value)
            nodes[slot] = [-1, None, -1, -1, value]
        else:
            left = visit(node.left)
            right = visit(node.right)
            nodes[slot] = [int(node.feature), float(node.threshold), left, right, None]
        return slot

    visit(root)
    return nodes


def tree_from_payload(nodes: list) -> TreeNode:
    built: list[TreeNode] = [TreeNode() for _ in nodes]
    for slot, (f, thr, left, right, value) in enumerate(nodes):
        node = built[slot]
        if f < 0:
            node.value = np.array(value) if isinstance(value, list) else float(value)
        else:
            node.feature = int(f)
            node.threshold = float(thr)
            node.left = built[left]
            node.right = built[right]
    return built[0]


@dataclass(frozen=True)
class DecisionTree:
    """A fitted classification tree with probability leaves."""

    root: TreeNode
    config: TreeConfig
    n_features: int

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise DataError(f"expected {self.n_features} features, got {X.shape[1]}")
        return tree_positive_proba(self.root, X)


def fit_tree(train: Dataset, config: TreeConfig | None = None) -> DecisionTree:
    """Fit a single CART classification tree on the full training set."""
    config = config or TreeConfig()
    if train.n_rows == 0:
        raise DataError("cannot fit a tree on an empty dataset")
    if np.isnan(train.X).any():
        raise DataError("tree input contains missing values; impute first")
    root = grow_tree(train.X, train.y, config, criterion=GINI)
    return DecisionTree(root, config, train.n_features)
