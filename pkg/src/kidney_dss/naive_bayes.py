"""Generative classifier with conditionally independent features: Gaussian
likelihoods for continuous columns, Bernoulli for binary columns, fit by
maximum likelihood with a variance floor and Laplace smoothing.

A column whose training values are all 0/1 is treated as Bernoulli; anything
else is Gaussian.  Posteriors are computed in log space and normalized, so
the two class probabilities always sum to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DataError
from .records import Dataset

GAUSSIAN = "gaussian"
BERNOULLI = "bernoulli"

VARIANCE_FLOOR = 1e-9
LAPLACE_PSEUDOCOUNT = 1.0


@dataclass(frozen=True)
class NaiveBayesModel:
    priors: tuple[float, float]  # (P(class 0), P(class 1))
    kinds: tuple[str, ...]
    means: np.ndarray  # (2, d); NaN on Bernoulli slots
    variances: np.ndarray  # (2, d); floored, NaN on Bernoulli slots
    bern_p: np.ndarray  # (2, d); NaN on Gaussian slots
    feature_names: tuple[str, ...]
    variance_floor: float = VARIANCE_FLOOR

    @property
    def n_features(self) -> int:
        return len(self.kinds)

    def log_joint(self, X: np.ndarray) -> np.ndarray:
        """(n, 2) array of log P(x | class) + log P(class)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise DataError(f"expected {self.n_features} features, got {X.shape[1]}")
        out = np.zeros((X.shape[0], 2))
        with np.errstate(divide="ignore"):  # a zero prior is a hard veto
            out += np.log(np.asarray(self.priors))
        for j, kind in enumerate(self.kinds):
            col = X[:, j:j + 1]
            if kind == GAUSSIAN:
                mu = self.means[:, j]
                var = self.variances[:, j]
                out += -0.5 * (np.log(2.0 * np.pi * var) + (col - mu) ** 2 / var)
            else:
                p = self.bern_p[:, j]
                out += col * np.log(p) + (1.0 - col) * np.log(1.0 - p)
        return out

    def posterior(self, X: np.ndarray) -> np.ndarray:
        """(n, 2) class posteriors; each row sums to 1."""
        lj = self.log_joint(X)
        p1 = expit(lj[:, 1] - lj[:, 0])
        return np.column_stack([1.0 - p1, p1])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Posterior probability of TRANSPLANTED per row."""
        return self.posterior(X)[:, 1]


def fit_nb(train: Dataset) -> NaiveBayesModel:
    """Maximum-likelihood fit: class-frequency priors, per-class Gaussian
    moments (variance floored) and Laplace-smoothed Bernoulli rates."""
    if train.n_rows == 0:
        raise DataError("cannot fit on an empty dataset")
    if np.isnan(train.X).any():
        raise DataError("naive Bayes input contains missing values; impute first")
    class_masks = [train.y == 0, train.y == 1]
    counts = [int(m.sum()) for m in class_masks]
    if 0 in counts:
        raise DataError("training data contains a single outcome class")

    d = train.n_features
    kinds = []
    means = np.full((2, d), np.nan)
    variances = np.full((2, d), np.nan)
    bern_p = np.full((2, d), np.nan)
    for j in range(d):
        col = train.X[:, j]
        if np.isin(col, (0.0, 1.0)).all():
            kinds.append(BERNOULLI)
            for c, mask in enumerate(class_masks):
                ones = float((col[mask] == 1.0).sum())
                bern_p[c, j] = (ones + LAPLACE_PSEUDOCOUNT) / (
                    counts[c] + 2.0 * LAPLACE_PSEUDOCOUNT
                )
        else:
            kinds.append(GAUSSIAN)
            for c, mask in enumerate(class_masks):
                vals = col[mask]
                means[c, j] = vals.mean()
                variances[c, j] = max(float(vals.var()), VARIANCE_FLOOR)
    return NaiveBayesModel(
        priors=(counts[0] / train.n_rows, counts[1] / train.n_rows),
        kinds=tuple(kinds),
        means=means,
        variances=variances,
        bern_p=bern_p,
        feature_names=tuple(train.feature_names),
    )


def posterior(model: NaiveBayesModel, record: np.ndarray) -> np.ndarray:
    """Class posteriors (P(DISCARDED), P(TRANSPLANTED)) for one record."""
    return model.posterior(np.asarray(record, dtype=float).reshape(1, -1))[0]
