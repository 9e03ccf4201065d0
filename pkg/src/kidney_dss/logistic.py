"""Logistic regression trained by full-batch gradient descent, plus Wald
inference (standard errors, p-values, 95% intervals, odds ratios).

The model is P(Y=1|X) = sigmoid(w0 + w.x) fit by minimizing the mean negative
Bernoulli log-likelihood from a zero initialization, with step halving on any
loss increase, so the loss trace strictly decreases over accepted steps and
the fit is deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from .errors import DataError, FitError, InferenceError
from .records import Dataset

#: Normal quantile used for the reported 95% intervals (fixed, not recomputed).
CI_Z = 1.96

SIGNIFICANCE_LEVEL = 0.05


@dataclass(frozen=True)
class LogisticConfig:
    learning_rate: float = 0.1
    max_iters: int = 5000
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise FitError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.max_iters < 1:
            raise FitError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class LogisticModel:
    intercept: float
    weights: np.ndarray
    iterations: int
    final_loss: float
    converged: bool  # gradient infinity-norm dropped below the tolerance
    feature_names: tuple[str, ...]
    stop_reason: str = "tolerance"  # "tolerance" | "stalled" | "max_iters"

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if not np.isfinite(w).all() or not np.isfinite(self.intercept):
            raise FitError("logistic model has non-finite coefficients")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def scores(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.weights.size:
            raise DataError(f"expected {self.weights.size} features, got {X.shape[1]}")
        return self.intercept + X @ self.weights

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Probability of TRANSPLANTED per row."""
        return expit(self.scores(X))


@dataclass(frozen=True)
class InferenceRow:
    feature: str
    coefficient: float
    std_error: float
    p_value: float
    ci_low: float
    ci_high: float
    odds_ratio: float
    important: bool  # p < 0.05


def mean_nll(intercept: float, weights: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    """Mean negative Bernoulli log-likelihood, stable for large scores."""
    s = intercept + X @ weights
    return float(np.mean(np.logaddexp(0.0, s) - y * s))


def mean_nll_gradient(
    intercept: float, weights: np.ndarray, X: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray]:
    """(d/d intercept, d/d weights) of ``mean_nll``."""
    p = expit(intercept + X @ weights)
    err = p - y
    return float(err.mean()), X.T @ err / len(y)


def fit_logistic(train: Dataset, config: LogisticConfig | None = None) -> LogisticModel:
    """Gradient descent on the mean negative log-likelihood.

    Stops when the gradient infinity-norm drops below the tolerance or the
    iteration budget runs out; a step that would increase the loss is halved
    before being accepted.
    """
    config = config or LogisticConfig()
    X = train.X
    y = train.y.astype(float)
    if np.isnan(X).any():
        raise DataError("logistic input contains missing values; impute first")
    if len(np.unique(train.y)) < 2:
        raise DataError("training data contains a single outcome class")

    w0 = 0.0
    w = np.zeros(train.n_features)
    loss = mean_nll(w0, w, X, y)
    stop_reason = "max_iters"
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        g0, g = mean_nll_gradient(w0, w, X, y)
        if max(abs(g0), float(np.abs(g).max()) if g.size else 0.0) < config.tolerance:
            stop_reason = "tolerance"
            iterations -= 1
            break
        step = config.learning_rate
        for _ in range(60):
            new_w0 = w0 - step * g0
            new_w = w - step * g
            new_loss = mean_nll(new_w0, new_w, X, y)
            if np.isfinite(new_loss) and new_loss < loss:
                break
            step *= 0.5
        else:
            if not np.isfinite(new_loss):
                raise FitError(
                    f"training diverged (non-finite loss) at learning rate "
                    f"{config.learning_rate}"
                )
            # The loss can no longer be improved at float resolution.
            stop_reason = "stalled"
            break
        w0, w, loss = new_w0, new_w, new_loss
    return LogisticModel(
        intercept=float(w0),
        weights=w,
        iterations=iterations,
        final_loss=float(loss),
        converged=stop_reason == "tolerance",
        feature_names=tuple(train.feature_names),
        stop_reason=stop_reason,
    )


def predict_proba(model: LogisticModel, record: np.ndarray) -> float:
    """Probability that a single preprocessed record is TRANSPLANTED."""
    x = np.asarray(record, dtype=float).reshape(1, -1)
    return float(model.predict_proba(x)[0])


def predict_both(model: LogisticModel, record: np.ndarray) -> tuple[float, float]:
    """(P(DISCARDED), P(TRANSPLANTED)); the pair sums to 1 exactly."""
    p1 = predict_proba(model, record)
    return 1.0 - p1, p1


def wald_report(model: LogisticModel, train: Dataset) -> list[InferenceRow]:
    """Per-feature Wald inference at the fitted coefficients.

    Standard errors come from the inverse observed Fisher information
    (sum of p(1-p) x x^T over training rows, intercept included); intervals
    are coefficient +/- 1.96 SE and the odds ratio is exp(coefficient).
    """
    if model.stop_reason == "max_iters":
        warnings.warn(
            "Wald inference on a model that ran out of iterations before "
            "reaching its gradient tolerance; standard errors may be unreliable",
            stacklevel=2,
        )
    X = train.X
    design = np.hstack([np.ones((train.n_rows, 1)), X])
    p = model.predict_proba(X)
    weights = p * (1.0 - p)
    information = design.T @ (design * weights[:, None])
    try:
        covariance = np.linalg.inv(information)
    except np.linalg.LinAlgError as exc:
        raise InferenceError(
            "observed information matrix is singular; check for collinear or "
            "separable features"
        ) from exc
    variances = np.diag(covariance)
    if not np.isfinite(variances).all() or (variances <= 0).any():
        raise InferenceError(
            "observed information matrix is numerically singular; check for "
            "collinear or separable features"
        )
    std_errors = np.sqrt(variances)

    rows = []
    coefs = np.concatenate([[model.intercept], model.weights])
    for j, name in enumerate(model.feature_names):
        coef = float(coefs[j + 1])
        se = float(std_errors[j + 1])
        z = coef / se
        p_value = float(2.0 * norm.sf(abs(z)))
        rows.append(
            InferenceRow(
                feature=name,
                coefficient=coef,
                std_error=se,
                p_value=p_value,
                ci_low=coef - CI_Z * se,
                ci_high=coef + CI_Z * se,
                odds_ratio=float(np.exp(coef)),
                important=p_value < SIGNIFICANCE_LEVEL,
            )
        )
    return rows
