"""Versioned, digest-checked model persistence and the shared predict path.

An artifact bundles one fitted model with the exact transformers it was
trained behind (imputation fills, normalization ranges), the feature order,
the training config, and optional analysis extras (forest importance, the
logistic inference table).  Serialization is canonical JSON, so identical
artifacts produce identical bytes and reloaded models predict bit-identically.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boosting import BoostedModel, BoostingConfig
from .errors import ArtifactCorruptError, ArtifactError, ArtifactVersionError
from .forest import ForestConfig, ForestModel, ImportanceRanking
from .logistic import InferenceRow, LogisticModel
from .naive_bayes import NaiveBayesModel
from .preprocess import (
    ImputationPolicy,
    NormalizationParams,
    impute_matrix,
    normalize_matrix,
)
from .trees import tree_from_payload, tree_to_payload

FORMAT_VERSION = 1

GRADIENT_BOOSTING = "gradient_boosting"
RANDOM_FOREST = "random_forest"
NAIVE_BAYES = "naive_bayes"
LOGISTIC_REGRESSION = "logistic_regression"

#: Artifact kinds in report order.
MODEL_KINDS = (GRADIENT_BOOSTING, RANDOM_FOREST, NAIVE_BAYES, LOGISTIC_REGRESSION)

KIND_DISPLAY = {
    GRADIENT_BOOSTING: "Gradient Boosting Classifier",
    RANDOM_FOREST: "Random Forest",
    NAIVE_BAYES: "Naive Bayes",
    LOGISTIC_REGRESSION: "Logistic Regression",
}


@dataclass(frozen=True)
class ModelArtifact:
    kind: str
    model: object
    imputer: ImputationPolicy
    normalizer: NormalizationParams
    feature_names: tuple[str, ...]
    train_config: dict = field(default_factory=dict)
    seed: int | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ArtifactError(f"unknown model kind {self.kind!r}")

    def transform(self, X_raw: np.ndarray) -> np.ndarray:
        """Apply the artifact's own imputation and normalization."""
        X = np.atleast_2d(np.asarray(X_raw, dtype=float))
        return normalize_matrix(self.normalizer, impute_matrix(self.imputer, X))

    def predict_proba(self, X_raw: np.ndarray) -> np.ndarray:
        """Probability of TRANSPLANTED from raw-domain features (NaN = missing)."""
        return self.model.predict_proba(self.transform(X_raw))

    def digest(self) -> str:
        return hashlib.sha256(_canonical(_body(self)).encode("utf-8")).hexdigest()


def _canonical(obj) -> str:
    try:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)
    except ValueError as exc:
        raise ArtifactError(f"artifact payload is not serializable: {exc}") from exc


def _floats(values) -> list:
    return [float(v) for v in values]


def _nan_to_none(matrix: np.ndarray) -> list:
    return [[None if np.isnan(v) else float(v) for v in row] for row in matrix]


def _none_to_nan(rows: list) -> np.ndarray:
    return np.array(
        [[np.nan if v is None else float(v) for v in row] for row in rows], dtype=float
    )


def _model_payload(kind: str, model) -> dict:
    if kind == LOGISTIC_REGRESSION:
        return {
            "intercept": model.intercept,
            "weights": _floats(model.weights),
            "iterations": model.iterations,
            "final_loss": model.final_loss,
            "converged": model.converged,
            "stop_reason": model.stop_reason,
        }
    if kind == NAIVE_BAYES:
        return {
            "priors": _floats(model.priors),
            "kinds": list(model.kinds),
            "means": _nan_to_none(model.means),
            "variances": _nan_to_none(model.variances),
            "bern_p": _nan_to_none(model.bern_p),
            "variance_floor": model.variance_floor,
        }
    if kind == RANDOM_FOREST:
        return {
            "trees": [tree_to_payload(t) for t in model.trees],
            "in_bag": [list(bag) for bag in model.in_bag],
            "n_rows": model.n_rows,
            "n_features": model.n_features,
            "mtry": model.mtry,
            "seed": model.seed,
            "config": {
                "n_tree": model.config.n_tree,
                "mtry": model.config.mtry,
                "max_depth": model.config.max_depth,
                "min_samples_leaf": model.config.min_samples_leaf,
                "bootstrap": model.config.bootstrap,
            },
        }
    if kind == GRADIENT_BOOSTING:
        return {
            "f0": model.f0,
            "base_rate": model.base_rate,
            "learning_rate": model.learning_rate,
            "trees": [tree_to_payload(t) for t in model.trees],
            "n_features": model.n_features,
            "deviance_trace": _floats(model.deviance_trace),
            "config": {
                "n_stages": model.config.n_stages,
                "learning_rate": model.config.learning_rate,
                "max_depth": model.config.max_depth,
                "min_samples_leaf": model.config.min_samples_leaf,
            },
        }
    raise ArtifactError(f"unknown model kind {kind!r}")


def _model_from_payload(kind: str, payload: dict, feature_names: tuple[str, ...]):
    if kind == LOGISTIC_REGRESSION:
        return LogisticModel(
            intercept=payload["intercept"],
            weights=np.array(payload["weights"], dtype=float),
            iterations=payload["iterations"],
            final_loss=payload["final_loss"],
            converged=payload["converged"],
            feature_names=feature_names,
            stop_reason=payload["stop_reason"],
        )
    if kind == NAIVE_BAYES:
        return NaiveBayesModel(
            priors=tuple(payload["priors"]),
            kinds=tuple(payload["kinds"]),
            means=_none_to_nan(payload["means"]),
            variances=_none_to_nan(payload["variances"]),
            bern_p=_none_to_nan(payload["bern_p"]),
            feature_names=feature_names,
            variance_floor=payload["variance_floor"],
        )
    if kind == RANDOM_FOREST:
        cfg = payload["config"]
        return ForestModel(
            trees=tuple(tree_from_payload(t) for t in payload["trees"]),
            in_bag=tuple(tuple(bag) for bag in payload["in_bag"]),
            n_rows=payload["n_rows"],
            n_features=payload["n_features"],
            mtry=payload["mtry"],
            seed=payload["seed"],
            config=ForestConfig(
                n_tree=cfg["n_tree"],
                mtry=cfg["mtry"],
                max_depth=cfg["max_depth"],
                min_samples_leaf=cfg["min_samples_leaf"],
                bootstrap=cfg["bootstrap"],
            ),
            feature_names=feature_names,
        )
    if kind == GRADIENT_BOOSTING:
        cfg = payload["config"]
        return BoostedModel(
            f0=payload["f0"],
            base_rate=payload["base_rate"],
            learning_rate=payload["learning_rate"],
            trees=tuple(tree_from_payload(t) for t in payload["trees"]),
            n_features=payload["n_features"],
            feature_names=feature_names,
            config=BoostingConfig(
                n_stages=cfg["n_stages"],
                learning_rate=cfg["learning_rate"],
                max_depth=cfg["max_depth"],
                min_samples_leaf=cfg["min_samples_leaf"],
            ),
            deviance_trace=tuple(payload["deviance_trace"]),
        )
    raise ArtifactVersionError(f"unknown model kind {kind!r}")


def _body(artifact: ModelArtifact) -> dict:
    return {
        "kind": artifact.kind,
        "feature_names": list(artifact.feature_names),
        "imputer": {
            "continuous_strategy": artifact.imputer.continuous_strategy,
            "binary_strategy": artifact.imputer.binary_strategy,
            "fills": _floats(artifact.imputer.fills or ()),
        },
        "normalizer": {
            "e_min": _floats(artifact.normalizer.e_min),
            "e_max": _floats(artifact.normalizer.e_max),
        },
        "model": _model_payload(artifact.kind, artifact.model),
        "train_config": artifact.train_config,
        "seed": artifact.seed,
        "extras": artifact.extras,
    }


def importance_extra(ranking: ImportanceRanking) -> dict:
    return {
        "features": list(ranking.features),
        "importances": _floats(ranking.importances),
    }


def inference_extra(rows: list[InferenceRow]) -> list[dict]:
    return [
        {
            "feature": r.feature,
            "coefficient": r.coefficient,
            "std_error": r.std_error,
            "p_value": r.p_value,
            "ci_low": r.ci_low,
            "ci_high": r.ci_high,
            "odds_ratio": r.odds_ratio,
            "important": r.important,
        }
        for r in rows
    ]


def importance_from_extra(extra: dict) -> ImportanceRanking:
    return ImportanceRanking(tuple(extra["features"]), tuple(extra["importances"]))


def inference_from_extra(rows: list[dict]) -> list[InferenceRow]:
    return [InferenceRow(**row) for row in rows]


def save_model(artifact: ModelArtifact, path: str | Path) -> str:
    """Write the artifact; returns its content digest."""
    body = _body(artifact)
    canonical_body = _canonical(body)
    digest = hashlib.sha256(canonical_body.encode("utf-8")).hexdigest()
    document = {"format_version": FORMAT_VERSION, "digest": digest, "body": body}
    Path(path).write_text(_canonical(document) + "\n", encoding="utf-8")
    return digest


def load_model(path: str | Path) -> ModelArtifact:
    """Read an artifact, checking the version tag and content digest first."""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ArtifactCorruptError(f"{path}: unreadable or truncated artifact ({exc})") from exc
    if not isinstance(document, dict) or "format_version" not in document:
        raise ArtifactCorruptError(f"{path}: not a model artifact")
    version = document["format_version"]
    if version != FORMAT_VERSION:
        raise ArtifactVersionError(
            f"{path}: format version {version} is not supported (expected {FORMAT_VERSION})"
        )
    body = document.get("body")
    declared = document.get("digest")
    actual = hashlib.sha256(_canonical(body).encode("utf-8")).hexdigest()
    if declared != actual:
        raise ArtifactCorruptError(f"{path}: digest mismatch; artifact is corrupt")
    feature_names = tuple(body["feature_names"])
    imputer = ImputationPolicy(
        continuous_strategy=body["imputer"]["continuous_strategy"],
        binary_strategy=body["imputer"]["binary_strategy"],
        fills=tuple(body["imputer"]["fills"]),
        feature_names=feature_names,
    )
    normalizer = NormalizationParams(
        e_min=tuple(body["normalizer"]["e_min"]),
        e_max=tuple(body["normalizer"]["e_max"]),
    )
    model = _model_from_payload(body["kind"], body["model"], feature_names)
    return ModelArtifact(
        kind=body["kind"],
        model=model,
        imputer=imputer,
        normalizer=normalizer,
        feature_names=feature_names,
        train_config=body.get("train_config", {}),
        seed=body.get("seed"),
        extras=body.get("extras", {}),
    )
