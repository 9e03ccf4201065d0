"""HTTP decision-support service over saved model artifacts.

Stateless: artifacts load once at startup and are never mutated; every
request replays the artifact's own imputation and normalization before
predicting, so online answers match offline ones bit for bit.  Responses are
JSON with shortest round-trip float encoding, preserving exact doubles.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .artifact import (
    GRADIENT_BOOSTING,
    LOGISTIC_REGRESSION,
    MODEL_KINDS,
    RANDOM_FOREST,
    ModelArtifact,
    importance_from_extra,
    inference_from_extra,
    load_model,
)
from .errors import ArtifactError, ValidationError
from .records import CONTINUOUS, FEATURE_BOUNDS, FEATURE_NAMES, feature_kind, validate_value

DEFAULT_PORT = 8321

#: The recommended model, surfaced first to decision-support consumers.
PRIMARY_MODEL = GRADIENT_BOOSTING


class ModelRegistry:
    """Immutable bundle of loaded artifacts plus the decision threshold."""

    def __init__(self, artifacts: dict[str, ModelArtifact], threshold: float = 0.5):
        self.artifacts = dict(artifacts)
        self.digests = {kind: art.digest() for kind, art in self.artifacts.items()}
        self.threshold = float(threshold)

    @classmethod
    def from_dir(cls, models_dir: str | Path, threshold: float = 0.5) -> "ModelRegistry":
        models_dir = Path(models_dir)
        artifacts = {}
        for kind in MODEL_KINDS:
            path = models_dir / f"{kind}.model"
            if path.exists():
                artifacts[kind] = load_model(path)
        if not artifacts:
            raise ArtifactError(f"no model artifacts found under {models_dir}")
        return cls(artifacts, threshold)

    @property
    def ready(self) -> bool:
        return all(kind in self.artifacts for kind in MODEL_KINDS)

    def record_vector(self, body: dict) -> np.ndarray:
        """Validate a JSON record; absent or null fields become NaN (imputed)."""
        if not isinstance(body, dict):
            raise ValidationError("record must be a JSON object")
        unknown = set(body) - set(FEATURE_NAMES)
        if unknown:
            raise ValidationError(f"unknown field(s): {', '.join(sorted(unknown))}")
        vec = np.full(len(FEATURE_NAMES), np.nan)
        for j, name in enumerate(FEATURE_NAMES):
            value = body.get(name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name}: expected a number, got {value!r}")
            vec[j] = validate_value(name, float(value))
        return vec

    def predict_payload(self, vec: np.ndarray) -> dict:
        predictions = {}
        for kind in MODEL_KINDS:
            artifact = self.artifacts[kind]
            probability = float(artifact.predict_proba(vec)[0])
            predictions[kind] = {
                "probability": probability,
                "transplant_likely": bool(probability >= self.threshold),
                "digest": self.digests[kind],
            }
        used = self.artifacts[PRIMARY_MODEL].transform(vec)[0]
        return {
            "threshold": self.threshold,
            "primary_model": PRIMARY_MODEL,
            "predictions": predictions,
            "features_used": {name: float(used[j]) for j, name in enumerate(FEATURE_NAMES)},
        }

    def whatif_payload(self, vec: np.ndarray, feature: str, lo: float, hi: float, steps: int) -> dict:
        points = []
        j = FEATURE_NAMES.index(feature)
        for value in np.linspace(lo, hi, steps):
            swept = vec.copy()
            swept[j] = float(value)
            prediction = self.predict_payload(swept)
            points.append(
                {
                    "value": float(value),
                    "probabilities": {
                        kind: prediction["predictions"][kind]["probability"]
                        for kind in MODEL_KINDS
                    },
                }
            )
        return {"feature": feature, "lo": float(lo), "hi": float(hi), "points": points}


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _not_ready() -> JSONResponse:
    return _error(503, "model artifacts are not loaded yet")


def create_app(
    models_dir: str | Path | None = None,
    threshold: float = 0.5,
    registry: ModelRegistry | None = None,
) -> FastAPI:
    """Build the service; with no models it answers 503 until restarted."""
    app = FastAPI(title="kidney-dss", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if registry is None and models_dir is not None:
        registry = ModelRegistry.from_dir(models_dir, threshold)
    app.state.registry = registry

    @app.get("/health")
    async def health():
        reg: ModelRegistry | None = app.state.registry
        return {
            "status": "ok",
            "models_loaded": bool(reg and reg.ready),
            "kinds": sorted(reg.artifacts) if reg else [],
        }

    @app.post("/predict")
    async def predict(request: Request):
        reg: ModelRegistry | None = app.state.registry
        if reg is None or not reg.ready:
            return _not_ready()
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        try:
            vec = reg.record_vector(body)
        except ValidationError as exc:
            return _error(400, str(exc))
        return reg.predict_payload(vec)

    @app.post("/whatif")
    async def whatif(request: Request):
        reg: ModelRegistry | None = app.state.registry
        if reg is None or not reg.ready:
            return _not_ready()
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        try:
            vec = reg.record_vector(body.get("record") or {})
            feature = body.get("feature")
            if feature not in FEATURE_NAMES:
                raise ValidationError(f"unknown sweep feature {feature!r}")
            if feature_kind(feature) != CONTINUOUS:
                raise ValidationError(f"{feature}: only continuous features can be swept")
            steps = body.get("steps")
            if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
                raise ValidationError("steps must be an integer >= 2")
            lo, hi = body.get("lo"), body.get("hi")
            for label, v in (("lo", lo), ("hi", hi)):
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ValidationError(f"{label} must be a finite number")
            if lo > hi:
                raise ValidationError(f"sweep range is inverted: lo {lo} > hi {hi}")
            bound_lo, bound_hi = FEATURE_BOUNDS[feature]
            if bound_lo is not None and lo < bound_lo:
                raise ValidationError(f"{feature}: sweep lo {lo} below domain minimum {bound_lo}")
            if bound_hi is not None and hi > bound_hi:
                raise ValidationError(f"{feature}: sweep hi {hi} above domain maximum {bound_hi}")
        except ValidationError as exc:
            return _error(400, str(exc))
        return reg.whatif_payload(vec, feature, float(lo), float(hi), steps)

    @app.get("/importance")
    async def importance():
        reg: ModelRegistry | None = app.state.registry
        if reg is None or not reg.ready:
            return _not_ready()
        extra = reg.artifacts[RANDOM_FOREST].extras.get("importance")
        if extra is None:
            return _error(503, "the forest artifact carries no importance ranking")
        ranking = importance_from_extra(extra)
        return {
            "entries": [
                {"feature": name, "importance": imp, "rank": rank}
                for name, imp, rank in ranking.rows()
            ]
        }

    @app.get("/inference")
    async def inference():
        reg: ModelRegistry | None = app.state.registry
        if reg is None or not reg.ready:
            return _not_ready()
        extra = reg.artifacts[LOGISTIC_REGRESSION].extras.get("inference")
        if extra is None:
            return _error(503, "the logistic artifact carries no inference table")
        rows = inference_from_extra(extra)
        return {
            "rows": [
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
        }

    return app


def serve(models_dir: str | Path, port: int = DEFAULT_PORT, threshold: float = 0.5) -> None:
    import uvicorn

    app = create_app(models_dir=models_dir, threshold=threshold)
    uvicorn.run(app, host="127.0.0.1", port=port)
