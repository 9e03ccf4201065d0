"""End-to-end pipeline: data, preprocessing, four model fits, evaluation,
and a deterministic export tree.

Every output lands under the configured directory; identical (config, seed)
pairs produce byte-identical trees.  Failures surface as StageError carrying
the stage name so the CLI can exit with a stage-specific code.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from . import boosting, forest, logistic, naive_bayes
from .artifact import (
    GRADIENT_BOOSTING,
    KIND_DISPLAY,
    LOGISTIC_REGRESSION,
    MODEL_KINDS,
    NAIVE_BAYES,
    RANDOM_FOREST,
    ModelArtifact,
    importance_extra,
    inference_extra,
    save_model,
)
from .config import ExperimentConfig
from .errors import StageError
from .evaluate import EvaluationRow, RocCurve, evaluate_model, render_report
from .preprocess import (
    OutlierReport,
    apply_imputer,
    apply_normalizer,
    detect_outliers,
    fit_imputer,
    fit_normalizer,
    shuffle_split,
    winsorize_outliers,
)
from .records import Dataset, parse_csv
from .synthetic import generate_synthetic


@dataclass
class ExperimentReport:
    rows: list[EvaluationRow]
    curves: dict[str, RocCurve]  # keyed by model kind
    report_text: str
    out_dir: Path
    artifacts: dict[str, ModelArtifact]
    digests: dict[str, str]
    outliers: OutlierReport


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_dataset(config: ExperimentConfig) -> Dataset:
    if config.data is not None:
        return parse_csv(config.data)
    return generate_synthetic(config.synthetic_spec(), config.seed)


def fit_all_models(train: Dataset, config: ExperimentConfig) -> dict[str, object]:
    """Fit the four classifiers on preprocessed training data, report order."""
    return {
        GRADIENT_BOOSTING: boosting.fit_gbc(train, config.boosting_config(), seed=config.seed),
        RANDOM_FOREST: forest.fit_forest(train, config.forest_config(), seed=config.seed),
        NAIVE_BAYES: naive_bayes.fit_nb(train),
        LOGISTIC_REGRESSION: logistic.fit_logistic(train, config.logistic_config()),
    }


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    with _stage("config"):
        config.validate(require_out=True)
        out_dir = Path(config.out)

    with _stage("data"):
        ds = load_dataset(config)

    with _stage("preprocess"):
        train_raw, test_raw = shuffle_split(
            ds, config.train_fraction, config.seed, stratify=config.stratify
        )
        imputer = fit_imputer(train_raw)
        train = apply_imputer(imputer, train_raw)
        test = apply_imputer(imputer, test_raw)
        outliers = detect_outliers(train, config.mad_cutoff)
        if config.winsorize:
            train = winsorize_outliers(train, outliers)
        normalizer = fit_normalizer(train)
        train = apply_normalizer(normalizer, train)
        test = apply_normalizer(normalizer, test)

    with _stage("train"):
        models = fit_all_models(train, config)
        inference = logistic.wald_report(models[LOGISTIC_REGRESSION], train)
        importance = forest.oob_importance(models[RANDOM_FOREST], train, seed=config.seed)

    with _stage("evaluate"):
        rows: list[EvaluationRow] = []
        curves: dict[str, RocCurve] = {}
        for kind in MODEL_KINDS:
            scores = models[kind].predict_proba(test.X)
            row, curve = evaluate_model(KIND_DISPLAY[kind], scores, test.y, config.threshold)
            rows.append(row)
            curves[kind] = curve

    with _stage("report"):
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "models").mkdir(exist_ok=True)
        report_text = render_report(rows)
        (out_dir / "report.txt").write_text(report_text, encoding="utf-8")
        (out_dir / "config.txt").write_text(config.to_text(), encoding="utf-8")
        _write_csv(
            out_dir / "metrics.csv",
            ["model", "accuracy", "sensitivity", "specificity", "balanced_accuracy", "auc_roc"],
            [
                [r.model, r.accuracy, r.sensitivity, r.specificity, r.balanced_accuracy, r.auc_roc]
                for r in rows
            ],
        )
        for kind in MODEL_KINDS:
            curve = curves[kind]
            _write_csv(
                out_dir / f"roc_{kind}.csv",
                ["model", "fpr", "tpr"],
                [[kind, x, t] for x, t in curve.points()],
            )
        _write_csv(
            out_dir / "importance.csv",
            ["feature", "importance", "rank"],
            [list(row) for row in importance.rows()],
        )
        _write_csv(
            out_dir / "inference.csv",
            [
                "feature",
                "coefficient",
                "std_error",
                "p_value",
                "ci_low",
                "ci_high",
                "odds_ratio",
                "important",
            ],
            [
                [r.feature, r.coefficient, r.std_error, r.p_value, r.ci_low, r.ci_high,
                 r.odds_ratio, r.important]
                for r in inference
            ],
        )
        _write_csv(
            out_dir / "outliers.csv",
            ["feature", "row_index"],
            [[name, i] for name, idx in outliers.flagged.items() for i in idx],
        )

    with _stage("artifact"):
        train_config = config.as_dict()
        artifacts: dict[str, ModelArtifact] = {}
        digests: dict[str, str] = {}
        for kind in MODEL_KINDS:
            extras = {}
            if kind == RANDOM_FOREST:
                extras["importance"] = importance_extra(importance)
            if kind == LOGISTIC_REGRESSION:
                extras["inference"] = inference_extra(inference)
            artifacts[kind] = ModelArtifact(
                kind=kind,
                model=models[kind],
                imputer=imputer,
                normalizer=normalizer,
                feature_names=tuple(train.feature_names),
                train_config=train_config,
                seed=config.seed,
                extras=extras,
            )
            digests[kind] = save_model(artifacts[kind], out_dir / "models" / f"{kind}.model")

    return ExperimentReport(
        rows=rows,
        curves=curves,
        report_text=report_text,
        out_dir=out_dir,
        artifacts=artifacts,
        digests=digests,
        outliers=outliers,
    )


def evaluate_artifacts(
    artifacts: dict[str, ModelArtifact], ds: Dataset, threshold: float = 0.5
) -> tuple[list[EvaluationRow], dict[str, RocCurve]]:
    """Score a raw-domain dataset with saved artifacts (their own transformers)."""
    rows = []
    curves = {}
    for kind in MODEL_KINDS:
        if kind not in artifacts:
            continue
        scores = artifacts[kind].predict_proba(ds.X)
        row, curve = evaluate_model(KIND_DISPLAY[kind], scores, ds.y, threshold)
        rows.append(row)
        curves[kind] = curve
    return rows, curves
