"""Command-line interface: generate, train, evaluate, experiment, importance,
serve.  Pipeline failures exit with a stage-specific nonzero code."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import forest as forest_mod
from . import logistic as logistic_mod
from .artifact import (
    LOGISTIC_REGRESSION,
    MODEL_KINDS,
    RANDOM_FOREST,
    ModelArtifact,
    importance_extra,
    inference_extra,
    load_model,
    save_model,
)
from .config import ExperimentConfig, load_config
from .errors import (
    ArtifactError,
    ConfigError,
    DataError,
    FitError,
    InferenceError,
    ParseError,
    SchemaError,
    StageError,
    ToolkitError,
    ValidationError,
)
from .evaluate import render_report
from .experiment import evaluate_artifacts, fit_all_models, run_experiment
from .preprocess import apply_imputer, apply_normalizer, fit_imputer, fit_normalizer
from .records import Dataset, parse_csv, write_csv
from .server import DEFAULT_PORT
from .synthetic import SyntheticSpec, generate_synthetic

STAGE_CODES = {
    "config": 2,
    "data": 3,
    "preprocess": 4,
    "train": 5,
    "evaluate": 6,
    "report": 7,
    "artifact": 8,
}

TYPE_CODES = (
    (ConfigError, 2),
    (SchemaError, 3),
    (ParseError, 3),
    (ValidationError, 3),
    (DataError, 4),
    (FitError, 5),
    (InferenceError, 5),
    (ArtifactError, 8),
)


def _cmd_generate(args) -> int:
    spec = SyntheticSpec(
        n_rows=args.n,
        positive_fraction=args.positive_fraction,
        noise_columns=args.noise_columns,
    )
    ds = generate_synthetic(spec, args.seed)
    write_csv(ds, args.out)
    print(f"wrote {ds.n_rows} rows ({int(ds.y.sum())} transplanted) to {args.out}")
    return 0


def _experiment_config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "data", None) is not None:
        config.data = args.data
    if getattr(args, "out", None) is not None:
        config.out = args.out
    if getattr(args, "train_fraction", None) is not None:
        config.train_fraction = args.train_fraction
    if getattr(args, "threshold", None) is not None:
        config.threshold = args.threshold
    if getattr(args, "stratify", None) is not None:
        config.stratify = True
    return config


def _cmd_experiment(args) -> int:
    report = run_experiment(_experiment_config(args))
    print(report.report_text, end="")
    print(f"outputs written under {report.out_dir}")
    return 0


def _cmd_train(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        config.seed = args.seed
    ds = parse_csv(args.data)
    imputer = fit_imputer(ds)
    train = apply_imputer(imputer, ds)
    normalizer = fit_normalizer(train)
    train = apply_normalizer(normalizer, train)
    models = fit_all_models(train, config)
    kinds = MODEL_KINDS if args.model == "all" else (args.model,)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for kind in kinds:
        extras = {}
        if kind == RANDOM_FOREST:
            ranking = forest_mod.oob_importance(models[kind], train, seed=config.seed)
            extras["importance"] = importance_extra(ranking)
        if kind == LOGISTIC_REGRESSION:
            rows = logistic_mod.wald_report(models[kind], train)
            extras["inference"] = inference_extra(rows)
        artifact = ModelArtifact(
            kind=kind,
            model=models[kind],
            imputer=imputer,
            normalizer=normalizer,
            feature_names=tuple(train.feature_names),
            train_config=config.as_dict(),
            seed=config.seed,
            extras=extras,
        )
        digest = save_model(artifact, out_dir / f"{kind}.model")
        print(f"saved {kind} ({digest[:12]}) to {out_dir / f'{kind}.model'}")
    return 0


def _load_artifacts(models_dir: str) -> dict[str, ModelArtifact]:
    models_dir = Path(models_dir)
    artifacts = {}
    for kind in MODEL_KINDS:
        path = models_dir / f"{kind}.model"
        if path.exists():
            artifacts[kind] = load_model(path)
    if not artifacts:
        raise ArtifactError(f"no model artifacts found under {models_dir}")
    return artifacts


def _cmd_evaluate(args) -> int:
    artifacts = _load_artifacts(args.models)
    ds = parse_csv(args.data)
    rows, curves = evaluate_artifacts(artifacts, ds, args.threshold)
    text = render_report(rows)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.txt").write_text(text, encoding="utf-8")
        print(f"report written to {out_dir / 'report.txt'}")
    print(text, end="")
    return 0


def _cmd_importance(args) -> int:
    artifacts = _load_artifacts(args.models)
    if RANDOM_FOREST not in artifacts:
        raise ArtifactError("importance requires a saved random_forest artifact")
    artifact = artifacts[RANDOM_FOREST]
    ds = parse_csv(args.data)
    transformed = Dataset(artifact.transform(ds.X), ds.y, artifact.feature_names)
    ranking = forest_mod.oob_importance(artifact.model, transformed, seed=args.seed)
    lines = ["feature,importance,rank"]
    lines += [f"{name},{imp!r},{rank}" for name, imp, rank in ranking.rows()]
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"importance written to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    from .server import serve

    serve(args.models, port=args.port, threshold=args.threshold)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kidney-dss",
        description="Predict whether a procured deceased-donor kidney will be "
        "transplanted or discarded.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic donor cohort CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=584)
    p.add_argument("--positive-fraction", type=float, default=89.0 / 146.0)
    p.add_argument("--noise-columns", type=int, default=0)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", help="fit models on a CSV and save artifacts")
    p.add_argument("--data", required=True, help="training CSV")
    p.add_argument("--out", required=True, help="artifact output directory")
    p.add_argument("--config", help="hyperparameter config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--model", choices=("all",) + MODEL_KINDS, default="all")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="score a CSV with saved artifacts")
    p.add_argument("--models", required=True, help="artifact directory")
    p.add_argument("--data", required=True, help="evaluation CSV")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", help="optional report output directory")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("experiment", help="run the full pipeline end to end")
    p.add_argument("--config", help="experiment config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--data", default=None, help="input CSV (default: synthetic cohort)")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--train-fraction", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--stratify", action="store_const", const=True, default=None,
                   help="stratify the train/test split by outcome class")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("importance", help="recompute OOB permutation importance")
    p.add_argument("--models", required=True, help="artifact directory")
    p.add_argument("--data", required=True, help="the CSV the forest was trained on")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_importance)

    p = sub.add_parser("serve", help="start the prediction HTTP service")
    p.add_argument("--models", required=True, help="artifact directory")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return STAGE_CODES.get(exc.stage, 1)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for etype, code in TYPE_CODES:
            if isinstance(exc, etype):
                return code
        return 1


if __name__ == "__main__":
    sys.exit(main())
