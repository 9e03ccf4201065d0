"""Shared fixtures: a small but complete experiment run reused by the
artifact, service and acceptance tests, plus helpers for building datasets."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.special import expit

from kidney_dss.config import ExperimentConfig
from kidney_dss.experiment import run_experiment
from kidney_dss.records import FEATURE_BOUNDS, FEATURE_NAMES, Dataset, feature_kind


def small_config(out, seed: int = 11, **overrides) -> ExperimentConfig:
    """Experiment config sized for fast test runs."""
    cfg = ExperimentConfig(
        out=str(out),
        seed=seed,
        synthetic_n=400,
        forest_n_tree=40,
        boosting_n_stages=60,
        logistic_max_iters=3000,
    )
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


def noisy_dataset(seed: int = 42, n: int = 200, d: int = 3) -> Dataset:
    """Non-separable Bernoulli data with a finite logistic optimum."""
    rng = np.random.default_rng(seed)
    X = rng.random((n, d))
    w = rng.normal(0.0, 1.0, size=d)
    p = expit(-0.3 + X @ w)
    y = (rng.random(n) < p).astype(int)
    if y.min() == y.max():  # ensure both classes
        y[0] = 1 - y[0]
    return Dataset(X, y, tuple(f"f{j}" for j in range(d)))


def random_raw_records(rng: np.random.Generator, n: int) -> list[dict]:
    """Raw-domain donor dicts with occasional missing fields."""
    records = []
    for _ in range(n):
        rec = {}
        for name in FEATURE_NAMES:
            if rng.random() < 0.15:
                continue  # missing
            if feature_kind(name) == "binary":
                rec[name] = float(rng.integers(0, 2))
            else:
                lo, hi = FEATURE_BOUNDS[name]
                hi = hi if hi is not None else 80.0
                rec[name] = float(lo + (hi - lo) * rng.random())
        records.append(rec)
    return records


def record_to_vector(rec: dict) -> np.ndarray:
    return np.array(
        [rec.get(name, np.nan) for name in FEATURE_NAMES], dtype=float
    )


@pytest.fixture(scope="session")
def experiment_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("experiment") / "run"
    return run_experiment(small_config(out))


@pytest.fixture(scope="session")
def models_dir(experiment_report):
    return experiment_report.out_dir / "models"


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {status} {name}", flush=True)
