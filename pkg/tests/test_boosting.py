"""Gradient boosting: staged behaviour, deviance monotonicity, hand checks."""

import math

import numpy as np
import pytest
from scipy.special import expit

from kidney_dss.boosting import (
    BoostedModel,
    BoostingConfig,
    fit_gbc,
    predict_gbc,
    staged_scores,
)
from kidney_dss.errors import DataError, FitError
from kidney_dss.records import Dataset
from kidney_dss.synthetic import default_spec, generate_synthetic
from kidney_dss.trees import TreeNode, tree_regression_value, tree_to_payload


def toy_separable() -> Dataset:
    X = np.array([[0.1], [0.2], [0.3], [0.7], [0.8], [0.9]])
    y = np.array([0, 0, 0, 1, 1, 1])
    return Dataset(X, y, ("f0",))


def deviance_oracle(y: np.ndarray, probs: np.ndarray) -> float:
    """Oracle: mean deviance from probabilities, clamped away from 0/1."""
    p = np.clip(probs, 1e-15, 1 - 1e-15)
    return float(2.0 * np.mean(-(y * np.log(p) + (1 - y) * np.log(1 - p))))


class TestFit:
    def test_zero_stages_predicts_base_rate_exactly(self):
        ds = generate_synthetic(default_spec(80), seed=4)
        model = fit_gbc(ds, BoostingConfig(n_stages=0))
        base = float(ds.y.mean())
        assert model.base_rate == base
        out = predict_gbc(model, ds.X)
        assert (out == base).all()

    def test_zero_learning_rate_is_constant(self):
        ds = toy_separable()
        model = fit_gbc(ds, BoostingConfig(n_stages=5, learning_rate=0.0))
        staged = staged_scores(model, ds.X[0])
        assert len(staged) == 6
        assert (staged == staged[0]).all()
        assert staged[0] == model.base_rate

    def test_separable_deviance_decreases_and_fits(self):
        ds = toy_separable()
        model = fit_gbc(ds, BoostingConfig(n_stages=50, learning_rate=0.1, max_depth=2,
                                           min_samples_leaf=1))
        trace = np.array(model.deviance_trace)
        assert len(trace) == 51
        assert (np.diff(trace) < 0).all()  # strictly decreasing here
        pred = predict_gbc(model, ds.X)
        assert np.array_equal(pred >= 0.5, ds.y == 1)
        # Oracle: recompute the trace from per-record staged probabilities.
        staged = np.stack([staged_scores(model, x) for x in ds.X])
        for m in range(51):
            assert model.deviance_trace[m] == pytest.approx(
                deviance_oracle(ds.y.astype(float), staged[:, m]), abs=1e-9
            )

    def test_monotone_deviance_on_synthetic_runs(self):
        for seed in (1, 2):
            ds = generate_synthetic(default_spec(150), seed=seed)
            model = fit_gbc(ds, BoostingConfig(n_stages=40))
            assert (np.diff(model.deviance_trace) <= 0).all()

    def test_residual_targets_match_gradient_identity(self):
        ds = generate_synthetic(default_spec(60), seed=9)
        model = fit_gbc(ds, BoostingConfig(n_stages=8), keep_traces=True)
        y = ds.y.astype(float)
        F = np.full(ds.n_rows, model.f0)
        for m, tree in enumerate(model.trees):
            expected = y - expit(F)
            assert np.abs(model.residual_targets[m] - expected).max() < 1e-12
            F = F + model.learning_rate * tree_regression_value(tree, ds.X)

    def test_determinism(self):
        ds = generate_synthetic(default_spec(100), seed=3)
        a = fit_gbc(ds, BoostingConfig(n_stages=15))
        b = fit_gbc(ds, BoostingConfig(n_stages=15))
        assert a.f0 == b.f0
        assert a.deviance_trace == b.deviance_trace
        assert [tree_to_payload(t) for t in a.trees] == [tree_to_payload(t) for t in b.trees]

    def test_single_class_rejected(self):
        X = np.array([[0.1], [0.2]])
        with pytest.raises(DataError):
            fit_gbc(Dataset(X, np.array([1, 1]), ("f0",)))

    def test_invalid_config(self):
        with pytest.raises(FitError):
            BoostingConfig(n_stages=-1)
        with pytest.raises(FitError):
            BoostingConfig(learning_rate=-0.5)

    def test_stump_on_binary_feature_hand_arithmetic(self):
        # One perfectly predictive binary feature, four rows.  F0 = 0; the
        # first stump's Newton leaves are (sum residuals)/(sum p(1-p)):
        # left: (-0.5 * 2) / (0.25 * 2) = -2, right: +2.
        X = np.array([[0.0], [0.0], [1.0], [1.0]])
        y = np.array([0, 0, 1, 1])
        ds = Dataset(X, y, ("flag",))
        model = fit_gbc(ds, BoostingConfig(n_stages=1, learning_rate=0.1,
                                           max_depth=1, min_samples_leaf=1))
        assert model.f0 == 0.0
        root = model.trees[0]
        assert root.threshold == 0.5
        assert root.left.value == -2.0 and root.right.value == 2.0
        assert predict_gbc(model, X)[0] == pytest.approx(expit(-0.2), abs=1e-15)
        assert predict_gbc(model, X)[3] == pytest.approx(expit(0.2), abs=1e-15)
        assert model.deviance_trace[1] < model.deviance_trace[0]


class TestStagedScores:
    def test_no_stages_single_entry(self):
        ds = generate_synthetic(default_spec(40), seed=7)
        model = fit_gbc(ds, BoostingConfig(n_stages=0))
        staged = staged_scores(model, ds.X[0])
        assert staged.shape == (1,)
        assert staged[0] == model.base_rate

    def test_last_entry_equals_predict_exactly(self):
        ds = generate_synthetic(default_spec(90), seed=5)
        model = fit_gbc(ds, BoostingConfig(n_stages=25))
        for i in range(0, 90, 9):
            staged = staged_scores(model, ds.X[i])
            assert staged[-1] == predict_gbc(model, ds.X[i : i + 1])[0]

    def test_telescoping_oracle(self):
        # Oracle: rebuild each stage's probability from the cumulative sum of
        # individual tree outputs.
        ds = generate_synthetic(default_spec(70), seed=6)
        model = fit_gbc(ds, BoostingConfig(n_stages=12))
        x = ds.X[13]
        staged = staged_scores(model, x)
        total = 0.0
        assert staged[0] == model.base_rate
        for m, tree in enumerate(model.trees, start=1):
            total += float(tree_regression_value(tree, x.reshape(1, -1))[0])
            expected = expit(model.f0 + model.learning_rate * total)
            assert staged[m] == pytest.approx(expected, abs=1e-15)

    def test_hand_built_single_leaf_model(self):
        leaf_tree = TreeNode(value=3.0)
        model = BoostedModel(
            f0=0.4,
            base_rate=float(expit(0.4)),
            learning_rate=0.1,
            trees=(leaf_tree,),
            n_features=2,
            feature_names=("a", "b"),
            config=BoostingConfig(n_stages=1),
            deviance_trace=(0.0, 0.0),
        )
        out = predict_gbc(model, np.array([[5.0, 5.0]]))
        assert out[0] == pytest.approx(float(expit(0.4 + 0.1 * 3.0)), abs=1e-15)
