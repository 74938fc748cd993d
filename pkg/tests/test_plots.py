"""ROC series math and figure rendering to files."""

import numpy as np
import matplotlib.pyplot as plt
from hypothesis import given, settings
from hypothesis import strategies as st

from ocuniv.datasets import LabeledTestSet
from ocuniv.evaluation import auc_roc
from ocuniv.models import FeatureMapSpec, Model, init_model
from ocuniv.plots import (
    boundary_figure,
    boundary_grid,
    roc_figure,
    roc_points,
    sigma_curve_figure,
    sweep_figure,
    trace_figure,
)

SCORE_LISTS = st.lists(st.integers(min_value=-6, max_value=6).map(float),
                       min_size=1, max_size=40)


def identity_model(w):
    w = np.asarray(w, dtype=float)
    return Model(FeatureMapSpec(kind="identity", layer_widths=()), len(w), [], w)


# ------------------------------------------------------------- roc series


def test_roc_hand_example():
    fpr, tpr = roc_points([2.0, 1.0], [0.0])
    assert np.array_equal(fpr, [0.0, 0.0, 0.0, 1.0, 1.0])
    assert np.array_equal(tpr, [0.0, 0.5, 1.0, 1.0, 1.0])


def test_roc_series_monotone_with_unit_endpoints():
    rng = np.random.default_rng(0)
    fpr, tpr = roc_points(rng.normal(size=50), rng.normal(size=70))
    assert fpr[0] == 0.0 and tpr[0] == 0.0 and fpr[-1] == 1.0 and tpr[-1] == 1.0
    assert np.all(np.diff(fpr) >= 0.0) and np.all(np.diff(tpr) >= 0.0)


@settings(max_examples=150, deadline=None)
@given(SCORE_LISTS, SCORE_LISTS)
def test_roc_area_equals_rank_auc(pos, neg):
    # ties produce simultaneous jumps; the trapezoid credits them by half,
    # exactly like midranks
    fpr, tpr = roc_points(pos, neg)
    area = np.trapezoid(tpr, fpr)
    assert abs(area - auc_roc(pos, neg)) <= 1e-12


# ------------------------------------------------------------ figure files


def test_roc_figure_writes_png(tmp_path):
    fpr, tpr = roc_points([2.0, 1.0], [0.0, 0.5])
    out = roc_figure(fpr, tpr, 0.875, tmp_path / "roc.png")
    assert out.stat().st_size > 0
    assert plt.get_fignums() == []


def test_sigma_curve_figure_writes_png(tmp_path):
    gammas = [0.0, 0.1, 1.0, 10.0]
    out = sigma_curve_figure(gammas, [0.0, 0.2, 0.5, 0.7], 0.8, tmp_path / "s.png")
    assert out.stat().st_size > 0


def test_trace_figure_handles_zero_universum(tmp_path):
    objective = np.geomspace(10.0, 0.1, 50)
    out = trace_figure(objective, objective * 0.5, np.zeros(50), tmp_path / "t.png")
    assert out.stat().st_size > 0


def test_sweep_figure_writes_png(tmp_path):
    out = sweep_figure(["a", "b"], [0.7, 0.9], [0.01, 0.02], tmp_path / "sw.png")
    assert out.stat().st_size > 0


# -------------------------------------------------------------- boundary


def test_boundary_grid_matches_scores_of_linear_model():
    model = identity_model([1.0, 0.0])
    xs = np.array([-1.0, 0.0, 2.0])
    ys = np.array([5.0, 7.0])
    grid = boundary_grid(model, xs, ys)
    assert grid.shape == (2, 3)
    assert np.array_equal(grid, np.tile(xs, (2, 1)))


def test_boundary_figure_writes_png(tmp_path):
    rng = np.random.default_rng(1)
    test = LabeledTestSet(rng.normal(size=(30, 2)),
                          np.concatenate([np.ones(15), -np.ones(15)]))
    model = init_model(FeatureMapSpec(kind="mlp", layer_widths=(4,), seed=0), 2)
    out = boundary_figure(model, 1.0, rng.normal(size=(5, 2)), test,
                          rng.normal(size=(8, 2)), tmp_path / "b.png",
                          resolution=40)
    assert out.stat().st_size > 0
    assert plt.get_fignums() == []
