"""Evaluation metrics: rank AUC, fixed-rule accuracy, slacks, alignment."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocuniv.complexity import ComplexityError
from ocuniv.datasets import Dataset, LabeledTestSet, UniversumSet
from ocuniv.evaluation import (
    EvalReport,
    EvaluationError,
    auc_roc,
    correlation_diagnostic,
    evaluate,
    margin_slacks,
)
from ocuniv.models import FeatureMapSpec, Model, decide, forward, init_model

TIE_HEAVY_SCORES = st.lists(
    st.integers(min_value=-8, max_value=8).map(float), min_size=1, max_size=60
)


def identity_model(w):
    w = np.asarray(w, dtype=float)
    return Model(FeatureMapSpec("identity"), input_dim=w.size, hidden_weights=[], w=w)


def mlp_model(input_dim=3, widths=(5, 4), seed=0):
    return init_model(FeatureMapSpec("mlp", layer_widths=widths, seed=seed), input_dim)


def pairwise_auc(pos, neg):
    pos = np.asarray(pos, dtype=float)[:, None]
    neg = np.asarray(neg, dtype=float)[None, :]
    return float((np.sum(pos > neg) + 0.5 * np.sum(pos == neg)) / (pos.size * neg.size))


# ----------------------------------------------------------------------- auc


def test_auc_perfect_separation():
    assert auc_roc([3.0, 2.0, 1.5], [1.0, 0.0]) == 1.0


def test_auc_all_ties():
    assert auc_roc([0.7, 0.7], [0.7, 0.7, 0.7]) == 0.5


def test_auc_hand_mixed_case():
    # 3 of 4 pairs ordered correctly
    assert auc_roc([0.9, 0.4], [0.5, 0.1]) == 0.75


def test_auc_empty_class_rejected():
    with pytest.raises(EvaluationError, match="non-empty"):
        auc_roc([], [1.0])
    with pytest.raises(EvaluationError, match="non-empty"):
        auc_roc([1.0], [])


def test_auc_non_finite_rejected():
    with pytest.raises(EvaluationError, match="finite"):
        auc_roc([np.nan], [1.0])


@given(TIE_HEAVY_SCORES, TIE_HEAVY_SCORES)
@settings(max_examples=200, deadline=None)
def test_auc_rank_statistic_equals_pairwise_enumeration(pos, neg):
    assert auc_roc(pos, neg) == pairwise_auc(pos, neg)


def test_auc_rank_equals_pairwise_at_thousand_squared():
    rng = np.random.default_rng(0)
    pos = rng.integers(0, 20, size=1000).astype(float)
    neg = rng.integers(0, 20, size=1000).astype(float)
    assert auc_roc(pos, neg) == pairwise_auc(pos, neg)


@given(TIE_HEAVY_SCORES, TIE_HEAVY_SCORES,
       st.floats(min_value=0.5, max_value=2.0), st.floats(min_value=-5.0, max_value=5.0))
@settings(max_examples=100, deadline=None)
def test_auc_invariant_under_increasing_transform(pos, neg, a, b):
    # a*x + b on a coarse grid keeps order and ties exactly
    transformed = auc_roc(a * np.asarray(pos) + b, a * np.asarray(neg) + b)
    assert transformed == auc_roc(pos, neg)


def test_auc_swap_complements_to_one_without_ties():
    rng = np.random.default_rng(1)
    values = rng.permutation(40).astype(float)
    pos, neg = values[:15], values[15:]
    assert auc_roc(pos, neg) + auc_roc(neg, pos) == 1.0


# -------------------------------------------------------------------- slacks


def test_slacks_hand_values():
    model = identity_model([1.0])
    data = Dataset(np.array([[2.0], [0.0], [1.0], [-3.0]]))
    assert np.array_equal(margin_slacks(model, data), [0.0, 1.0, 0.0, 4.0])


def test_slacks_recompose_from_forward():
    model = mlp_model(seed=3)
    data = Dataset(np.random.default_rng(4).normal(size=(20, 3)))
    scores, _ = forward(model, data.x)
    assert np.array_equal(margin_slacks(model, data), np.maximum(0.0, 1.0 - scores))


def test_zero_slack_iff_decided_positive():
    model = mlp_model(seed=5)
    x = np.random.default_rng(6).normal(size=(50, 3))
    slacks = margin_slacks(model, Dataset(x))
    scores, _ = forward(model, x)
    assert np.array_equal(slacks == 0.0, decide(scores) == 1.0)


# ----------------------------------------------------------------- alignment


def test_alignment_identity_map_raw_equals_features():
    model = identity_model([0.3, -0.7])
    rng = np.random.default_rng(7)
    data = Dataset(rng.normal(size=(6, 2)))
    univ = UniversumSet(rng.normal(size=(4, 2)))
    raw, features = correlation_diagnostic(model, data, univ)
    assert raw == features


def test_alignment_orthogonal_raw_is_zero():
    model = identity_model([1.0, 1.0, 1.0, 1.0])
    data = Dataset(np.hstack([np.ones((5, 2)), np.zeros((5, 2))]))
    univ = UniversumSet(np.hstack([np.zeros((3, 2)), np.ones((3, 2))]))
    raw, _ = correlation_diagnostic(model, data, univ)
    assert raw == 0.0


def test_alignment_degenerate_inputs_propagate():
    model = identity_model([1.0, 1.0])
    with pytest.raises(ComplexityError, match="undefined"):
        correlation_diagnostic(model, Dataset(np.zeros((3, 2))), UniversumSet(np.ones((2, 2))))


# ----------------------------------------------------------------- evaluate


def two_class_test(pos_x, neg_x):
    x = np.vstack([pos_x, neg_x])
    y = np.concatenate([np.ones(len(pos_x)), -np.ones(len(neg_x))])
    return LabeledTestSet(x, y)


def test_evaluate_constant_scorer():
    # zero weights score everything 0 < 1, so the rule says -1 across the board
    model = identity_model([0.0, 0.0])
    rng = np.random.default_rng(8)
    test = two_class_test(rng.normal(size=(30, 2)), rng.normal(size=(70, 2)))
    report = evaluate(model, test)
    assert report.auc == 0.5
    assert report.accuracy == 0.7
    assert report.tp_rate == 0.0
    assert report.tn_rate == 1.0


def test_evaluate_perfect_model():
    model = identity_model([1.0, 0.0])
    test = two_class_test(np.array([[3.0, 0.5], [2.0, -1.0]]), np.array([[-3.0, 0.5]]))
    report = evaluate(model, test)
    assert report.auc == 1.0
    assert report.accuracy == 1.0
    assert report.tp_rate == 1.0 and report.tn_rate == 1.0


def test_evaluate_recomposes_field_by_field():
    model = mlp_model(seed=9)
    rng = np.random.default_rng(10)
    test = two_class_test(rng.normal(size=(25, 3)), rng.normal(size=(35, 3)))
    train = Dataset(rng.normal(size=(12, 3)))
    univ = UniversumSet(rng.normal(size=(8, 3)))
    report = evaluate(model, test, univ=univ, train=train)
    scores, _ = forward(model, test.x)
    predicted = decide(scores)
    assert report.auc == auc_roc(scores[test.y > 0], scores[test.y < 0])
    assert report.accuracy == np.mean(predicted == test.y)
    assert report.tp_rate == np.mean(predicted[test.y > 0] == 1.0)
    assert report.tn_rate == np.mean(predicted[test.y < 0] == -1.0)
    assert np.array_equal(report.xi, margin_slacks(model, train))
    raw, features = correlation_diagnostic(model, train, univ)
    assert (report.sigma_inf_raw, report.sigma_inf_features) == (raw, features)


def test_evaluate_slacks_fall_back_to_test_positives():
    model = identity_model([0.5, 0.5])
    rng = np.random.default_rng(11)
    pos = rng.normal(size=(9, 2))
    test = two_class_test(pos, rng.normal(size=(6, 2)))
    report = evaluate(model, test)
    assert np.array_equal(report.xi, margin_slacks(model, Dataset(pos)))
    assert report.sigma_inf_raw is None
    assert report.sigma_inf_features is None


def test_evaluate_threshold_parameter_moves_the_rule():
    model = identity_model([1.0])
    test = two_class_test(np.array([[0.6]]), np.array([[0.2]]))
    assert evaluate(model, test).accuracy == 0.5
    assert evaluate(model, test, threshold=0.5).accuracy == 1.0


def test_evaluate_single_class_test_rejected():
    model = identity_model([1.0])
    test = LabeledTestSet(np.array([[1.0], [2.0]]), np.array([1.0, 1.0]))
    with pytest.raises(EvaluationError, match="non-empty"):
        evaluate(model, test)


def test_report_rejects_out_of_range_rates():
    with pytest.raises(EvaluationError, match="auc"):
        EvalReport(auc=1.5, accuracy=0.5, tp_rate=0.5, tn_rate=0.5, xi=np.zeros(1))
