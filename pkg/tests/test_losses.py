import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocuniv.losses import (
    UniversumMargins,
    binary_cost_sensitive_loss,
    hinge_train_loss,
    softplus_train_loss,
    universum_loss,
    universum_loss_two_hinge,
)

finite_score = st.floats(min_value=-10.0, max_value=10.0)
delta_value = st.floats(min_value=0.0, max_value=3.0)


def central_diff(fn, s, h=1e-6):
    return (fn(s + h) - fn(s - h)) / (2 * h)


# hinge

def test_hinge_boundary_sample_is_free():
    loss, grad = hinge_train_loss([1.0])
    assert loss == 0.0
    assert grad.tolist() == [0.0]


def test_hinge_direct_value():
    loss, _ = hinge_train_loss([0.5])
    assert loss == 0.5


def test_hinge_elementwise_sum():
    loss, grad = hinge_train_loss([2.0, 0.3, -1.0])
    assert loss == pytest.approx(0.0 + 0.7 + 2.0, abs=1e-15)
    assert grad.tolist() == [0.0, -1.0, -1.0]


def test_hinge_rejects_nonfinite():
    with pytest.raises(ValueError):
        hinge_train_loss([np.inf])


# softplus

def test_softplus_at_boundary_is_log2():
    loss, _ = softplus_train_loss([1.0])
    assert loss == pytest.approx(np.log(2.0), rel=1e-15)


def test_softplus_dominates_hinge():
    s = np.linspace(-20, 20, 401)
    sp, _ = softplus_train_loss(s)
    hi, _ = hinge_train_loss(s)
    for v in s:
        lv, _ = softplus_train_loss([v])
        hv, _ = hinge_train_loss([v])
        assert lv >= hv
    assert sp >= hi


def test_softplus_no_overflow_far_from_margin():
    loss, grad = softplus_train_loss([-30.0])
    assert loss == pytest.approx(31.0, abs=1e-9)
    loss_hi, grad_hi = softplus_train_loss([1e6])
    assert loss_hi == 0.0
    assert grad_hi[0] == 0.0
    assert grad[0] == pytest.approx(-1.0, abs=1e-12)


def test_softplus_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    for s in rng.uniform(-8, 8, size=50):
        _, grad = softplus_train_loss([s])
        num = central_diff(lambda v: softplus_train_loss([v])[0], s)
        assert grad[0] == pytest.approx(num, abs=1e-4)


# universum margins and losses

def test_margins_exact_offsets():
    m = UniversumMargins(0.25)
    assert m.epsilon1 == 1.0 - 0.25
    assert m.epsilon2 == -1.0 - 0.25


def test_margins_reject_negative_delta():
    with pytest.raises(ValueError):
        UniversumMargins(-0.1)


def test_universum_loss_boundary_score_free_for_any_delta():
    for delta in (0.0, 0.3, 2.0):
        loss, grad = universum_loss([1.0], UniversumMargins(delta))
        assert loss == 0.0
        assert grad[0] == 0.0


def test_universum_loss_direct_values():
    loss, _ = universum_loss([0.5], UniversumMargins(0.0))
    assert loss == 0.5
    loss, _ = universum_loss([2.5], UniversumMargins(0.5))
    assert loss == pytest.approx(1.0, abs=1e-15)


def test_two_hinge_direct_values():
    m0 = UniversumMargins(0.0)
    loss, _ = universum_loss_two_hinge([0.5], m0)
    assert loss == 0.5
    loss, _ = universum_loss_two_hinge([2.0], m0)
    assert loss == 1.0


def test_two_hinge_equals_insensitive_on_grid():
    grid = np.linspace(-3.0, 3.0, 61)
    for delta in (0.0, 0.1, 0.5, 1.0):
        m = UniversumMargins(delta)
        for s in grid:
            a, ga = universum_loss([s], m)
            b, gb = universum_loss_two_hinge([s], m)
            assert abs(a - b) <= 1e-12
            assert ga[0] == gb[0]


@given(finite_score, delta_value)
@settings(max_examples=300)
def test_two_hinge_equals_insensitive_random(s, delta):
    m = UniversumMargins(delta)
    a, _ = universum_loss([s], m)
    b, _ = universum_loss_two_hinge([s], m)
    assert abs(a - b) <= 1e-12


@given(finite_score, delta_value)
@settings(max_examples=200)
def test_universum_loss_zero_iff_inside_band(s, delta):
    loss, _ = universum_loss([s], UniversumMargins(delta))
    assert (loss == 0.0) == (abs(1.0 - s) <= delta)


def test_universum_subgradient_signs():
    m = UniversumMargins(0.5)
    _, g = universum_loss([3.0, 1.2, -2.0], m)
    assert g.tolist() == [1.0, 0.0, -1.0]
    # exact kink: flat-side rule gives 0
    _, g = universum_loss([1.5], m)
    assert g[0] == 0.0
    _, g = universum_loss_two_hinge([1.5], m)
    assert g[0] == 0.0


def test_universum_subgradient_finite_differences_away_from_kinks():
    rng = np.random.default_rng(1)
    m = UniversumMargins(0.4)
    kinks = (1.0 - m.delta, 1.0 + m.delta)
    checked = 0
    for s in rng.uniform(-4, 4, size=200):
        if min(abs(s - k) for k in kinks) < 1e-3:
            continue
        for fn in (universum_loss, universum_loss_two_hinge):
            _, grad = fn([s], m)
            num = central_diff(lambda v: fn([v], m)[0], s)
            assert grad[0] == pytest.approx(num, abs=1e-4)
        checked += 1
    assert checked > 150


# binary cost-sensitive

def test_binary_loss_zero_when_separated():
    loss, (gp, gn) = binary_cost_sensitive_loss([2.0, 1.5], [-2.0, -1.1], 100.0, 1.0)
    assert loss == 0.0
    assert np.all(gp == 0.0) and np.all(gn == 0.0)


def test_binary_loss_direct_value():
    loss, _ = binary_cost_sensitive_loss([0.0], [0.0], 2.0, 1.0)
    assert loss == 3.0


def test_binary_loss_gradients():
    _, (gp, gn) = binary_cost_sensitive_loss([0.0, 2.0], [0.0, -2.0], 5.0, 2.0)
    assert gp.tolist() == [-5.0, 0.0]
    assert gn.tolist() == [2.0, 0.0]


def test_binary_loss_rejects_nonpositive_costs():
    with pytest.raises(ValueError):
        binary_cost_sensitive_loss([1.0], [1.0], 0.0, 1.0)


# convexity: midpoint check on random score pairs

@given(st.integers(0, 10_000))
@settings(max_examples=100)
def test_losses_convex_midpoint(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-6, 6, size=5)
    b = rng.uniform(-6, 6, size=5)
    mid = 0.5 * (a + b)
    m = UniversumMargins(rng.uniform(0, 2))
    for fn in (
        hinge_train_loss,
        softplus_train_loss,
        lambda s: universum_loss(s, m),
        lambda s: universum_loss_two_hinge(s, m),
    ):
        assert fn(mid)[0] <= 0.5 * (fn(a)[0] + fn(b)[0]) + 1e-12
    fb = lambda sp, sn: binary_cost_sensitive_loss(sp, sn, 3.0, 1.5)[0]
    assert fb(mid, -mid) <= 0.5 * (fb(a, -a) + fb(b, -b)) + 1e-12
