import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gagam.baselines import BASELINE_LAM, BASELINE_SPLINES, baseline_gam_spec, fit_cart, predict_cart
from gagam.gam import assemble_design


def test_baseline_spec(rng):
    spec = baseline_gam_spec(8)
    assert all(t.n_splines == BASELINE_SPLINES and t.lam == BASELINE_LAM and not t.scale for t in spec.terms)
    X = rng.uniform(size=(300, 8))
    assert assemble_design(spec, X).matrix.shape == (300, 8 * 25 + 1)
    with pytest.raises(ValueError):
        baseline_gam_spec(0)


def test_constant_target_single_leaf(rng):
    tree = fit_cart(rng.normal(size=(30, 3)), np.full(30, 2.5))
    assert tree.is_leaf and tree.value == 2.5
    np.testing.assert_array_equal(predict_cart(tree, rng.normal(size=(4, 3))), 2.5)


def test_step_function():
    x = np.arange(10.0)[:, None]
    y = (x[:, 0] >= 5).astype(float)
    tree = fit_cart(x, y)
    assert (tree.feature, tree.threshold) == (0, 4.5)
    assert tree.left.is_leaf and tree.right.is_leaf and tree.depth() == 1
    np.testing.assert_array_equal(predict_cart(tree, x), y)


def test_threshold_routing_is_inclusive_left():
    x = np.array([[0.0], [1.0]])
    tree = fit_cart(x, np.array([0.0, 1.0]))
    assert tree.threshold == 0.5
    assert predict_cart(tree, [[0.5]])[0] == 0.0
    assert predict_cart(tree, [[0.5000001]])[0] == 1.0


def test_tie_prefers_first_feature():
    x = np.arange(8.0)
    X = np.column_stack([x, x])
    tree = fit_cart(X, (x > 3).astype(float))
    assert tree.feature == 0


def test_memorizes_distinct_rows(rng):
    X = rng.normal(size=(150, 3))
    y = rng.normal(size=150)
    tree = fit_cart(X, y)
    np.testing.assert_array_equal(predict_cart(tree, X), y)
    assert tree.n_leaves() == 150


def test_duplicate_inputs_predict_group_mean():
    X = np.array([[0.0], [0.0], [1.0], [1.0]])
    y = np.array([1.0, 3.0, 5.0, 9.0])
    np.testing.assert_allclose(predict_cart(fit_cart(X, y), X), [2, 2, 7, 7])


def test_min_samples_leaf():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(200, 2))
    tree = fit_cart(X, rng.normal(size=200), min_samples_leaf=10)

    def leaves(n):
        return [n] if n.is_leaf else leaves(n.left) + leaves(n.right)

    assert min(n.n_samples for n in leaves(tree)) >= 10


@given(st.integers(0, 5000))
@settings(max_examples=30, deadline=None)
def test_row_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 5, size=(40, 2)).astype(float)
    y = rng.normal(size=40)
    perm = rng.permutation(40)
    Xt = rng.uniform(-1, 6, size=(25, 2))
    a = predict_cart(fit_cart(X, y), Xt)
    b = predict_cart(fit_cart(X[perm], y[perm]), Xt)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@given(st.integers(0, 5000))
@settings(max_examples=30, deadline=None)
def test_every_split_reduces_sse(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(60, 3))
    y = X[:, 0] ** 2 + rng.normal(size=60)
    tree = fit_cart(X, y, min_samples_leaf=3)

    def sse(idx):
        return float(np.sum((y[idx] - y[idx].mean()) ** 2))

    def walk(node, idx):
        if node.is_leaf:
            return
        go = X[idx, node.feature] <= node.threshold
        assert sse(idx[go]) + sse(idx[~go]) < sse(idx)
        walk(node.left, idx[go])
        walk(node.right, idx[~go])

    walk(tree, np.arange(60))
