import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gagam.dataset import (
    CALIFORNIA_FEATURES,
    DataError,
    Dataset,
    apply_scaler,
    fit_scaler,
    invert_scaler,
    load_csv,
    make_split,
    save_csv,
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_toy_csv(tmp_path):
    p = write(tmp_path, "a,b,y\n1,2,3\n4,5,6\n7,8,10\n")
    d = load_csv(p, "y")
    assert (d.n_rows, d.n_features) == (3, 2)
    assert d.feature_names == ("a", "b")
    np.testing.assert_array_equal(d.target, [3, 6, 10])


def test_target_column_removed_and_order_kept(tmp_path):
    p = write(tmp_path, "y,b,a\n1,2,3\n4,5,6\n7,8,9\n")
    d = load_csv(p, "y")
    assert d.feature_names == ("b", "a")
    np.testing.assert_array_equal(d.features[:, 1], [3, 6, 9])


def test_california_header_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    d = Dataset(rng.normal(size=(12, 8)), rng.normal(size=12), CALIFORNIA_FEATURES)
    save_csv(d, tmp_path / "cal.csv")
    back = load_csv(tmp_path / "cal.csv")
    assert back.feature_names == CALIFORNIA_FEATURES
    np.testing.assert_array_equal(back.features, d.features)
    np.testing.assert_array_equal(back.target, d.target)


def test_na_cell_reports_row_and_column(tmp_path):
    p = write(tmp_path, "a,b,y\n1,2,3\n4,NA,6\n7,8,9\n")
    with pytest.raises(DataError, match=r"row 2, column 'b'"):
        load_csv(p, "y")


@pytest.mark.parametrize(
    "text,target,match",
    [
        ("a,b,y\n1,2,3\n4,5,6\n7,8,9\n", "MedHouseVal", "not in header"),
        ("a,b,y\n1,2,3\n4,5,nan\n7,8,9\n", "y", "non-finite"),
        ("a,b,y\n1,2,3\n4,5\n7,8,9\n", "y", "expected 3 cells"),
        ("a,b,y\n", "y", "no data rows"),
    ],
)
def test_load_errors(tmp_path, text, target, match):
    with pytest.raises(DataError, match=match):
        load_csv(write(tmp_path, text), target)


def test_missing_file():
    with pytest.raises(DataError, match="not found"):
        load_csv("/nonexistent/file.csv")


def test_dataset_invariants():
    with pytest.raises(DataError):
        Dataset(np.ones((3, 2)), np.ones(3), ("a",))
    with pytest.raises(DataError, match="finite"):
        Dataset(np.ones((4, 2)), [1, 2, np.inf, 4], ("a", "b"))
    with pytest.raises(DataError, match="rows"):
        Dataset(np.ones((4, 2)), np.ones(4), ("a", "b")).subset([0])


def test_split_small():
    s = make_split(10, 0.2, 42)
    assert len(s.train_val_indices) == 8 and len(s.test_indices) == 2
    assert not set(s.train_val_indices) & set(s.test_indices)
    assert sorted(set(s.train_val_indices) | set(s.test_indices)) == list(range(10))


def test_split_deterministic():
    a, b = make_split(100, 0.3, 7), make_split(100, 0.3, 7)
    np.testing.assert_array_equal(a.test_indices, b.test_indices)
    np.testing.assert_array_equal(a.train_val_indices, b.train_val_indices)
    assert not np.array_equal(make_split(100, 0.3, 8).test_indices, a.test_indices)


def test_split_california_size():
    # round(0.2 * 20640) = 4128
    s = make_split(20640, 0.2, 7)
    assert (len(s.train_val_indices), len(s.test_indices)) == (16512, 4128)


@pytest.mark.parametrize("n,frac", [(3, 0.1), (10, 0.99), (10, 0.0), (10, 1.0)])
def test_split_degenerate(n, frac):
    with pytest.raises(DataError):
        make_split(n, frac, 0)


@given(n=st.integers(2, 400), frac=st.floats(0.01, 0.99), seed=st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_split_partition_property(n, frac, seed):
    n_test = int(round(frac * n))
    if n_test in (0, n):
        return
    s = make_split(n, frac, seed)
    assert len(s.test_indices) == n_test
    assert np.array_equal(np.sort(np.concatenate([s.train_val_indices, s.test_indices])), np.arange(n))


def test_scaler_hand_values():
    X = np.array([[1.0, 5.0], [2.0, 5.5], [3.0, 7.0]])
    st_ = fit_scaler(X, [0])
    Z = apply_scaler(st_, X)
    # population stddev of [1, 2, 3] is sqrt(2/3)
    np.testing.assert_allclose(Z[:, 0], [-1.224744871391589, 0.0, 1.224744871391589], atol=1e-12)
    np.testing.assert_array_equal(Z[:, 1], X[:, 1])


def test_scaler_idempotent_on_standardized(rng):
    X = rng.normal(size=(50, 3))
    Z = apply_scaler(fit_scaler(X, [0, 1, 2]), X)
    Z2 = apply_scaler(fit_scaler(Z, [0, 1, 2]), Z)
    np.testing.assert_allclose(Z2, Z, atol=1e-12)
    np.testing.assert_allclose(Z.mean(axis=0), 0, atol=1e-12)
    np.testing.assert_allclose(Z.std(axis=0), 1, atol=1e-12)


def test_scaler_zero_variance():
    X = np.column_stack([np.arange(5.0), np.full(5, 3.0)])
    with pytest.raises(DataError, match="zero-variance"):
        fit_scaler(X, [1])
    fit_scaler(X, [0])


def test_scaler_leak_free(rng):
    X = rng.normal(size=(40, 3))
    split = make_split(40, 0.25, 3)
    a = fit_scaler(X[split.train_val_indices], [0, 2])
    X2 = X.copy()
    X2[split.test_indices] = 1e6
    b = fit_scaler(X2[split.train_val_indices], [0, 2])
    np.testing.assert_array_equal(a.mean, b.mean)
    np.testing.assert_array_equal(a.std, b.std)


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_scaler_round_trip(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(20, 4)) * rng.uniform(0.1, 100, 4) + rng.normal(0, 50, 4)
    s = fit_scaler(X, [0, 3])
    np.testing.assert_allclose(invert_scaler(s, apply_scaler(s, X)), X, atol=1e-10, rtol=0)
