import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from subdcor.empirical import (
    Direction,
    JointTable,
    conditional,
    encode,
    encode_columns,
    flatten_features,
    joint_counts,
    marginal,
)
from subdcor.errors import EmptyTableError, InvalidInputError

TABLE = JointTable(np.array([[1, 1], [0, 2]]))


def test_encode_orders_by_raw_value():
    ds = encode([(5, 1), (3, 1), (5, 2)])
    assert ds.supports == (2, 2)
    assert ds.x_categories == {3: 0, 5: 1}
    assert ds.x_codes.tolist() == [1, 0, 1]
    assert ds.y_codes.tolist() == [0, 0, 1]


def test_encode_singleton():
    ds = encode([("a", "a")])
    assert ds.supports == (1, 1)
    assert ds.n == 1


def test_encode_empty():
    with pytest.raises(InvalidInputError):
        encode([])


def test_encode_dictionary_is_observed_support(rng):
    pmf = np.array([0.5, 0.3, 0.15, 0.05])
    values = np.array([10, 20, 30, 40])
    x = values[rng.choice(4, size=2000, p=pmf)]
    y = rng.integers(0, 3, size=2000)
    ds = encode_columns(x, y)
    assert set(ds.x_categories) == set(x.tolist())
    assert set(ds.y_categories) == set(y.tolist())
    assert list(ds.x_categories.values()) == list(range(ds.x_support))


def test_encode_is_deterministic(rng):
    pairs = list(zip(rng.integers(0, 5, 50).tolist(), rng.integers(0, 7, 50).tolist()))
    a, b = encode(pairs), encode(pairs)
    assert a.x_categories == b.x_categories and a.y_categories == b.y_categories
    assert np.array_equal(a.x_codes, b.x_codes) and np.array_equal(a.y_codes, b.y_codes)


def test_joint_counts_small():
    ds = encode_columns([0, 0, 1], [0, 1, 1])
    jt = joint_counts(ds, (2, 2))
    np.testing.assert_array_equal(jt.counts, [[1, 1], [0, 1]])
    assert jt.total == 3


def test_joint_counts_wider_supports():
    ds = encode_columns([0, 1], [0, 0])
    assert joint_counts(ds, (3, 2)).counts.shape == (3, 2)


def test_joint_counts_code_out_of_range():
    ds = encode_columns([0, 1, 2], [0, 0, 1])
    with pytest.raises(InvalidInputError):
        joint_counts(ds, (2, 2))


def test_joint_counts_uniform_binomial(rng):
    n = 10_000
    ds = encode_columns(rng.integers(0, 2, n), rng.integers(0, 2, n))
    sigma = np.sqrt(n * 0.25 * 0.75)
    assert np.all(np.abs(joint_counts(ds).counts - 2500) < 3 * sigma)


def test_joint_table_permutation_invariant(rng):
    x, y = rng.integers(0, 4, 300), rng.integers(0, 3, 300)
    perm = rng.permutation(300)
    assert joint_counts(encode_columns(x, y)) == joint_counts(encode_columns(x[perm], y[perm]))


def test_marginals():
    np.testing.assert_allclose(marginal(TABLE, "x"), [0.5, 0.5])
    np.testing.assert_allclose(marginal(TABLE, "y"), [0.25, 0.75])


def test_marginal_empty_table():
    with pytest.raises(EmptyTableError):
        marginal(JointTable(np.zeros((2, 2), dtype=int)), "x")


def test_conditional_given_x():
    np.testing.assert_allclose(conditional(TABLE, "x"), [[0.5, 0.5], [0, 1]])


def test_conditional_zero_row():
    c = conditional(JointTable(np.array([[2, 2], [0, 0]])), "x")
    np.testing.assert_array_equal(c[1], [0, 0])


def test_flatten_forward():
    marg, cond = flatten_features(TABLE, Direction.FORWARD)
    np.testing.assert_allclose(marg, [0.5, 0.5])
    np.testing.assert_allclose(cond, [0.5, 0.5, 0, 1])


def test_flatten_backward():
    # Column y0 = (1, 0), column y1 = (1, 2) -> p(x|y1) = (1/3, 2/3).
    marg, cond = flatten_features(TABLE, "backward")
    np.testing.assert_allclose(marg, [0.25, 0.75])
    np.testing.assert_allclose(cond, [1, 0, 1 / 3, 2 / 3])


tables = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(0, 30))
).filter(lambda a: a.sum() > 0)


@settings(max_examples=100, deadline=None)
@given(tables)
def test_table_properties(counts):
    jt = JointTable(counts)
    for axis in ("x", "y"):
        assert marginal(jt, axis).sum() == pytest.approx(1.0, abs=1e-12)
    px = marginal(jt, "x")
    cond = conditional(jt, "x")
    for i in np.flatnonzero(px > 0):
        np.testing.assert_allclose(px[i] * cond[i], counts[i] / counts.sum(), atol=1e-12)
        assert cond[i].sum() == pytest.approx(1.0, abs=1e-12)
    for d in Direction:
        _, flat = flatten_features(jt, d)
        assert flat.size == counts.shape[0] * counts.shape[1]
