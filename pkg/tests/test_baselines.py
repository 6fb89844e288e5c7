import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtaikit import errors
from dtaikit.baselines import apply_minmax, interpolate, normalize_minmax, random_weight_score, sample_dataset
from dtaikit.model import ColumnSchema, DesignSet

SCHEMA = (ColumnSchema("x"), ColumnSchema("y"), ColumnSchema.categorical("m", ["p", "q", "r"]))


def make_set(rng, m=50, perf=True):
    X = rng.normal(size=(m, 2))
    L = rng.integers(0, 3, (m, 1))
    P = np.abs(rng.normal(size=(m, 2))) + 0.1 if perf else None
    return DesignSet(SCHEMA, X, L, performance=P, adjusted=perf)


def rows(ds):
    return {tuple(v) + tuple(lab) for v, lab in zip(ds.values.tolist(), ds.labels.tolist())}


# ------------------------------------------------------------ dataset sampling


def test_sample_250_from_4500(rng):
    ds = make_set(rng, 4500)
    out = sample_dataset(ds, 250, seed=1)
    assert len(out) == 250
    assert rows(out) <= rows(ds)
    assert out.performance.shape == (250, 2)


def test_sample_carries_matching_performance(rng):
    ds = make_set(rng, 30)
    out = sample_dataset(ds, 40, seed=2)
    lookup = {tuple(v): tuple(p) for v, p in zip(ds.values.tolist(), ds.performance.tolist())}
    for v, p in zip(out.values.tolist(), out.performance.tolist()):
        assert lookup[tuple(v)] == tuple(p)


def test_sample_singleton(rng):
    ds = make_set(rng, 1)
    out = sample_dataset(ds, 1, seed=0)
    np.testing.assert_array_equal(out.values, ds.values)


def test_sample_deterministic(rng):
    ds = make_set(rng)
    a, b = sample_dataset(ds, 20, 9), sample_dataset(ds, 20, 9)
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_sample_errors(rng):
    empty = DesignSet(SCHEMA, np.zeros((0, 2)), np.zeros((0, 1), int))
    with pytest.raises(errors.EmptyDataset):
        sample_dataset(empty, 3, 0)
    with pytest.raises(errors.InvalidParameter):
        sample_dataset(make_set(rng), 0, 0)
    with pytest.raises(errors.InvalidParameter):
        sample_dataset(make_set(rng), 3, -1)


# --------------------------------------------------------------- interpolation


def pair():
    return DesignSet(SCHEMA, [[0.0, 0.0], [2.0, 4.0]], [[0], [2]])


def parents(seed, count, m):
    g = np.random.default_rng(seed)
    return g.integers(0, m, size=count), g.integers(0, m, size=count)


def test_interpolate_endpoints(rng):
    ds = make_set(rng)
    i1, i2 = parents(4, 30, len(ds))
    one = interpolate(ds, 30, 4, gamma=1.0)
    zero = interpolate(ds, 30, 4, gamma=0.0)
    np.testing.assert_array_equal(one.values, ds.values[i1])
    np.testing.assert_array_equal(one.labels, ds.labels[i1])
    np.testing.assert_array_equal(zero.values, ds.values[i2])
    np.testing.assert_array_equal(zero.labels, ds.labels[i2])


def test_interpolate_affine_example():
    ds = pair()
    i1, i2 = parents(0, 64, 2)
    out = interpolate(ds, 64, 0, gamma=0.25)
    hits = np.flatnonzero((i1 == 0) & (i2 == 1))
    assert hits.size > 0
    for k in hits:
        np.testing.assert_allclose(out.values[k], [1.5, 3.0])
        assert out.labels[k, 0] == 2  # gamma < 0.5 takes d2's label


def test_interpolate_no_performance(rng):
    out = interpolate(make_set(rng), 10, 0)
    assert out.performance is None and out.feasible is None


def test_interpolate_needs_two(rng):
    with pytest.raises(errors.TooFewDesigns):
        interpolate(make_set(rng, 1), 5, 0)


def test_interpolate_deterministic(rng):
    ds = make_set(rng)
    np.testing.assert_array_equal(interpolate(ds, 25, 3).values, interpolate(ds, 25, 3).values)


@given(st.integers(0, 2**32 - 1))
def test_interpolate_in_parent_hull(seed):
    ds = make_set(np.random.default_rng(seed), 20)
    i1, i2 = parents(seed, 40, 20)
    out = interpolate(ds, 40, seed)
    lo = np.minimum(ds.values[i1], ds.values[i2])
    hi = np.maximum(ds.values[i1], ds.values[i2])
    assert np.all(out.values >= lo - 1e-12) and np.all(out.values <= hi + 1e-12)
    assert np.all((out.labels == ds.labels[i1]) | (out.labels == ds.labels[i2]))


# -------------------------------------------------------------- random weights


def test_random_weight_constant():
    assert random_weight_score([0.3, 0.3, 0.3], 5) == pytest.approx(0.3, abs=1e-15)


def test_random_weight_matches_scratch_draw():
    w = np.random.default_rng(42).exponential(1.0, 3)
    w = w / w.sum()
    p = [0.2, 0.9, 0.5]
    assert random_weight_score(p, 42) == pytest.approx(float(np.dot(w, p)), abs=1e-15)
    assert random_weight_score([0.0, 1.0, 0.0], 42) == pytest.approx(w[1], abs=1e-15)


def test_random_weight_out_of_range():
    with pytest.raises(errors.OutOfRange) as info:
        random_weight_score([0.5, 1.1], 0)
    assert info.value.index == 1
    assert random_weight_score([1.0 + 1e-10, 0.0], 0) <= 1.0


@given(st.lists(st.floats(0, 1), min_size=1, max_size=8), st.integers(0, 2**63))
def test_random_weight_bounded(p, seed):
    v = random_weight_score(p, seed)
    assert min(p) - 1e-12 <= v <= max(p) + 1e-12


# ------------------------------------------------------------------- min-max


def perf_only(P):
    P = np.asarray(P, dtype=float)
    return DesignSet((ColumnSchema("x"),), np.zeros((len(P), 1)), performance=P, adjusted=True)


def test_minmax_basic():
    norm, (lo, hi) = normalize_minmax(perf_only([[1.0], [3.0]]))
    np.testing.assert_array_equal(norm[:, 0], [0.0, 1.0])
    assert apply_minmax([[5.0]], (lo, hi))[0, 0] == 1.0
    assert apply_minmax([[0.0]], (lo, hi))[0, 0] == 0.0


def test_minmax_constant():
    with pytest.raises(errors.ConstantObjective) as info:
        normalize_minmax(perf_only([[1.0, 2.0], [3.0, 2.0]]))
    assert info.value.index == 1


def test_minmax_needs_performance():
    with pytest.raises(errors.NoPerformance):
        normalize_minmax(DesignSet((ColumnSchema("x"),), np.zeros((2, 1))))
