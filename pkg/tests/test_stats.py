import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluctwalk.errors import InputError, ParameterError
from fluctwalk.stats import (Sample, dkw_epsilon, ecdf_points, ks_statistic,
                             trend_test, wasserstein1)

floats = st.floats(min_value=-50, max_value=50, allow_nan=False)


def test_ks_identical_samples_zero():
    s = Sample(np.array([1.0, 2.0, 3.0]))
    assert ks_statistic(s, Sample(np.array([1.0, 2.0, 3.0]))).statistic == 0.0


def test_ks_disjoint_supports_one():
    a = Sample(np.array([0.0, 1.0]))
    b = Sample(np.array([5.0, 6.0]))
    assert ks_statistic(a, b).statistic == 1.0


def test_ks_against_uniform_cdf():
    # sample {0, 1} against U(0,1): sup gap is 1/2 at the lower breakpoint
    s = Sample(np.array([0.0, 1.0]))
    d = ks_statistic(s, lambda x: np.clip(x, 0, 1)).statistic
    assert d == 0.5


def test_ks_weighted_sample_uses_effective_size():
    s = Sample(np.array([0.0, 1.0, 2.0]), weights=np.array([1.0, 1.0, 2.0]))
    rep = ks_statistic(s, Sample(np.array([0.0, 1.0, 2.0])))
    assert rep.n1 == pytest.approx(16 / 6)
    assert rep.statistic == pytest.approx(abs(2 / 4 - 2 / 3))


def test_dkw_epsilon_formula():
    assert dkw_epsilon(100, 0.99) == pytest.approx(math.sqrt(math.log(200) / 200))
    with pytest.raises(ParameterError):
        dkw_epsilon(100, 1.5)


def test_empty_sample_rejected():
    with pytest.raises(InputError):
        ks_statistic(Sample(np.array([])), lambda x: x)


@given(st.lists(floats, min_size=1, max_size=60))
@settings(max_examples=1000, deadline=None)
def test_ecdf_shape(vals):
    xs, F = ecdf_points(Sample(np.array(vals)))
    assert np.all(np.diff(xs) > 0)
    assert np.all(np.diff(F) > 0)
    assert F[-1] == pytest.approx(1.0)


@given(st.lists(floats, min_size=1, max_size=40), st.lists(floats, min_size=1, max_size=40))
@settings(max_examples=1000, deadline=None)
def test_two_sample_ks_symmetric(a, b):
    sa, sb = Sample(np.array(a)), Sample(np.array(b))
    assert ks_statistic(sa, sb).statistic == pytest.approx(
        ks_statistic(sb, sa).statistic)


coarse = st.integers(-5000, 5000).map(lambda k: k / 100.0)


@given(st.lists(coarse, min_size=2, max_size=40), st.lists(coarse, min_size=2, max_size=40))
@settings(max_examples=1000, deadline=None)
def test_ks_invariant_under_increasing_transform(a, b):
    # injectivity must survive float rounding, hence the coarse grid
    sa, sb = Sample(np.array(a)), Sample(np.array(b))
    f = lambda x: np.exp(x / 50.0) + 0.1 * x
    ta, tb = Sample(f(np.array(a))), Sample(f(np.array(b)))
    assert ks_statistic(sa, sb).statistic == pytest.approx(
        ks_statistic(ta, tb).statistic)


def test_wasserstein_examples():
    assert wasserstein1(Sample(np.array([3.0])), Sample(np.array([3.0]))) == 0.0
    assert wasserstein1(Sample(np.array([0.0])), Sample(np.array([1.0]))) == 1.0
    assert wasserstein1(Sample(np.array([0.0, 0.0])),
                        Sample(np.array([0.0, 2.0]))) == 1.0


@given(st.lists(floats, min_size=1, max_size=30), st.integers(0, 2**16))
@settings(max_examples=300, deadline=None)
def test_wasserstein_matches_sorted_coupling(a, seed):
    rng = np.random.default_rng(seed)
    b = rng.normal(size=len(a)).tolist()
    w = wasserstein1(Sample(np.array(a)), Sample(np.array(b)))
    coupling = np.mean(np.abs(np.sort(a) - np.sort(b)))
    assert w == pytest.approx(coupling, abs=1e-9)


def test_ecdf_csv_rows():
    from fluctwalk.stats import ecdf_csv_rows
    rows = ecdf_csv_rows(Sample(np.array([2.0, 1.0, 2.0, 3.0])))
    assert rows[0] == ["x", "F"]
    assert rows[1:] == [[1.0, 0.25], [2.0, 0.75], [3.0, 1.0]]


def test_trend_examples():
    r = trend_test([(1, 4), (2, 2), (3, 1)])
    assert (r.violations, r.ratio) == (0, 0.25)
    r = trend_test([(1, 1), (2, 2), (3, 3)])
    assert (r.violations, r.ratio) == (2, 3.0)
    r = trend_test([(1, 4), (2, 5), (3, 1)])
    assert (r.violations, r.ratio) == (1, 0.25)
    with pytest.raises(InputError):
        trend_test([(1, 1), (2, 2)])


def test_one_sample_ks_calibration_against_known_cdf():
    # draws from the reference law exceed the 99% envelope rarely
    rng = np.random.default_rng(8)
    breaches = 0
    for _ in range(60):
        u = rng.random(400)
        rep = ks_statistic(Sample(u), lambda x: np.clip(x, 0, 1))
        breaches += rep.statistic > rep.dkw_epsilon
    assert breaches <= 3
