import io

import numpy as np
import pytest

from cauchymle import datasets as ds
from cauchymle.halfspace import INFINITY, is_infinity


def test_parse_univariate_with_infinity():
    text = io.StringIO("0\n1\ninf\n")
    vals = ds.parse_dataset(text, "univariate")
    assert vals[0] == 0.0 and vals[1] == 1.0
    assert is_infinity(vals[2])


def test_parse_univariate_infinity_case_insensitive():
    vals = ds.parse_dataset(io.StringIO("INF\nInf\n2.5\n"), "univariate")
    assert is_infinity(vals[0]) and is_infinity(vals[1])


def test_parse_multivariate_row():
    arr = ds.parse_dataset(io.StringIO("2,-3\n"), "multivariate")
    assert arr.shape == (1, 2)
    assert np.allclose(arr, [[2.0, -3.0]])


def test_parse_matrix_mode():
    arr = ds.parse_dataset(io.StringIO("1,0,0,1\n"), "matrix", rows=2, cols=2)
    assert arr.shape == (1, 2, 2)
    assert np.allclose(arr[0], np.eye(2))


def test_parse_regression_two_columns():
    ts, xs = ds.parse_dataset(io.StringIO("0,1.5\n1,-2\n"), "regression")
    assert np.allclose(ts, [0.0, 1.0])
    assert np.allclose(xs, [1.5, -2.0])


def test_parse_reports_line_numbers():
    with pytest.raises(ds.DataFormatError, match="line 2"):
        ds.parse_dataset(io.StringIO("1.0\nnot-a-number\n"), "univariate")


def test_parse_rejects_inconsistent_arity():
    with pytest.raises(ds.DataFormatError, match="line 2"):
        ds.parse_dataset(io.StringIO("1,2\n1,2,3\n"), "multivariate")


def test_parse_rejects_infinity_outside_univariate():
    with pytest.raises(ds.DataFormatError, match="univariate"):
        ds.parse_dataset(io.StringIO("1,inf\n"), "multivariate")
    with pytest.raises(ds.DataFormatError):
        ds.parse_dataset(io.StringIO("0,inf\n"), "regression")


def test_parse_rejects_wrong_matrix_arity():
    with pytest.raises(ds.DataFormatError, match="line 1"):
        ds.parse_dataset(io.StringIO("1,2,3\n"), "matrix", rows=2, cols=2)


def test_parse_empty_dataset():
    with pytest.raises(ds.DataFormatError):
        ds.parse_dataset(io.StringIO("\n\n"), "univariate")


def test_write_parse_round_trip_univariate(rng):
    data = list(rng.standard_normal(50)) + [INFINITY]
    text = ds.write_dataset(io.StringIO(), data, "univariate")
    back = ds.parse_dataset(io.StringIO(text), "univariate")
    assert len(back) == len(data)
    for a, b in zip(data, back):
        if is_infinity(a):
            assert is_infinity(b)
        else:
            assert a == b  # exact float round trip


def test_write_parse_round_trip_multivariate(rng):
    data = rng.standard_normal((20, 3)) * 1e6
    text = ds.write_dataset(io.StringIO(), data, "multivariate")
    back = ds.parse_dataset(io.StringIO(text), "multivariate")
    assert np.array_equal(back, data)


def test_write_parse_round_trip_matrix(rng):
    data = rng.standard_normal((5, 2, 3))
    text = ds.write_dataset(io.StringIO(), data, "matrix")
    back = ds.parse_dataset(io.StringIO(text), "matrix", rows=2, cols=3)
    assert np.array_equal(back, data)


def test_generate_deterministic_given_seed():
    spec = ds.GeneratorSpec(kind="cauchy1d", sample_size=100, seed=9, u=2.0,
                            v=0.5)
    a = ds.generate(spec)
    b = ds.generate(spec)
    assert np.array_equal(a, b)
    c = ds.generate(ds.GeneratorSpec(kind="cauchy1d", sample_size=100,
                                     seed=10, u=2.0, v=0.5))
    assert not np.array_equal(a, c)


def test_run_seeds_are_splittable():
    spec = ds.GeneratorSpec(kind="gaussian", sample_size=10, seed=3)
    r0 = ds.generate(spec, run_index=0)
    r1 = ds.generate(spec, run_index=1)
    assert not np.array_equal(r0, r1)
    assert np.array_equal(r0, ds.generate(spec, run_index=0))


def test_cauchy_sample_median():
    spec = ds.GeneratorSpec(kind="cauchy1d", sample_size=10**5, seed=1,
                            u=0.0, v=1.0)
    data = ds.generate(spec)
    assert abs(np.median(data)) < 0.02


def test_cauchy_sample_shifted_median():
    spec = ds.GeneratorSpec(kind="cauchy1d", sample_size=10**5, seed=2,
                            u=1000.0, v=10.0)
    data = ds.generate(spec)
    assert abs(np.median(data) - 1000.0) < 0.2


def test_mixture_component_frequencies():
    # separated components: the event x > 50 identifies component 2
    spec = ds.GeneratorSpec(kind="mixture", sample_size=10**5, seed=4,
                            weights=(0.9, 0.1),
                            components=((0.0, 1.0), (100.0, 1.0)))
    data = ds.generate(spec)
    assert abs(float(np.mean(data > 50.0)) - 0.1) < 0.02 * 0.1 + 0.005


def test_mixture_matches_population_cdf():
    from scipy.stats import norm
    spec = ds.GeneratorSpec(kind="mixture", sample_size=10**5, seed=4,
                            weights=(0.9, 0.1),
                            components=((0.0, 1.0), (100.0, 100.0)))
    data = ds.generate(spec)
    for thr in (-1.0, 0.0, 2.0, 50.0):
        expected = (0.9 * norm.cdf(thr, 0.0, 1.0)
                    + 0.1 * norm.cdf(thr, 100.0, 100.0))
        assert abs(float(np.mean(data < thr)) - expected) < 0.01


def test_gaussian_nd_sample_mean():
    mu = np.array([1.0, 2.0, 3.0, 4.0])
    cov = np.array([[1., 1., 1., 1.], [1., 2., 2., 2.],
                    [1., 2., 3., 3.], [1., 2., 3., 4.]])
    spec = ds.GeneratorSpec(kind="gaussian_nd", sample_size=10**5, seed=5,
                            mean_vector=mu, covariance=cov)
    data = ds.generate(spec)
    assert np.abs(data.mean(axis=0) - mu).max() < 0.05
    emp = np.cov(data.T)
    assert np.abs(emp - cov).max() < 0.1


def test_matrix_standard_is_cauchy_at_1x1():
    spec = ds.GeneratorSpec(kind="matrix_standard", sample_size=10**4, seed=6,
                            rows=1, cols=1)
    data = ds.generate(spec)
    assert data.shape == (10**4, 1, 1)
    vals = data[:, 0, 0]
    # ratio of independent standard normals is standard Cauchy: quartiles +-1
    q1, q3 = np.quantile(vals, [0.25, 0.75])
    assert abs(q1 + 1.0) < 0.05 and abs(q3 - 1.0) < 0.05


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        ds.GeneratorSpec(kind="nope", sample_size=10)
    with pytest.raises(ValueError):
        ds.GeneratorSpec(kind="gaussian", sample_size=0)
    with pytest.raises(ValueError):
        ds.GeneratorSpec(kind="cauchy1d", sample_size=5, v=0.0)
    with pytest.raises(ValueError):
        ds.GeneratorSpec(kind="mixture", sample_size=5, weights=(0.5, 0.4),
                         components=((0.0, 1.0), (1.0, 1.0)))
    with pytest.raises(ValueError):
        ds.GeneratorSpec(kind="gaussian_nd", sample_size=5,
                         mean_vector=np.zeros(2),
                         covariance=np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ValueError):
        ds.GeneratorSpec(kind="matrix_standard", sample_size=5, rows=0, cols=2)
