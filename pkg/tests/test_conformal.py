import math

import numpy as np
import pytest
from scipy import integrate, optimize

from cauchymle import cauchy, conformal
from cauchymle.descent import DescentConfig, FitStatus
from cauchymle.gradcheck import random_hpoint, random_htangent
from cauchymle.halfspace import INFINITY, HPoint, exp_map


def test_loss_equals_univariate_cauchy_loss_at_n1(rng):
    # through the dictionary (u, v) -> T = [[1, -u], [-u, u^2 + v^2]] / v the
    # two loss surfaces are identical, constants included
    for _ in range(50):
        z = random_hpoint(1, rng)
        data = rng.standard_normal((6, 1))
        got = conformal.loss(z, data, 1)
        T = np.array([[1.0, -z.b[0]],
                      [-z.b[0], z.b[0] ** 2 + z.a ** 2]]) / z.a
        want = cauchy.loss(T, cauchy.lift(data[:, 0]))
        assert got == pytest.approx(want, rel=1e-12)


def test_loss_two_unit_vectors():
    z = HPoint(1.0, [0.0, 0.0])
    data = [np.array([1.0, 0.0]), np.array([-1.0, 0.0])]
    assert conformal.loss(z, data, 2) == pytest.approx(2.0 * math.log(2.0))


def test_loss_translation_invariance(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        z = random_hpoint(n, rng)
        data = rng.standard_normal((5, n))
        shift = rng.standard_normal(n)
        a = conformal.loss(z, data, n)
        b = conformal.loss(HPoint(z.a, z.b + shift), data + shift, n)
        assert a == pytest.approx(b, abs=1e-12)


def test_grad_symmetric_data_has_no_center_component():
    z = HPoint(1.3, [0.0, 0.0])
    x = np.array([0.7, -0.4])
    g = conformal.grad(z, [x, -x], 2)
    assert np.allclose(g.db, 0.0, atol=1e-15)


def test_grad_single_datum_norm_is_n(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        z = random_hpoint(n, rng)
        x = rng.standard_normal(n) * 2
        g = conformal.grad(z, [x], n)
        assert g.norm() == pytest.approx(n, abs=1e-10)


def test_grad_matches_finite_differences(rng):
    h = 1e-5
    for _ in range(100):
        n = int(rng.integers(1, 4))
        z = random_hpoint(n, rng)
        data = list(rng.standard_normal((5, n)))
        if rng.random() < 0.3:
            data.append(INFINITY)
        v = random_htangent(z, rng)
        f = lambda t: conformal.loss(exp_map(z, v, t), data, n)
        fd = (f(h) - f(-h)) / (2 * h)
        g = conformal.grad(z, data, n)
        an = (g.da * v.da + float(g.db @ v.db)) / (z.a * z.a)
        assert abs(an - fd) / max(abs(fd), 1e-8) < 1e-6


def test_loss_convexity_along_geodesics(rng):
    h = 1e-3
    for _ in range(200):
        n = int(rng.integers(1, 3))
        z = random_hpoint(n, rng)
        data = list(rng.standard_normal((4, n)))
        v = random_htangent(z, rng)
        f = lambda t: conformal.loss(exp_map(z, v, t), data, n)
        second = (f(h) - 2 * f(0.0) + f(-h)) / (h * h)
        assert second >= -1e-6


def test_fit_symmetric_pair_matches_univariate():
    z, report = conformal.fit([np.array([-1.0]), np.array([1.0])], 1)
    assert report.status is FitStatus.CONVERGED
    assert z.b[0] == pytest.approx(0.0, abs=1e-9)
    assert z.a == pytest.approx(1.0, abs=1e-9)


def test_fit_four_unit_vectors():
    data = [np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
            np.array([0.0, 1.0]), np.array([0.0, -1.0])]
    z, report = conformal.fit(data, 2)
    assert report.status is FitStatus.CONVERGED
    assert np.allclose(z.b, 0.0, atol=1e-9)
    assert z.a == pytest.approx(1.0, abs=1e-9)


def test_fit_matches_univariate_cauchy_argmin(rng):
    config = DescentConfig(max_iters=5000)
    for _ in range(20):
        data = rng.standard_normal(12) * (1 + rng.random())
        z, rep_c = conformal.fit(data[:, None], 1, config)
        (u, v), rep_u = cauchy.fit_univariate(data, config)
        assert rep_c.status is FitStatus.CONVERGED
        assert rep_u.status is FitStatus.CONVERGED
        assert z.b[0] == pytest.approx(u, abs=1e-6)
        assert z.a == pytest.approx(v, abs=1e-6)


def test_fit_accepts_infinity_datum():
    data = [np.array([0.0]), np.array([1.0]), INFINITY]
    z, report = conformal.fit(data, 1)
    assert report.status is FitStatus.CONVERGED
    assert z.b[0] == pytest.approx(0.5, abs=1e-6)
    assert z.a == pytest.approx(math.sqrt(3) / 2, abs=1e-6)


def test_fit_normal_samples_match_scalar_oracle():
    rng = np.random.default_rng(99)
    data = rng.standard_normal((100000, 2))
    z, report = conformal.fit(data, 2, DescentConfig(max_iters=500))
    assert report.status is FitStatus.CONVERGED
    assert np.allclose(z.b, 0.0, atol=0.05)

    # oracle: minimize E[2 log((a^2 + R2)/a)] with R2 ~ chi-square(2) by
    # solving the stationarity condition E[2 a^2/(a^2 + R2)] = 1
    def stationarity(a):
        f = lambda r: (2.0 * a * a / (a * a + r) - 1.0) * 0.5 * np.exp(-r / 2)
        val, _ = integrate.quad(f, 0.0, 300.0, limit=200)
        return val

    a_star = optimize.brentq(stationarity, 0.3, 3.0, xtol=1e-12)
    assert z.a == pytest.approx(a_star, abs=0.05)


def test_fit_similarity_equivariance(rng):
    n = 2
    data = rng.standard_normal((40, n))
    config = DescentConfig(tol=1e-11, max_iters=2000)
    z, rep = conformal.fit(data, n, config)
    assert rep.status is FitStatus.CONVERGED
    for _ in range(10):
        lam = float(np.exp(rng.standard_normal()))
        theta = float(rng.uniform(0, 2 * np.pi))
        R = np.array([[np.cos(theta), -np.sin(theta)],
                      [np.sin(theta), np.cos(theta)]])
        c = rng.standard_normal(n)
        mapped = lam * data @ R.T + c
        zp, rep_p = conformal.fit(mapped, n, config)
        assert rep_p.status is FitStatus.CONVERGED
        assert zp.a == pytest.approx(lam * z.a, rel=1e-6)
        assert np.allclose(zp.b, lam * R @ z.b + c, atol=1e-6 * max(1.0, lam))


def test_equilibrium_mean_unit_force(rng):
    n = 2
    data = rng.standard_normal((15, n))
    config = DescentConfig(tol=1e-10, max_iters=2000)
    z, report = conformal.fit(data, n, config)
    assert report.status is FitStatus.CONVERGED
    g = conformal.grad(z, data, n)
    assert g.norm() / n < config.tol * (1 + 1.0 / n)
