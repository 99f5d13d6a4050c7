import math

import numpy as np
import pytest

from cauchymle import cauchy, matrix_cauchy as mc, spd
from cauchymle.datasets import GeneratorSpec, generate
from cauchymle.descent import DescentConfig, FitStatus
from cauchymle.gradcheck import random_spd_point, random_tangent


def test_lift_appends_identity():
    X = np.arange(6.0).reshape(1, 2, 3)
    F = mc.lift(X)
    assert F.shape == (1, 5, 3)
    assert np.array_equal(F[0, :2], X[0])
    assert np.array_equal(F[0, 2:], np.eye(3))


def test_loss_reduces_to_vector_family_at_m1(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        T = random_spd_point(n + 1, rng)
        data = rng.standard_normal((6, n, 1))
        F = mc.lift(data)
        X = cauchy.lift(data[:, :, 0])
        assert mc.loss(T, F) == pytest.approx(cauchy.loss(T, X), rel=1e-12)
        assert np.allclose(mc.grad(T, F), cauchy.loss_grad(T, X), atol=1e-13)


def test_loss_zero_observation():
    F = mc.lift(np.zeros((1, 2, 2)))
    assert mc.loss(np.eye(4), F) == pytest.approx(0.0)


def test_loss_matches_cholesky_oracle(rng):
    # independent evaluation path: log det via Cholesky per datum
    for _ in range(50):
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        T = random_spd_point(m + n, rng)
        F = mc.lift(rng.standard_normal((4, n, m)))
        direct = 0.0
        for frame in F:
            G = frame.T @ T @ frame
            L = np.linalg.cholesky(G)
            direct += 2.0 * float(np.sum(np.log(np.diag(L))))
        assert mc.loss(T, F) == pytest.approx(direct / len(F), abs=1e-12)


def test_per_datum_grad_norm(rng):
    for _ in range(1000):
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        T = random_spd_point(m + n, rng)
        frame = mc.lift(rng.standard_normal((1, n, m)) * 2)[0]
        G = mc.datum_grad(T, frame)
        expected = math.sqrt(m * n / (m + n))
        assert spd.norm(T, G) == pytest.approx(expected, abs=1e-8)


def test_grad_matches_finite_differences(rng):
    h = 1e-5
    for _ in range(100):
        m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        T = random_spd_point(m + n, rng)
        F = mc.lift(rng.standard_normal((4, n, m)))
        V = random_tangent(T, rng)
        fd = (mc.loss(spd.geodesic(T, V, h), F)
              - mc.loss(spd.geodesic(T, V, -h), F)) / (2 * h)
        an = spd.inner(T, mc.grad(T, F), V)
        assert abs(an - fd) / max(abs(fd), 1e-8) < 1e-6


def test_step_size_values():
    assert mc.step_size(1, 1, "improved") == 2.0
    assert mc.step_size(1, 4, "improved") == 3.5
    assert mc.step_size(2, 2, "improved") == 2.25
    assert mc.step_size(2, 2, "safe") == 1.0


def test_step_size_matches_vector_family_at_m1():
    for n in range(1, 6):
        assert mc.step_size(1, n, "improved") == cauchy.step_size(n, "improved")


def test_hessian_band_along_geodesics(rng):
    h = 1e-3
    for _ in range(300):
        m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        T = random_spd_point(m + n, rng)
        F = mc.lift(rng.standard_normal((1, n, m)) * 2)
        V = random_tangent(T, rng)
        f = lambda t: mc.loss(spd.geodesic(T, V, t), F)
        second = (f(h) - 2 * f(0.0) + f(-h)) / (h * h)
        assert -1e-6 <= second <= 1.0 + 1e-6


def test_safe_step_descent_guarantee(rng):
    config = DescentConfig(step_policy="safe", tol=1e-9, max_iters=40)
    for _ in range(20):
        m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        F = mc.lift(rng.standard_normal((8, n, m)))
        T, report = mc.fit(F, m, n, config)
        for k in range(len(report.loss_trace) - 1):
            drop = report.loss_trace[k] - report.loss_trace[k + 1]
            assert drop >= 0.5 * report.grad_norm_trace[k] ** 2 - 1e-9


def test_fit_agrees_with_vector_fit_at_m1(rng):
    config = DescentConfig(tol=1e-11, max_iters=2000)
    for _ in range(10):
        n = int(rng.integers(1, 3))
        data = rng.standard_normal((n + 8, n, 1))
        F = mc.lift(data)
        Tm, rep_m = mc.fit(F, 1, n, config)
        Tv, rep_v = cauchy.fit(cauchy.lift(data[:, :, 0]), config)
        assert rep_m.status is FitStatus.CONVERGED
        assert rep_v.status is FitStatus.CONVERGED
        assert spd.distance(Tm, Tv) < 1e-8


def test_fit_recovers_identity_from_standard_samples():
    spec = GeneratorSpec(kind="matrix_standard", sample_size=10000, seed=11,
                         rows=2, cols=2)
    data = generate(spec)
    F = mc.lift(data)
    T, report = mc.fit(F, 2, 2, DescentConfig())
    assert report.status is FitStatus.CONVERGED
    assert spd.distance(T, np.eye(4)) < 0.1


def test_fit_congruence_equivariance(rng):
    m = n = 2
    data = rng.standard_normal((30, n, m))
    config = DescentConfig(tol=1e-11, max_iters=2000)
    T, rep = mc.fit(mc.lift(data), m, n, config)
    assert rep.status is FitStatus.CONVERGED
    for _ in range(5):
        A = rng.standard_normal((n, n)) + 2 * np.eye(n)
        B = rng.standard_normal((m, m)) + 2 * np.eye(m)
        C = rng.standard_normal((n, m))
        mapped = np.einsum("ij,njk,kl->nil", A, data, B) + C
        Tp, rep_p = mc.fit(mc.lift(mapped), m, n, config)
        assert rep_p.status is FitStatus.CONVERGED
        # lifted frames transform as M Xt B with M = [[A, C B^-1], [0, B^-1]]
        M = np.zeros((n + m, n + m))
        M[:n, :n] = A
        M[:n, n:] = C @ np.linalg.inv(B)
        M[n:, n:] = np.linalg.inv(B)
        Minv = np.linalg.inv(M)
        expected = spd.unit_det(spd.sym(Minv.T @ T @ Minv))
        assert spd.distance(Tp, expected) < 1e-5


def test_equilibrium_of_unit_forces_at_optimum(rng):
    m = n = 2
    data = rng.standard_normal((20, n, m))
    F = mc.lift(data)
    config = DescentConfig(tol=1e-10, max_iters=1000)
    T, report = mc.fit(F, m, n, config)
    assert report.status is FitStatus.CONVERGED
    total = np.zeros((m + n, m + n))
    for frame in F:
        total += mc.datum_grad(T, frame)
    bound = F.shape[0] * config.tol * (1 + math.sqrt(m * n / (m + n)))
    assert spd.norm(T, total) < bound


def test_to_params_splits_quadratic_form(rng):
    m, n = 2, 3
    T = random_spd_point(m + n, rng)
    B, row_scatter, col_scatter = mc.to_params(T, n, m)
    X = rng.standard_normal((n, m))
    frame = mc.lift(X[None])[0]
    lhs = frame.T @ T @ frame
    rhs = (X - B).T @ np.linalg.inv(row_scatter) @ (X - B) + col_scatter
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_fit_standardize_matches_plain(rng):
    m = n = 2
    data = rng.standard_normal((30, n, m)) * 15 + 40.0
    config = DescentConfig(tol=1e-11, max_iters=3000)
    T0, rep0 = mc.fit(mc.lift(data), m, n, config)
    T1, rep1 = mc.fit(mc.lift(data), m, n,
                      DescentConfig(tol=1e-11, max_iters=3000,
                                    standardize=True))
    assert rep0.status is FitStatus.CONVERGED
    assert rep1.status is FitStatus.CONVERGED
    assert spd.distance(T0, T1) < 1e-6


def test_fit_rejects_mismatched_dims(rng):
    F = mc.lift(rng.standard_normal((5, 2, 2)))
    with pytest.raises(ValueError):
        mc.fit(F, 3, 2, DescentConfig())
