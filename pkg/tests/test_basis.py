"""Tests for the plane-wave basis and its direction algebra."""

import math

import numpy as np
import pytest

from pwlab.basis import (
    PlaneWaveBasis,
    bisector_sine,
    direction_chord,
    directions,
    eval_dphi_dn,
    eval_matrix,
    eval_phi,
    fan_basis,
    uniform_basis,
)


class TestDirections:
    def test_small_families(self):
        assert np.allclose(directions(4), [0, np.pi / 2, np.pi, 3 * np.pi / 2])
        assert np.allclose(directions(1), [0.0])
        assert np.allclose(directions(3), [0, 2 * np.pi / 3, 4 * np.pi / 3])

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            directions(0)


class TestDirectionAlgebra:
    def test_chord_zero(self):
        for p in (1, 4, 9):
            assert direction_chord(0, p) == 0.0

    def test_chord_quarter(self):
        assert direction_chord(1, 4) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_antiperiodicity(self):
        # chord(n +- p) = -chord(n), bisector_sine(n +- p, t) = -bisector_sine(n, t)
        n, p, t = 2, 7, 1.3
        assert direction_chord(n + p, p) == pytest.approx(-direction_chord(n, p), abs=1e-14)
        assert direction_chord(n - p, p) == pytest.approx(-direction_chord(n, p), abs=1e-14)
        assert bisector_sine(n + p, t, p) == pytest.approx(-bisector_sine(n, t, p), abs=1e-14)
        assert bisector_sine(n - p, t, p) == pytest.approx(-bisector_sine(n, t, p), abs=1e-14)

    def test_chord_oddness(self):
        assert direction_chord(-3, 8) == pytest.approx(-direction_chord(3, 8), abs=1e-15)

    def test_dot_product_factorization(self):
        # x(t).(d_m - d_l) = |x| chord(m-l) bisector_sine(m+l, t)
        rng = np.random.default_rng(11)
        p = 9
        basis = uniform_basis(p, 1.0)
        for _ in range(30):
            m, ell = rng.integers(0, p, size=2)
            t = float(rng.uniform(0, 2 * np.pi))
            r = float(rng.uniform(0.1, 3.0))
            x = r * np.array([np.cos(t), np.sin(t)])
            lhs = x @ (basis.dirs[m] - basis.dirs[ell])
            rhs = r * direction_chord(m - ell, p) * bisector_sine(m + ell, t, p)
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestEvaluation:
    def test_unit_at_center(self):
        basis = uniform_basis(6, 2.3, center=(0.4, -0.2))
        for m in range(6):
            assert eval_phi(basis, m, basis.center) == pytest.approx(1.0 + 0j, abs=1e-15)

    def test_unimodular(self):
        basis = uniform_basis(5, 3.0)
        pts = np.random.default_rng(0).normal(size=(40, 2))
        for m in range(5):
            assert np.allclose(np.abs(eval_phi(basis, m, pts)), 1.0, atol=1e-14)

    def test_normal_derivative_vs_finite_difference(self):
        basis = uniform_basis(7, 1.7, center=(0.1, 0.2))
        n = np.array([math.cos(0.9), math.sin(0.9)])
        x = np.array([0.33, -0.41])
        step = 1e-6
        for m in range(7):
            fd = (eval_phi(basis, m, x + step * n) - eval_phi(basis, m, x - step * n)) / (
                2 * step
            )
            assert eval_dphi_dn(basis, m, x, n) == pytest.approx(fd, rel=1e-6)

    def test_rejects_non_unit_normal(self):
        basis = uniform_basis(3, 1.0)
        with pytest.raises(ValueError):
            eval_dphi_dn(basis, 0, np.zeros(2), np.array([1.0, 1.0]))

    def test_rejects_bad_index(self):
        basis = uniform_basis(3, 1.0)
        with pytest.raises(ValueError):
            eval_phi(basis, 3, np.zeros(2))

    def test_helmholtz_residual(self):
        # 5-point Laplacian: Delta phi + kappa^2 phi = 0 up to O(step^2)
        kappa = 2.0
        basis = uniform_basis(4, kappa)
        rng = np.random.default_rng(5)
        step = 1e-4
        for _ in range(10):
            x = rng.uniform(-1, 1, size=2)
            m = int(rng.integers(0, 4))
            lap = (
                eval_phi(basis, m, x + [step, 0])
                + eval_phi(basis, m, x - [step, 0])
                + eval_phi(basis, m, x + [0, step])
                + eval_phi(basis, m, x - [0, step])
                - 4 * eval_phi(basis, m, x)
            ) / step**2
            residual = lap + kappa**2 * eval_phi(basis, m, x)
            assert abs(residual) <= 1e-5

    def test_matrix_evaluation_consistent(self):
        basis = uniform_basis(6, 1.2, center=(0.3, 0.3))
        pts = np.random.default_rng(2).normal(size=(15, 2))
        mat = eval_matrix(basis, pts)
        for m in (0, 3, 5):
            assert np.allclose(mat[m], eval_phi(basis, m, pts), atol=1e-14)


class TestFanBasis:
    def test_sector_endpoints_included(self):
        b = fan_basis(5, 1.0, (0.5, 1.5))
        assert b.angles[0] == pytest.approx(0.5)
        assert b.angles[-1] == pytest.approx(1.5)
        assert not b.is_uniform

    def test_single_wave_uses_midpoint(self):
        b = fan_basis(1, 1.0, (0.0, 1.0))
        assert b.angles[0] == pytest.approx(0.5)

    def test_rejects_empty_sector(self):
        with pytest.raises(ValueError):
            fan_basis(3, 1.0, (1.0, 1.0))


class TestValidation:
    def test_uniform_flag(self):
        assert uniform_basis(8, 1.0).is_uniform
        assert not fan_basis(8, 1.0, (0.0, np.pi)).is_uniform

    def test_rejects_duplicate_angles(self):
        with pytest.raises(ValueError):
            PlaneWaveBasis(1.0, np.array([0.0, 1.0, 1.0]))

    def test_rejects_bad_kappa(self):
        with pytest.raises(ValueError):
            PlaneWaveBasis(0.0, np.array([0.0]))
