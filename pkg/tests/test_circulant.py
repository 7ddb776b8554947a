"""Tests for circulant algebra and the disk spectral analysis."""

import math

import numpy as np
import pytest

from pwlab.basis import uniform_basis
from pwlab.circulant import (
    CirculantOperator,
    SingularOperatorError,
    circ_best,
    circ_first_row,
    circulant_from_row,
    cyclic_best_limit,
    delta_measure,
    disk_condition_estimate,
    disk_spectrum,
    eigenvalue_multiplicities,
    spectrum_report,
    toeplitz_average,
    unitary_dft,
)
from pwlab.geometry import CyclicAngles, regular_polygon
from pwlab.matrices import assemble_boundary_matrix, disk_cross, disk_mass, disk_stiffness


class TestCirculantOperator:
    def test_known_eigenvalues(self):
        op = circulant_from_row([2, 1, 0, 1])
        assert np.allclose(sorted(op.eigenvalues.real), [0, 2, 2, 4], atol=1e-13)
        assert np.allclose(op.eigenvalues.imag, 0.0, atol=1e-13)

    def test_identity_row(self):
        op = circulant_from_row([1, 0, 0, 0, 0])
        assert np.allclose(op.eigenvalues, 1.0)
        assert np.allclose(op.materialize(), np.eye(5))

    def test_apply_matches_materialized(self):
        rng = np.random.default_rng(17)
        row = rng.normal(size=17) + 1j * rng.normal(size=17)
        op = circulant_from_row(row)
        v = rng.normal(size=17) + 1j * rng.normal(size=17)
        assert np.allclose(op.apply(v), op.materialize() @ v, atol=1e-12)

    def test_solve_roundtrip(self):
        rng = np.random.default_rng(3)
        row = rng.normal(size=9) + 1j * rng.normal(size=9)
        row[0] += 10.0          # diagonally dominant: safely invertible
        op = circulant_from_row(row)
        v = rng.normal(size=9) + 1j * rng.normal(size=9)
        assert np.allclose(op.apply(op.solve(v)), v, atol=1e-11)

    def test_singular_solve_raises(self):
        # eigenvalues 2 and exactly 0 (rounding in the f64 DFT would
        # otherwise leave a ~1e-16 residual above the 1e-300 threshold)
        op = CirculantOperator(np.array([1.0, 1.0]), eigenvalues=np.array([2.0, 0.0]))
        with pytest.raises(SingularOperatorError):
            op.solve(np.ones(2))

    def test_eigenvector_property(self):
        # C v_q = lambda_q v_q for the defined eigenvectors
        rng = np.random.default_rng(8)
        row = rng.normal(size=12) + 1j * rng.normal(size=12)
        op = circulant_from_row(row)
        C = op.materialize()
        scale = np.linalg.norm(C)
        for q in range(12):
            v = np.exp(-1j * 2 * np.pi * q * np.arange(12) / 12)
            assert np.linalg.norm(C @ v - op.eigenvalues[q] * v) <= 1e-10 * scale

    def test_real_row_conjugate_pairing(self):
        row = np.random.default_rng(5).normal(size=11)
        lam = circulant_from_row(row).eigenvalues
        for q in range(1, 11):
            assert lam[q] == pytest.approx(np.conj(lam[11 - q]), abs=1e-12)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            circulant_from_row([])


class TestUnitaryDft:
    def test_p1(self):
        assert np.allclose(unitary_dft(1), [[1.0]])

    def test_p2(self):
        expected = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        assert np.allclose(unitary_dft(2), expected, atol=1e-15)

    def test_unitarity(self):
        U = unitary_dft(13)
        assert np.allclose(U @ U.conj().T, np.eye(13), atol=1e-12)

    def test_reconstruction(self):
        op = circulant_from_row([2, 1, 0, 1])
        U = unitary_dft(4)
        rebuilt = U @ np.diag(op.eigenvalues) @ U.conj().T
        assert np.allclose(rebuilt, op.materialize(), atol=1e-12)

    def test_reconstruction_nonsymmetric(self):
        # orientation check on a non-symmetric circulant (permutation shift)
        op = circulant_from_row([0, 1, 0])
        U = unitary_dft(3)
        rebuilt = U @ np.diag(op.eigenvalues) @ U.conj().T
        assert np.allclose(rebuilt, op.materialize(), atol=1e-12)


class TestApproximants:
    def test_toeplitz_average_idempotent(self):
        row = np.array([5.0, 1.0, 2.0, 3.0])
        T = circulant_from_row(row).materialize()
        assert np.allclose(toeplitz_average(T), T, atol=1e-14)

    def test_toeplitz_average_diagonal(self):
        assert np.allclose(np.diag(toeplitz_average(np.diag([1.0, 2.0, 3.0]))), 2.0)

    def test_toeplitz_average_superdiagonal(self):
        A = np.zeros((3, 3))
        A[0, 1], A[1, 2] = 4.0, 6.0
        T = toeplitz_average(A)
        assert T[0, 1] == pytest.approx(5.0)
        assert T[1, 2] == pytest.approx(5.0)

    def test_first_row_of_circulant_is_itself(self):
        row = np.array([3.0, 1.0, 4.0, 1.0, 5.0])
        C = circulant_from_row(row).materialize()
        assert np.allclose(circ_first_row(C).materialize(), C)

    def test_first_row_of_disk_mass_is_itself(self):
        M = disk_mass(uniform_basis(9, 1.3), 1.0).data
        assert np.allclose(circ_first_row(M).materialize(), M, atol=1e-13)

    def test_first_row_circulant_generally_not_hermitian(self):
        # needs an element without central symmetry: for the square the
        # boundary is invariant under x -> -x, which forces a real first
        # row and hence a Hermitian C_R
        from pwlab.geometry import CyclicAngles, cyclic_polygon

        tri = regular_polygon(3, 1.0)
        cyc = cyclic_polygon(
            CyclicAngles(np.array([0.0, 3 * np.pi / 4, 9 * np.pi / 8, 7 * np.pi / 4]), 1.0)
        )
        for poly in (tri, cyc):
            basis = uniform_basis(8, np.pi, center=poly.center)
            M = assemble_boundary_matrix(basis, poly, "M").data
            C = circ_first_row(M).materialize()
            assert np.linalg.norm(C - C.conj().T) > 1e-3 * np.linalg.norm(C)

    def test_first_row_circulant_of_square_hermitian_by_symmetry(self):
        poly = regular_polygon(4, 1.0)
        basis = uniform_basis(8, np.pi, center=poly.center)
        M = assemble_boundary_matrix(basis, poly, "M").data
        C = circ_first_row(M).materialize()
        assert np.linalg.norm(C - C.conj().T) <= 1e-10 * np.linalg.norm(C)

    def test_best_of_circulant_is_itself(self):
        row = np.array([3.0, 1.0 + 2j, 4.0, 1.0 - 1j])
        C = circulant_from_row(row).materialize()
        assert np.allclose(circ_best(C).materialize(), C, atol=1e-13)

    def test_best_of_diagonal(self):
        got = circ_best(np.diag([1.0, 2.0, 3.0]))
        assert np.allclose(got.first_row, [2.0, 0.0, 0.0], atol=1e-14)

    def test_best_of_hermitian_is_hermitian(self):
        poly = regular_polygon(4, 1.0)
        basis = uniform_basis(8, np.pi, center=poly.center)
        M = assemble_boundary_matrix(basis, poly, "M").data
        C = circ_best(M).materialize()
        assert np.linalg.norm(C - C.conj().T) <= 1e-12 * np.linalg.norm(C)

    def test_best_is_frobenius_optimal_among_circulants(self):
        # perturbing the best-approximant first row only increases the distance
        rng = np.random.default_rng(23)
        A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        best = circ_best(A)
        dist = np.linalg.norm(A - best.materialize())
        for _ in range(10):
            perturbed = best.first_row + 1e-3 * (
                rng.normal(size=6) + 1j * rng.normal(size=6)
            )
            alt = circulant_from_row(perturbed).materialize()
            assert np.linalg.norm(A - alt) >= dist


class TestDeltaMeasure:
    def test_zero_for_equal(self):
        A = np.eye(4)
        assert delta_measure(A, A) == 0.0

    def test_scaling(self):
        A = np.eye(4)
        assert delta_measure(2 * A, A) == pytest.approx(0.25)

    def test_rejects_zero_reference(self):
        with pytest.raises(ValueError):
            delta_measure(np.eye(3), np.zeros((3, 3)))

    def test_toeplitz_distance_decreases_with_p(self):
        kappa = 2 * np.pi
        poly = regular_polygon(4, 1.0)
        vals = {}
        for p in (10, 80):
            basis = uniform_basis(p, kappa, center=poly.center)
            M = assemble_boundary_matrix(basis, poly, "M").data
            vals[p] = delta_measure(M, toeplitz_average(M))
        assert vals[80] < vals[10]


class TestDiskSpectrum:
    def test_dft_matches_dense_eigensolver(self):
        for which, builder in (("M", disk_mass), ("S", disk_cross), ("D", disk_stiffness)):
            for p, kh, h in [(7, 1.0, 1.0), (12, np.pi, 1.0), (9, 10 * np.pi, 1.0), (8, 2.0, 0.5)]:
                basis = uniform_basis(p, kh / h)
                dense = np.linalg.eigvalsh(builder(basis, h).data)
                lam = np.sort(disk_spectrum(which, p, kh / h, h, "dft"))
                scale = max(np.abs(dense).max(), 1e-300)
                assert np.max(np.abs(np.sort(dense) - lam)) <= 1e-8 * scale

    def test_multiplicity_pairing_exact(self):
        lam = disk_spectrum("M", 7, 1.0, 1.0, "dft")
        for L in range(1, 4):
            assert lam[L] == lam[7 - L]

    def test_fig2_setup_dft_vs_integral(self):
        # h = 2 pi, p = 61, kappa = 1/32: lambda_0 by both routes
        h, p, kappa = 2 * np.pi, 61, 1.0 / 32.0
        dft = disk_spectrum("M", p, kappa, h, "dft")
        integral = disk_spectrum("M", p, kappa, h, "integral")
        assert integral[0] == pytest.approx(dft[0], rel=1e-8)

    def test_integral_matches_dft_moderate_indices(self):
        # the integral keeps the principal Fourier coefficient only, so it
        # matches the exact eigenvalue tightly where the aliased tail
        # f_{p-L} is negligible (small L, and L = p/2 after the Nyquist
        # doubling); indices near p/2 carry the genuine aliasing gap
        h, p, kappa = 1.0, 12, 1.5
        for which in ("M", "S", "D"):
            dft = disk_spectrum(which, p, kappa, h, "dft")
            integral = disk_spectrum(which, p, kappa, h, "integral")
            for L in list(range(4)) + [6]:
                if abs(dft[L]) > 1e-12:
                    assert integral[L] == pytest.approx(dft[L], rel=1e-8), (which, L)
            for L in (4, 5):
                assert integral[L] == pytest.approx(dft[L], rel=1e-3), (which, L)

    def test_decay_law_ratio(self):
        # h = 2 pi, p = 61: dft eigenvalues over the decay-law prediction
        h, p = 2 * np.pi, 61
        for kappa in (0.5, 1.0 / 32.0):
            dft = disk_spectrum("M", p, kappa, h, "dft")
            asym = disk_spectrum("M", p, kappa, h, "asymptotic")
            for s in range(3, 16):
                if dft[s] > 1e-250:
                    assert 0.5 <= dft[s] / asym[s] <= 2.0

    def test_asymptotic_rejected_for_cross(self):
        with pytest.raises(ValueError):
            disk_spectrum("S", 8, 1.0, 1.0, "asymptotic")

    def test_report_carries_all_columns(self):
        rep = spectrum_report("M", 10, 1.0, 1.0)
        assert rep.dft.shape == (10,)
        assert rep.integral.shape == (10,)
        assert rep.asymptotic.shape == (10,)
        assert list(rep.multiplicity) == [1, 2, 2, 2, 2, 1, 2, 2, 2, 2]

    def test_multiplicities_odd(self):
        assert list(eigenvalue_multiplicities(7)) == [1, 2, 2, 2, 2, 2, 2]


class TestConditionEstimate:
    def test_blowup_small_kh(self):
        est = disk_condition_estimate("M", 10, 0.1 * np.pi, 1.0)
        assert est.cond > 1e10

    def test_moderate_large_kh(self):
        for p in (10, 24, 40):
            est = disk_condition_estimate("M", p, 10 * np.pi, 1.0)
            assert est.cond < 1e6

    def test_p2_closed_form(self):
        # 2x2 circulant: eigenvalues c_0 +- c_1, cond = (1+J_0)/(1-J_0)
        from pwlab.special import bessel_j

        kappa, h = 0.3, 1.0
        j0 = bessel_j(0, 2 * kappa * h)
        est = disk_condition_estimate("M", 2, kappa, h)
        assert est.cond == pytest.approx((1 + j0) / (1 - j0), rel=1e-10)

    def test_log_slope_tracks_proxy(self):
        # log-cond growth vs p within 25% of the analytic proxy slope
        kh = 0.2 * np.pi
        ps = list(range(8, 25, 2))
        ln_cond = [disk_condition_estimate("M", p, kh, 1.0).ln_cond for p in ps]
        ln_proxy = [disk_condition_estimate("M", p, kh, 1.0).ln_proxy for p in ps]
        slope = np.polyfit(ps, ln_cond, 1)[0]
        proxy_slope = np.polyfit(ps, ln_proxy, 1)[0]
        assert abs(slope - proxy_slope) <= 0.25 * abs(proxy_slope)

    def test_min_dft_coeff_equals_min_eigenvalue(self):
        est = disk_condition_estimate("M", 12, 1.0, 1.0)
        lam = disk_spectrum("M", 12, 1.0, 1.0, "dft")
        assert est.min_dft_coeff == lam.min()

    def test_rejects_cross(self):
        with pytest.raises(ValueError):
            disk_condition_estimate("S", 8, 1.0, 1.0)


class TestCyclicBestLimit:
    def test_limit_real_symmetric(self):
        ang = CyclicAngles(np.array([0.0, 3 * np.pi / 4, 9 * np.pi / 8, 7 * np.pi / 4]), 1.0)
        T = cyclic_best_limit(ang, 9, 2.0).data
        assert np.linalg.norm(T.imag) <= 1e-12 * np.linalg.norm(T)
        assert np.linalg.norm(T - T.T) <= 1e-12 * np.linalg.norm(T)

    def test_best_circulant_approaches_limit(self):
        # kappa h = 10 keeps the p = 16 and 32 stages pre-asymptotic so the
        # decrease is visible above assembly noise (at kh ~ 1 the trapezoid
        # convergence already saturates machine precision by p = 16)
        from pwlab.geometry import cyclic_polygon

        ang = CyclicAngles(np.array([0.0, 3 * np.pi / 4, 9 * np.pi / 8, 7 * np.pi / 4]), 1.0)
        poly = cyclic_polygon(ang)
        kh = 10.0
        dists = []
        for p in (16, 32, 64):
            basis = uniform_basis(p, kh, center=(0.0, 0.0))
            M = assemble_boundary_matrix(basis, poly, "M").data
            C = circ_best(M).materialize()
            T = cyclic_best_limit(ang, p, kh).data
            dists.append(np.linalg.norm(C - T) / np.linalg.norm(T))
        assert dists[2] < dists[1] < dists[0]

    def test_regular_many_sides_approaches_disk(self):
        # L = 128 regular polygon: limit entries near 2 pi h J_0(kappa h chord)
        p, kappa, h = 8, 1.2, 1.0
        ang = CyclicAngles(2 * np.pi * np.arange(128) / 128, h)
        T = cyclic_best_limit(ang, p, kappa).data
        M = disk_mass(uniform_basis(p, kappa), h).data
        assert np.linalg.norm(T - M) <= 1e-3 * np.linalg.norm(M)
