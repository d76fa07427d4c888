import math

import numpy as np
import pytest

from ommsim import (
    MODES,
    UnphysicalStateError,
    build_diffusion,
    build_drift,
    entanglement_report,
    log_negativity,
    pair_entanglement,
    reduced_cm,
    solve_lyapunov,
    solve_steady_state,
    symplectic_eigenvalues,
    symplectic_form,
)


def tmsv(r):
    """Analytic two-mode squeezed vacuum covariance (vacuum variance 1/2)."""
    ch, sh = math.cosh(2 * r) / 2.0, math.sinh(2 * r) / 2.0
    V = np.zeros((4, 4))
    V[:2, :2] = ch * np.eye(2)
    V[2:, 2:] = ch * np.eye(2)
    V[:2, 2:] = sh * np.diag([1.0, -1.0])
    V[2:, :2] = sh * np.diag([1.0, -1.0])
    return V


def local_rotation(theta_1, theta_2):
    def rot(t):
        return np.array([[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]])

    S = np.zeros((4, 4))
    S[:2, :2] = rot(theta_1)
    S[2:, 2:] = rot(theta_2)
    return S


class TestReducedCM:
    def test_vacuum_any_pair(self):
        V = np.eye(8) / 2.0
        for pair in [("atom", "cavity"), ("cavity", "phonon"), ("atom", "magnon")]:
            assert np.array_equal(reduced_cm(V, pair), np.eye(4) / 2.0)

    def test_block_selection(self):
        # Mark each mode block with a distinct diagonal value.
        V = np.diag([1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0])
        V4 = reduced_cm(V, ("atom", "magnon"))
        assert np.array_equal(np.diag(V4), [1.0, 1.0, 4.0, 4.0])
        assert np.array_equal(reduced_cm(V, ("phonon", "cavity"))[:2, :2], 3.0 * np.eye(2))

    def test_cross_block_orientation(self):
        V = np.eye(8) / 2.0
        V[0, 6] = V[6, 0] = 0.1
        V4 = reduced_cm(V, ("atom", "magnon"))
        assert V4[0, 2] == 0.1 and V4[2, 0] == 0.1

    def test_aliases_and_indices(self):
        V = np.eye(8) / 2.0
        assert np.array_equal(reduced_cm(V, ("a", "m")), reduced_cm(V, ("atom", "magnon")))
        assert np.array_equal(reduced_cm(V, (0, 3)), reduced_cm(V, ("atom", "magnon")))

    def test_identical_modes_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            reduced_cm(np.eye(8) / 2.0, ("atom", "a"))

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="unknown mode"):
            reduced_cm(np.eye(8) / 2.0, ("atom", "photon"))


class TestLogNegativity:
    def test_vacuum_is_exactly_zero(self):
        ent = pair_entanglement(np.eye(4) / 2.0)
        assert ent.e_n == 0.0
        assert ent.eta_minus == pytest.approx(0.5, rel=1e-14)
        assert ent.sigma == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
    def test_two_mode_squeezed_vacuum(self, r):
        ent = pair_entanglement(tmsv(r))
        assert ent.eta_minus == pytest.approx(math.exp(-2 * r) / 2.0, rel=1e-12)
        assert ent.e_n == pytest.approx(2 * r, abs=1e-10)

    def test_pair_order_symmetry(self, baseline_model):
        ss = solve_steady_state(baseline_model)
        V = solve_lyapunov(build_drift(ss, baseline_model), build_diffusion(baseline_model))
        e1 = log_negativity(reduced_cm(V, ("atom", "magnon")))
        e2 = log_negativity(reduced_cm(V, ("magnon", "atom")))
        assert e1 == pytest.approx(e2, abs=1e-12)
        assert e1 > 0.0

    def test_zero_on_product_states(self):
        V = np.diag([0.7, 0.7, 1.3, 1.3])
        assert log_negativity(V) == 0.0

    def test_local_rotation_invariance(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            r = rng.uniform(0.05, 1.0)
            V = tmsv(r)
            # Optionally add symmetric thermal noise (keeps the state physical).
            V = V + rng.uniform(0.0, 0.3) * np.eye(4)
            S0 = local_rotation(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
            base = S0 @ V @ S0.T
            S = local_rotation(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
            rotated = S @ base @ S.T
            assert log_negativity(rotated) == pytest.approx(log_negativity(base), abs=1e-10)

    def test_unphysical_discriminant_rejected(self):
        rng = np.random.default_rng(7)
        M = rng.normal(size=(4, 4))
        V = 0.5 * (M + M.T)  # not a covariance matrix at all
        with pytest.raises(UnphysicalStateError, match="discriminant"):
            pair_entanglement(V)

    def test_shape_guard(self):
        with pytest.raises(ValueError, match="4x4"):
            pair_entanglement(np.eye(8) / 2.0)

    def test_report_over_pairs(self, baseline_model):
        ss = solve_steady_state(baseline_model)
        V = solve_lyapunov(build_drift(ss, baseline_model), build_diffusion(baseline_model))
        report = entanglement_report(V, (("a", "m"), ("c", "b")))
        assert report[("atom", "magnon")].e_n > 0.0
        assert set(report) == {("atom", "magnon"), ("cavity", "phonon")}


class TestSymplecticSpectrum:
    def test_vacuum(self):
        for n in (1, 2, 4):
            nu = symplectic_eigenvalues(np.eye(2 * n) / 2.0)
            assert np.allclose(nu, 0.5, atol=1e-12)
            assert nu.shape == (n,)

    def test_single_mode_thermal(self):
        n_occ = 3.7
        nu = symplectic_eigenvalues((n_occ + 0.5) * np.eye(2))
        assert nu[0] == pytest.approx(n_occ + 0.5, rel=1e-12)

    def test_tmsv_is_pure(self):
        nu = symplectic_eigenvalues(tmsv(0.5))
        assert np.allclose(nu, 0.5, atol=1e-10)

    def test_purity_consistency(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            V = tmsv(rng.uniform(0.1, 0.8)) + rng.uniform(0.0, 0.5) * np.eye(4)
            S = local_rotation(rng.uniform(0, 6.28), rng.uniform(0, 6.28))
            V = S @ V @ S.T
            nu = symplectic_eigenvalues(V)
            assert np.linalg.det(V) == pytest.approx((nu[0] * nu[1]) ** 2, rel=1e-10)

    def test_symplectic_form_layout(self):
        omega = symplectic_form(2)
        expected = np.array([
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
        ])
        assert np.array_equal(omega, expected)

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError):
            symplectic_eigenvalues(np.eye(3))

    def test_mode_order_fixed(self):
        assert MODES == ("atom", "cavity", "phonon", "magnon")
