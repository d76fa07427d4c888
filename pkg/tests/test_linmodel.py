import math

import numpy as np
import pytest

from ommsim import (
    TWO_PI,
    NumericalError,
    UnstableSystemError,
    build_diffusion,
    build_drift,
    default_params,
    drift_matrix,
    dump_matrix,
    evolve_cm,
    is_stable,
    load_matrix,
    log_negativity,
    reduced_cm,
    solve_lyapunov,
    solve_steady_state,
)

# Independent thermal-occupation oracle (same as in test_params).
HBAR = 6.62607015e-34 / (2.0 * math.pi)
KB = 1.380649e-23


def bose_einstein(omega, T):
    return 1.0 / (math.exp(HBAR * omega / (KB * T)) - 1.0)


def baseline_drift(baseline_model):
    ss = solve_steady_state(baseline_model)
    return build_drift(ss, baseline_model), ss


class TestDriftMatrix:
    def test_entries_verbatim(self):
        ga, da, gn = 1.0, 2.0, 3.0
        kc, dtc, gc = 4.0, 5.0, 6.0
        wb, gb, gm = 7.0, 8.0, 9.0
        km, dtm = 10.0, 11.0
        expected = np.array([
            [-ga,  da,   0.0,  gn,   0.0,  0.0,  0.0,  0.0],
            [-da, -ga,  -gn,   0.0,  0.0,  0.0,  0.0,  0.0],
            [0.0,  gn,  -kc,   dtc,  gc,   0.0,  0.0,  0.0],
            [-gn,  0.0, -dtc, -kc,   0.0,  0.0,  0.0,  0.0],
            [0.0,  0.0,  0.0,  0.0,  0.0,  wb,   0.0,  0.0],
            [0.0,  0.0,  0.0, -gc,  -wb,  -gb,   0.0,  gm],
            [0.0,  0.0,  0.0,  0.0, -gm,   0.0, -km,   dtm],
            [0.0,  0.0,  0.0,  0.0,  0.0,  0.0, -dtm, -km],
        ])
        A = drift_matrix(ga, da, gn, kc, dtc, gc, wb, gb, gm, km, dtm)
        assert np.array_equal(A, expected)

    def test_build_drift_uses_magnitudes_and_steady_detunings(self, baseline_model):
        A, ss = baseline_drift(baseline_model)
        assert A[2, 4] == abs(ss.G_c)
        assert A[5, 3] == -abs(ss.G_c)
        assert A[5, 7] == abs(ss.G_m)
        assert A[6, 4] == -abs(ss.G_m)
        assert A[2, 3] == ss.delta_c_eff
        assert A[6, 7] == ss.delta_m_eff
        assert tuple(A[4]) == (0.0, 0.0, 0.0, 0.0, 0.0, baseline_model.omega_b, 0.0, 0.0)

    def test_zero_couplings_block_diagonal(self):
        model = default_params(g_N=0.0, G_c=0.0, G_m=0.0).validate()
        A = build_drift(solve_steady_state(model), model)
        off = A.copy()
        for k in range(4):
            off[2 * k:2 * k + 2, 2 * k:2 * k + 2] = 0.0
        assert np.all(off == 0.0)
        atom_eigs = np.linalg.eigvals(A[:2, :2])
        expected = {-model.gamma_a + 1j * model.delta_a, -model.gamma_a - 1j * model.delta_a}
        for eig in atom_eigs:
            assert min(abs(eig - e) for e in expected) < 1e-9 * abs(eig)

    def test_mechanical_block_characteristic_polynomial(self):
        wb, gb = TWO_PI * 40e6, TWO_PI * 100.0
        block = drift_matrix(1, 1, 0, 1, 1, 0, wb, gb, 0, 1, 1)[4:6, 4:6]
        assert np.trace(block) == -gb
        assert np.linalg.det(block) == pytest.approx(wb**2, rel=1e-12)

    def test_nonfinite_rejected(self, baseline_model):
        ss = solve_steady_state(baseline_model)
        bad = baseline_model.replace(delta_a=math.nan)
        with pytest.raises(ValueError, match="non-finite"):
            build_drift(ss, bad)


class TestDiffusion:
    def test_zero_temperature(self, baseline_model):
        D = build_diffusion(baseline_model, T=0.0)
        g = baseline_model
        expected = np.diag([g.gamma_a, g.gamma_a, g.kappa_c, g.kappa_c,
                            0.0, g.gamma_b, g.kappa_m, g.kappa_m])
        assert np.array_equal(D, expected)

    def test_mechanical_entry_at_10mk(self, baseline_model):
        D = build_diffusion(baseline_model)  # model T = 10 mK
        n_b = bose_einstein(baseline_model.omega_b, 0.01)
        assert D[5, 5] == pytest.approx(baseline_model.gamma_b * (2 * n_b + 1), rel=1e-12)
        assert D[5, 5] / baseline_model.gamma_b == pytest.approx(10.45, rel=1e-3)

    def test_magnon_entries_effectively_unthermalized(self, baseline_model):
        D = build_diffusion(baseline_model)
        assert D[6, 6] == pytest.approx(baseline_model.kappa_m, rel=1e-15)
        assert D[7, 7] == D[6, 6]

    def test_optical_and_atomic_baths_at_vacuum(self, baseline_model):
        D = build_diffusion(baseline_model, T=0.3)
        assert D[0, 0] == baseline_model.gamma_a
        assert D[2, 2] == baseline_model.kappa_c


class TestStability:
    def test_decoupled_margin_is_slowest_rate(self):
        ga, kc, km = TWO_PI * 1e6, TWO_PI * 2e6, TWO_PI * 1e6
        wb, gb = TWO_PI * 40e6, TWO_PI * 100.0
        A = drift_matrix(ga, -wb, 0.0, kc, 0.5 * wb, 0.0, wb, gb, 0.0, km, wb)
        stable, margin = is_stable(A)
        assert stable
        # underdamped mechanical pair decays at gamma_b / 2
        assert margin == pytest.approx(-gb / 2.0, rel=1e-9)

    def test_undamped_oscillator_is_marginal(self):
        A = drift_matrix(TWO_PI * 1e6, 0, 0, TWO_PI * 1e6, 0, 0,
                         TWO_PI * 40e6, 0.0, 0, TWO_PI * 1e6, 0)
        stable, margin = is_stable(A)
        assert not stable
        assert margin == pytest.approx(0.0, abs=1e-3)

    def test_baseline_is_stable(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        stable, margin = is_stable(A)
        assert stable and margin < 0.0

    def test_nonfinite_rejected(self):
        A = np.eye(8)
        A[0, 0] = np.inf
        with pytest.raises(ValueError):
            is_stable(A)


class TestLyapunov:
    def test_vacuum_steady_state_at_zero_temperature(self):
        model = default_params(g_N=0.0, G_c=0.0, G_m=0.0, T=0.0).validate()
        A = build_drift(solve_steady_state(model), model)
        V = solve_lyapunov(A, build_diffusion(model))
        assert np.allclose(V, np.eye(8) / 2.0, rtol=0.0, atol=1e-12)

    def test_thermal_mechanical_block(self):
        # Decoupled mechanical mode against the analytic (N_b + 1/2) I.
        wb, gb = TWO_PI * 40e6, TWO_PI * 100.0
        n_b = bose_einstein(wb, 0.01)
        A = np.array([[0.0, wb], [-wb, -gb]])
        D = np.diag([0.0, gb * (2 * n_b + 1)])
        V = solve_lyapunov(A, D)
        assert np.allclose(V, (n_b + 0.5) * np.eye(2), rtol=1e-8)

    def test_residual_bound(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        D = build_diffusion(baseline_model)
        V = solve_lyapunov(A, D)
        residual = np.linalg.norm(A @ V + V @ A.T + D) / np.linalg.norm(D)
        assert residual <= 1e-10

    def test_symmetry(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        V = solve_lyapunov(A, build_diffusion(baseline_model))
        assert np.array_equal(V, V.T)

    def test_unstable_rejected(self):
        with pytest.raises(UnstableSystemError) as err:
            solve_lyapunov(np.array([[0.1]]), np.array([[1.0]]))
        assert err.value.margin == pytest.approx(0.1)

    def test_unstable_working_point_rejected(self, baseline_model):
        # Without the magnon cooling channel the half-sideband working point
        # has no steady covariance.
        model = baseline_model.replace(G_m=0.0)
        A = build_drift(solve_steady_state(model), model)
        with pytest.raises(UnstableSystemError):
            solve_lyapunov(A, build_diffusion(model))


class TestEvolveOracle:
    def test_lyapunov_solution_is_fixed_point(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        D = build_diffusion(baseline_model)
        V = solve_lyapunov(A, D)
        dt = 0.01 / np.max(np.abs(A))
        for t_final in (1e-7, 1e-5, 1e-3):
            out = evolve_cm(A, D, V, t_final, dt)
            assert np.linalg.norm(out - V) / np.linalg.norm(V) < 1e-8

    def test_mechanical_thermalization(self):
        wb, gb = TWO_PI * 40e6, TWO_PI * 1e4  # fast mechanical damping
        n_b = 12.5
        A = np.array([[0.0, wb], [-wb, -gb]])
        D = np.diag([0.0, gb * (2 * n_b + 1)])
        V0 = np.eye(2) / 2.0
        V = evolve_cm(A, D, V0, 25.0 / (gb / 2.0), 0.01 / wb)
        assert np.allclose(V, (n_b + 0.5) * np.eye(2), rtol=1e-6)

    def test_agrees_with_lyapunov_at_baseline(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        D = build_diffusion(baseline_model)
        V = solve_lyapunov(A, D)
        _, margin = is_stable(A)
        out = evolve_cm(A, D, np.eye(8) / 2.0, 20.0 / abs(margin), 0.01 / np.max(np.abs(A)))
        assert np.linalg.norm(out - V) / np.linalg.norm(V) < 1e-6

    def test_step_size_guard(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        D = build_diffusion(baseline_model)
        dt_max = 0.01 / np.max(np.abs(A))
        with pytest.raises(ValueError, match="step bound"):
            evolve_cm(A, D, np.eye(8) / 2.0, 1e-6, 2.0 * dt_max)

    def test_divergence_reported(self):
        A = np.array([[5e6]])
        D = np.array([[1.0]])
        with pytest.raises(NumericalError, match="diverged"):
            evolve_cm(A, D, np.array([[0.5]]), 1.0, 0.01 / 5e6)

    def test_local_phase_invariance(self, baseline_model):
        # Flipping the sign of either effective coupling is a local Gaussian
        # operation; every bipartite E_N must be unchanged.
        ss = solve_steady_state(baseline_model)
        g = baseline_model
        D = build_diffusion(g)
        pairs = [("cavity", "phonon"), ("atom", "phonon"), ("atom", "magnon"), ("cavity", "magnon")]

        def all_en(sign_c, sign_m):
            A = drift_matrix(g.gamma_a, g.delta_a, g.g_N, g.kappa_c, ss.delta_c_eff,
                             sign_c * abs(ss.G_c), g.omega_b, g.gamma_b,
                             sign_m * abs(ss.G_m), g.kappa_m, ss.delta_m_eff)
            V = solve_lyapunov(A, D)
            return np.array([log_negativity(reduced_cm(V, p)) for p in pairs])

        reference = all_en(1.0, 1.0)
        assert np.allclose(all_en(-1.0, 1.0), reference, atol=1e-10)
        assert np.allclose(all_en(1.0, -1.0), reference, atol=1e-10)
        assert np.allclose(all_en(-1.0, -1.0), reference, atol=1e-10)

    def test_zero_coupling_factorization(self):
        model = default_params(g_N=0.0, G_c=0.0, G_m=0.0).validate()
        A = build_drift(solve_steady_state(model), model)
        V = solve_lyapunov(A, build_diffusion(model))
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert np.allclose(V[2 * i:2 * i + 2, 2 * j:2 * j + 2], 0.0, atol=1e-12)
        pairs = [("atom", "cavity"), ("cavity", "phonon"), ("atom", "magnon"), ("phonon", "magnon")]
        for pair in pairs:
            assert log_negativity(reduced_cm(V, pair)) == 0.0

    def test_oracle_equivalence_random_draws(self, baseline_model):
        # Ten seeded +-20% perturbations around the working point (the
        # acceptance suite runs the full fifty).
        rng = np.random.default_rng(1234)
        g = baseline_model
        count = 0
        while count < 10:
            factors = rng.uniform(0.8, 1.2, size=6)
            model = g.replace(
                G_c=g.G_c * factors[0],
                G_m=g.G_m * factors[1],
                g_N=g.g_N * factors[2],
                delta_a=g.delta_a * factors[3],
                delta_c_eff=g.delta_c_eff * factors[4],
                delta_m_eff=g.delta_m_eff * factors[5],
            )
            A = build_drift(solve_steady_state(model), model)
            stable, margin = is_stable(A)
            if not stable:
                continue
            count += 1
            D = build_diffusion(model)
            V = solve_lyapunov(A, D)
            out = evolve_cm(A, D, np.eye(8) / 2.0, 20.0 / abs(margin), 0.01 / np.max(np.abs(A)))
            assert np.linalg.norm(out - V) / np.linalg.norm(V) < 1e-6


class TestMatrixDump:
    def test_roundtrip_is_exact(self, baseline_model):
        A, _ = baseline_drift(baseline_model)
        V = solve_lyapunov(A, build_diffusion(baseline_model))
        assert np.array_equal(load_matrix(dump_matrix(V)), V)

    def test_format(self):
        text = dump_matrix(np.array([[1.0, -2.5e-17], [3.125e8, 0.0]]))
        lines = text.splitlines()
        assert len(lines) == 2
        assert lines[0].split() == [f"{1.0:.16e}", f"{-2.5e-17:.16e}"]
        assert lines[1].split() == [f"{3.125e8:.16e}", f"{0.0:.16e}"]

    def test_comment_lines_skipped(self):
        text = "# metadata\n# more\n1.0 2.0\n3.0 4.0\n"
        assert np.array_equal(load_matrix(text), np.array([[1.0, 2.0], [3.0, 4.0]]))

    def test_ragged_rejected(self):
        with pytest.raises(ValueError, match="ragged"):
            load_matrix("1.0 2.0\n3.0\n")
