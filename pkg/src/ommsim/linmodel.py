"""Linearized fluctuation dynamics and the steady-state covariance matrix.

Quadrature ordering is fixed globally as

    u = (x_a, y_a, x_c, y_c, q, p, x_m, y_m)

with x = (o + o^dag)/sqrt(2), y = i(o^dag - o)/sqrt(2), so a damped mode at
zero temperature relaxes to variance 1/2 per quadrature. The steady
covariance V solves A V + V A^T = -D; it is obtained here by a dense
vectorized linear solve, with an independent time-domain integrator of
dV/dt = A V + V A^T + D available as a cross-check.
"""

from __future__ import annotations

import math

import numpy as np

from .params import Model
from .steady import SteadyState

__all__ = [
    "QUADRATURES",
    "UnstableSystemError",
    "NumericalError",
    "drift_matrix",
    "build_drift",
    "build_diffusion",
    "is_stable",
    "solve_lyapunov",
    "evolve_cm",
    "dump_matrix",
    "load_matrix",
]

QUADRATURES = ("x_a", "y_a", "x_c", "y_c", "q", "p", "x_m", "y_m")


class UnstableSystemError(RuntimeError):
    """The drift matrix has a non-negative eigenvalue real part."""

    def __init__(self, margin: float):
        super().__init__(f"drift matrix is not stable (max Re eig = {margin:.6e})")
        self.margin = margin


class NumericalError(RuntimeError):
    """A linear-algebra step produced an unacceptable residual or non-finite values."""


def drift_matrix(
    gamma_a: float,
    delta_a: float,
    g_N: float,
    kappa_c: float,
    delta_c_eff: float,
    G_c: float,
    omega_b: float,
    gamma_b: float,
    G_m: float,
    kappa_m: float,
    delta_m_eff: float,
) -> np.ndarray:
    """Drift matrix of the linearized dynamics for signed real couplings."""
    return np.array(
        [
            [-gamma_a, delta_a, 0.0, g_N, 0.0, 0.0, 0.0, 0.0],
            [-delta_a, -gamma_a, -g_N, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, g_N, -kappa_c, delta_c_eff, G_c, 0.0, 0.0, 0.0],
            [-g_N, 0.0, -delta_c_eff, -kappa_c, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, omega_b, 0.0, 0.0],
            [0.0, 0.0, 0.0, -G_c, -omega_b, -gamma_b, 0.0, G_m],
            [0.0, 0.0, 0.0, 0.0, -G_m, 0.0, -kappa_m, delta_m_eff],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -delta_m_eff, -kappa_m],
        ]
    )


def build_drift(ss: SteadyState, model: Model) -> np.ndarray:
    """Drift matrix at a converged steady state.

    The effective couplings enter through their magnitudes with the phases
    fixed real positive; entanglement downstream is invariant under that
    local phase convention.
    """
    A = drift_matrix(
        gamma_a=model.gamma_a,
        delta_a=model.delta_a,
        g_N=model.g_N,
        kappa_c=model.kappa_c,
        delta_c_eff=ss.delta_c_eff,
        G_c=abs(ss.G_c),
        omega_b=model.omega_b,
        gamma_b=model.gamma_b,
        G_m=abs(ss.G_m),
        kappa_m=model.kappa_m,
        delta_m_eff=ss.delta_m_eff,
    )
    if not np.all(np.isfinite(A)):
        raise ValueError("build_drift: non-finite parameter entered the drift matrix")
    return A


def build_diffusion(model: Model, T: float | None = None) -> np.ndarray:
    """Diagonal diffusion matrix of the input noises.

    The optical and atomic baths are taken at zero occupation (their mode
    frequencies put the thermal occupation far below double precision); the
    phonon and magnon baths carry gamma_b(2N_b+1) and kappa_m(2N_m+1).
    """
    n_b, n_m = model.thermal_occupations(T)
    return np.diag(
        [
            model.gamma_a,
            model.gamma_a,
            model.kappa_c,
            model.kappa_c,
            0.0,
            model.gamma_b * (2.0 * n_b + 1.0),
            model.kappa_m * (2.0 * n_m + 1.0),
            model.kappa_m * (2.0 * n_m + 1.0),
        ]
    )


def is_stable(A: np.ndarray) -> tuple[bool, float]:
    """Whether every drift eigenvalue has a negative real part.

    Returns (stable, margin) where margin = max Re eig(A); stable systems
    have margin < 0 and the magnitude is the slowest decay rate.
    """
    if not np.all(np.isfinite(A)):
        raise ValueError("is_stable: drift matrix has non-finite entries")
    margin = float(np.max(np.linalg.eigvals(np.asarray(A, dtype=float)).real))
    return margin < 0.0, margin


def _vec_generator(A: np.ndarray) -> np.ndarray:
    """Generator of d vec(V)/dt = L vec(V) for row-major flattening."""
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(A, eye) + np.kron(eye, A)


def solve_lyapunov(A: np.ndarray, D: np.ndarray, residual_tol: float = 1e-10) -> np.ndarray:
    """Steady covariance from A V + V A^T = -D by a dense vectorized solve.

    Rejects unstable A up front. The solution is symmetrized and the
    residual ||A V + V A^T + D||_F / ||D||_F is checked against
    ``residual_tol``; failing that indicates an ill-conditioned system.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    stable, margin = is_stable(A)
    if not stable:
        raise UnstableSystemError(margin)
    K = _vec_generator(A)
    V = np.linalg.solve(K, -D.reshape(-1)).reshape(A.shape)
    # One step of iterative refinement: conditioning of the vectorized system
    # otherwise leaves cross-block dirt well above rounding near degenerate
    # (vacuum-like) steady states.
    R = A @ V + V @ A.T + D
    V = V - np.linalg.solve(K, R.reshape(-1)).reshape(A.shape)
    V = 0.5 * (V + V.T)
    norm_d = np.linalg.norm(D)
    residual = np.linalg.norm(A @ V + V @ A.T + D) / norm_d
    if not np.isfinite(residual) or residual > residual_tol:
        raise NumericalError(
            f"Lyapunov solve residual {residual:.3e} exceeds tolerance {residual_tol:.1e}"
        )
    return V


def evolve_cm(
    A: np.ndarray,
    D: np.ndarray,
    V0: np.ndarray,
    t_final: float,
    dt: float,
) -> np.ndarray:
    """Integrate dV/dt = A V + V A^T + D from V0 with fixed-step RK4.

    For this linear flow one RK4 step is an affine map on vec(V); the map is
    formed once (with a symmetrization of V folded in after each step) and the
    requested number of steps is applied by exact binary composition, which
    reproduces the sequential fixed-step result at a cost logarithmic in the
    step count. The step size must satisfy dt <= 0.01/max|A_ij|; for stable A
    and t_final beyond ~20 decay times the output approximates the steady
    Lyapunov solution.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    if t_final <= 0.0:
        raise ValueError(f"evolve_cm: t_final must be > 0, got {t_final}")
    if dt <= 0.0:
        raise ValueError(f"evolve_cm: dt must be > 0, got {dt}")
    scale = float(np.max(np.abs(A)))
    if scale > 0.0 and dt > 0.01 / scale * (1.0 + 1e-12):
        raise ValueError(
            f"evolve_cm: dt={dt:.3e} exceeds the step bound 0.01/max|A| = {0.01 / scale:.3e}"
        )

    n = A.shape[0]
    n_steps = max(1, math.ceil(t_final / dt))
    h = t_final / n_steps

    L = _vec_generator(A)
    dim = n * n
    eye = np.eye(dim)
    hL = h * L
    # One RK4 step of v' = L v + d: v -> M v + c with the classical tableau
    # summing to the degree-4 Taylor polynomial of the exact propagator.
    M = eye + hL @ (eye + hL @ (eye / 2.0 + hL @ (eye / 6.0 + hL / 24.0)))
    c = (h * (eye + hL @ (eye / 2.0 + hL @ (eye / 6.0 + hL / 24.0)))) @ D.reshape(-1)

    # Symmetrize after every step: average with the transpose permutation.
    transpose_perm = np.arange(dim).reshape(n, n).T.reshape(-1)
    M = 0.5 * (M + M[transpose_perm])
    c = 0.5 * (c + c[transpose_perm])

    # Binary composition of the n_steps-fold affine map. Unstable systems can
    # overflow here; that is caught by the finiteness check on the result.
    with np.errstate(over="ignore", invalid="ignore"):
        res_m, res_c = eye, np.zeros(dim)
        base_m, base_c = M, c
        k = n_steps
        while k:
            if k & 1:
                res_m = base_m @ res_m
                res_c = base_m @ res_c + base_c
            k >>= 1
            if k:
                base_c = base_m @ base_c + base_c
                base_m = base_m @ base_m

        v0 = 0.5 * (V0 + V0.T).reshape(-1)
        V = (res_m @ v0 + res_c).reshape(n, n)

    V = 0.5 * (V + V.T)
    if not np.all(np.isfinite(V)):
        raise NumericalError("evolve_cm: integration diverged to non-finite values")
    return V


def dump_matrix(M: np.ndarray) -> str:
    """Serialize a matrix as row-major decimal text, 17 significant digits."""
    M = np.asarray(M, dtype=float)
    return "\n".join(" ".join(f"{x:.16e}" for x in row) for row in M) + "\n"


def load_matrix(text: str) -> np.ndarray:
    """Parse :func:`dump_matrix` output; lines starting with '#' are skipped."""
    rows = [
        [float(tok) for tok in line.split()]
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise ValueError("load_matrix: no data rows found")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("load_matrix: ragged rows")
    return np.array(rows)
