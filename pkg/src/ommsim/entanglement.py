"""Bipartite logarithmic negativity and Gaussian physicality diagnostics.

The global mode order is (atom, cavity, phonon, magnon); mode k owns
quadrature rows 2k and 2k+1 of the 8x8 covariance matrix. The vacuum
variance is 1/2 per quadrature, so physical states have every symplectic
eigenvalue >= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MODES",
    "UnphysicalStateError",
    "mode_index",
    "reduced_cm",
    "log_negativity",
    "pair_entanglement",
    "entanglement_report",
    "symplectic_form",
    "symplectic_eigenvalues",
    "PairEntanglement",
]

MODES = ("atom", "cavity", "phonon", "magnon")
_ALIASES = {"a": "atom", "c": "cavity", "b": "phonon", "m": "magnon"}

# Discriminant values within this relative margin of zero are rounding noise
# near pure or degenerate states and are clamped instead of raising.
_CLAMP = 1e-9


class UnphysicalStateError(ValueError):
    """The covariance matrix violates the uncertainty relation beyond rounding."""


def mode_index(mode: str | int) -> int:
    if isinstance(mode, int):
        if 0 <= mode < len(MODES):
            return mode
        raise ValueError(f"mode index out of range: {mode}")
    name = _ALIASES.get(mode, mode)
    try:
        return MODES.index(name)
    except ValueError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES} or {tuple(_ALIASES)}") from None


def reduced_cm(V: np.ndarray, pair: tuple[str | int, str | int]) -> np.ndarray:
    """Extract the 4x4 covariance matrix of an ordered mode pair."""
    e, f = (mode_index(m) for m in pair)
    if e == f:
        raise ValueError(f"reduced_cm: modes must be distinct, got {pair}")
    V = np.asarray(V, dtype=float)
    idx = [2 * e, 2 * e + 1, 2 * f, 2 * f + 1]
    return V[np.ix_(idx, idx)]


@dataclass(frozen=True)
class PairEntanglement:
    """Logarithmic negativity of one bipartition plus its raw diagnostics."""

    e_n: float
    eta_minus: float  # smallest symplectic eigenvalue of the partial transpose
    sigma: float  # det V_e + det V_f - 2 det V_ef


def pair_entanglement(V4: np.ndarray) -> PairEntanglement:
    """Logarithmic negativity of a two-mode covariance matrix.

    Uses the partial-transpose invariant: with Sigma = det V_e + det V_f
    - 2 det V_ef, the smallest symplectic eigenvalue after partial
    transposition is eta- = sqrt((Sigma - sqrt(Sigma^2 - 4 det V4))/2) and
    E_N = max(0, -ln 2 eta-). Discriminants within -1e-9*Sigma^2 of zero are
    clamped (rounding near pure states); anything more negative raises.
    """
    V4 = np.asarray(V4, dtype=float)
    if V4.shape != (4, 4):
        raise ValueError(f"pair_entanglement: expected a 4x4 matrix, got {V4.shape}")
    det_e = float(np.linalg.det(V4[:2, :2]))
    det_f = float(np.linalg.det(V4[2:, 2:]))
    det_ef = float(np.linalg.det(V4[:2, 2:]))
    det_v4 = float(np.linalg.det(V4))
    sigma = det_e + det_f - 2.0 * det_ef

    disc = sigma * sigma - 4.0 * det_v4
    if disc < 0.0:
        if disc < -_CLAMP * sigma * sigma:
            raise UnphysicalStateError(
                f"negative discriminant {disc:.3e} (Sigma={sigma:.6e}): covariance is unphysical"
            )
        disc = 0.0
    inner = sigma - math.sqrt(disc)
    if inner < 0.0:
        if inner < -_CLAMP * abs(sigma):
            raise UnphysicalStateError(
                f"negative eta^2 {inner:.3e}: covariance is unphysical"
            )
        inner = 0.0
    if inner == 0.0:
        raise UnphysicalStateError("vanishing partial-transpose eigenvalue: covariance is singular")
    eta_minus = math.sqrt(0.5 * inner)
    e_n = max(0.0, -math.log(2.0 * eta_minus))
    return PairEntanglement(e_n=e_n, eta_minus=eta_minus, sigma=sigma)


def log_negativity(V4: np.ndarray) -> float:
    """E_N of a two-mode covariance matrix (see :func:`pair_entanglement`)."""
    return pair_entanglement(V4).e_n


def entanglement_report(
    V: np.ndarray,
    pairs: tuple[tuple[str | int, str | int], ...],
) -> dict[tuple[str, str], PairEntanglement]:
    """Compute E_N and diagnostics for each requested mode pair of an 8x8 CM."""
    report = {}
    for pair in pairs:
        names = tuple(MODES[mode_index(m)] for m in pair)
        report[names] = pair_entanglement(reduced_cm(V, pair))
    return report


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form, [[0, 1], [-1, 0]] per mode."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a (symmetric positive definite) covariance matrix.

    Returns the n positive values for a 2n x 2n input, sorted ascending; a
    state is physical iff all of them are >= 1/2.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError(f"symplectic_eigenvalues: expected an even square matrix, got {V.shape}")
    n = V.shape[0] // 2
    V = 0.5 * (V + V.T)
    eigs = np.linalg.eigvals(1j * symplectic_form(n) @ V)
    magnitudes = np.sort(np.abs(eigs))
    # Eigenvalues come in +/- pairs; average each pair to suppress rounding.
    return 0.5 * (magnitudes[0::2] + magnitudes[1::2])
