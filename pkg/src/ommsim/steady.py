"""Classical steady state of the driven four-mode system.

The magnon and cavity amplitudes displace the mechanical mode, and the
displacement shifts both effective detunings back into the amplitudes, so in
bare-detuning drive mode the fixed point is found by damped iteration on the
displacement. In all other mode combinations the steady state is available in
closed form and is returned after a single pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import Model

__all__ = [
    "SteadyState",
    "OccupancyReport",
    "ConvergenceError",
    "BistabilityError",
    "solve_steady_state",
    "excitation_numbers",
]

_SQRT2 = math.sqrt(2.0)


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not reach the residual tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class BistabilityError(ConvergenceError):
    """Residual grew persistently: the classical equations look multistable here."""


@dataclass(frozen=True)
class SteadyState:
    """Classical amplitudes, displacement and the resulting effective quantities."""

    amp_a: complex  # atomic polarization amplitude
    amp_c: complex  # cavity amplitude
    amp_m: complex  # magnon amplitude
    q_mean: float  # mechanical displacement (dimensionless quadrature units)
    delta_c_eff: float
    delta_m_eff: float
    G_c: complex  # sqrt(2)*g_c*<c> rotated by i (real positive in coupling mode)
    G_m: complex
    iterations: int
    residual: float


def _rel_change(new: complex, old: complex) -> float:
    scale = max(abs(new), abs(old), 1e-300)
    return abs(new - old) / scale


def _closed_form_amps(model: Model, delta_c_eff: float, delta_m_eff: float):
    """Cavity/magnon/atom amplitudes for fixed effective detunings."""
    den_m = model.kappa_m + 1j * delta_m_eff
    amp_m = model.Omega_d / den_m
    atom = model.gamma_a + 1j * model.delta_a
    den_c = model.g_N**2 + atom * (model.kappa_c + 1j * delta_c_eff)
    amp_c = model.E * atom / den_c
    amp_a = -1j * model.g_N * amp_c / atom
    return amp_a, amp_c, amp_m


def _displacement(model: Model, amp_c: complex, amp_m: complex) -> float:
    return (model.g_c * abs(amp_c) ** 2 - model.g_m * abs(amp_m) ** 2) / model.omega_b


def solve_steady_state(
    model: Model,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    damping: float = 0.5,
) -> SteadyState:
    """Solve the classical fixed point of the driven system.

    In coupling drive mode the user-supplied real G_c, G_m are taken at face
    value and the amplitudes are backed out as pure imaginary numbers (the
    phase convention under which the effective couplings are real positive).
    In power drive mode the amplitudes follow the exact closed forms; with
    bare detunings the mechanical displacement is iterated to selfconsistency
    with damped updates q <- q + damping*(f(q) - q).
    """
    if model.drive_mode == "coupling":
        amp_c = -1j * (model.G_c / (_SQRT2 * model.g_c)) if model.G_c > 0.0 else 0j
        amp_m = -1j * (model.G_m / (_SQRT2 * model.g_m)) if model.G_m > 0.0 else 0j
        atom = model.gamma_a + 1j * model.delta_a
        amp_a = -1j * model.g_N * amp_c / atom
        q = _displacement(model, amp_c, amp_m)
        if model.detuning_mode == "effective":
            dtc, dtm = model.delta_c_eff, model.delta_m_eff
        else:
            dtc = model.delta_c - model.g_c * q
            dtm = model.delta_m + model.g_m * q
        return SteadyState(
            amp_a=amp_a,
            amp_c=amp_c,
            amp_m=amp_m,
            q_mean=q,
            delta_c_eff=dtc,
            delta_m_eff=dtm,
            G_c=complex(model.G_c),
            G_m=complex(model.G_m),
            iterations=1,
            residual=0.0,
        )

    if model.detuning_mode == "effective":
        dtc, dtm = model.delta_c_eff, model.delta_m_eff
        amp_a, amp_c, amp_m = _closed_form_amps(model, dtc, dtm)
        q = _displacement(model, amp_c, amp_m)
        return SteadyState(
            amp_a=amp_a,
            amp_c=amp_c,
            amp_m=amp_m,
            q_mean=q,
            delta_c_eff=dtc,
            delta_m_eff=dtm,
            G_c=1j * _SQRT2 * model.g_c * amp_c,
            G_m=1j * _SQRT2 * model.g_m * amp_m,
            iterations=1,
            residual=0.0,
        )

    # Bare detunings with physical drives: iterate the displacement.
    def detunings(q: float) -> tuple[float, float]:
        return model.delta_c - model.g_c * q, model.delta_m + model.g_m * q

    q = 0.0
    _, amp_c, amp_m = _closed_form_amps(model, *detunings(q))
    residual = math.inf
    growth_run = 0
    prev_residual = math.inf
    for iteration in range(1, max_iter + 1):
        f = _displacement(model, amp_c, amp_m)
        q_new = q + damping * (f - q)
        _, amp_c_new, amp_m_new = _closed_form_amps(model, *detunings(q_new))
        residual = max(
            _rel_change(amp_c_new, amp_c),
            _rel_change(amp_m_new, amp_m),
            _rel_change(q_new, q),
        )
        q, amp_c, amp_m = q_new, amp_c_new, amp_m_new
        if residual <= tol:
            dtc, dtm = detunings(q)
            amp_a, amp_c, amp_m = _closed_form_amps(model, dtc, dtm)
            return SteadyState(
                amp_a=amp_a,
                amp_c=amp_c,
                amp_m=amp_m,
                q_mean=q,
                delta_c_eff=dtc,
                delta_m_eff=dtm,
                G_c=1j * _SQRT2 * model.g_c * amp_c,
                G_m=1j * _SQRT2 * model.g_m * amp_m,
                iterations=iteration,
                residual=residual,
            )
        if residual > prev_residual:
            growth_run += 1
            if growth_run >= 100:
                raise BistabilityError(
                    "residual grew over 100 consecutive iterations; "
                    "the classical steady state looks bistable here",
                    residual,
                    iteration,
                )
        else:
            growth_run = 0
        prev_residual = residual

    raise ConvergenceError("steady-state iteration did not converge", residual, max_iter)


@dataclass(frozen=True)
class OccupancyReport:
    """Steady excitation numbers against the bosonization bounds."""

    n_magnon: float  # |<m>|^2
    n_atom: float  # |<a>|^2
    magnon_bound: float  # 2 * N_spins * s
    atom_bound: float  # N_atoms
    magnon_ratio: float
    atom_ratio: float

    @property
    def magnon_ok(self) -> bool:
        return self.magnon_ratio <= 0.1

    @property
    def atom_ok(self) -> bool:
        return self.atom_ratio <= 0.1

    @property
    def flagged(self) -> bool:
        """True when either excitation exceeds 10% of its bound."""
        return not (self.magnon_ok and self.atom_ok)


def excitation_numbers(ss: SteadyState, model: Model) -> OccupancyReport:
    """Check the low-excitation conditions that justify the bosonic picture."""
    n_magnon = abs(ss.amp_m) ** 2
    n_atom = abs(ss.amp_a) ** 2
    magnon_bound = 2.0 * model.N_spins * model.s_spin
    atom_bound = model.N_atoms
    return OccupancyReport(
        n_magnon=n_magnon,
        n_atom=n_atom,
        magnon_bound=magnon_bound,
        atom_bound=atom_bound,
        magnon_ratio=n_magnon / magnon_bound if magnon_bound > 0.0 else 0.0,
        atom_ratio=n_atom / atom_bound if atom_bound > 0.0 else 0.0,
    )
