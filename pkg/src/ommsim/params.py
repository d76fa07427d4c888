"""Physical parameter model and derived drive/thermal quantities.

The raw :class:`PhysicalParams` container is mode-flagged: detunings are
supplied either bare (``delta_c``/``delta_m``, relative to the drive tones)
or effective (``delta_c_eff``/``delta_m_eff``, already including the static
mechanical shift), and the drives either as physical strengths (laser power
``P_L`` plus microwave field ``B_d``) or directly as the enhanced couplings
(``G_c``/``G_m``). :meth:`PhysicalParams.validate` checks every invariant at
once and resolves a fully populated :class:`Model`.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .constants import (
    BOLTZMANN,
    GYROMAGNETIC_RATIO,
    HBAR,
    SPEED_OF_LIGHT,
    TWO_PI,
    YIG_SPIN_DENSITY,
    YIG_SPIN_NUMBER,
)

__all__ = [
    "ParameterError",
    "PhysicalParams",
    "Model",
    "thermal_occupation",
    "drive_amplitude_from_power",
    "rabi_from_field",
]


class ParameterError(ValueError):
    """Raised by :meth:`PhysicalParams.validate` with every violation at once."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def thermal_occupation(omega: float, T: float) -> float:
    """Mean thermal occupation of a bosonic mode at angular frequency ``omega``.

    Evaluates 1/(exp(hbar*omega/kB*T) - 1). Returns exactly 0.0 at T = 0.
    """
    if omega <= 0.0:
        raise ValueError(f"thermal_occupation: omega must be > 0, got {omega}")
    if T < 0.0:
        raise ValueError(f"thermal_occupation: T must be >= 0, got {T}")
    if T == 0.0:
        return 0.0
    x = HBAR * omega / (BOLTZMANN * T)
    if x > 700.0:
        # exp(x) would overflow; the occupation is exp(-x) to within exp(-x).
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def drive_amplitude_from_power(P_L: float, lambda_L: float, kappa_c: float) -> float:
    """Cavity drive amplitude E = sqrt(2 kappa_c P_L / (hbar omega_L)).

    ``omega_L`` is the angular laser frequency 2*pi*c/lambda_L.
    """
    if P_L <= 0.0:
        raise ValueError(f"drive_amplitude_from_power: P_L must be > 0, got {P_L}")
    if lambda_L <= 0.0:
        raise ValueError(f"drive_amplitude_from_power: lambda_L must be > 0, got {lambda_L}")
    if kappa_c <= 0.0:
        raise ValueError(f"drive_amplitude_from_power: kappa_c must be > 0, got {kappa_c}")
    omega_L = TWO_PI * SPEED_OF_LIGHT / lambda_L
    return math.sqrt(2.0 * kappa_c * P_L / (HBAR * omega_L))


def rabi_from_field(B_d: float, N_spins: float) -> float:
    """Collective Rabi frequency (sqrt(5)/4) * gamma * sqrt(N_spins) * B_d.

    The gyromagnetic ratio is fixed at 2*pi*28 GHz/T.
    """
    if B_d < 0.0:
        raise ValueError(f"rabi_from_field: B_d must be >= 0, got {B_d}")
    if N_spins <= 0.0:
        raise ValueError(f"rabi_from_field: N_spins must be > 0, got {N_spins}")
    return 0.25 * math.sqrt(5.0) * GYROMAGNETIC_RATIO * math.sqrt(N_spins) * B_d


_RATE_FIELDS = ("kappa_c", "kappa_m", "gamma_a", "gamma_b")
_REL_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Bare system parameters. Frequencies and rates are angular (rad/s).

    Exactly one detuning form (bare or effective) and one drive form
    (power/field or effective couplings) must be supplied.
    """

    omega_b: float  # mechanical frequency
    omega_m: float  # magnon frequency (enters only the thermal occupation)
    lambda_L: float  # drive laser wavelength, m
    kappa_c: float  # cavity decay rate
    kappa_m: float  # magnon dissipation rate
    gamma_a: float  # atomic decay rate
    gamma_b: float  # mechanical damping rate
    g_c: float  # bare optomechanical coupling
    g_m: float  # bare magnomechanical coupling
    g_a: float  # single-atom cavity coupling
    delta_a: float  # atomic detuning from the laser
    T: float  # bath temperature, K
    N_atoms: float | None = None
    g_N: float | None = None  # collective atom-cavity coupling g_a*sqrt(N_atoms)
    delta_c: float | None = None
    delta_m: float | None = None
    delta_c_eff: float | None = None
    delta_m_eff: float | None = None
    P_L: float | None = None  # laser power, W (0 allowed: undriven cavity)
    B_d: float | None = None  # microwave field amplitude, T
    N_spins: float | None = None
    G_c: float | None = None
    G_m: float | None = None
    spin_density: float = YIG_SPIN_DENSITY  # 1/m^3
    yig_volume: float = 1e-17  # m^3
    s_spin: float = YIG_SPIN_NUMBER

    def validate(self) -> "Model":
        """Check all invariants, resolve derived quantities, return a Model.

        Every violated invariant is reported (with its field name) in a single
        :class:`ParameterError`; nothing is resolved partially.
        """
        errors: list[str] = []

        for name in _RATE_FIELDS:
            value = getattr(self, name)
            if not value > 0.0:
                errors.append(f"{name} must be > 0, got {value}")
        if not self.omega_b > 0.0:
            errors.append(f"omega_b must be > 0, got {self.omega_b}")
        if not self.omega_m > 0.0:
            errors.append(f"omega_m must be > 0, got {self.omega_m}")
        if not self.lambda_L > 0.0:
            errors.append(f"lambda_L must be > 0, got {self.lambda_L}")
        if self.T < 0.0:
            errors.append(f"T must be >= 0, got {self.T}")
        for name in ("g_c", "g_m"):
            if getattr(self, name) < 0.0:
                errors.append(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.g_a > 0.0:
            errors.append(f"g_a must be > 0, got {self.g_a}")
        if self.spin_density <= 0.0:
            errors.append(f"spin_density must be > 0, got {self.spin_density}")
        if self.yig_volume <= 0.0:
            errors.append(f"yig_volume must be > 0, got {self.yig_volume}")
        if self.s_spin <= 0.0:
            errors.append(f"s_spin must be > 0, got {self.s_spin}")

        # Collective atom coupling: accept either representation, demand
        # consistency when both are given.
        g_N = self.g_N
        N_atoms = self.N_atoms
        if g_N is None and N_atoms is None:
            errors.append("one of g_N, N_atoms is required")
        elif g_N is None:
            if N_atoms <= 0.0:
                errors.append(f"N_atoms must be > 0, got {N_atoms}")
            else:
                g_N = self.g_a * math.sqrt(N_atoms)
        elif N_atoms is None:
            if g_N < 0.0:
                errors.append(f"g_N must be >= 0, got {g_N}")
            else:
                N_atoms = (g_N / self.g_a) ** 2
        else:
            if abs(self.g_a**2 * N_atoms - g_N**2) > _REL_TOL * g_N**2:
                errors.append("g_N and (g_a, N_atoms) are inconsistent: "
                              f"g_a^2*N_atoms={self.g_a**2 * N_atoms!r} vs g_N^2={g_N**2!r}")

        bare = self.delta_c is not None or self.delta_m is not None
        effective = self.delta_c_eff is not None or self.delta_m_eff is not None
        if bare and effective:
            errors.append("detuning mode conflict: both bare (delta_c/delta_m) and "
                          "effective (delta_c_eff/delta_m_eff) detunings supplied")
            detuning_mode = "bare"
        elif bare:
            if self.delta_c is None or self.delta_m is None:
                errors.append("bare detuning mode needs both delta_c and delta_m")
            detuning_mode = "bare"
        elif effective:
            if self.delta_c_eff is None or self.delta_m_eff is None:
                errors.append("effective detuning mode needs both delta_c_eff and delta_m_eff")
            detuning_mode = "effective"
        else:
            errors.append("no detunings supplied: set delta_c/delta_m or delta_c_eff/delta_m_eff")
            detuning_mode = "bare"

        power = self.P_L is not None or self.B_d is not None
        coupling = self.G_c is not None or self.G_m is not None
        N_spins = self.N_spins if self.N_spins is not None else self.spin_density * self.yig_volume
        if N_spins <= 0.0:
            errors.append(f"N_spins must be > 0, got {N_spins}")
        E = 0.0
        Omega_d = 0.0
        G_c = self.G_c
        G_m = self.G_m
        if power and coupling:
            errors.append("drive mode conflict: both power/field (P_L/B_d) and "
                          "effective couplings (G_c/G_m) supplied")
            drive_mode = "power"
        elif power:
            drive_mode = "power"
            if self.P_L is None or self.B_d is None:
                errors.append("power drive mode needs both P_L and B_d (either may be 0)")
            else:
                if self.P_L < 0.0:
                    errors.append(f"P_L must be >= 0, got {self.P_L}")
                elif self.P_L > 0.0 and self.lambda_L > 0.0 and self.kappa_c > 0.0:
                    E = drive_amplitude_from_power(self.P_L, self.lambda_L, self.kappa_c)
                if self.B_d < 0.0:
                    errors.append(f"B_d must be >= 0, got {self.B_d}")
                elif self.B_d > 0.0 and N_spins > 0.0:
                    Omega_d = rabi_from_field(self.B_d, N_spins)
            G_c = G_m = None
        elif coupling:
            drive_mode = "coupling"
            if self.G_c is None or self.G_m is None:
                errors.append("coupling drive mode needs both G_c and G_m (either may be 0)")
            else:
                if self.G_c < 0.0:
                    errors.append(f"G_c must be >= 0, got {self.G_c}")
                if self.G_m < 0.0:
                    errors.append(f"G_m must be >= 0, got {self.G_m}")
                if self.G_c > 0.0 and self.g_c == 0.0:
                    errors.append("G_c > 0 requires g_c > 0 to back out the cavity amplitude")
                if self.G_m > 0.0 and self.g_m == 0.0:
                    errors.append("G_m > 0 requires g_m > 0 to back out the magnon amplitude")
        else:
            errors.append("no drive supplied: set P_L/B_d or G_c/G_m")
            drive_mode = "power"

        if errors:
            raise ParameterError(errors)

        return Model(
            omega_b=self.omega_b,
            omega_m=self.omega_m,
            lambda_L=self.lambda_L,
            kappa_c=self.kappa_c,
            kappa_m=self.kappa_m,
            gamma_a=self.gamma_a,
            gamma_b=self.gamma_b,
            g_c=self.g_c,
            g_m=self.g_m,
            g_a=self.g_a,
            g_N=g_N,
            N_atoms=N_atoms,
            delta_a=self.delta_a,
            T=self.T,
            detuning_mode=detuning_mode,
            delta_c=self.delta_c,
            delta_m=self.delta_m,
            delta_c_eff=self.delta_c_eff,
            delta_m_eff=self.delta_m_eff,
            drive_mode=drive_mode,
            P_L=self.P_L,
            B_d=self.B_d,
            E=E,
            Omega_d=Omega_d,
            G_c=G_c,
            G_m=G_m,
            N_spins=N_spins,
            spin_density=self.spin_density,
            yig_volume=self.yig_volume,
            s_spin=self.s_spin,
        )


@dataclass(frozen=True)
class Model:
    """Validated, fully resolved parameter set (all angular frequencies, rad/s)."""

    omega_b: float
    omega_m: float
    lambda_L: float
    kappa_c: float
    kappa_m: float
    gamma_a: float
    gamma_b: float
    g_c: float
    g_m: float
    g_a: float
    g_N: float
    N_atoms: float
    delta_a: float
    T: float
    detuning_mode: str  # "bare" | "effective"
    delta_c: float | None
    delta_m: float | None
    delta_c_eff: float | None
    delta_m_eff: float | None
    drive_mode: str  # "power" | "coupling"
    P_L: float | None
    B_d: float | None
    E: float  # resolved laser drive amplitude (0 in coupling mode)
    Omega_d: float  # resolved microwave Rabi frequency (0 in coupling mode)
    G_c: float | None  # real effective couplings in coupling mode, else None
    G_m: float | None
    N_spins: float
    spin_density: float
    yig_volume: float
    s_spin: float

    def replace(self, **updates) -> "Model":
        """Return a copy with fields replaced, re-checking the cheap sign invariants."""
        model = dataclasses.replace(self, **updates)
        for name in ("G_c", "G_m"):
            value = getattr(model, name)
            if value is not None and value < 0.0:
                raise ParameterError([f"{name} must be >= 0, got {value}"])
        if model.T < 0.0:
            raise ParameterError([f"T must be >= 0, got {model.T}"])
        return model

    def thermal_occupations(self, T: float | None = None) -> tuple[float, float]:
        """Mean phonon and magnon bath occupations (N_b, N_m) at temperature T."""
        temp = self.T if T is None else T
        if temp == 0.0:
            return 0.0, 0.0
        return (
            thermal_occupation(self.omega_b, temp),
            thermal_occupation(self.omega_m, temp),
        )
