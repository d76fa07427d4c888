"""Parameter-sweep harness: grids of entanglement values over the model.

Every grid point runs the full pipeline (steady state, drift/diffusion,
stability check, Lyapunov solve, logarithmic negativity) independently;
results are merged by grid index so the output is deterministic for any
degree of parallelism. Unstable or failed points record their entanglement
entries as absent (written as ``NA``), never as zero.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _version
from .entanglement import pair_entanglement, reduced_cm, symplectic_eigenvalues
from .linmodel import build_diffusion, build_drift, is_stable, solve_lyapunov
from .params import Model
from .steady import ConvergenceError, excitation_numbers, solve_steady_state

__all__ = [
    "AXIS_NAMES",
    "AXIS_UNITS",
    "PAIR_KEYS",
    "PAIR_MODES",
    "CSV_COLUMNS",
    "SweepAxis",
    "GridPoint",
    "SweepResult",
    "DetuningOptimum",
    "ValidityEntry",
    "ValidityReport",
    "OptimizationError",
    "evaluate_point",
    "sweep2d",
    "sweep1d",
    "temperature_sweep",
    "optimal_cavity_detuning",
    "validity_report",
    "thread_count",
]

AXIS_NAMES = ("delta_a", "delta_c_eff", "delta_m_eff", "G_m", "G_c", "T")
AXIS_UNITS = ("absolute", "omega_b", "G_c")
PAIR_KEYS = ("cb", "ab", "am", "cm")
PAIR_MODES = {
    "cb": ("cavity", "phonon"),
    "ab": ("atom", "phonon"),
    "am": ("atom", "magnon"),
    "cm": ("cavity", "magnon"),
}
CSV_COLUMNS = ("E_cb", "E_ab", "E_am", "E_cm", "stable", "valid_magnon", "valid_atom")

THREADS_ENV_VAR = "OMMSIM_THREADS"


class OptimizationError(RuntimeError):
    """The detuning search found no usable (stable) point in its range."""


def thread_count() -> int:
    """Worker count for grid evaluation: OMMSIM_THREADS or the CPU count."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: a linear grid in the tagged unit.

    unit "absolute" means rad/s for frequency-like parameters and kelvin for
    T; "omega_b" and "G_c" scale the grid by the model's mechanical frequency
    or optomechanical coupling.
    """

    name: str
    start: float
    stop: float
    count: int
    unit: str = "absolute"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis {self.name!r}: unknown parameter; expected one of {AXIS_NAMES}")
        if self.unit not in AXIS_UNITS:
            raise ValueError(f"axis {self.name!r}: unknown unit {self.unit!r}; expected one of {AXIS_UNITS}")
        if self.count < 2:
            raise ValueError(f"axis {self.name!r}: count must be >= 2, got {self.count}")
        if self.start == self.stop:
            raise ValueError(f"axis {self.name!r}: start and stop must differ, got {self.start}")
        if self.name == "T" and self.unit != "absolute":
            raise ValueError("axis 'T': temperature must use the absolute unit (kelvin)")

    def grid(self) -> np.ndarray:
        """Grid values in the tagged unit (what the CSV records)."""
        return np.linspace(self.start, self.stop, self.count)

    def scale(self, model: Model) -> float:
        if self.unit == "absolute":
            return 1.0
        if self.unit == "omega_b":
            return model.omega_b
        if model.G_c is None:
            raise ValueError(f"axis {self.name!r}: unit 'G_c' needs a model in coupling drive mode")
        return model.G_c

    def absolute(self, model: Model) -> np.ndarray:
        """Grid values converted to model units (rad/s or kelvin)."""
        return self.grid() * self.scale(model)

    def describe(self) -> str:
        return f"{self.name} from {self.start:.9e} to {self.stop:.9e} ({self.count} points, unit {self.unit})"


def _apply(model: Model, name: str, value: float) -> Model:
    if name not in AXIS_NAMES:
        raise ValueError(f"unknown sweep parameter {name!r}")
    if name in ("delta_c_eff", "delta_m_eff") and model.detuning_mode != "effective":
        raise ValueError(f"sweeping {name} needs a model with effective detunings")
    if name in ("G_c", "G_m") and model.drive_mode != "coupling":
        raise ValueError(f"sweeping {name} needs a model in coupling drive mode")
    return model.replace(**{name: value})


@dataclass(frozen=True)
class GridPoint:
    """Pipeline output at one grid point, axis values in their tagged units."""

    values: tuple[float, ...]
    e_n: dict[str, float | None]
    stable: bool
    valid_magnon: bool
    valid_atom: bool
    min_sympl: float | None  # smallest symplectic eigenvalue of the steady CM


def evaluate_point(model: Model, pairs: tuple[str, ...] = PAIR_KEYS) -> GridPoint:
    """Run the full pipeline on one model instance.

    Steady-state non-convergence and drift instability are recorded in-band
    (stable=False, absent E_N), so sweeps never abort on physics.
    """
    e_n: dict[str, float | None] = {key: None for key in pairs}
    try:
        ss = solve_steady_state(model)
    except ConvergenceError:
        return GridPoint((), e_n, False, False, False, None)
    occ = excitation_numbers(ss, model)
    A = build_drift(ss, model)
    stable, _ = is_stable(A)
    min_sympl = None
    if stable:
        D = build_diffusion(model)
        V = solve_lyapunov(A, D)
        min_sympl = float(symplectic_eigenvalues(V)[0])
        for key in pairs:
            e_n[key] = pair_entanglement(reduced_cm(V, PAIR_MODES[key])).e_n
    return GridPoint((), e_n, stable, occ.magnon_ok, occ.atom_ok, min_sympl)


@dataclass(frozen=True)
class SweepResult:
    """Row-major grid of pipeline outputs with CSV serialization."""

    axes: tuple[SweepAxis, ...]
    pairs: tuple[str, ...]
    points: tuple[GridPoint, ...]
    preamble: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        expected = int(np.prod([axis.count for axis in self.axes]))
        if len(self.points) != expected:
            raise ValueError(f"grid size mismatch: {len(self.points)} points for {expected} cells")

    def to_csv(self, extra_preamble: tuple[str, ...] = ()) -> str:
        """Serialize with '#' metadata comments, fixed header, NA for absent."""
        out = io.StringIO()
        for line in (*extra_preamble, *self.preamble):
            out.write(f"# {line}\n")
        header = [axis.name for axis in self.axes] + list(CSV_COLUMNS)
        out.write(",".join(header) + "\n")
        for point in self.points:
            cells = [f"{v:.9e}" for v in point.values]
            for key in PAIR_KEYS:
                value = point.e_n.get(key) if key in self.pairs else None
                cells.append("NA" if value is None else f"{value:.9e}")
            cells.append("1" if point.stable else "0")
            cells.append("1" if point.valid_magnon else "0")
            cells.append("1" if point.valid_atom else "0")
            out.write(",".join(cells) + "\n")
        return out.getvalue()

    def write_csv(self, path, extra_preamble: tuple[str, ...] = ()) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv(extra_preamble))

    def column(self, key: str) -> np.ndarray:
        """One E_N column as a float array with NaN for absent values."""
        return np.array(
            [np.nan if p.e_n.get(key) is None else p.e_n[key] for p in self.points]
        )


def _model_preamble(model: Model) -> tuple[str, ...]:
    lines = [f"ommsim {_version}"]
    for name in (
        "omega_b", "omega_m", "kappa_c", "kappa_m", "gamma_a", "gamma_b",
        "g_c", "g_m", "g_a", "g_N", "delta_a", "delta_c", "delta_m",
        "delta_c_eff", "delta_m_eff", "G_c", "G_m", "E", "Omega_d",
    ):
        value = getattr(model, name)
        if value is not None:
            lines.append(f"param {name} = {value:.12e} rad/s")
    lines.append(f"param T = {model.T:.12e} K")
    lines.append(f"param lambda_L = {model.lambda_L:.12e} m")
    lines.append(f"param N_atoms = {model.N_atoms:.12e}")
    lines.append(f"param N_spins = {model.N_spins:.12e}")
    return tuple(lines)


def _run_grid(tasks: list[Model], pairs: tuple[str, ...], threads: int | None) -> list[GridPoint]:
    workers = thread_count() if threads is None else threads
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda m: evaluate_point(m, pairs), tasks))
    return [evaluate_point(m, pairs) for m in tasks]


def sweep2d(
    model: Model,
    axis1: SweepAxis,
    axis2: SweepAxis,
    pairs: tuple[str, ...] = PAIR_KEYS,
    threads: int | None = None,
) -> SweepResult:
    """Evaluate the pipeline over a 2D grid, axis1 outer, axis2 inner."""
    if axis1.name == axis2.name:
        raise ValueError(f"sweep axes must name distinct parameters, both are {axis1.name!r}")
    for key in pairs:
        if key not in PAIR_KEYS:
            raise ValueError(f"unknown pair key {key!r}; expected among {PAIR_KEYS}")
    grid1, abs1 = axis1.grid(), axis1.absolute(model)
    grid2, abs2 = axis2.grid(), axis2.absolute(model)
    tasks = []
    coords = []
    for x1, a1 in zip(grid1, abs1):
        m1 = _apply(model, axis1.name, float(a1))
        for x2, a2 in zip(grid2, abs2):
            tasks.append(_apply(m1, axis2.name, float(a2)))
            coords.append((float(x1), float(x2)))
    raw = _run_grid(tasks, pairs, threads)
    points = tuple(
        GridPoint(coord, p.e_n, p.stable, p.valid_magnon, p.valid_atom, p.min_sympl)
        for coord, p in zip(coords, raw)
    )
    preamble = (
        f"axis1: {axis1.describe()}",
        f"axis2: {axis2.describe()}",
        f"pairs: {','.join(pairs)}",
        *_model_preamble(model),
    )
    return SweepResult(axes=(axis1, axis2), pairs=tuple(pairs), points=points, preamble=preamble)


def sweep1d(
    model: Model,
    axis: SweepAxis,
    pairs: tuple[str, ...] = PAIR_KEYS,
    threads: int | None = None,
) -> SweepResult:
    """Evaluate the pipeline along a single axis."""
    for key in pairs:
        if key not in PAIR_KEYS:
            raise ValueError(f"unknown pair key {key!r}; expected among {PAIR_KEYS}")
    grid, absolute = axis.grid(), axis.absolute(model)
    tasks = [_apply(model, axis.name, float(a)) for a in absolute]
    raw = _run_grid(tasks, pairs, threads)
    points = tuple(
        GridPoint((float(x),), p.e_n, p.stable, p.valid_magnon, p.valid_atom, p.min_sympl)
        for x, p in zip(grid, raw)
    )
    preamble = (
        f"axis1: {axis.describe()}",
        f"pairs: {','.join(pairs)}",
        *_model_preamble(model),
    )
    return SweepResult(axes=(axis,), pairs=tuple(pairs), points=points, preamble=preamble)


def temperature_sweep(
    model: Model,
    t_axis: SweepAxis,
    pairs: tuple[str, ...] = ("am",),
    threads: int | None = None,
) -> SweepResult:
    """Entanglement versus bath temperature (1D sweep over T)."""
    if t_axis.name != "T":
        raise ValueError(f"temperature_sweep needs an axis named 'T', got {t_axis.name!r}")
    return sweep1d(model, t_axis, pairs, threads)


@dataclass(frozen=True)
class DetuningOptimum:
    """Result of the cavity-detuning search at one magnomechanical coupling."""

    G_m: float  # rad/s
    delta_c_opt: float | None  # rad/s; None when no entanglement anywhere
    e_am_max: float
    defined: bool  # False when E_am vanished over the whole range
    evaluations: int
    min_sympl: float | None  # smallest symplectic eigenvalue seen over the search


_INV_PHI = 0.6180339887498949  # (sqrt(5) - 1) / 2


def optimal_cavity_detuning(
    model: Model,
    G_m: float,
    search_range: tuple[float, float] = (0.01, 1.5),
    coarse_points: int = 150,
    xtol_frac: float = 1e-3,
) -> DetuningOptimum:
    """Globally maximize atom-magnon entanglement over the cavity detuning.

    The atoms sit on the lower sideband (delta_a = -omega_b) and the magnon
    drive on its upper one (delta_m_eff = omega_b); ``search_range`` is in
    units of omega_b. A dense coarse scan locates up to three candidate local
    maxima (the hybridized branches make a single local search unreliable),
    each is refined by golden-section search to xtol_frac*omega_b, and the
    best refined point wins.
    """
    wb = model.omega_b
    m0 = _apply(model, "delta_a", -wb)
    m0 = _apply(m0, "delta_m_eff", wb)
    m0 = _apply(m0, "G_m", G_m)
    lo, hi = (search_range[0] * wb, search_range[1] * wb)
    if not lo < hi:
        raise ValueError(f"empty search range {search_range}")

    evaluations = 0
    min_sympl: float | None = None

    def objective(dtc: float) -> float:
        nonlocal evaluations, min_sympl
        evaluations += 1
        point = evaluate_point(m0.replace(delta_c_eff=dtc), pairs=("am",))
        if point.min_sympl is not None:
            min_sympl = point.min_sympl if min_sympl is None else min(min_sympl, point.min_sympl)
        value = point.e_n["am"]
        if value is None:
            return -np.inf
        # values at the covariance-solver noise floor are zero, not maxima
        return 0.0 if value <= 1e-9 else value

    xs = np.linspace(lo, hi, coarse_points)
    coarse = np.array([objective(float(x)) for x in xs])
    if not np.any(np.isfinite(coarse)):
        raise OptimizationError(
            f"no stable point for delta_c_eff in [{search_range[0]}, {search_range[1]}]*omega_b"
        )
    if np.nanmax(coarse[np.isfinite(coarse)]) <= 0.0:
        return DetuningOptimum(G_m, None, 0.0, False, evaluations, min_sympl)

    # Candidate brackets: local maxima of the coarse scan, best three.
    candidates = []
    for i in range(coarse_points):
        left = coarse[i - 1] if i > 0 else -np.inf
        right = coarse[i + 1] if i < coarse_points - 1 else -np.inf
        if np.isfinite(coarse[i]) and coarse[i] >= left and coarse[i] >= right:
            candidates.append(i)
    candidates.sort(key=lambda i: coarse[i], reverse=True)

    xtol = xtol_frac * wb
    best_x, best_f = None, -np.inf
    for i in candidates[:3]:
        a = float(xs[max(i - 1, 0)])
        b = float(xs[min(i + 1, coarse_points - 1)])
        x, f_x = _golden_max(objective, a, b, xtol)
        if f_x > best_f:
            best_x, best_f = x, f_x
    if best_x is None or best_f <= 0.0:
        return DetuningOptimum(G_m, None, 0.0, False, evaluations, min_sympl)
    return DetuningOptimum(G_m, best_x, float(best_f), True, evaluations, min_sympl)


def _golden_max(f, a: float, b: float, xtol: float) -> tuple[float, float]:
    """Golden-section maximization on [a, b] to absolute x tolerance."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class ValidityEntry:
    overrides: dict[str, float]
    n_magnon: float
    n_atom: float
    magnon_ratio: float
    atom_ratio: float
    flagged: bool


@dataclass(frozen=True)
class ValidityReport:
    """Low-excitation check aggregated over a set of model variations."""

    entries: tuple[ValidityEntry, ...]
    max_magnon_ratio: float
    max_atom_ratio: float

    @property
    def any_flagged(self) -> bool:
        return any(entry.flagged for entry in self.entries)


def validity_report(model: Model, points) -> ValidityReport:
    """Excitation numbers for each override mapping in ``points``.

    Each element of ``points`` is a mapping of sweep parameter names to
    absolute values (rad/s or kelvin); an empty mapping checks the model as
    given. Points whose ratio exceeds 0.1 are flagged.
    """
    entries = []
    for overrides in points:
        m = model
        for name, value in overrides.items():
            m = _apply(m, name, float(value))
        occ = excitation_numbers(solve_steady_state(m), m)
        entries.append(
            ValidityEntry(
                overrides=dict(overrides),
                n_magnon=occ.n_magnon,
                n_atom=occ.n_atom,
                magnon_ratio=occ.magnon_ratio,
                atom_ratio=occ.atom_ratio,
                flagged=occ.flagged,
            )
        )
    return ValidityReport(
        entries=tuple(entries),
        max_magnon_ratio=max((e.magnon_ratio for e in entries), default=0.0),
        max_atom_ratio=max((e.atom_ratio for e in entries), default=0.0),
    )
