"""Command-line entry point.

Configs are flat JSON documents. Every frequency-like key must be an object
carrying exactly one of the unit tags ``over_2pi_hz`` or ``rad_per_s``, so the
2*pi normalization is always explicit and applied exactly once. All artifacts
start with a ``#``-commented metadata preamble (config hash, resolved
parameters in rad/s, overrides) and are byte-identical across reruns of the
same configuration.

Exit codes: 0 success, 1 configuration or validation error, 2 numerical
failure (instability where a covariance is required, non-convergence, or a
failed search).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .constants import TWO_PI
from .entanglement import UnphysicalStateError, pair_entanglement, reduced_cm, symplectic_eigenvalues
from .linmodel import build_diffusion, build_drift, dump_matrix, is_stable, solve_lyapunov
from .params import Model, ParameterError, PhysicalParams
from .steady import excitation_numbers, solve_steady_state
from .sweeps import (
    PAIR_KEYS,
    PAIR_MODES,
    SweepAxis,
    _model_preamble,
    optimal_cavity_detuning,
    sweep2d,
    temperature_sweep,
)

__all__ = ["main", "ConfigError", "load_params"]

FREQUENCY_KEYS = (
    "omega_b", "omega_m", "kappa_c", "kappa_m", "gamma_a", "gamma_b",
    "g_c", "g_m", "g_a", "g_N", "delta_a", "delta_c", "delta_m",
    "delta_c_eff", "delta_m_eff", "G_c", "G_m",
)
PLAIN_KEYS = (
    "lambda_L", "T", "P_L", "B_d", "N_atoms", "N_spins",
    "spin_density", "yig_volume", "s_spin",
)
_UNIT_TAGS = ("over_2pi_hz", "rad_per_s")


class ConfigError(ValueError):
    """Malformed configuration document or override."""


def _parse_frequency(key: str, value) -> float:
    if not isinstance(value, dict) or len(value) != 1:
        raise ConfigError(
            f"config key {key!r} must be an object with exactly one of {_UNIT_TAGS}"
        )
    (tag, raw), = value.items()
    if tag not in _UNIT_TAGS:
        raise ConfigError(f"config key {key!r}: unknown unit tag {tag!r}")
    try:
        number = float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r}: value {raw!r} is not a number") from None
    return number * TWO_PI if tag == "over_2pi_hz" else number


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply --set key=value pairs to the raw config document.

    A bare frequency key inherits the unit tag already used in the config for
    that key (``over_2pi_hz`` when absent); dotted keys like
    ``kappa_c.rad_per_s`` select the tag explicitly.
    """
    doc = dict(raw)
    for item in overrides:
        key, sep, text = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key = key.strip()
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"override {key!r}: value {text!r} is not a number") from None
        base, dot, tag = key.partition(".")
        if dot:
            if base not in FREQUENCY_KEYS:
                raise ConfigError(f"override {key!r}: {base!r} takes no unit tag")
            if tag not in _UNIT_TAGS:
                raise ConfigError(f"override {key!r}: unknown unit tag {tag!r}")
            doc[base] = {tag: value}
        elif base in FREQUENCY_KEYS:
            previous = doc.get(base)
            if isinstance(previous, dict) and len(previous) == 1 and next(iter(previous)) in _UNIT_TAGS:
                tag = next(iter(previous))
            else:
                tag = "over_2pi_hz"
            doc[base] = {tag: value}
        elif base in PLAIN_KEYS:
            doc[base] = value
        else:
            raise ConfigError(f"override names unknown config key {base!r}")
    return doc


def parse_config(doc: dict) -> PhysicalParams:
    kwargs = {}
    for key, value in doc.items():
        if key in FREQUENCY_KEYS:
            kwargs[key] = _parse_frequency(key, value)
        elif key in PLAIN_KEYS:
            try:
                kwargs[key] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"config key {key!r}: value {value!r} is not a number") from None
        else:
            raise ConfigError(f"unknown config key {key!r}")
    try:
        return PhysicalParams(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"incomplete config: {exc}") from None


def config_hash(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def load_params(path: str, overrides: list[str] | None = None) -> tuple[Model, dict, str]:
    """Read a config file, apply overrides, validate: (model, document, hash)."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path!r} must contain a JSON object")
    doc = apply_overrides(raw, overrides or [])
    model = parse_config(doc).validate()
    return model, doc, config_hash(doc)


def _preamble(command: str, digest: str, overrides: list[str], model: Model) -> tuple[str, ...]:
    lines = [f"command: {command}", f"config_sha256: {digest}"]
    lines.extend(f"override: {item}" for item in overrides)
    lines.extend(_model_preamble(model))
    return tuple(lines)


def _parse_axis(spec: str, flag: str) -> SweepAxis:
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(
            f"{flag}: expected name:start:stop:count[:unit], got {spec!r}"
        )
    name = parts[0]
    try:
        start, stop = float(parts[1]), float(parts[2])
        count = int(parts[3])
    except ValueError:
        raise ConfigError(f"{flag}: malformed numbers in {spec!r}") from None
    unit = parts[4] if len(parts) == 5 else "absolute"
    if unit == "over_2pi_hz":
        start, stop, unit = start * TWO_PI, stop * TWO_PI, "absolute"
    try:
        return SweepAxis(name=name, start=start, stop=stop, count=count, unit=unit)
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from None


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.6e} {z.imag:+.6e}i"


def _cmd_check(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    ss = solve_steady_state(model)
    A = build_drift(ss, model)
    stable, margin = is_stable(A)
    print(f"# config_sha256: {digest}")
    print(f"{'stable' if stable else 'not stable'}")
    print(f"stability margin (max Re eig): {margin:.6e} rad/s")
    return 0


def _cmd_steady(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    ss = solve_steady_state(model)
    occ = excitation_numbers(ss, model)
    print(f"# config_sha256: {digest}")
    print(f"<a>  = {_fmt_complex(ss.amp_a)}")
    print(f"<c>  = {_fmt_complex(ss.amp_c)}")
    print(f"<m>  = {_fmt_complex(ss.amp_m)}")
    print(f"<q>  = {ss.q_mean:+.6e}")
    print(f"effective cavity detuning = {ss.delta_c_eff:.6e} rad/s")
    print(f"effective magnon detuning = {ss.delta_m_eff:.6e} rad/s")
    print(f"G_c = {_fmt_complex(ss.G_c)} rad/s  (|G_c|/2pi = {abs(ss.G_c) / TWO_PI:.6e} Hz)")
    print(f"G_m = {_fmt_complex(ss.G_m)} rad/s  (|G_m|/2pi = {abs(ss.G_m) / TWO_PI:.6e} Hz)")
    print(f"# iterations = {ss.iterations}, residual = {ss.residual:.3e}")
    print(f"magnon occupation {occ.n_magnon:.6e} / bound {occ.magnon_bound:.6e}"
          f" (ratio {occ.magnon_ratio:.3e}, {'ok' if occ.magnon_ok else 'EXCEEDED'})")
    print(f"atom occupation   {occ.n_atom:.6e} / bound {occ.atom_bound:.6e}"
          f" (ratio {occ.atom_ratio:.3e}, {'ok' if occ.atom_ok else 'EXCEEDED'})")
    if args.output:
        payload = {
            "amp_a": [ss.amp_a.real, ss.amp_a.imag],
            "amp_c": [ss.amp_c.real, ss.amp_c.imag],
            "amp_m": [ss.amp_m.real, ss.amp_m.imag],
            "q_mean": ss.q_mean,
            "delta_c_eff": ss.delta_c_eff,
            "delta_m_eff": ss.delta_m_eff,
            "G_c": [ss.G_c.real, ss.G_c.imag],
            "G_m": [ss.G_m.real, ss.G_m.imag],
            "iterations": ss.iterations,
            "residual": ss.residual,
            "n_magnon": occ.n_magnon,
            "n_atom": occ.n_atom,
            "config_sha256": digest,
        }
        with open(args.output, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
        print(f"# wrote {args.output}")
    return 0


def _solve_cm(model: Model):
    ss = solve_steady_state(model)
    A = build_drift(ss, model)
    D = build_diffusion(model)
    return solve_lyapunov(A, D)


def _cmd_cm(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    V = _solve_cm(model)
    with open(args.output, "w") as fh:
        for line in _preamble("cm", digest, args.set, model):
            fh.write(f"# {line}\n")
        fh.write(dump_matrix(V))
    nu_min = float(symplectic_eigenvalues(V)[0])
    print(f"# config_sha256: {digest}")
    print(f"wrote covariance matrix to {args.output}")
    print(f"smallest symplectic eigenvalue: {nu_min:.12f}")
    return 0


def _parse_pairs(text: str) -> tuple[str, ...]:
    pairs = tuple(p.strip() for p in text.split(",") if p.strip())
    for pair in pairs:
        if pair not in PAIR_KEYS:
            raise ConfigError(f"unknown pair {pair!r}; expected among {PAIR_KEYS}")
    if not pairs:
        raise ConfigError("no pairs requested")
    return pairs


def _cmd_entangle(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    pairs = _parse_pairs(args.pairs)
    V = _solve_cm(model)
    results = {}
    for key in pairs:
        results[key] = pair_entanglement(reduced_cm(V, PAIR_MODES[key]))
    print(f"# config_sha256: {digest}")
    for key, ent in results.items():
        print(f"E_{key} = {ent.e_n:.10e}   (eta- = {ent.eta_minus:.10e}, Sigma = {ent.sigma:.10e})")
    if args.output:
        with open(args.output, "w") as fh:
            for line in _preamble("entangle", digest, args.set, model):
                fh.write(f"# {line}\n")
            fh.write("pair,E_N\n")
            for key, ent in results.items():
                fh.write(f"{key},{ent.e_n:.9e}\n")
        print(f"# wrote {args.output}")
    return 0


def _cmd_sweep2d(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    axis1 = _parse_axis(args.axis1, "--axis1")
    axis2 = _parse_axis(args.axis2, "--axis2")
    pairs = _parse_pairs(args.pairs)
    result = sweep2d(model, axis1, axis2, pairs=pairs, threads=args.threads)
    result.write_csv(args.output, extra_preamble=_cli_lines("sweep2d", digest, args.set))
    n_stable = sum(1 for p in result.points if p.stable)
    print(f"# config_sha256: {digest}")
    print(f"wrote {args.output}: {len(result.points)} points, {n_stable} stable")
    return 0


def _cmd_tempsweep(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    axis = SweepAxis(name="T", start=args.t_start, stop=args.t_stop, count=args.t_points)
    pairs = _parse_pairs(args.pairs)
    result = temperature_sweep(model, axis, pairs=pairs, threads=args.threads)
    result.write_csv(args.output, extra_preamble=_cli_lines("tempsweep", digest, args.set))
    print(f"# config_sha256: {digest}")
    print(f"wrote {args.output}: {len(result.points)} temperatures")
    return 0


def _cmd_optdet(args) -> int:
    model, _, digest = load_params(args.config, args.set)
    lo, _, hi = args.range.partition(":")
    try:
        search_range = (float(lo), float(hi))
    except ValueError:
        raise ConfigError(f"--range: expected lo:hi in omega_b units, got {args.range!r}") from None
    gms = [args.gm_start + i * (args.gm_stop - args.gm_start) / (args.gm_points - 1)
           for i in range(args.gm_points)] if args.gm_points > 1 else [args.gm_start]
    rows = []
    for gm_hz in gms:
        opt = optimal_cavity_detuning(model, TWO_PI * gm_hz, search_range=search_range)
        rows.append((gm_hz, opt))
    with open(args.output, "w") as fh:
        for line in _cli_lines("optdet", digest, args.set):
            fh.write(f"# {line}\n")
        for line in _model_preamble(model):
            fh.write(f"# {line}\n")
        fh.write(f"# search range: [{search_range[0]}, {search_range[1]}] omega_b\n")
        fh.write("G_m_over_2pi_hz,delta_c_opt_over_omega_b,E_am_max\n")
        for gm_hz, opt in rows:
            ratio = "NA" if opt.delta_c_opt is None else f"{opt.delta_c_opt / model.omega_b:.9e}"
            fh.write(f"{gm_hz:.9e},{ratio},{opt.e_am_max:.9e}\n")
    print(f"# config_sha256: {digest}")
    print(f"wrote {args.output}: {len(rows)} coupling values")
    return 0


def _cli_lines(command: str, digest: str, overrides: list[str]) -> tuple[str, ...]:
    lines = [f"command: {command}", f"config_sha256: {digest}"]
    lines.extend(f"override: {item}" for item in overrides)
    return tuple(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ommsim",
        description="Steady-state Gaussian dynamics and entanglement of the "
                    "atom / cavity / phonon / magnon system.",
    )
    parser.add_argument("--version", action="version", version=f"ommsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_required=False, output=True):
        p.add_argument("--config", required=True, help="path to the JSON parameter file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry (repeatable); frequency keys "
                            "inherit the config's unit tag, or use key.rad_per_s=...")
        if output:
            p.add_argument("--output", "-o", required=output_required,
                           help="output artifact path")

    p = sub.add_parser("check", help="validate the config and report stability")
    common(p, output=False)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("steady", help="print the classical steady state and occupations")
    common(p)
    p.set_defaults(func=_cmd_steady)

    p = sub.add_parser("cm", help="solve the steady covariance matrix and dump it")
    common(p, output_required=True)
    p.set_defaults(func=_cmd_cm)

    p = sub.add_parser("entangle", help="print logarithmic negativity for mode pairs")
    common(p)
    p.add_argument("--pairs", default="cb,ab,am,cm", help="comma list among cb,ab,am,cm")
    p.set_defaults(func=_cmd_entangle)

    p = sub.add_parser("sweep2d", help="entanglement over a 2D parameter grid")
    common(p, output_required=True)
    p.add_argument("--axis1", required=True, metavar="NAME:START:STOP:COUNT[:UNIT]",
                   help="outer axis; unit among absolute, omega_b, G_c, over_2pi_hz")
    p.add_argument("--axis2", required=True, metavar="NAME:START:STOP:COUNT[:UNIT]")
    p.add_argument("--pairs", default="cb,ab,am,cm")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: OMMSIM_THREADS or CPU count)")
    p.set_defaults(func=_cmd_sweep2d)

    p = sub.add_parser("optdet", help="optimal cavity detuning versus magnon coupling")
    common(p, output_required=True)
    p.add_argument("--gm-start", type=float, required=True, help="G_m/2pi start, Hz")
    p.add_argument("--gm-stop", type=float, required=True, help="G_m/2pi stop, Hz")
    p.add_argument("--gm-points", type=int, default=30)
    p.add_argument("--range", default="0.01:1.5", help="detuning search range, omega_b units")
    p.set_defaults(func=_cmd_optdet)

    p = sub.add_parser("tempsweep", help="entanglement versus bath temperature")
    common(p, output_required=True)
    p.add_argument("--t-start", type=float, required=True, help="start temperature, K")
    p.add_argument("--t-stop", type=float, required=True, help="stop temperature, K")
    p.add_argument("--t-points", type=int, default=25)
    p.add_argument("--pairs", default="am")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=_cmd_tempsweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UnphysicalStateError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
