"""Command-line front end: traces, sweeps, cutoff reports, critical points,
and the reduced/full equivalence check, emitted as CSV or JSON.

Machine output keeps full float precision (shortest round-trip repr); without
``--out`` a human-readable table is printed with four decimals instead.
Option values merge with precedence: command-line flags, then an optional
``key=value`` config file, then built-in defaults.  Environment variables are
never consulted.

Exit codes: 0 success, 1 usage error, 2 property-check failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .asymptotic import hadamard_critical_points, midcourse_critical_points, REGIME_HADAMARD, REGIME_ORDER_F
from .core import (
    ComplexPair,
    PhasePair,
    SearchSpace,
    apply_iterate,
    hadamard_init,
    step_pair,
    target_probability,
    wrap_angle,
)
from .fullsim import full_iterate, reduce_state, uniform_state
from .objective import ObjectiveContext
from .optimizer import (
    NoPhaseMatchedPrefixError,
    OptimizerConfig,
    derive_seed,
    detect_cutoff,
    optimize_phases,
    phase_matched,
    sweep_alpha,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PROPERTY = 2
EXIT_IO = 3

_EQUIVALENCE_SEQUENCES = 20

TRACE_COLUMNS = ("step", "amplitude_target_real", "amplitude_target_imag", "probability", "phi", "psi")
SWEEP_COLUMNS = ("alpha", "phi_opt", "psi_opt", "prob_before", "prob_after", "rounded_phase_matched")
CUTOFF_COLUMNS = ("size", "alpha_cutoff", "probability_at_cutoff")
CRITICAL_COLUMNS = ("term", "phi", "psi", "h_phiphi", "h_phipsi", "h_psipsi", "kind")
EQUIVALENCE_COLUMNS = ("sequence", "target", "max_deviation")


class UsageError(Exception):
    """Bad invocation: missing or inconsistent options."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully merged description of one CLI run."""

    command: str
    n: int | None = None
    steps: int | None = None
    mode: str | None = None
    num_points: int | None = None
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    grid: int = 181
    restarts: int = 16
    tol: float = 1e-10

    def validate(self) -> None:
        needs = {
            "trace": ("n", "steps", "mode"),
            "sweep": ("n", "num_points"),
            "cutoff": ("n", "num_points"),
            "critical-points": (),
            "equivalence": ("n",),
        }[self.command]
        for field in needs:
            if getattr(self, field) is None:
                flag = {"num_points": "--points"}.get(field, f"--{field}")
                raise UsageError(f"{self.command} requires {flag}")
        if self.mode is not None and self.mode not in ("classical", "optimized"):
            raise UsageError(f"--mode must be 'classical' or 'optimized', got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"--format must be 'csv' or 'json', got {self.format!r}")
        if self.n is not None and self.n < 1:
            raise UsageError(f"--n must be >= 1, got {self.n}")
        if self.steps is not None and self.steps < 0:
            raise UsageError(f"--steps must be >= 0, got {self.steps}")
        if self.num_points is not None and self.num_points < 2:
            raise UsageError(f"--points must be >= 2, got {self.num_points}")

    def optimizer_config(self) -> OptimizerConfig:
        try:
            return OptimizerConfig(coarse_grid=self.grid, restarts=self.restarts, rng_seed=self.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def trace_rows(n: int, steps: int, mode: str, cfg: OptimizerConfig) -> list[dict]:
    """Iterate from the uniform start, fixed (pi, pi) steps or per-step optima.

    In optimized mode the objective is solved with the state's relative phase
    absorbed into the oracle angle; the realized oracle phase (after removing
    that absorption) is what the row reports.
    """
    space = SearchSpace(n)
    state = hadamard_init(space)
    rows = [_trace_row(0, state, None)]
    for step in range(1, steps + 1):
        if mode == "classical":
            phases = PhasePair(math.pi, math.pi)
        else:
            result = optimize_phases(
                ObjectiveContext(state.alpha, space.size),
                replace(cfg, rng_seed=derive_seed(cfg.rng_seed, step)),
            )
            phases = PhasePair(result.best.psi, wrap_angle(result.best.phi - state.theta))
        state = apply_iterate(state, phases, space)
        rows.append(_trace_row(step, state, phases))
    return rows


def _trace_row(step: int, state, phases: PhasePair | None) -> dict:
    amplitude = cmath.exp(1j * state.theta) * math.sin(state.alpha)
    return {
        "step": step,
        "amplitude_target_real": amplitude.real,
        "amplitude_target_imag": amplitude.imag,
        "probability": target_probability(state),
        "phi": None if phases is None else phases.phi,
        "psi": None if phases is None else phases.psi,
    }


def sweep_rows(n: int, num_points: int, cfg: OptimizerConfig) -> list[dict]:
    """Alpha sweep rows plus the two-decimal phase-matching flag."""
    return [
        {
            "alpha": row.alpha,
            "phi_opt": row.phi_opt,
            "psi_opt": row.psi_opt,
            "prob_before": row.probability_before,
            "prob_after": row.probability_after,
            "rounded_phase_matched": int(phase_matched(PhasePair(row.psi_opt, row.phi_opt))),
        }
        for row in sweep_alpha(1 << n, num_points, cfg)
    ]


def critical_point_rows() -> list[dict]:
    """Six uniform-start records followed by four mid-course records."""
    rows = []
    for term, points in (
        (REGIME_HADAMARD, hadamard_critical_points()),
        (REGIME_ORDER_F, midcourse_critical_points()),
    ):
        for point in points:
            rows.append(
                {
                    "term": term,
                    "phi": point.phi,
                    "psi": point.psi,
                    "h_phiphi": float(point.hessian[0, 0]),
                    "h_phipsi": float(point.hessian[0, 1]),
                    "h_psipsi": float(point.hessian[1, 1]),
                    "kind": point.kind,
                }
            )
    return rows


def equivalence_rows(n: int, length: int, seed: int, sequences: int = _EQUIVALENCE_SEQUENCES) -> list[dict]:
    """Per-sequence worst deviation between full and reduced trajectories.

    Each sequence draws a random target and random phase pairs, steps both
    simulations in lockstep and compares the pooled amplitudes (raw matrix
    products on the reduced side, so global phases must agree too).
    """
    size = 1 << n
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    rows = []
    for sequence in range(sequences):
        target = int(rng.integers(size))
        space = SearchSpace(n, target)
        full = uniform_state(n)
        pair = ComplexPair(complex(1.0 / math.sqrt(size)), complex(math.sqrt((size - 1.0) / size)))
        worst = 0.0
        for _ in range(length):
            phases = PhasePair(*(float(x) for x in rng.uniform(-math.pi, math.pi, 2)))
            full = full_iterate(full, phases, target)
            pair = step_pair(pair, phases, space)
            reduced = reduce_state(full, target)
            worst = max(
                worst,
                abs(reduced.a_target - pair.a_target),
                abs(reduced.a_rest - pair.a_rest),
            )
        rows.append({"sequence": sequence, "target": target, "max_deviation": worst})
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_output(spec: ExperimentSpec, columns: tuple[str, ...], rows: list[dict]) -> None:
    meta = {"command": spec.command, "version": __version__}
    for key in ("n", "steps", "mode", "num_points", "seed", "grid", "restarts"):
        value = getattr(spec, key)
        if value is not None:
            meta[key] = value
    with open(spec.output_path, "w", newline="") as fh:
        if spec.format == "json":
            json.dump({"meta": meta, "rows": rows}, fh, indent=2)
            fh.write("\n")
        else:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_format_cell(row[key]) for key in columns) + "\n")


def _print_table(columns: tuple[str, ...], rows: list[dict]) -> None:
    def human(value) -> str:
        if value is None:
            return "-"
        if isinstance(value, float):
            return f"{value:.4f}"
        return str(value)

    table = [columns] + [tuple(human(row[key]) for key in columns) for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
    for line in table:
        print("  ".join(cell.rjust(width) for cell, width in zip(line, widths)))


def _emit(spec: ExperimentSpec, columns: tuple[str, ...], rows: list[dict]) -> None:
    if spec.output_path is None:
        _print_table(columns, rows)
    else:
        _write_output(spec, columns, rows)


def _run_trace(spec: ExperimentSpec) -> int:
    rows = trace_rows(spec.n, spec.steps, spec.mode, spec.optimizer_config())
    _emit(spec, TRACE_COLUMNS, rows)
    return EXIT_OK


def _run_sweep(spec: ExperimentSpec) -> int:
    rows = sweep_rows(spec.n, spec.num_points, spec.optimizer_config())
    _emit(spec, SWEEP_COLUMNS, rows)
    return EXIT_OK


def _run_cutoff(spec: ExperimentSpec) -> int:
    sweep = sweep_alpha(1 << spec.n, spec.num_points, spec.optimizer_config())
    try:
        report = detect_cutoff(sweep, 1 << spec.n)
    except NoPhaseMatchedPrefixError as exc:
        first = sweep[0]
        print(f"property failure: {exc}", file=sys.stderr)
        json.dump(
            {"alpha": first.alpha, "psi_opt": first.psi_opt, "phi_opt": first.phi_opt},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return EXIT_PROPERTY
    out_rows = [
        {
            "size": report.size,
            "alpha_cutoff": report.alpha_cutoff,
            "probability_at_cutoff": report.probability_at_cutoff,
        }
    ]
    _emit(spec, CUTOFF_COLUMNS, out_rows)
    return EXIT_OK


def _run_critical_points(spec: ExperimentSpec) -> int:
    _emit(spec, CRITICAL_COLUMNS, critical_point_rows())
    return EXIT_OK


def _run_equivalence(spec: ExperimentSpec) -> int:
    length = spec.steps if spec.steps is not None else 8
    rows = equivalence_rows(spec.n, length, spec.seed)
    _emit(spec, EQUIVALENCE_COLUMNS, rows)
    worst = max(row["max_deviation"] for row in rows)
    if worst > spec.tol:
        offending = max(rows, key=lambda row: row["max_deviation"])
        print(f"property failure: max deviation {worst:.3e} > {spec.tol:g}", file=sys.stderr)
        json.dump(offending, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_PROPERTY
    print(f"max deviation {worst:.3e} < {spec.tol:g}")
    return EXIT_OK


_DISPATCH = {
    "trace": _run_trace,
    "sweep": _run_sweep,
    "cutoff": _run_cutoff,
    "critical-points": _run_critical_points,
    "equivalence": _run_equivalence,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="grover-phases",
        description="Experiments around optimal phase choices for the generalized Grover iteration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output file path (prints a table when omitted)")
        p.add_argument("--format", default=None, choices=("csv", "json"))
        p.add_argument("--seed", type=int, default=None, help="seed for reproducible random starts")
        p.add_argument("--grid", type=int, default=None, help="coarse grid points per axis")
        p.add_argument("--restarts", type=int, default=None, help="random refinement starts")
        p.add_argument("--config", default=None, help="key=value config file; flags take precedence")

    p = sub.add_parser("trace", help="step-by-step iteration from the uniform start")
    p.add_argument("--n", type=int, default=None, help="qubit count")
    p.add_argument("--steps", type=int, default=None, help="number of iterations")
    p.add_argument("--mode", default=None, choices=("classical", "optimized"))
    add_common(p)

    p = sub.add_parser("sweep", help="optimal phases over evenly spaced amplitude angles")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--points", type=int, default=None, help="number of alpha values")
    add_common(p)

    p = sub.add_parser("cutoff", help="where the sweep stops rounding to (pi, pi)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--points", type=int, default=None)
    add_common(p)

    p = sub.add_parser("critical-points", help="critical points of the leading terms")
    add_common(p)

    p = sub.add_parser("equivalence", help="reduced model versus full statevector")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--steps", type=int, default=None, help="phase rotations per sequence (default 8)")
    p.add_argument("--tol", type=float, default=None, help="maximum allowed deviation (default 1e-10)")
    add_common(p)

    return parser


_CONFIG_TYPES = {
    "n": int,
    "steps": int,
    "mode": str,
    "points": int,
    "out": str,
    "format": str,
    "seed": int,
    "grid": int,
    "restarts": int,
    "tol": float,
}


def _read_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_TYPES:
                raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_TYPES[key](value.strip())
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _assemble_spec(args: argparse.Namespace) -> ExperimentSpec:
    config = _read_config(args.config) if getattr(args, "config", None) else {}

    def pick(flag: str, default):
        cli_value = getattr(args, flag, None)
        if cli_value is not None:
            return cli_value
        return config.get(flag, default)

    spec = ExperimentSpec(
        command=args.command,
        n=pick("n", None),
        steps=pick("steps", None),
        mode=pick("mode", None),
        num_points=pick("points", None),
        output_path=pick("out", None),
        format=pick("format", "csv"),
        seed=pick("seed", 0),
        grid=pick("grid", 181),
        restarts=pick("restarts", 16),
        tol=pick("tol", 1e-10),
    )
    spec.validate()
    return spec


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        spec = _assemble_spec(args)
        return _DISPATCH[spec.command](spec)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
