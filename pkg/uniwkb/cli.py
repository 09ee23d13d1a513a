"""
cli.py
------
Command-line front end.  Each run computes one table, writes it as a CSV or
JSON artifact and appends a record to runs.jsonl.

    uniwkb spectrum     --potential hydrogen --params l=0 --methods exact,wkb,improved --n 0..5
    uniwkb transmit     --potential poschl-teller-barrier --params v0=2.5 --emin 0.1 --emax 3 --steps 50
    uniwkb wavefunction --potential poschl-teller-well --n 2 --xmin -4 --xmax 4 --points 201
    uniwkb error-control --potential hydrogen --params l=1 --energy -0.1 --xmin 0.01 --xmax 20
    uniwkb compare      --potential poschl-teller-barrier --params v0=2.5,alpha=1 --methods improved,wkb,exact-numeric

Exit codes: 0 success, 2 invalid request, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from uniwkb import __version__
from uniwkb.core import config
from uniwkb.core.errors import ClassificationError, UniformWKBError, ValidationError, exit_code_for
from uniwkb.core.logging_config import get_logger
from uniwkb.services.oracle.numerov import numerov_eigenfunction, numerov_eigenvalues
from uniwkb.services.potentials.catalog import (
    CATALOG_KINDS,
    DOMAINS,
    FULL_LINE,
    USER_DEFINED,
    PotentialSpec,
    make_potential,
    user_defined_potential,
)
from uniwkb.services.potentials.splitting import build_splitting, wkb_splitting
from uniwkb.services.semiclassical.error_control import error_control_H, error_control_I, wkb_condition
from uniwkb.services.semiclassical.quantization import (
    SpectrumResult,
    closed_form_spectrum,
    solve_spectrum_improved,
    solve_spectrum_wkb,
)
from uniwkb.services.semiclassical.transmission import (
    TRANSMISSION_METHODS,
    barrier_top_energy,
    transmission_curve,
)
from uniwkb.services.semiclassical.turning_points import BARRIER, WELL, PairReal, SingleReal, find_turning_points
from uniwkb.services.storage.artifact_store import (
    FORMATS,
    append_run_record,
    next_artifact_path,
    write_csv_artifact,
    write_json_artifact,
)
from uniwkb.services.wavefunction.uniform import (
    DECAY_AT_INFINITY,
    DECAY_AT_ORIGIN,
    INCIDENT_FROM_LEFT,
    RAW,
    UNIT_INCIDENT_FLUX,
    BoundaryCondition,
    WaveSample,
    psi_barrier,
    psi_single_tp,
    psi_well,
)
from uniwkb.utils.grids import default_barrier_energies, default_x_grid, energy_grid, x_grid
from uniwkb.utils.ranges import parse_methods, parse_params, parse_quantum_numbers

logger = get_logger(__name__)

SPECTRUM_METHODS = ("exact", "wkb", "improved", "numerov")
WAVEFUNCTION_METHODS = ("improved", "numerov")
ERROR_CONTROL_METHODS = ("improved", "wkb")

SUBCOMMANDS = {
    "spectrum": "bound-state energies",
    "transmit": "barrier transmission T(E)",
    "wavefunction": "uniform or Numerov wave function on a grid",
    "error-control": "error-control functions and the WKB condition on a grid",
    "compare": "methods side by side (T(E) for barriers, E_n for wells)",
}

_VALID_METHODS = {
    "spectrum": SPECTRUM_METHODS,
    "transmit": TRANSMISSION_METHODS,
    "wavefunction": WAVEFUNCTION_METHODS,
    "error-control": ERROR_CONTROL_METHODS,
    "compare": tuple(dict.fromkeys(SPECTRUM_METHODS + TRANSMISSION_METHODS)),
}

DEFAULT_N = tuple(range(6))
DEFAULT_STEPS = 100
DEFAULT_POINTS = 401


# ── Request ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RunRequest:
    subcommand: str
    potential: str
    params: Dict[str, str] = field(default_factory=dict)
    methods: Tuple[str, ...] = ()
    n: Tuple[int, ...] = ()
    energy: Optional[float] = None
    emin: Optional[float] = None
    emax: Optional[float] = None
    steps: Optional[int] = None
    xmin: Optional[float] = None
    xmax: Optional[float] = None
    points: Optional[int] = None
    fmt: str = "csv"
    output: Optional[Path] = None
    expr: Optional[str] = None
    domain: str = FULL_LINE
    pole_order: int = 0
    threshold: Optional[float] = None
    boundary: Optional[float] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValidationError(f"subcommand must be one of {list(SUBCOMMANDS)}, got {self.subcommand!r}")
        valid_kinds = list(CATALOG_KINDS) + [USER_DEFINED]
        if self.potential not in valid_kinds:
            raise ValidationError(f"potential must be one of {valid_kinds}, got {self.potential!r}")
        if self.fmt not in FORMATS:
            raise ValidationError(f"format must be one of {list(FORMATS)}, got {self.fmt!r}")
        if self.domain not in DOMAINS:
            raise ValidationError(f"domain must be one of {list(DOMAINS)}, got {self.domain!r}")
        valid = _VALID_METHODS[self.subcommand]
        for method in self.methods:
            if method not in valid:
                raise ValidationError(f"method must be one of {list(valid)}, got {method!r}")
        if self.steps is not None and self.steps < 1:
            raise ValidationError(f"steps must be a positive integer, got {self.steps!r}")
        if self.points is not None and self.points < 2:
            raise ValidationError(f"points must be at least 2, got {self.points!r}")
        for name in ("energy", "emin", "emax", "xmin", "xmax", "threshold", "boundary"):
            value = getattr(self, name)
            if value is not None and math.isnan(value):
                raise ValidationError(f"{name} must be a number, got {value!r}")


@dataclass(frozen=True)
class RunOutcome:
    exit_code: int
    artifact: Optional[Path] = None
    message: str = ""


@dataclass
class _Table:
    methods: List[str]
    columns: List[str]
    rows: List[Sequence[object]]
    extra: dict = field(default_factory=dict)


# ── Potential and grids ───────────────────────────────────────────────────────

def build_potential(request: RunRequest) -> PotentialSpec:
    params = dict(request.params)
    params.setdefault("m", str(config.DEFAULT_MASS))
    params.setdefault("hbar", str(config.DEFAULT_HBAR))
    if request.potential == USER_DEFINED:
        if not request.expr:
            raise ValidationError("a user-defined potential needs --expr")
        threshold = math.inf if request.threshold is None else request.threshold
        return user_defined_potential(request.expr, domain=request.domain, pole_order=request.pole_order,
                                      params=params, threshold=threshold)
    if request.expr:
        raise ValidationError(f"--expr only applies to {USER_DEFINED!r}, not {request.potential!r}")
    return make_potential(request.potential, params)


def _is_barrier(spec: PotentialSpec) -> bool:
    extreme = build_splitting(spec, 0.0).extreme
    return extreme is not None and not extreme.is_minimum


def _quantum_numbers(request: RunRequest) -> List[int]:
    return list(request.n) if request.n else list(DEFAULT_N)


def _energies(request: RunRequest, spec: PotentialSpec) -> np.ndarray:
    if request.energy is not None:
        return np.array([request.energy])
    if request.emin is not None or request.emax is not None:
        if request.emin is None or request.emax is None:
            raise ValidationError("--emin and --emax must be given together")
        return energy_grid(request.emin, request.emax, request.steps or DEFAULT_STEPS)
    peak = spec.barrier_top if spec.barrier_top is not None else barrier_top_energy(spec)
    return default_barrier_energies(peak)


def _positions(request: RunRequest, spec: PotentialSpec, anchors: Sequence[float]) -> np.ndarray:
    points = request.points or DEFAULT_POINTS
    if request.xmin is not None or request.xmax is not None:
        if request.xmin is None or request.xmax is None:
            raise ValidationError("--xmin and --xmax must be given together")
        return x_grid(request.xmin, request.xmax, points)
    return default_x_grid(anchors, spec.length_scale, spec.half_line, points)


def _anchors(tps, splitting) -> List[float]:
    if tps.real_points:
        return list(tps.real_points)
    if splitting.extreme is not None:
        return [splitting.extreme.x]
    return [splitting.spec.length_scale if splitting.spec.half_line else 0.0]


# ── Handlers ──────────────────────────────────────────────────────────────────

def _spectrum_result(spec: PotentialSpec, method: str, ns: List[int], boundary: Optional[float]) -> SpectrumResult:
    if method == "exact":
        if not spec.is_catalog:
            raise ValidationError(f"method 'exact' needs a catalog potential, got {spec.kind!r}")
        if boundary is not None:
            raise ValidationError("closed forms do not take a boundary")
        return closed_form_spectrum(spec, ns, "exact")
    if method == "wkb":
        return solve_spectrum_wkb(spec, ns, boundary)
    if method == "improved":
        return solve_spectrum_improved(spec, ns, boundary)
    if boundary is not None:
        raise ValidationError("the Numerov oracle does not take a boundary")
    full = numerov_eigenvalues(spec, max(ns))
    entries = tuple(e for e in full.entries if e.n in ns)
    return SpectrumResult("numerov", spec.kind, entries, full.params)


def _spectrum(request: RunRequest, spec: PotentialSpec) -> _Table:
    methods = list(request.methods) or ["exact", "wkb", "improved"]
    ns = _quantum_numbers(request)
    rows = []
    for method in methods:
        result = _spectrum_result(spec, method, ns, request.boundary)
        rows.extend((entry.n, method, entry.energy) for entry in result.entries)
    return _Table(methods, ["n", "method", "E"], rows)


def _transmit(request: RunRequest, spec: PotentialSpec) -> _Table:
    methods = list(request.methods) or ["improved"]
    energies = _energies(request, spec)
    rows = []
    for method in methods:
        curve = transmission_curve(spec, energies, method)
        rows.extend((E, method, T) for E, T in curve.samples)
    return _Table(methods, ["E", "method", "T"], rows)


def _compare(request: RunRequest, spec: PotentialSpec) -> _Table:
    if _is_barrier(spec):
        methods = list(request.methods) or ["improved", "wkb", "exact-numeric"]
        for method in methods:
            if method not in TRANSMISSION_METHODS:
                raise ValidationError(f"barrier comparisons take methods {list(TRANSMISSION_METHODS)}, got {method!r}")
        energies = _energies(request, spec)
        curves = [transmission_curve(spec, energies, method) for method in methods]
        rows = [[E] + [curve.transmissions[i] for curve in curves] for i, E in enumerate(energies)]
        return _Table(methods, ["E"] + [f"T_{m}" for m in methods], rows)

    methods = list(request.methods) or (["exact", "wkb", "improved"] if spec.is_catalog else ["wkb", "improved", "numerov"])
    for method in methods:
        if method not in SPECTRUM_METHODS:
            raise ValidationError(f"well comparisons take methods {list(SPECTRUM_METHODS)}, got {method!r}")
    ns = _quantum_numbers(request)
    results = [_spectrum_result(spec, method, ns, request.boundary) for method in methods]
    rows = [[n] + [result.energy(n) for result in results] for n in ns]
    return _Table(methods, ["n"] + [f"E_{m}" for m in methods], rows)


def _uniform_samples(spec: PotentialSpec, n: int, energy: float, request: RunRequest) -> Tuple[List[WaveSample], float]:
    splitting = build_splitting(spec, energy)
    tps = find_turning_points(splitting)
    xs = _positions(request, spec, _anchors(tps, splitting))
    cls = tps.classification
    if isinstance(cls, PairReal) and tps.extreme_kind == WELL and not tps.coalesced:
        return psi_well(splitting, tps, n, xs), energy
    if tps.is_pair and tps.extreme_kind == BARRIER:
        bc = BoundaryCondition(INCIDENT_FROM_LEFT, UNIT_INCIDENT_FLUX)
        return psi_barrier(splitting, tps, bc, xs), energy
    if isinstance(cls, SingleReal):
        delta = 1e-3 * spec.length_scale
        kind = DECAY_AT_INFINITY if float(splitting(cls.x0 + delta)) > 0 else DECAY_AT_ORIGIN
        return psi_single_tp(splitting, cls.x0, BoundaryCondition(kind, RAW), xs), energy
    raise ClassificationError(f"no uniform wave function for turning points of kind {tps.kind!r}")


def _wavefunction(request: RunRequest, spec: PotentialSpec) -> _Table:
    methods = list(request.methods) or ["improved"]
    ns = _quantum_numbers(request) if request.n else [0]
    if len(ns) != 1:
        raise ValidationError(f"wavefunction takes a single state, got --n covering {len(ns)} states")
    n = ns[0]
    rows = []
    energies = {}
    for method in methods:
        if method == "improved":
            energy = request.energy
            if energy is None:
                energy = solve_spectrum_improved(spec, [n]).energy(n)
            samples, energy = _uniform_samples(spec, n, energy, request)
        else:
            if request.energy is not None:
                raise ValidationError("the Numerov eigenfunction is found from --n, not --energy")
            energy = numerov_eigenvalues(spec, n).energy(n)
            anchors = _anchors(*_turning_points(spec, energy))
            samples = numerov_eigenfunction(spec, n, grid=_positions(request, spec, anchors))
        energies[method] = energy
        for s in samples:
            rows.append((s.x, method, float(np.real(s.psi)), float(np.imag(s.psi)), s.log_scale, s.region,
                         math.nan if s.map_value is None else s.map_value))
    columns = ["x", "method", "psi_re", "psi_im", "log_scale", "region", "map_value"]
    return _Table(methods, columns, rows, {"n": n, "energies": energies})


def _turning_points(spec: PotentialSpec, energy: float):
    splitting = build_splitting(spec, energy)
    return find_turning_points(splitting), splitting


def _error_control(request: RunRequest, spec: PotentialSpec) -> _Table:
    methods = list(request.methods) or ["improved"]
    ns = _quantum_numbers(request) if request.n else [0]
    rows = []
    for method in methods:
        energy = request.energy
        if energy is None:
            solver = solve_spectrum_improved if method == "improved" else solve_spectrum_wkb
            energy = solver(spec, ns[:1]).energy(ns[0])
        splitting = build_splitting(spec, energy) if method == "improved" else wkb_splitting(spec, energy)
        tps = find_turning_points(splitting)
        xs = _positions(request, spec, _anchors(tps, splitting))
        zeros = tps.real_points
        Q = np.atleast_1d(wkb_condition(spec, energy, xs))
        for x, q_value in zip(xs, Q):
            x = float(x)
            H = error_control_H(splitting, min(zeros, key=lambda z: abs(z - x)), x) if zeros else math.nan
            try:
                I = error_control_I(splitting, tps, x)
            except ClassificationError:
                I = math.nan
            rows.append((x, method, energy, H, I, float(q_value)))
    return _Table(methods, ["x", "method", "E", "H", "I", "Q"], rows)


_HANDLERS = {
    "spectrum": _spectrum,
    "transmit": _transmit,
    "wavefunction": _wavefunction,
    "error-control": _error_control,
    "compare": _compare,
}


# ── Run ───────────────────────────────────────────────────────────────────────

def _write(request: RunRequest, spec: PotentialSpec, table: _Table) -> Path:
    meta = {
        "potential": spec.kind,
        "subcommand": request.subcommand,
        "params": spec.params.as_dict(),
        "method": table.methods,
        "domain": spec.domain,
        "expression": spec.expression,
    }
    meta.update(table.extra)
    path = Path(request.output) if request.output else next_artifact_path(request.subcommand, spec.kind, request.fmt)
    if request.fmt == "csv":
        return write_csv_artifact(path, meta, table.columns, table.rows)
    data = [dict(zip(table.columns, row)) for row in table.rows]
    return write_json_artifact(path, meta, data)


def _record(request: Optional[RunRequest], outcome: RunOutcome, argv: Optional[Sequence[str]] = None) -> None:
    record = {
        "exit_code": outcome.exit_code,
        "artifact": str(outcome.artifact) if outcome.artifact else None,
        "error": outcome.message or None,
        "version": __version__,
    }
    if request is not None:
        record.update(subcommand=request.subcommand, potential=request.potential,
                      params=dict(request.params), methods=list(request.methods))
    if argv is not None:
        record["argv"] = list(argv)
    append_run_record(record)


def run(request: RunRequest) -> RunOutcome:
    """Compute the requested table, write one artifact and log the run."""
    try:
        spec = build_potential(request)
        table = _HANDLERS[request.subcommand](request, spec)
        path = _write(request, spec, table)
        logger.info("%s %s: wrote %s", request.subcommand, spec.kind, path)
        outcome = RunOutcome(0, path)
    except UniformWKBError as exc:
        logger.error("%s failed: %s", request.subcommand, exc)
        outcome = RunOutcome(exit_code_for(exc), None, str(exc))
    except ArithmeticError as exc:
        logger.error("%s failed numerically: %s", request.subcommand, exc)
        outcome = RunOutcome(3, None, str(exc))
    _record(request, outcome)
    return outcome


# ── Argument parsing ──────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--potential", help=f"one of {', '.join(CATALOG_KINDS)} or {USER_DEFINED}")
    common.add_argument("--params", default="", help="k=v,k=v (m, hbar, e, omega, l, D, v0, v1, alpha)")
    common.add_argument("--expr", help="sympy expression in x for a user-defined potential")
    common.add_argument("--domain", default=FULL_LINE, help="half-line or full-line (user-defined)")
    common.add_argument("--pole-order", type=int, default=0, help="0 or 2 (user-defined)")
    common.add_argument("--threshold", type=float, help="continuum threshold (user-defined)")
    common.add_argument("--methods", help="comma-separated methods")
    common.add_argument("--n", help="quantum numbers, e.g. 0..5 or 3")
    common.add_argument("--energy", type=float)
    common.add_argument("--emin", type=float)
    common.add_argument("--emax", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--xmin", type=float)
    common.add_argument("--xmax", type=float)
    common.add_argument("--points", type=int)
    common.add_argument("--boundary", type=float, help="hard wall x_b for the quantization solvers")
    common.add_argument("--format", dest="fmt", default="csv", help="csv or json")
    common.add_argument("--output", help="artifact path (default: auto-numbered under data/artifacts)")

    parser = argparse.ArgumentParser(
        prog="uniwkb",
        description="Uniform asymptotic (improved WKB) spectra, transmission and wave functions.",
    )
    parser.add_argument("--version", action="version", version=f"uniwkb {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in SUBCOMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def request_from_args(args: argparse.Namespace) -> RunRequest:
    potential = args.potential or (USER_DEFINED if args.expr else None)
    if potential is None:
        raise ValidationError("--potential is required")
    methods = parse_methods(args.methods, _VALID_METHODS[args.subcommand], ()) if args.methods else []
    return RunRequest(
        subcommand=args.subcommand,
        potential=potential,
        params=parse_params(args.params),
        methods=tuple(methods),
        n=tuple(parse_quantum_numbers(args.n)) if args.n else (),
        energy=args.energy,
        emin=args.emin,
        emax=args.emax,
        steps=args.steps,
        xmin=args.xmin,
        xmax=args.xmax,
        points=args.points,
        fmt=args.fmt,
        output=Path(args.output) if args.output else None,
        expr=args.expr,
        domain=args.domain,
        pole_order=args.pole_order,
        threshold=args.threshold,
        boundary=args.boundary,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        request = request_from_args(args)
    except UniformWKBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        outcome = RunOutcome(exit_code_for(exc), None, str(exc))
        _record(None, outcome, argv if argv is not None else sys.argv[1:])
        return outcome.exit_code
    outcome = run(request)
    if outcome.exit_code:
        print(f"error: {outcome.message}", file=sys.stderr)
    else:
        print(outcome.artifact)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
