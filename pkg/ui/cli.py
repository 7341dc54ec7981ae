"""
Command-line interface for the Discord Demon Engine.

This module builds the argument parser, turns parsed arguments into a
RunConfig, resolves states and bases, dispatches to the library and
renders reports as a table, CSV or JSON.
"""
import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import constants

from core.basisopt import (
    BasisParams,
    discord_asymmetry,
    min_discord,
    min_partial_discord,
    realize_basis,
)
from core.demon import (
    best_end_classical_work,
    quantum_demon_work,
    simulate_engine,
    work_report,
)
from core.errors import DemonEngineError, DimensionError, ValidationError
from core.infomeasures import info_report, von_neumann_entropy
from core.qmat import Subsystem
from core.states import (
    MeasurementBasis,
    make_bell,
    make_classical_mixture,
    make_dephased_bell,
    make_maximally_mixed,
    make_one_way,
    make_product,
    make_werner,
    oriented,
    pure_state,
    random_state,
)
from utils.state_io import load_state, save_state
from config import (
    DEFAULT_ENGINE_STEPS,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    SIGNIFICANT_DIGITS,
    ZERO_SNAP,
)

logger = logging.getLogger(__name__)

COMMANDS = ("info", "discord", "work", "simulate", "sweep")
NAMED_BASES = ("computational", "hadamard", "circular", "optimize")
OUTPUT_FORMATS = ("table", "csv", "json")
SWEEP_FAMILIES = {"werner": ("z", make_werner), "dephased-bell": ("p", make_dephased_bell)}
OPTIMIZED_SWEEP_COLUMNS = (
    "h_sa", "discord_min", "partial_discord_min", "w_classical_opt", "w_quantum", "delta_w",
)
FIXED_SWEEP_COLUMNS = ("h_sa", "discord", "partial_discord", "w_classical", "w_quantum", "delta_w")


@dataclass
class RunConfig:
    """
    Everything one CLI invocation needs.

    Exactly one state source is set: a builtin name (with state_params) or
    a state file. Sweeps take their states from family instead.
    """

    command: str
    state: Optional[str] = None
    state_params: dict = field(default_factory=dict)
    state_file: Optional[str] = None
    basis: str = "computational"
    theta: Optional[float] = None
    phi: Optional[float] = None
    side: Subsystem = Subsystem.A
    output_format: str = "table"
    seed: int = DEFAULT_SEED
    steps: int = DEFAULT_ENGINE_STEPS
    compress: bool = False
    both_conventions: bool = False
    both_sides: bool = False
    temperature: Optional[float] = None
    save_state: Optional[str] = None
    family: Optional[str] = None
    param: Optional[str] = None
    start: float = 0.0
    stop: float = 1.0
    points: int = 11
    workers: int = DEFAULT_WORKERS

    def validate(self):
        """
        Raises:
            ValidationError: If the combination of options is inconsistent
        """
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command '{self.command}'", invariant="command")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(f"Unknown output format '{self.output_format}'")
        if self.command == "sweep":
            if self.family not in SWEEP_FAMILIES:
                raise ValidationError(
                    f"Sweep family must be one of {sorted(SWEEP_FAMILIES)}, got '{self.family}'",
                    invariant="sweep family",
                )
            expected = SWEEP_FAMILIES[self.family][0]
            if self.param not in (None, expected):
                raise ValidationError(
                    f"Family '{self.family}' is swept over '{expected}', not '{self.param}'"
                )
            if self.points < 1:
                raise ValidationError("Sweep needs at least one point")
        elif (self.state is None) == (self.state_file is None):
            raise ValidationError(
                "Exactly one of --state or --state-file is required",
                invariant="exactly one state source",
            )
        if (self.theta is None) != (self.phi is None):
            raise ValidationError("--theta and --phi must be given together")
        if self.theta is None and self.basis not in NAMED_BASES:
            raise ValidationError(f"Unknown basis '{self.basis}'", invariant="basis name")
        if self.workers < 1:
            raise ValidationError("--workers must be at least 1")

    @property
    def optimize(self):
        return self.theta is None and self.basis == "optimize"


def _take(params, name, default):
    value = params.pop(name, default)
    if value is None:
        raise ValidationError(f"Builtin state needs parameter '{name}'", invariant="state params")
    return value


def _take_dimension(params, name):
    value = _take(params, name, 2)
    if not math.isfinite(value) or value != int(value) or value < 1:
        raise ValidationError(
            f"Parameter '{name}' must be a positive integer, got {value}",
            invariant="state params",
        )
    return int(value)


def resolve_state(config):
    """
    Build the state a RunConfig names.

    Raises:
        ValidationError: For unknown builtins, missing or extra parameters,
            or invalid state files
    """
    if config.state_file is not None:
        return load_state(config.state_file)

    params = dict(config.state_params)
    name = config.state
    if name == "bell":
        rho = make_bell()
    elif name == "classical-mixture":
        rho = make_classical_mixture()
    elif name == "werner":
        rho = make_werner(_take(params, "z", None))
    elif name == "dephased-bell":
        rho = make_dephased_bell(_take(params, "p", None))
    elif name == "one-way":
        angle = _take(params, "angle", math.pi / 2)
        rho = make_one_way(
            pure_state([1.0, 0.0]),
            pure_state([math.cos(angle / 2), math.sin(angle / 2)]),
        )
    elif name == "maximally-mixed":
        rho = make_maximally_mixed(_take_dimension(params, "d_s"), _take_dimension(params, "d_a"))
    elif name == "product":
        d_s, d_a = _take_dimension(params, "d_s"), _take_dimension(params, "d_a")
        rho = make_product(pure_state(np.eye(d_s)[0]), pure_state(np.eye(d_a)[0]))
    elif name == "random":
        rho = random_state(_take_dimension(params, "d_s"), _take_dimension(params, "d_a"), config.seed)
    else:
        raise ValidationError(f"Unknown builtin state '{name}'", invariant="builtin name")
    if params:
        raise ValidationError(
            f"Unused parameters for state '{name}': {', '.join(sorted(params))}",
            invariant="state params",
        )
    return rho


def resolve_basis(config, d_measured):
    """
    Basis on the measured side named by the config.

    Returns None when the config asks for optimization.
    """
    if config.theta is not None:
        if d_measured != 2:
            raise DimensionError("--theta/--phi describe a qubit basis; measured side is not 2-dimensional")
        params = BasisParams(2, (float(config.theta), float(config.phi)))
        return realize_basis(params, 2)
    if config.optimize:
        return None
    if config.basis == "computational":
        return MeasurementBasis.computational(d_measured)
    if d_measured != 2:
        raise DimensionError(f"Basis '{config.basis}' is only defined for a qubit measured side")
    return MeasurementBasis.hadamard() if config.basis == "hadamard" else MeasurementBasis.circular()


def _measurement(config, rho):
    """Measured-side state and basis, optimizing when requested."""
    measured = oriented(rho, config.side)
    basis = resolve_basis(config, measured.d_a)
    result = None
    if basis is None:
        result = min_discord(rho, config.side)
        basis = realize_basis(result.argmin)
    return measured, basis, result


def format_value(value):
    """Render one value with SIGNIFICANT_DIGITS significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if abs(value) < ZERO_SNAP:
            value = 0.0
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)) and not isinstance(value, bool):
        return float(format_value(value))
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    return value


def render_record(record, output_format):
    """Render one report as key/value table, one-row CSV or a JSON object."""
    if output_format == "json":
        return json.dumps({k: _json_value(v) for k, v in record.items()}, indent=2) + "\n"
    if output_format == "csv":
        return render_rows([record], list(record), "csv")
    width = max(len(key) for key in record)
    return "".join(f"{key:<{width}}  {format_value(value)}\n" for key, value in record.items())


def render_rows(rows, columns, output_format):
    """Render rows as an aligned table, CSV with header, or a JSON array."""
    if output_format == "json":
        data = [{c: _json_value(row[c]) for c in columns} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    cells = [[format_value(row[c]) for c in columns] for row in rows]
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buffer.getvalue()
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _basis_fields(basis, result):
    fields = {"basis": basis.label or "custom"}
    if result is not None:
        fields["basis"] = "optimized"
        fields.update({f"argmin_{k}": v for k, v in result.argmin.as_dict().items()})
    return fields


def _run_info(config, rho):
    measured, basis, result = _measurement(config, rho)
    report = info_report(measured, basis)
    record = {"side": config.side.value, **_basis_fields(basis, result), **report.as_dict()}
    if config.both_conventions:
        record["h_a_measured"] = report.h_a_measured
        record["discord_unmeasured_marginal"] = report.discord_unmeasured_marginal
    return record


def _run_discord(config, rho):
    record = {"side": config.side.value}
    measured = oriented(rho, config.side)
    basis = resolve_basis(config, measured.d_a)
    if basis is None:
        result = min_discord(rho, config.side)
        partial = min_partial_discord(rho, config.side)
        record.update({
            "discord_min": result.value,
            "partial_discord_min": partial.value,
            **{f"argmin_{k}": v for k, v in result.argmin.as_dict().items()},
            "evaluations": result.evaluations,
            "converged": result.converged,
            "certified": result.certified,
        })
    else:
        report = info_report(measured, basis)
        record.update({
            "basis": basis.label or "custom",
            "discord": report.discord,
            "partial_discord": report.discord_unmeasured_marginal,
        })
    if config.both_sides:
        asymmetry = discord_asymmetry(rho)
        record.update({
            "discord_min_s_given_a": asymmetry.forward.value,
            "discord_min_a_given_s": asymmetry.backward.value,
            "polarization": asymmetry.polarization,
        })
    return record


def _joules(bits, temperature):
    return bits * constants.k * temperature * math.log(2.0)


def _run_work(config, rho):
    measured, basis, result = _measurement(config, rho)
    report = work_report(measured, basis)
    record = {"side": config.side.value, **_basis_fields(basis, result), **report.as_dict()}
    if config.both_sides:
        choice = best_end_classical_work(rho)
        record["best_end_side"] = choice.side.value
        record["best_end_w_classical"] = choice.work
    if config.temperature is not None:
        if config.temperature <= 0:
            raise ValidationError("--temperature must be positive")
        for key in ("w_classical", "w_quantum", "delta_w"):
            record[f"{key}_joules"] = _joules(record[key], config.temperature)
    return record


def _run_simulate(config, rho):
    measured, basis, result = _measurement(config, rho)
    trace = simulate_engine(measured, basis, config.steps, config.seed, compress=config.compress)
    expected = work_report(measured, basis)
    record = {
        "side": config.side.value,
        **_basis_fields(basis, result),
        "steps": trace.steps,
        "seed": trace.seed,
        "net_work_per_step": trace.net_work_per_step,
        "standard_error": trace.standard_error,
        "expected_w_classical": expected.w_classical,
        "naive_work_per_step": trace.naive_work_per_step,
        "expected_w_naive": expected.w_naive,
        "ideal_bits_per_step": trace.ideal_code_length / trace.steps,
    }
    if trace.compressed_bits_per_step is not None:
        record["compressed_bits_per_step"] = trace.compressed_bits_per_step
    return record


def _sweep_row(config, name, make, value):
    rho = make(value)
    h_sa = von_neumann_entropy(rho)
    w_quantum = quantum_demon_work(rho)
    measured = oriented(rho, config.side)
    basis = resolve_basis(config, measured.d_a)
    if basis is None:
        discord = min_discord(rho, config.side).value
        partial = min_partial_discord(rho, config.side).value
        w_classical = math.log2(rho.dim) - (h_sa + discord)
        columns = OPTIMIZED_SWEEP_COLUMNS
    else:
        report = info_report(measured, basis)
        discord, partial = report.discord, report.discord_unmeasured_marginal
        w_classical = work_report(measured, basis).w_classical
        columns = FIXED_SWEEP_COLUMNS
    values = (h_sa, discord, partial, w_classical, w_quantum, w_quantum - w_classical)
    return {name: value, **dict(zip(columns, values))}


def _run_sweep(config):
    name, make = SWEEP_FAMILIES[config.family]
    values = [float(v) for v in np.linspace(config.start, config.stop, config.points)]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        rows = list(pool.map(lambda v: _sweep_row(config, name, make, v), values))
    columns = OPTIMIZED_SWEEP_COLUMNS if config.optimize else FIXED_SWEEP_COLUMNS
    return rows, [name, *columns]


def run(config, out=None, err=None):
    """
    Execute one CLI invocation.

    Args:
        config: RunConfig to execute
        out: Stream for the report (default stdout)
        err: Stream for error messages (default stderr)

    Returns:
        int: Process exit status, 0 on success
    """
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        config.validate()
        if config.command == "sweep":
            rows, columns = _run_sweep(config)
            out.write(render_rows(rows, columns, config.output_format))
            return 0

        rho = resolve_state(config)
        if config.save_state:
            save_state(rho, config.save_state)
        handlers = {
            "info": _run_info,
            "discord": _run_discord,
            "work": _run_work,
            "simulate": _run_simulate,
        }
        logger.info("Running %s on %r", config.command, rho)
        record = handlers[config.command](config, rho)
        out.write(render_record(record, config.output_format))
        return 0
    except DemonEngineError as e:
        err.write(f"Error: {e}\n")
        return e.exit_code


def _state_param(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got '{text}'")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of '{name}' is not a number") from None


def build_parser():
    """Argument parser with one subcommand per RunConfig command."""
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("state")
    source.add_argument("--state", help="builtin state: bell, classical-mixture, werner, "
                        "dephased-bell, one-way, maximally-mixed, product, random")
    source.add_argument("--state-param", action="append", type=_state_param, default=[],
                        metavar="NAME=VALUE", help="builtin state parameter, e.g. z=0.5")
    source.add_argument("--state-file", help="load the state from a JSON state file")
    source.add_argument("--save-state", metavar="PATH", help="write the resolved state to PATH")
    measure = common.add_argument_group("measurement")
    measure.add_argument("--basis", default="computational", choices=NAMED_BASES)
    measure.add_argument("--optimize", dest="basis", action="store_const", const="optimize",
                         help="use the discord-minimizing basis")
    measure.add_argument("--theta", type=float, help="qubit basis polar angle in [0, pi]")
    measure.add_argument("--phi", type=float, help="qubit basis azimuth in [0, 2 pi)")
    measure.add_argument("--side", default="A", type=str.upper, choices=("A", "S"),
                         help="subsystem the demon measures")
    common.add_argument("--format", dest="output_format", default="table", choices=OUTPUT_FORMATS)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--skip-checks", action="store_true",
                        help="skip the numerical backend verification")

    parser = argparse.ArgumentParser(
        prog="discord-demon",
        description="Quantum discord and the work of classical and quantum Maxwell's demons.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    info = commands.add_parser("info", parents=[common], help="information measures at a basis")
    info.add_argument("--both-conventions", action="store_true",
                      help="also report discord with the unmeasured H(A)")

    discord = commands.add_parser("discord", parents=[common], help="basis-minimized discord")
    discord.add_argument("--both-sides", action="store_true",
                         help="report both one-sided minima and the polarization")

    work = commands.add_parser("work", parents=[common], help="demon work accounting")
    work.add_argument("--both-sides", action="store_true",
                      help="also report the best local demon over both ends")
    work.add_argument("--temperature", type=float, help="bath temperature in kelvin")

    simulate = commands.add_parser("simulate", parents=[common], help="Monte Carlo demon engine")
    simulate.add_argument("--steps", type=int, default=DEFAULT_ENGINE_STEPS)
    simulate.add_argument("--compress", action="store_true",
                          help="also compress the outcome record with zlib")

    sweep = commands.add_parser("sweep", parents=[common], help="sweep a state family")
    sweep.add_argument("--family", required=True, choices=sorted(SWEEP_FAMILIES))
    sweep.add_argument("--param", help="swept parameter name (z for werner, p for dephased-bell)")
    sweep.add_argument("--from", dest="start", type=float, default=0.0)
    sweep.add_argument("--to", dest="stop", type=float, default=1.0)
    sweep.add_argument("--points", type=int, default=11)
    sweep.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    return parser


def config_from_args(args):
    """Translate parsed arguments into a RunConfig."""
    return RunConfig(
        command=args.command,
        state=args.state,
        state_params=dict(args.state_param),
        state_file=args.state_file,
        basis=args.basis,
        theta=args.theta,
        phi=args.phi,
        side=Subsystem.parse(args.side),
        output_format=args.output_format,
        seed=args.seed,
        steps=getattr(args, "steps", DEFAULT_ENGINE_STEPS),
        compress=getattr(args, "compress", False),
        both_conventions=getattr(args, "both_conventions", False),
        both_sides=getattr(args, "both_sides", False),
        temperature=getattr(args, "temperature", None),
        save_state=args.save_state,
        family=getattr(args, "family", None),
        param=getattr(args, "param", None),
        start=getattr(args, "start", 0.0),
        stop=getattr(args, "stop", 1.0),
        points=getattr(args, "points", 11),
        workers=getattr(args, "workers", DEFAULT_WORKERS),
    )
