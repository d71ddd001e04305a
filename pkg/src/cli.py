"""Command-line front end: map parameters, sweep Omega, evolve, compare and simulate the measurement protocol.

Every command reads an optional ``section.key = value`` config, writes its outputs and a
resolved-config echo to ``--out`` and prints a one-line summary to stdout.
"""

import argparse
import csv
import io
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError
from src.config import Settings, get_settings
from src.exceptions import ConfigurationError, NoInteriorMaximum, PolaritonError
from src.schemas.cli.run_config import RunConfig
from src.schemas.measure.protocol import PulseSpec
from src.schemas.params.physics import RatioObjective
from src.schemas.models.specs import FullModelSpec, LatticeSpec
from src.services.measure.protocol import run_protocol
from src.services.models.full import single_cavity_spectrum
from src.services.params.mapping import (
    VALIDITY_CONDITIONS,
    check_validity,
    cooperativity,
    decay_model,
    derive_scales,
    informational_ratios,
    map_effective,
)
from src.services.params.optimize import crossover_region, optimize_ratio
from src.services.sweep.runner import (
    COMPARED_OBSERVABLES,
    compare_full_vs_effective,
    model_spec,
    omega_grid,
    run_model,
    sweep_omega,
)
from src.utils.logging import command_var, run_id_var, setup_structured_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

OBJECTIVES: Tuple[RatioObjective, ...] = (
    "u_b_over_gamma_b",
    "u_c_over_gamma_c",
    "u_bc_over_max_gamma",
    "u_b_over_gamma_b_single_component",
)
SWEEP_COLUMNS = ("u_b", "u_c", "u_bc", "j_bb", "j_cc", "j_bc")


@dataclass
class CommandOutput:
    """Files written by one command and its stdout summary."""

    files: Dict[str, str] = field(default_factory=dict)
    summary: str = ""


def format_value(value: Any) -> str:
    """Fixed formatting: floats with 17 significant digits in scientific notation."""
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".16e")
    return str(value)


def _header(config: RunConfig, settings: Settings, extra: Sequence[str] = ()) -> List[str]:
    return [f"# version={settings.app_version}", f"# config_sha256={config.digest()}", *(f"# {line}" for line in extra)]


def render_csv(header: List[str], columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    buffer.write("\n".join(header) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def render_key_values(header: List[str], items: Sequence[Tuple[str, Any]]) -> str:
    lines = list(header) + [f"{key} = {format_value(value)}" for key, value in items]
    return "\n".join(lines) + "\n"


def cmd_map_params(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    p = config.params
    effective = map_effective(p, config.evolve.tunneling)
    scales = derive_scales(p)
    report = check_validity(p, config.validity.threshold)
    rates = decay_model(p)

    items: List[Tuple[str, Any]] = [(f"scales.{key}", value) for key, value in scales.model_dump().items()]
    items.append(("scales.b_sq", scales.b_sq))
    one_cavity = FullModelSpec(params=p, lattice=LatticeSpec(n_sites=1), max_excitations=1)
    items += [(f"spectrum.one_excitation.{i}", float(e)) for i, e in enumerate(single_cavity_spectrum(one_cavity, 1))]
    items += [(f"effective.{key}", value) for key, value in effective.model_dump().items()]
    items.append(("effective.mu_gap", effective.mu_gap))
    for cond in report.conditions:
        items += [
            (f"validity.{cond.name}.lhs", cond.lhs),
            (f"validity.{cond.name}.rhs", cond.rhs),
            (f"validity.{cond.name}.ratio", cond.ratio),
            (f"validity.{cond.name}.pass", cond.passed),
        ]
    items += [("validity.overall_pass", report.overall_pass), ("validity.threshold", report.threshold)]
    for n in (1, 2):
        items += [(f"decay.gamma_b_{n}", rates.gamma_b(n)), (f"decay.gamma_c_{n}", rates.gamma_c(n))]
    zeta = cooperativity(p)
    items.append(("decay.zeta", None if math.isinf(zeta) else zeta))

    failed = ",".join(report.failed) or "none"
    return CommandOutput(
        files={"map_params.txt": render_key_values(_header(config, settings), items)},
        summary=f"map-params: overall_pass={format_value(report.overall_pass)} failed={failed}",
    )


def cmd_sweep_omega(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    section = config.sweep
    grid = omega_grid(section.omega_min, section.omega_max, section.n_points, section.log_spaced)
    result = sweep_omega(config.params, grid, config.validity.threshold, threads)

    if result.crossover is not None:
        window = result.crossover
        extra = [f"crossover omega_low={format_value(window.omega_low)} omega_high={format_value(window.omega_high)}"]
    else:
        extra = [f"crossover {result.crossover_error}"]

    columns = ["omega_over_g13", *SWEEP_COLUMNS, "mu_gap", *VALIDITY_CONDITIONS, "overall_pass", "error"]
    rows = []
    for row in result.rows:
        values = [None if row.effective is None else getattr(row.effective, name) for name in SWEEP_COLUMNS]
        flags = [row.validity_flags.get(name) for name in VALIDITY_CONDITIONS]
        rows.append([row.omega_over_g13, *values, row.mu_gap, *flags, row.overall_pass, row.error or ""])

    flagged = sum(row.flagged for row in result.rows)
    return CommandOutput(
        files={"sweep_omega.csv": render_csv(_header(config, settings, extra), columns, rows)},
        summary=f"sweep-omega: {len(rows)} points, {flagged} flagged; {extra[0]}",
    )


def cmd_evolve(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    section = config.evolve
    placements = section.placement_pairs()
    spec = model_spec(
        config.params,
        config.lattice.to_spec(),
        section.model,
        len(placements),
        section.tunneling,
        section.include_two_photon_detuning,
    )
    times = [section.t_max * i / max(section.n_samples - 1, 1) for i in range(section.n_samples)]
    series = run_model(spec, placements, times, config.propagator)

    columns = ["time", *series.names]
    rows = [[t, *(record[name] for name in series.names)] for t, record in zip(series.times, series.records)]
    drift = max(abs(value - series.records[0]["charge"]) for value in series.column("charge"))
    name = f"evolve_{section.model}.csv"
    return CommandOutput(
        files={name: render_csv(_header(config, settings), columns, rows)},
        summary=f"evolve: model={section.model} samples={len(rows)} charge_drift={format_value(drift)}",
    )


def cmd_compare(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    section = config.evolve
    lattice = config.lattice.to_spec()
    result = compare_full_vs_effective(
        config.params,
        lattice,
        section.placement_pairs(),
        section.t_max,
        section.n_samples,
        config=config.propagator,
        tunneling=section.tunneling,
        threshold=config.validity.threshold,
        max_workers=threads,
    )

    names = result.observable_names
    columns = ["time"] + [f"{name}_{kind}" for name in names for kind in ("full", "effective", "diff")]
    full = {name: result.full.column(name) for name in names}
    effective = {name: result.effective.column(name) for name in names}
    rows = []
    for i, t in enumerate(result.times):
        row: List[Any] = [t]
        for name in names:
            row += [full[name][i], effective[name][i], result.differences[name][i]]
        rows.append(row)

    max_diff = " ".join(f"{name}={format_value(result.max_abs_diff[name])}" for name in names)
    extra = [
        f"max_abs_diff {max_diff}",
        f"charge_drift full={format_value(result.full_charge_drift)} effective={format_value(result.effective_charge_drift)}",
        f"validity overall_pass={format_value(result.validity.overall_pass)} failed={','.join(result.validity.failed) or 'none'}",
    ]
    overall = max(result.max_abs_diff.values())
    return CommandOutput(
        files={"compare.csv": render_csv(_header(config, settings, extra), columns, rows)},
        summary=f"compare: max_abs_diff={format_value(overall)} over {len(names)} curves ({','.join(COMPARED_OBSERVABLES)})",
    )


def cmd_decay_ratios(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    p = config.params
    bounds = (config.optimize.big_delta_min, config.optimize.big_delta_max)
    rows = []
    failures: List[NoInteriorMaximum] = []
    for objective in OBJECTIVES:
        try:
            best = optimize_ratio(p, objective, bounds, n_grid=config.optimize.n_grid)
        except NoInteriorMaximum as e:
            failures.append(e)
            rows.append([objective, None, None, None, None, f"NoInteriorMaximum: {e}"])
            continue
        rows.append([objective, best.best_big_delta, best.best_ratio, best.zeta, best.ratio_over_zeta, ""])
    if len(failures) == len(OBJECTIVES):
        raise failures[0]

    g = derive_scales(p).g
    extra = []
    for label, omega in (("omega_10g", 10.0 * g), ("omega_g_over_10", 0.1 * g)):
        ratios = informational_ratios(p.replace(omega=omega))
        extra.append(f"{label} " + " ".join(f"{key}={format_value(value)}" for key, value in ratios.items()))

    columns = ["objective", "best_big_delta", "best_ratio", "zeta", "ratio_over_zeta", "error"]
    return CommandOutput(
        files={"decay_ratios.csv": render_csv(_header(config, settings, extra), columns, rows)},
        summary=f"decay-ratios: {len(OBJECTIVES) - len(failures)} of {len(OBJECTIVES)} objectives optimized",
    )


def cmd_crossover(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    window = crossover_region(config.params, config.crossover.bracket)
    items = list(window.model_dump().items()) + [("g", derive_scales(config.params).g)]
    return CommandOutput(
        files={"crossover.txt": render_key_values(_header(config, settings), items)},
        summary=f"crossover: omega_low={format_value(window.omega_low)} omega_high={format_value(window.omega_high)}",
    )


def cmd_measure_protocol(config: RunConfig, settings: Settings, threads: int) -> CommandOutput:
    section = config.measure
    pulse = PulseSpec(lambda_=section.raman_lambda, delta_lambda=section.raman_delta)
    result = run_protocol(
        config.params,
        section.coefficients(),
        species=section.species,
        pulse=pulse,
        ramp_duration=section.ramp_duration,
        ramp_shape=section.ramp_shape,
        matched=section.matched,
        n_atoms=section.n_atoms,
        photon_cap=section.photon_cap,
        fidelity_target=section.fidelity_target,
        step_tolerance=section.step_tolerance,
    )

    prepared_b, prepared_c = result.prepared.get("b", {}), result.prepared.get("c", {})
    counts = sorted(set(result.statistics) | set(result.level1_before_final_pulse) | set(prepared_b) | set(prepared_c))
    rows = [
        [
            n,
            result.statistics.get(n, 0.0),
            result.level1_before_final_pulse.get(n, 0.0),
            prepared_b.get(n, 0.0),
            prepared_c.get(n, 0.0),
        ]
        for n in counts
    ]
    columns = ["n", "probability", "level1_before_final_pulse", "prepared_b", "prepared_c"]

    items: List[Tuple[str, Any]] = [
        ("species", result.species),
        ("seed_swap_duration", result.seed_swap_duration),
        ("swap_duration", result.swap_duration),
        ("swap_fidelity", result.swap_fidelity),
        ("stirap_fidelity", result.stirap_fidelity),
        *((f"stirap_species_fidelity.{key}", value) for key, value in sorted(result.stirap_species_fidelity.items())),
        ("stirap_converged", result.stirap_converged),
        ("theta0", result.theta0),
        ("total_duration", result.total_duration),
        ("final_norm", result.final_norm),
    ]
    header = _header(config, settings)
    return CommandOutput(
        files={
            "measure_statistics.csv": render_csv(header, columns, rows),
            "measure_summary.txt": render_key_values(header, items),
        },
        summary=f"measure-protocol: species={result.species} stirap_fidelity={format_value(result.stirap_fidelity)}",
    )


COMMANDS: Dict[str, Tuple[Callable[[RunConfig, Settings, int], CommandOutput], str]] = {
    "map-params": (cmd_map_params, "Effective parameters, validity report and decay rates"),
    "sweep-omega": (cmd_sweep_omega, "Effective parameters over an Omega grid"),
    "evolve": (cmd_evolve, "Time series of one model"),
    "compare": (cmd_compare, "Full versus effective dynamics"),
    "decay-ratios": (cmd_decay_ratios, "Best interaction-to-decay ratios over Delta"),
    "crossover": (cmd_crossover, "Omega window of resonant b/c conversion"),
    "measure-protocol": (cmd_measure_protocol, "Species-selective number measurement"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polariton-bh", description="Polaritonic two-component Bose-Hubbard toolkit.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", type=Path, default=None, help="Run config with 'section.key = value' lines.")
        sub.add_argument("--out", type=Path, default=Path("results"), help="Output directory.")
        sub.add_argument("--threads", type=int, default=None, help="Worker threads, 0 = one per CPU.")
    return parser


def load_config(path: Optional[Path], settings: Settings) -> RunConfig:
    if path is None:
        return RunConfig.from_text("", settings)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    return RunConfig.from_text(text, settings)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return the process exit code.

    :returns: 0 on success, 2 on configuration errors, 3 on numerical failures
    """
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_structured_logging(level=settings.logging.level, json_format=settings.logging.json_format)
    command_var.set(args.command)

    try:
        config = load_config(args.config, settings)
        run_id_var.set(config.digest()[:12])
        threads = settings.sweep.max_workers if args.threads is None else args.threads
        if threads < 0:
            raise ConfigurationError(f"--threads must be non-negative, got {threads}")

        handler, _ = COMMANDS[args.command]
        output = handler(config, settings, threads)

        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "resolved_config.txt").write_text("\n".join(_header(config, settings)) + "\n" + config.to_text())
        for name, content in output.files.items():
            (args.out / name).write_text(content)
    except (ValidationError, ConfigurationError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (PolaritonError, ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL

    logger.info(f"{args.command} wrote {', '.join(output.files)} to {args.out}")
    print(output.summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
