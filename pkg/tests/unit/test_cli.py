import math

import numpy as np
import pytest
from src.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, format_value, main
from src.schemas.measure.protocol import ProtocolResult

SWEEP_REGIME = """
params.delta = 63245.55320336759
params.big_delta = -0.05
params.omega = 31.622776601683793
params.alpha = 0.1
"""


def write_config(tmp_path, text: str):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return path


def run(tmp_path, command: str, text: str, out: str = "out") -> int:
    return main([command, "--config", str(write_config(tmp_path, text)), "--out", str(tmp_path / out), "--threads", "1"])


def test_format_value():
    """Test fixed value formatting."""
    assert format_value(None) == "nan"
    assert format_value(True) == "true"
    assert format_value(3) == "3"
    assert format_value(0.5) == "5.0000000000000000e-01"
    assert format_value("b") == "b"


def test_crossover_command(tmp_path, capsys):
    """Test the crossover command writes its window with the run header."""
    assert run(tmp_path, "crossover", SWEEP_REGIME) == EXIT_OK

    lines = (tmp_path / "out" / "crossover.txt").read_text().splitlines()
    assert lines[0] == "# version=0.1.0"
    assert lines[1].startswith("# config_sha256=")
    assert any(line.startswith("x_low = 1.67") for line in lines)
    assert (tmp_path / "out" / "resolved_config.txt").exists()
    assert capsys.readouterr().out.startswith("crossover: omega_low=")


def test_outputs_are_reproducible(tmp_path):
    """Test identical inputs produce byte-identical files."""
    assert run(tmp_path, "crossover", SWEEP_REGIME, out="first") == EXIT_OK
    assert run(tmp_path, "crossover", SWEEP_REGIME, out="second") == EXIT_OK

    for name in ("crossover.txt", "resolved_config.txt"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_resolved_config_reloads(tmp_path):
    """Test the echoed config is itself a valid config with the same digest."""
    assert run(tmp_path, "crossover", SWEEP_REGIME, out="first") == EXIT_OK
    resolved = (tmp_path / "first" / "resolved_config.txt").read_text()

    assert run(tmp_path, "crossover", resolved, out="second") == EXIT_OK
    assert (tmp_path / "first" / "crossover.txt").read_bytes() == (tmp_path / "second" / "crossover.txt").read_bytes()


def test_map_params_command(tmp_path, capsys):
    """Test map-params reports the validity failure of the dynamics regime."""
    assert run(tmp_path, "map-params", "") == EXIT_OK

    text = (tmp_path / "out" / "map_params.txt").read_text()
    assert "validity.shift_vs_splitting.pass = false" in text
    assert "validity.overall_pass = false" in text
    assert "effective.pair_conv_active = true" in text
    assert "spectrum.one_excitation.2 = " in text
    assert "failed=shift_vs_splitting" in capsys.readouterr().out


def test_degenerate_detuning_exit_code(tmp_path, capsys):
    """Test numerical failures exit with code 3 and name the error."""
    assert run(tmp_path, "map-params", "params.delta = 0") == EXIT_NUMERICAL
    assert "DegenerateDetuning" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["params.omeg = 3", "solver.method = dense", "params.omega"])
def test_config_error_exit_code(tmp_path, capsys, text):
    """Test configuration problems exit with code 2."""
    assert run(tmp_path, "map-params", text) == EXIT_CONFIG
    assert capsys.readouterr().err.startswith("error: ")


def test_missing_config_file(tmp_path, capsys):
    """Test an unreadable config path is a configuration error."""
    assert main(["map-params", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "ConfigurationError" in capsys.readouterr().err


def test_negative_threads(tmp_path):
    """Test a negative thread count is rejected."""
    path = write_config(tmp_path, "")
    assert main(["map-params", "--config", str(path), "--out", str(tmp_path), "--threads", "-1"]) == EXIT_CONFIG


def test_numerical_value_error_exit_code(tmp_path, mocker, capsys):
    """Test a ValueError raised inside a computation is a numerical failure, not a config error."""
    mocker.patch("src.cli.crossover_region", side_effect=ValueError("f(a) and f(b) must have different signs"))

    assert run(tmp_path, "crossover", SWEEP_REGIME) == EXIT_NUMERICAL
    assert "error: ValueError: " in capsys.readouterr().err


def test_placement_outside_lattice_exit_code(tmp_path, capsys):
    """Test a placement past the last cavity is rejected while loading the config."""
    assert run(tmp_path, "evolve", "lattice.n_sites = 2\nevolve.placements = b@3") == EXIT_CONFIG
    assert "ValidationError" in capsys.readouterr().err


def test_evolve_command(tmp_path):
    """Test a small effective-model run writes one row per sample."""
    text = """
    lattice.n_sites = 2
    evolve.model = effective
    evolve.placements = b@1
    evolve.t_max = 2
    evolve.n_samples = 3
    """
    assert run(tmp_path, "evolve", text) == EXIT_OK

    lines = (tmp_path / "out" / "evolve_effective.csv").read_text().splitlines()
    assert lines[2].startswith("time,N_b_1,N_c_1,nsq_b_1,nsq_c_1")
    assert len(lines) == 6
    first = [float(value) for value in lines[3].split(",")]
    assert first[0] == 0.0
    assert first[1] == pytest.approx(1.0, abs=1e-12)


def test_sweep_command(tmp_path):
    """Test sweep-omega writes one row per grid point and the crossover comment."""
    text = SWEEP_REGIME + "sweep.n_points = 5\n"
    assert run(tmp_path, "sweep-omega", text) == EXIT_OK

    lines = (tmp_path / "out" / "sweep_omega.csv").read_text().splitlines()
    assert lines[2].startswith("# crossover omega_low=")
    assert lines[3].startswith("omega_over_g13,u_b,u_c,u_bc")
    assert len(lines) == 9


def test_decay_ratios_command(tmp_path):
    """Test decay-ratios optimizes every objective of a lossy system."""
    text = """
    params.omega = 31.622776601683793
    params.big_delta = -1
    params.kappa = 0.01
    params.gamma4 = 0.04
    optimize.big_delta_min = -100
    optimize.big_delta_max = -0.01
    """
    assert run(tmp_path, "decay-ratios", text) == EXIT_OK

    lines = (tmp_path / "out" / "decay_ratios.csv").read_text().splitlines()
    assert lines[2].startswith("# omega_10g ")
    assert lines[3].startswith("# omega_g_over_10 ")
    assert lines[4] == "objective,best_big_delta,best_ratio,zeta,ratio_over_zeta,error"
    assert len(lines) == 9


def test_measure_protocol_command(tmp_path, mocker):
    """Test measure-protocol writes the statistics table and the summary from the protocol result."""
    result = ProtocolResult(
        species="b",
        statistics={0: 0.5, 1: 0.5},
        level1_before_final_pulse={0: 0.5, 1: 0.5},
        prepared={"b": {0: 0.5, 1: 0.5}, "c": {0: 1.0}},
        seed_swap_duration=0.3,
        swap_duration=0.15,
        swap_fidelity=0.9999,
        stirap_fidelity=0.99,
        stirap_species_fidelity={"b": 0.99, "c": 0.5},
        stirap_converged=True,
        theta0=47.0,
        total_duration=1.3,
        final_norm=1.0,
    )
    protocol = mocker.patch("src.cli.run_protocol", return_value=result)

    assert run(tmp_path, "measure-protocol", "measure.superpose_vacuum = true") == EXIT_OK

    assert protocol.call_args.args[1] == {(0, 0): 1.0, (1, 0): 1.0}
    table = (tmp_path / "out" / "measure_statistics.csv").read_text().splitlines()
    assert table[2] == "n,probability,level1_before_final_pulse,prepared_b,prepared_c"
    assert table[4].startswith("1,5.0000000000000000e-01")
    summary = (tmp_path / "out" / "measure_summary.txt").read_text()
    assert "stirap_species_fidelity.c = 5.0000000000000000e-01" in summary
    assert "stirap_converged = true" in summary


def test_sweep_command_on_full_grid(tmp_path):
    """Test u_bc changes sign once, at its pole, and is smallest next to Omega = g."""
    assert run(tmp_path, "sweep-omega", SWEEP_REGIME) == EXIT_OK

    lines = (tmp_path / "out" / "sweep_omega.csv").read_text().splitlines()
    columns = lines[3].split(",")
    rows = [line.split(",") for line in lines[4:]]
    omega = np.array([float(row[0]) for row in rows])
    u_bc = np.array([float(row[columns.index("u_bc")]) for row in rows])
    assert len(rows) == 200

    changes = np.flatnonzero(np.diff(np.sign(u_bc)) != 0)
    assert len(changes) == 1
    pole = math.sqrt(0.05 * 63245.55320336759 - 1000.0)
    assert omega[changes[0]] < pole < omega[changes[0] + 1]

    log_step = math.log(1000.0 / 10.0) / 199
    assert abs(math.log(omega[int(np.argmin(np.abs(u_bc)))] / math.sqrt(1000.0))) <= log_step


def test_compare_command(tmp_path, capsys):
    """Test compare writes full, effective and difference columns with the max-diff summary."""
    text = """
    lattice.n_sites = 3
    evolve.placements = b@1, b@2, c@3
    evolve.t_max = 20
    evolve.n_samples = 3
    """
    assert run(tmp_path, "compare", text) == EXIT_OK

    lines = (tmp_path / "out" / "compare.csv").read_text().splitlines()
    assert lines[2].startswith("# max_abs_diff N_b_1=")
    assert lines[3].startswith("# charge_drift full=")
    assert lines[4].startswith("# validity overall_pass=")
    columns = lines[5].split(",")
    assert columns[:4] == ["time", "N_b_1_full", "N_b_1_effective", "N_b_1_diff"]
    assert len(columns) == 1 + 3 * 4 * 3
    assert {f"{obs}_3_diff" for obs in ("N_b", "N_c", "F_b", "F_c")} <= set(columns)
    assert len(lines) == 9

    first = dict(zip(columns, (float(value) for value in lines[6].split(","))))
    assert first["time"] == 0.0
    assert first["N_c_3_full"] == pytest.approx(1.0, abs=1e-8)
    assert first["N_b_1_diff"] == pytest.approx(0.0, abs=1e-8)
    assert capsys.readouterr().out.startswith("compare: max_abs_diff=")
