import math

import pytest
from src.exceptions import NoCrossover, NoInteriorMaximum
from src.services.params.optimize import conversion_margin, crossover_region, optimize_ratio, ratio_at

BOUNDS = (-100.0, -0.01)


def test_optimize_b_ratio_at_equal_mixing(lossy_params):
    best = optimize_ratio(lossy_params, "u_b_over_gamma_b", BOUNDS)

    assert best.zeta == pytest.approx(50.0)
    assert best.best_ratio == pytest.approx(50.0 / (2.0 * math.sqrt(2.0)), rel=1e-6)
    assert best.ratio_over_zeta == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), rel=1e-6)
    assert best.best_big_delta == pytest.approx(-math.sqrt(2.0), rel=1e-3)


def test_optimize_single_component(lossy_params):
    best = optimize_ratio(lossy_params, "u_b_over_gamma_b_single_component", BOUNDS)

    assert best.ratio_over_zeta == pytest.approx(0.5, rel=1e-6)
    assert abs(best.best_big_delta) == pytest.approx(2.0, rel=1e-3)


def test_optimize_matches_grid_scan(lossy_params):
    best = optimize_ratio(lossy_params, "u_b_over_gamma_b", BOUNDS)
    scan = max(ratio_at(lossy_params, "u_b_over_gamma_b", -0.01 * 1.01**k) for k in range(0, 700))

    assert best.best_ratio >= scan * (1 - 1e-9)


def test_optimize_without_cavity_decay(lossy_params):
    with pytest.raises(NoInteriorMaximum):
        optimize_ratio(lossy_params.replace(kappa=0.0), "u_b_over_gamma_b", BOUNDS)


def test_optimize_invariant_under_loss_rescaling(lossy_params):
    base = optimize_ratio(lossy_params, "u_b_over_gamma_b", BOUNDS)
    rescaled = optimize_ratio(lossy_params.replace(kappa=0.02, gamma4=0.02), "u_b_over_gamma_b", BOUNDS)

    assert rescaled.zeta == pytest.approx(base.zeta)
    assert rescaled.ratio_over_zeta == pytest.approx(base.ratio_over_zeta, rel=1e-5)


def test_optimize_rejects_other_free_parameters(lossy_params):
    with pytest.raises(ValueError):
        optimize_ratio(lossy_params, "u_b_over_gamma_b", BOUNDS, free="omega")


def test_optimize_rejects_empty_bounds(lossy_params):
    with pytest.raises(ValueError):
        optimize_ratio(lossy_params, "u_b_over_gamma_b", (-1.0, -1.0))


def test_ratio_at_unknown_objective(lossy_params):
    with pytest.raises(ValueError):
        ratio_at(lossy_params, "u_x_over_gamma_x", -1.0)


def test_conversion_margin_sign():
    assert conversion_margin(1.0, 3.0) > 0.0
    assert conversion_margin(0.5, 6.32) < 0.0


def test_crossover_sweep_regime(sweep_params):
    window = crossover_region(sweep_params)
    resonance = abs(sweep_params.alpha * sweep_params.delta) / 1000.0

    assert resonance == pytest.approx(6.3246, rel=1e-4)
    assert window.x_low == pytest.approx(0.167, abs=2e-3)
    assert window.x_high == pytest.approx(1.41, abs=1e-2)
    assert conversion_margin(window.x_low, resonance) == pytest.approx(0.0, abs=1e-7)
    assert conversion_margin(window.x_high, resonance) == pytest.approx(0.0, abs=1e-7)
    assert window.omega_low == pytest.approx(window.x_low * math.sqrt(1000.0))


def test_crossover_close_to_quoted_window(sweep_params):
    window = crossover_region(sweep_params)

    assert 0.8 * 0.16 <= window.x_low <= 1.2 * 0.16
    assert 0.8 * 1.6 <= window.x_high <= 1.2 * 1.6


def test_crossover_with_explicit_bracket(sweep_params):
    window = crossover_region(sweep_params, omega_bracket=(1.0, 300.0))

    assert window.x_low == pytest.approx(crossover_region(sweep_params).x_low, rel=1e-6)


def test_crossover_clipped_at_bracket_edge(sweep_params):
    g = math.sqrt(1000.0)
    window = crossover_region(sweep_params, omega_bracket=(0.5 * g, 300.0))

    assert window.x_low == pytest.approx(0.5)


def test_no_crossover_without_tunneling(sweep_params):
    with pytest.raises(NoCrossover):
        crossover_region(sweep_params.replace(alpha=0.0))
