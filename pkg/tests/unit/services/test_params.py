import math

import pytest
from src.exceptions import DegenerateDetuning
from src.schemas.params.physics import PhysicalParams
from src.services.params.mapping import (
    VALIDITY_CONDITIONS,
    check_validity,
    cooperativity,
    decay_model,
    decay_rates,
    derive_scales,
    informational_ratios,
    map_effective,
)


def test_derive_scales_without_laser():
    scales = derive_scales(PhysicalParams(n_atoms=1, omega=0.0, delta=10.0))

    assert scales.g == pytest.approx(1.0)
    assert scales.b_scale == pytest.approx(1.0)
    assert scales.a_scale == pytest.approx(math.sqrt(104.0))
    assert scales.mu_minus_approx == pytest.approx(-0.1)
    assert scales.mu_plus_approx == pytest.approx(10.1)
    assert scales.mu_0 == 0.0


def test_derive_scales_sweep_regime(sweep_params):
    scales = derive_scales(sweep_params)

    assert scales.g == pytest.approx(31.6227766, rel=1e-8)
    assert scales.b_sq == pytest.approx(2000.0)


def test_exact_and_expanded_frequencies_agree():
    g = math.sqrt(1000.0)
    scales = derive_scales(PhysicalParams(omega=g, delta=2000.0 * g))

    assert scales.mu_minus == pytest.approx(scales.mu_minus_approx, rel=1e-6)
    assert scales.mu_plus == pytest.approx(scales.mu_plus_approx, rel=1e-6)


def test_exact_frequencies_for_negative_delta():
    scales = derive_scales(PhysicalParams(omega=10.0, delta=-500.0))

    assert scales.mu_plus + scales.mu_minus == pytest.approx(-500.0)
    assert scales.mu_plus * scales.mu_minus == pytest.approx(-scales.b_sq)


def test_map_effective_at_equal_mixing(sweep_params):
    eff = map_effective(sweep_params)

    assert eff.u_bc == 0.0
    assert eff.j_bb == pytest.approx(0.05)
    assert eff.j_cc == pytest.approx(0.05)
    assert eff.j_bc == pytest.approx(0.05)


def test_map_effective_sweep_example(sweep_params):
    eff = map_effective(sweep_params)

    assert eff.u_b == pytest.approx(5.0, rel=1e-9)
    assert eff.u_c == pytest.approx(-18.874, rel=1e-3)
    assert eff.mu_b == 0.0
    assert eff.mu_c == pytest.approx(-2000.0 / (2000.0 * math.sqrt(1000.0)))


def test_map_effective_without_laser():
    p = PhysicalParams(omega=0.0, big_delta=-3.0, delta=1.0e4)
    eff = map_effective(p)
    g_sq = 1000.0

    assert eff.u_b == 0.0
    assert eff.u_c == 0.0
    assert eff.j_cc == 0.0
    assert eff.j_bc == 0.0
    assert eff.u_bc == pytest.approx(-1.0 / (-3.0 + g_sq / 1.0e4))


@pytest.mark.parametrize("tunneling", ["atomic_weight", "photon_weight"])
@pytest.mark.parametrize("omega", [0.5, 31.6, 47.4, 400.0])
def test_tunneling_product_identity(dynamics_params, tunneling, omega):
    eff = map_effective(dynamics_params.replace(omega=omega), tunneling)

    assert eff.j_bb * eff.j_cc == pytest.approx(eff.j_bc**2, rel=1e-12)


def test_photon_weight_swaps_diagonal_tunneling(dynamics_params):
    atomic = map_effective(dynamics_params, "atomic_weight")
    weighted = map_effective(dynamics_params, "photon_weight")

    assert weighted.j_bb == atomic.j_cc
    assert weighted.j_cc == atomic.j_bb
    assert weighted.j_bc == atomic.j_bc
    assert weighted.pair_conv == -atomic.pair_conv
    assert weighted.tunneling == "photon_weight"


@pytest.mark.parametrize("big_delta", [-10.0, -0.05, -0.02, 0.01, 5.0])
def test_interaction_sign_table(sweep_params, big_delta):
    p = sweep_params.replace(omega=20.0, big_delta=big_delta)
    eff = map_effective(p)
    shift = derive_scales(p).b_sq / p.delta

    assert (eff.u_b > 0) == (big_delta < 0)
    assert (eff.u_c > 0) == (big_delta + 2.0 * shift < 0)
    assert (eff.u_bc > 0) == (big_delta + shift < 0)


def test_repulsive_and_attractive_regime(sweep_params):
    eff = map_effective(sweep_params.replace(omega=20.0, big_delta=-0.01))

    assert eff.u_b > 0
    assert eff.u_c < 0
    assert eff.u_bc < 0


def test_map_effective_is_scale_covariant(dynamics_params):
    s = 3.7
    base = map_effective(dynamics_params)
    scaled = map_effective(
        dynamics_params.replace(
            g13=s * dynamics_params.g13,
            g24=s * dynamics_params.g24,
            delta=s * dynamics_params.delta,
            big_delta=s * dynamics_params.big_delta,
            omega=s * dynamics_params.omega,
            alpha=s * dynamics_params.alpha,
        )
    )

    for name in ("mu_c", "u_b", "u_c", "u_bc", "j_bb", "j_cc", "j_bc", "pair_conv"):
        assert getattr(scaled, name) == pytest.approx(s * getattr(base, name), rel=1e-10)


def test_pair_conversion_activation(dynamics_params):
    assert map_effective(dynamics_params).pair_conv_active is True
    assert map_effective(dynamics_params.replace(omega=1.0)).pair_conv_active is False


@pytest.mark.parametrize("changes", [{"big_delta": 0.0}, {"delta": 0.0}])
def test_degenerate_detuning(dynamics_params, changes):
    with pytest.raises(DegenerateDetuning):
        map_effective(dynamics_params.replace(**changes))


def test_degenerate_detuning_at_level4_pole(sweep_params):
    shift = derive_scales(sweep_params).b_sq / sweep_params.delta

    with pytest.raises(DegenerateDetuning, match="Delta \\+ B\\^2/delta"):
        map_effective(sweep_params.replace(big_delta=-shift))


def test_validity_report_names_every_condition(dynamics_params):
    report = check_validity(dynamics_params)

    assert tuple(cond.name for cond in report.conditions) == VALIDITY_CONDITIONS
    assert report.threshold == 0.1
    for cond in report.conditions:
        assert cond.ratio == pytest.approx(cond.lhs / cond.rhs)
        assert cond.passed == (cond.ratio < 0.1)


def test_validity_dynamics_regime(dynamics_params):
    report = check_validity(dynamics_params)

    # |g24 g Omega / B^2| = 0.46 exceeds the b/c splitting 0.325 in this regime
    assert report.failed == ["shift_vs_splitting"]
    assert report.overall_pass is False
    assert report.condition("shift_vs_splitting").ratio == pytest.approx((1500.0 / 3250.0) / 0.325, rel=1e-6)
    assert report.condition("tunnel_mixing").passed


def test_validity_tunneling_equal_to_delta(dynamics_params):
    report = check_validity(dynamics_params.replace(alpha=1.0e4))

    cond = report.condition("tunnel_vs_delta")
    assert cond.ratio == pytest.approx(1.0)
    assert cond.passed is False


def test_validity_mixing_inside_crossover(sweep_params):
    report = check_validity(sweep_params)

    assert report.condition("tunnel_mixing").passed is False
    assert report.condition("tunnel_mixing").ratio == pytest.approx(0.05 / (2000.0 / sweep_params.delta))


def test_validity_serializes_pass_alias(dynamics_params):
    dumped = check_validity(dynamics_params).model_dump(by_alias=True)

    assert "pass" in dumped["conditions"][0]


@pytest.mark.parametrize("threshold", [0.0, 1.0, -0.5])
def test_validity_threshold_range(dynamics_params, threshold):
    with pytest.raises(ValueError):
        check_validity(dynamics_params, threshold)


def test_decay_rates_lossless(dynamics_params):
    assert decay_rates(dynamics_params, 2, 2) == (0.0, 0.0)


def test_decay_rate_gate(lossy_params):
    scales = derive_scales(lossy_params)
    gamma_b_1, gamma_c_1 = decay_rates(lossy_params, 1, 1)
    gamma_b_2, gamma_c_2 = decay_rates(lossy_params, 2, 3)

    assert gamma_b_1 == pytest.approx(lossy_params.omega**2 / scales.b_sq * lossy_params.kappa)
    assert gamma_c_1 == pytest.approx(scales.g**2 / scales.b_sq * lossy_params.kappa)
    assert gamma_b_2 > gamma_b_1
    assert gamma_c_2 > gamma_c_1
    assert gamma_b_2 - gamma_b_1 == pytest.approx(gamma_c_2 - gamma_c_1)


def test_decay_components(lossy_params):
    components = decay_model(lossy_params).components(1, 2)

    assert components["b"]["level4"] == 0.0
    assert components["c"]["level4"] > 0.0
    assert components["b"]["level3"] == 0.0


def test_decay_rates_reject_negative_occupation(lossy_params):
    with pytest.raises(ValueError):
        decay_rates(lossy_params, -1, 0)


def test_cooperativity(lossy_params, dynamics_params):
    assert cooperativity(lossy_params) == pytest.approx(50.0)
    assert math.isinf(cooperativity(dynamics_params))


def test_informational_ratios(lossy_params):
    ratios = informational_ratios(lossy_params.replace(big_delta=-math.sqrt(2.0)))

    assert ratios["u_b_over_gamma_b"] == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), rel=1e-9)
    assert ratios["u_bc_over_max_gamma"] == 0.0
