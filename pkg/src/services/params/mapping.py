"""Closed-form mapping from atom-cavity parameters to the two-component Bose-Hubbard model."""

import logging
import math
from typing import Dict, List, Optional, Tuple

from src.exceptions import DegenerateDetuning
from src.schemas.params.physics import (
    DecayRates,
    DerivedScales,
    EffectiveParams,
    PhysicalParams,
    TunnelingConvention,
    ValidityCondition,
    ValidityReport,
)

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.1

# Documented cooperativities of existing devices, for reference output only.
REFERENCE_COOPERATIVITIES: Dict[str, float] = {
    "photonic_band_gap": 3.0,
    "fabry_perot": 13.0,
    "toroidal": 7.0,
    "fiber": 17.0,
    "gold_coated_chip": 6.0,
}

VALIDITY_CONDITIONS: Tuple[str, ...] = (
    "rwa_g24",
    "rwa_eps",
    "rwa_Delta",
    "pert_level4",
    "shift_vs_splitting",
    "eps_mixing",
    "tunnel_mixing",
    "dispersive",
    "tunnel_vs_delta",
)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return math.inf if lhs > 0.0 else 0.0
    return lhs / rhs


def _splitting(b_sq: float, delta: float) -> float:
    """|B^2 / delta|, the b/c energy splitting."""
    return math.inf if delta == 0.0 else abs(b_sq / delta)


def derive_scales(p: PhysicalParams) -> DerivedScales:
    """Collective coupling g, mixing scales B and A, and the polariton frequencies."""
    g = math.sqrt(p.n_atoms) * p.g13
    b_scale = math.hypot(g, p.omega)
    b_sq = b_scale**2
    a_scale = math.sqrt(4.0 * b_sq + p.delta**2)

    # Cancellation-free branches: (delta - A)/2 = -2B^2/(delta + A) for delta > 0
    if p.delta >= 0.0:
        mu_plus = 0.5 * (p.delta + a_scale)
        mu_minus = -2.0 * b_sq / (p.delta + a_scale)
    else:
        mu_minus = 0.5 * (p.delta - a_scale)
        mu_plus = 2.0 * b_sq / (a_scale - p.delta)

    if p.delta != 0.0:
        mu_minus_approx = -b_sq / p.delta
        mu_plus_approx = p.delta + b_sq / p.delta
    else:
        mu_minus_approx = mu_plus_approx = math.nan

    return DerivedScales(
        g=g,
        b_scale=b_scale,
        a_scale=a_scale,
        mu_0=0.0,
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        mu_plus_approx=mu_plus_approx,
        mu_minus_approx=mu_minus_approx,
    )


def _check_denominators(p: PhysicalParams, b_sq: float) -> None:
    if p.delta == 0.0:
        raise DegenerateDetuning("delta = 0: the dispersive expansion in 1/delta is undefined")

    shift = b_sq / p.delta
    scale = abs(p.big_delta) + 2.0 * abs(shift)
    denominators = {
        "Delta": p.big_delta,
        "Delta + B^2/delta": p.big_delta + shift,
        "Delta + 2B^2/delta": p.big_delta + 2.0 * shift,
    }
    for label, value in denominators.items():
        if abs(value) <= 1e-14 * scale:
            raise DegenerateDetuning(f"{label} = 0: level-4 resonance, perturbation theory breaks down")


def map_effective(p: PhysicalParams, tunneling: TunnelingConvention = "atomic_weight") -> EffectiveParams:
    """Map microscopic parameters to the effective Hamiltonian coefficients.

    :param p: Microscopic parameters (g13 units)
    :param tunneling: ``atomic_weight`` assigns alpha g^2/B^2 to J_bb; ``photon_weight``
        assigns each species its own photon weight (J_bb = alpha Omega^2/B^2), which is the
        assignment realized by the full atom-cavity model; it also flips the sign of the
        pair-conversion coefficient to the one that model produces
    :returns: EffectiveParams
    :raises DegenerateDetuning: if delta, Delta, Delta + B^2/delta or Delta + 2B^2/delta vanishes
    """
    scales = derive_scales(p)
    b_sq = scales.b_sq
    _check_denominators(p, b_sq)

    g, omega = scales.g, p.omega
    g_sq, omega_sq = g * g, omega * omega
    shift = b_sq / p.delta

    weight = p.g24**2 * g_sq * omega_sq / b_sq**2
    u_b = -weight / p.big_delta
    u_c = -weight / (p.big_delta + 2.0 * shift)
    u_bc = -(p.g24**2) * (g_sq - omega_sq) ** 2 / b_sq**2 / (p.big_delta + shift)

    j_bb = p.alpha * g_sq / b_sq
    j_cc = p.alpha * omega_sq / b_sq
    j_bc = p.alpha * g * omega / b_sq
    pair_conv = -weight / p.big_delta
    if tunneling == "photon_weight":
        j_bb, j_cc = j_cc, j_bb
        pair_conv = -pair_conv

    pair_conv_active = abs(p.g24 * g * omega / b_sq) > abs(shift)

    return EffectiveParams(
        mu_b=0.0,
        mu_c=-shift,
        u_b=u_b,
        u_c=u_c,
        u_bc=u_bc,
        j_bb=j_bb,
        j_cc=j_cc,
        j_bc=j_bc,
        eps_b=p.epsilon * g_sq / b_sq,
        eps_c=p.epsilon * omega_sq / b_sq,
        eps_bc=p.epsilon * g * omega / b_sq,
        pair_conv=pair_conv,
        pair_conv_active=pair_conv_active,
        tunneling=tunneling,
    )


def check_validity(p: PhysicalParams, threshold: Optional[float] = None) -> ValidityReport:
    """Evaluate every approximation inequality behind the effective model.

    Failures are reported, never raised. A condition passes when lhs/rhs < threshold.
    """
    if threshold is None:
        threshold = DEFAULT_THRESHOLD
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")

    scales = derive_scales(p)
    g, omega, b_sq = scales.g, p.omega, scales.b_sq
    splitting = _splitting(b_sq, p.delta)
    mu_c = 0.0 if p.delta == 0.0 else -b_sq / p.delta
    rwa_gap = min(abs(scales.mu_plus), abs(scales.mu_plus - mu_c))

    level4_bc = abs(p.g24 * g * omega / b_sq)
    level4_mixed = abs(p.g24 * (g * g - omega * omega) / b_sq)
    j_bc = abs(p.alpha * g * omega / b_sq)

    pairs: List[Tuple[str, float, float]] = [
        ("rwa_g24", abs(p.g24), rwa_gap),
        ("rwa_eps", abs(p.epsilon), rwa_gap),
        ("rwa_Delta", abs(p.big_delta), rwa_gap),
        ("pert_level4", max(level4_bc, level4_mixed), abs(p.big_delta)),
        ("shift_vs_splitting", level4_bc, splitting),
        ("eps_mixing", abs(p.epsilon * g * omega / b_sq), splitting),
        ("tunnel_mixing", j_bc, splitting),
        ("dispersive", max(omega, g), abs(p.delta)),
        ("tunnel_vs_delta", abs(p.alpha), abs(p.delta)),
    ]

    conditions = []
    for name, lhs, rhs in pairs:
        ratio = _ratio(lhs, rhs)
        conditions.append(ValidityCondition(name=name, lhs=lhs, rhs=rhs, ratio=ratio, passed=ratio < threshold))

    report = ValidityReport(conditions=conditions, overall_pass=all(c.passed for c in conditions), threshold=threshold)
    if not report.overall_pass:
        logger.debug(f"Validity conditions failed: {', '.join(report.failed)}")
    return report


def decay_model(p: PhysicalParams) -> DecayRates:
    """Per-channel decay coefficients of the b and c polaritons."""
    scales = derive_scales(p)
    g_sq, omega_sq, b_sq = scales.g**2, p.omega**2, scales.b_sq

    numerator = p.g24**2 * g_sq * omega_sq * p.gamma4
    if p.big_delta == 0.0:
        level4 = math.inf if numerator > 0.0 else 0.0
    else:
        level4 = numerator / (p.big_delta**2 * b_sq**2)

    if p.delta == 0.0:
        c_level3 = math.inf if p.gamma3 > 0.0 else 0.0
    else:
        c_level3 = b_sq / p.delta**2 * p.gamma3

    return DecayRates(
        b_photonic=omega_sq / b_sq * p.kappa,
        c_photonic=g_sq / b_sq * p.kappa,
        c_level3=c_level3,
        level4=level4,
    )


def decay_rates(p: PhysicalParams, n_b: int, n_c: int) -> Tuple[float, float]:
    """Return (Gamma_b(n_b), Gamma_c(n_c))."""
    if n_b < 0 or n_c < 0:
        raise ValueError(f"occupations must be non-negative, got n_b={n_b}, n_c={n_c}")
    rates = decay_model(p)
    return rates.gamma_b(n_b), rates.gamma_c(n_c)


def cooperativity(p: PhysicalParams) -> float:
    """zeta = g13 / sqrt(kappa gamma4)."""
    denominator = math.sqrt(p.kappa * p.gamma4)
    return math.inf if denominator == 0.0 else p.g13 / denominator


def informational_ratios(p: PhysicalParams) -> Dict[str, float]:
    """Interaction-to-decay ratios at double occupancy, in units of zeta, at the given Delta."""
    eff = map_effective(p)
    gamma_b, gamma_c = decay_rates(p, 2, 2)
    zeta = cooperativity(p)

    def in_zeta(u: float, gamma: float) -> float:
        if gamma == 0.0 or math.isinf(zeta):
            return math.nan
        return abs(u) / gamma / zeta

    return {
        "u_b_over_gamma_b": in_zeta(eff.u_b, gamma_b),
        "u_c_over_gamma_c": in_zeta(eff.u_c, gamma_c),
        "u_bc_over_max_gamma": in_zeta(eff.u_bc, max(gamma_b, gamma_c)),
    }
