"""Bracketed searches over the parameter map: ratio optimization and the crossover window."""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from src.exceptions import DegenerateDetuning, NoCrossover, NoInteriorMaximum
from src.schemas.params.physics import CrossoverWindow, PhysicalParams, RatioObjective, RatioOptimum
from src.services.params.mapping import cooperativity, decay_model, derive_scales, map_effective

logger = logging.getLogger(__name__)

# Occupation at which the level-4 loss channel is open
WORST_CASE_OCCUPATION = 2


def _safe_ratio(u: float, gamma: float) -> float:
    if gamma == 0.0:
        return math.inf if u != 0.0 else 0.0
    return abs(u) / gamma


def ratio_at(p: PhysicalParams, objective: RatioObjective, big_delta: float) -> float:
    """|interaction| / decay for one objective at a given level-4 detuning."""
    q = p.replace(big_delta=big_delta)

    if objective == "u_b_over_gamma_b_single_component":
        # Omega -> 0 limit: photonic weight of Gamma_b equals the interaction weight
        d = abs(big_delta)
        return _safe_ratio(q.g24**2 * d, q.kappa * d * d + q.g24**2 * q.gamma4)

    eff = map_effective(q)
    rates = decay_model(q)
    gamma_b = rates.gamma_b(WORST_CASE_OCCUPATION)
    gamma_c = rates.gamma_c(WORST_CASE_OCCUPATION)

    if objective == "u_b_over_gamma_b":
        return _safe_ratio(eff.u_b, gamma_b)
    if objective == "u_c_over_gamma_c":
        return _safe_ratio(eff.u_c, gamma_c)
    if objective == "u_bc_over_max_gamma":
        return _safe_ratio(eff.u_bc, max(gamma_b, gamma_c))
    raise ValueError(f"Unknown objective: {objective}")


def _search_grid(lo: float, hi: float, n_grid: int) -> np.ndarray:
    if lo * hi > 0.0:
        return np.geomspace(lo, hi, n_grid)
    return np.linspace(lo, hi, n_grid)


def optimize_ratio(
    p: PhysicalParams,
    objective: RatioObjective,
    bounds: Tuple[float, float],
    free: str = "big_delta",
    n_grid: int = 401,
    rel_tol: float = 1e-6,
) -> RatioOptimum:
    """Maximize |objective| over Delta inside bounds.

    A grid scan brackets the peak, bounded Brent/golden refinement polishes it.

    :param p: Parameters; Delta is overwritten by the search
    :param objective: Which ratio to maximize (decay evaluated at n = 2)
    :param bounds: Delta interval, must exclude the degenerate points
    :param free: Name of the free parameter (only ``big_delta`` is supported)
    :raises NoInteriorMaximum: if the best value sits on a bound
    """
    if free != "big_delta":
        raise ValueError(f"Only big_delta can be optimized, got {free}")

    lo, hi = sorted(float(b) for b in bounds)
    if lo == hi:
        raise ValueError("bounds must span a non-empty interval")

    def value(d: float) -> float:
        try:
            return ratio_at(p, objective, d)
        except DegenerateDetuning:
            return -math.inf

    grid = _search_grid(lo, hi, n_grid)
    values = np.array([value(d) for d in grid])
    values = np.where(np.isnan(values), -np.inf, values)
    best = int(np.argmax(values))

    if best == 0 or best == n_grid - 1 or math.isinf(values[best]):
        raise NoInteriorMaximum(
            f"{objective} is largest at the bound Delta={grid[best]:.6g}; widen the bounds or check kappa > 0"
        )

    left, right = float(grid[best - 1]), float(grid[best + 1])
    result = minimize_scalar(
        lambda d: -value(d),
        bounds=(left, right),
        method="bounded",
        options={"xatol": rel_tol * abs(float(grid[best])) * 0.1},
    )
    best_delta, best_value = float(result.x), float(-result.fun)
    if best_value < values[best]:
        best_delta, best_value = float(grid[best]), float(values[best])

    zeta = cooperativity(p)
    ratio_over_zeta = None if math.isinf(zeta) else best_value / zeta

    logger.info(f"optimize_ratio {objective}: Delta*={best_delta:.6g}, ratio={best_value:.6g}")
    return RatioOptimum(
        objective=objective,
        best_big_delta=best_delta,
        best_ratio=best_value,
        zeta=None if math.isinf(zeta) else zeta,
        ratio_over_zeta=ratio_over_zeta,
    )


def conversion_margin(x: float, resonance: float) -> float:
    """(1 + x^2)^2 - r x with x = Omega/g; negative inside the crossover window."""
    return (1.0 + x * x) ** 2 - resonance * x


def crossover_region(
    p: PhysicalParams,
    omega_bracket: Optional[Tuple[float, float]] = None,
    n_scan: int = 4001,
    rel_tol: float = 1e-9,
) -> CrossoverWindow:
    """Omega interval where |mu_c - mu_b| < |J_bc|, i.e. B^4 < |alpha delta| g Omega.

    :param p: Parameters; Omega is the scanned variable
    :param omega_bracket: (lower, upper) Omega in g13 units; defaults to a bracket
        around the roots of (1 + x^2)^2 = r x
    :raises NoCrossover: if the condition holds nowhere in the bracket
    """
    g = derive_scales(p).g
    resonance = abs(p.alpha * p.delta) / (g * g)

    if omega_bracket is None:
        x_lo = min(1e-3, 0.5 / resonance) if resonance > 0.0 else 1e-3
        x_hi = max(10.0, 2.0 * resonance ** (1.0 / 3.0))
    else:
        x_lo, x_hi = (float(b) / g for b in sorted(omega_bracket))
    if x_lo <= 0.0:
        raise ValueError("omega_bracket must be positive")

    margin: Callable[[float], float] = lambda x: conversion_margin(x, resonance)
    xs = np.geomspace(x_lo, x_hi, n_scan)
    inside = np.array([margin(x) for x in xs]) < 0.0

    if not inside.any():
        raise NoCrossover(f"(1+x^2)^2 > (|alpha delta|/g^2) x for all x = Omega/g in [{x_lo:.3g}, {x_hi:.3g}]")

    first, last = int(np.argmax(inside)), int(len(inside) - 1 - np.argmax(inside[::-1]))

    def root(a: float, b: float) -> float:
        return float(bisect(margin, a, b, xtol=rel_tol * a * 1e-3, rtol=rel_tol))

    if first == 0:
        logger.warning("Crossover window is open at the lower bracket edge")
        x_low = float(xs[0])
    else:
        x_low = root(float(xs[first - 1]), float(xs[first]))

    if last == len(xs) - 1:
        logger.warning("Crossover window is open at the upper bracket edge")
        x_high = float(xs[-1])
    else:
        x_high = root(float(xs[last]), float(xs[last + 1]))

    return CrossoverWindow(omega_low=x_low * g, omega_high=x_high * g, x_low=x_low, x_high=x_high)
