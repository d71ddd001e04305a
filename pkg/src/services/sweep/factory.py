"""Factories wiring SWEEP__ settings into sweep runs."""

from typing import List, Optional

from src.config import Settings, get_settings

from .runner import omega_grid


def make_omega_grid(settings: Optional[Settings] = None) -> List[float]:
    """Omega grid from SWEEP__OMEGA_MIN, SWEEP__OMEGA_MAX, SWEEP__N_POINTS and SWEEP__LOG_SPACED."""
    if settings is None:
        settings = get_settings()

    section = settings.sweep
    return [float(omega) for omega in omega_grid(section.omega_min, section.omega_max, section.n_points, section.log_spaced)]


def make_sample_times(settings: Optional[Settings] = None) -> List[float]:
    if settings is None:
        settings = get_settings()

    section = settings.sweep
    step = section.t_max / max(section.n_samples - 1, 1)
    return [i * step for i in range(section.n_samples)]
