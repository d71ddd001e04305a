"""Factories wiring MEASURE__ settings into protocol specs."""

from typing import Optional

from src.config import Settings, get_settings
from src.schemas.measure.protocol import PulseSpec, StirapSpec


def make_pulse_spec(settings: Optional[Settings] = None, calibrate: bool = True) -> PulseSpec:
    if settings is None:
        settings = get_settings()

    section = settings.measure
    return PulseSpec(lambda_=section.raman_lambda, delta_lambda=section.raman_delta, calibrate=calibrate)


def make_stirap_spec(omega: float, species: str = "b", settings: Optional[Settings] = None) -> StirapSpec:
    """STIRAP spec selecting ``species`` with ramp settings from MEASURE__RAMP_*."""
    if settings is None:
        settings = get_settings()

    section = settings.measure
    return StirapSpec(
        theta0_sign=1 if species == "b" else -1,
        ramp_shape=section.ramp_shape,
        ramp_duration=section.ramp_duration,
        omega=omega,
    )
