"""Factory for propagator configuration."""

from typing import Optional

from src.config import Settings, get_settings
from src.schemas.evolve.timeseries import PropagatorConfig


def make_propagator_config(settings: Optional[Settings] = None, **overrides) -> PropagatorConfig:
    """Build a PropagatorConfig from PROPAGATOR__ settings.

    :param settings: Optional settings instance
    :param overrides: Field values taking precedence over settings
    :returns: PropagatorConfig
    """
    if settings is None:
        settings = get_settings()

    section = settings.propagator
    values = {
        "method": section.method,
        "time_step": section.time_step,
        "krylov_dim": section.krylov_dim,
        "tolerance": section.tolerance,
        "hermiticity_tolerance": section.hermiticity_tolerance,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    return PropagatorConfig(**values)
