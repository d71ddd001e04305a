from .params.physics import CrossoverWindow, DecayRates, DerivedScales, EffectiveParams, PhysicalParams, ValidityReport
from .fock.models import ModeSpace
from .models.specs import EffectiveModelSpec, FullModelSpec, LatticeSpec, StateVector
from .evolve.timeseries import PropagatorConfig, TimeSeries
from .sweep.results import ComparisonResult, SweepResult, SweepRow
from .measure.protocol import AtomCavityExact, ProtocolResult, PulseSpec, StirapSpec

__all__ = [
    "PhysicalParams",
    "DerivedScales",
    "EffectiveParams",
    "DecayRates",
    "ValidityReport",
    "CrossoverWindow",
    "ModeSpace",
    "LatticeSpec",
    "EffectiveModelSpec",
    "FullModelSpec",
    "StateVector",
    "PropagatorConfig",
    "TimeSeries",
    "SweepRow",
    "SweepResult",
    "ComparisonResult",
    "PulseSpec",
    "StirapSpec",
    "AtomCavityExact",
    "ProtocolResult",
]
