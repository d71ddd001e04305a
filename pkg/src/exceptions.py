class PolaritonError(Exception):
    """Base exception for numerical failures in the toolkit."""


# Parameter mapping
class ParameterError(PolaritonError):
    """Base exception for parameter mapping errors."""


class DegenerateDetuning(ParameterError):
    """Exception raised when a detuning denominator vanishes (perturbation theory breaks down)."""


class NoInteriorMaximum(ParameterError):
    """Exception raised when the ratio optimum sits on a search bound."""


class NoCrossover(ParameterError):
    """Exception raised when the b/c conversion condition never holds in the bracket."""


# Fock spaces and operators
class FockSpaceError(PolaritonError):
    """Base exception for truncated Fock space errors."""


class DimensionOverflow(FockSpaceError):
    """Exception raised when a basis would exceed the configured dimension cap."""


class InadmissibleState(FockSpaceError):
    """Exception raised when an occupation vector violates the space constraints."""


class IndexOutOfRange(FockSpaceError):
    """Exception raised when a basis index is outside 0..dim-1."""


class DimMismatch(FockSpaceError):
    """Exception raised when operator or vector dimensions do not match."""


class TruncationExceeded(FockSpaceError):
    """Exception raised when a requested state needs more excitations than the cap allows."""


# Time evolution
class EvolutionError(PolaritonError):
    """Base exception for time evolution errors."""


class ConvergenceFailure(EvolutionError):
    """Exception raised when the Krylov error estimate cannot meet the tolerance."""


class NonHermitian(EvolutionError):
    """Exception raised when a Hamiltonian fails the Hermiticity precheck."""


# Measurement protocol
class MeasurementError(PolaritonError):
    """Base exception for measurement protocol errors."""


class CalibrationFailure(MeasurementError):
    """Exception raised when no Raman pulse duration reaches the target swap fidelity."""


# General application exceptions
class ConfigurationError(Exception):
    """Exception raised when configuration is invalid."""
