from typing import Any, Dict


class StabthermError(Exception):
    """Base class for every error raised by the stabtherm modules."""

    exit_code = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self._details = details

    def details(self) -> Dict[str, Any]:
        """Structured payload for the CLI error document."""
        payload = {"error": type(self).__name__, "message": self.message}
        payload.update({key: _plain(value) for key, value in self._details.items()})
        return payload


class ValidationError(StabthermError, ValueError):
    exit_code = 2


class ClaimCheckError(StabthermError):
    exit_code = 3


class ResourceLimitError(StabthermError):
    exit_code = 4


# pauli_core
class DimensionMismatch(ValidationError):
    pass


class PauliParseError(ValidationError):
    pass


# stabilizer_group
class NonCommutingError(ValidationError):
    pass


class DependentGeneratorError(ValidationError):
    pass


class MinusIdentityError(ValidationError):
    pass


class NonHermitianGeneratorError(ValidationError):
    pass


class NotMaximalError(ValidationError):
    pass


class NonHermitianOperatorError(ValidationError):
    pass


class TableauParseError(ValidationError):
    pass


# graph_states
class GraphParseError(ValidationError):
    pass


class OddNError(ValidationError):
    pass


class EvenNError(ValidationError):
    pass


class TooSmallError(ValidationError):
    pass


# mite_analysis
class SubsetLimitExceeded(ResourceLimitError):
    pass


# parent_hamiltonian
class NonHermitianResultError(ValidationError):
    pass


class NotAnnihilatingError(ValidationError):
    pass


class HamiltonianParseError(ValidationError):
    pass


# spectral_stats
class IncompatibleSpecError(ValidationError):
    pass


class DimensionZeroError(ValidationError):
    pass


class TooFewLevelsError(ValidationError):
    pass


class TooLargeError(ResourceLimitError):
    pass


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return str(value)
