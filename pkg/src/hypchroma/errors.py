"""Exception types shared across the package."""


class HypchromaError(Exception):
    """Base class for all package errors."""


class InvalidInputError(HypchromaError, ValueError):
    """An argument is outside the documented domain (wrong sign, NaN, ...)."""


class GeometryInfeasibleError(HypchromaError):
    """The requested figure does not exist in the hyperbolic plane."""


class ConstructionError(HypchromaError):
    """A surface construction rule was violated."""


class PairingError(ConstructionError):
    """Side pairing is malformed (reused side, length mismatch, odd count)."""


class ConnectivityError(ConstructionError):
    """The glued complex is not connected."""


class OrientabilityError(ConstructionError):
    """The pairing produces a non-orientable surface where one is required."""


class BlueprintError(ConstructionError):
    """A rotation-system blueprint is missing or unsuitable."""


class ValidationError(HypchromaError):
    """Internal consistency audit failed (malformed rotation, parity, ...)."""


class SizeExceededError(HypchromaError):
    """Instance is larger than the configured limit for an exact algorithm."""


class ParameterRegimeError(HypchromaError):
    """Inputs left the regime in which the procedure is guaranteed to work.

    The message names the inequality that failed.
    """
