"""Exception types shared across the package."""


class EntrogeoError(Exception):
    """Base class for all package-specific errors."""


class InvalidCurve(EntrogeoError):
    """Curve nodes are inconsistent with each other or with the backend."""


class DomainError(EntrogeoError):
    """An argument lies outside the mathematical domain of the operation."""


class SlopeUndefined(EntrogeoError):
    """The metric slope could not be evaluated at the requested point."""


class FlowDiverged(EntrogeoError):
    """Gradient-flow integration produced a non-finite state."""


class GridMismatch(EntrogeoError):
    """Two grid densities do not share the same spatial grid."""


class EndpointEntropyInfinite(EntrogeoError):
    """A Schrodinger problem was posed with an endpoint of infinite entropy.

    Mollify the endpoints first (see ``cost_analysis.mollified_sweep``).
    """


class ProfileIncomplete(EntrogeoError):
    """A cost profile lacks the rows required by the requested diagnostic."""


class ScheduleRejected(EntrogeoError):
    """A mollification schedule shrinks too fast for the endpoint entropies."""


class ConfigError(EntrogeoError):
    """Experiment configuration file is malformed or inconsistent."""
