"""Exception types raised by permcap."""


class PermcapError(Exception):
    """Base class for all library errors."""


class PermanentOverflowError(PermcapError, OverflowError):
    """A permanent (or one of its intermediates) left the float64 range."""


class DimensionError(PermcapError, ValueError):
    """Operand shapes are inconsistent."""


class NormalizationError(PermcapError, ValueError):
    """Coupling matrix violates the total channel power constraint."""


class DomainError(PermcapError, ValueError):
    """Argument outside its mathematical domain."""


class InfeasibleError(PermcapError, ValueError):
    """No feasible power allocation exists."""


class ScenarioError(PermcapError, ValueError):
    """Invalid scenario document; ``field`` holds the offending JSON path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
