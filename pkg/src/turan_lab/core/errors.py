"""Exception hierarchy shared by every lab module."""


class LabError(Exception):
    """Root of all lab failures."""


class LabArgumentError(LabError, ValueError):
    """An argument violates an operation's precondition on its shape or range."""


class CapacityError(LabError):
    """An input exceeds the desk-scale capacity of an exact routine."""


class PreconditionError(LabError):
    """A semantic precondition (e.g. F-freeness) does not hold for the input."""


class ConfigError(LabError):
    """Experiment configuration is invalid."""


class InvariantViolation(LabError):
    """An internal consistency check failed; results must not be trusted."""


class Graph6ParseError(LabError):
    """Malformed graph6 text."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class SpectralConvergenceError(LabError):
    """The Perron refinement did not reach the residual tolerance."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class BudgetExhaustedError(LabError):
    """Enumeration ran out of node expansions before completing."""

    def __init__(self, message: str, progress: dict[str, int]):
        super().__init__(f"{message}; progress={progress}")
        self.progress = progress


class RecordMismatchError(LabArgumentError):
    """A graph or forbidden graph does not belong to the supplied extremal record."""
