"""Exception types shared across the package."""


class DomainError(ValueError):
    """An elementary function was evaluated outside its real domain."""

    def __init__(self, fn: str, arg=None, detail: str = ""):
        self.fn = fn
        self.arg = arg
        msg = f"{fn} undefined for argument {arg!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ContextMismatch(ValueError):
    """Two values from incompatible precision contexts were combined."""


class InvalidProblem(ValueError):
    """A problem definition violates its own contract (not a zero, or a multiple root)."""


class StepError(RuntimeError):
    """Base class for failures inside a single iteration step."""


class DerivativeZero(StepError):
    """f'(x) vanished where the step needs to divide by it."""


class DenominatorZero(StepError):
    """An intermediate denominator vanished; the message names the subexpression."""

    def __init__(self, subexpression: str):
        self.subexpression = subexpression
        super().__init__(f"zero denominator in {subexpression}")


class WeightPole(StepError):
    """The weight function was evaluated at one of its poles."""


class InsufficientData(ValueError):
    """Not enough iterates to run the requested diagnostic."""


class PrecisionExhausted(RuntimeError):
    """The requested quantity lies below the resolution of the working precision."""


class OrderMismatch(ValueError):
    """Two truncated series of different truncation orders were combined."""


class NotInvertible(ValueError):
    """Series inversion was requested for a series with no invertible leading term."""


class CompositionDomain(ValueError):
    """Series composition argument has a nonzero constant term."""
