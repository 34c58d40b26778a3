"""Exception hierarchy shared by all modules."""


class UnclabError(Exception):
    """Base class for every error raised by unclab."""


class MalformedInputError(UnclabError, ValueError):
    """Input violates a structural precondition (non-finite, unsorted, ...)."""


class InfeasibleRequestError(UnclabError, ValueError):
    """A generator cannot satisfy the requested geometry."""


class DegenerateInputError(UnclabError, ValueError):
    """Zero polynomial / zero spectrum where a normalisation is needed."""


class DomainError(UnclabError, ValueError):
    """Argument outside the mathematical domain (negative coefficient, W <= 0)."""


class HypothesisError(UnclabError):
    """Instance lies outside a claim's stated hypothesis and no override was given."""


class SizeGuardError(UnclabError):
    """Exhaustive search requested above its size guard."""


class ConvergenceError(UnclabError):
    """Iterative solver hit its iteration cap."""

    def __init__(self, message, best_residual):
        super().__init__(message)
        self.best_residual = best_residual


class ResolutionError(UnclabError):
    """Quadrature grid too coarse for the time set; energy bounds violated."""


class ConfigError(UnclabError, ValueError):
    """Campaign/certificate configuration failed validation."""
