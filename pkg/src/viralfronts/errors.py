"""Exception hierarchy shared by the toolkit.

Two families matter to callers: ``ValidationError`` for rejected inputs
(the CLI maps these to exit status 2) and ``NumericalError`` for failures
of a numerical procedure on valid inputs (exit status 3).
"""


class ValidationError(ValueError):
    """An input violates a documented precondition or invariant."""


class InvalidInitialData(ValidationError):
    """Initial profiles violate one of the admissibility clauses."""


class NoPositiveRoot(ValidationError):
    """The positive equilibrium does not exist (reproduction number <= 1)."""


class ThresholdViolated(ValidationError):
    """An algebraic threshold needed for a closed form is not met."""


class CertificateNotApplicable(ValidationError):
    """The vanishing certificate's regime conditions do not hold."""


class BracketError(ValidationError):
    """A search bracket's endpoints do not classify as required."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (instability, non-convergence, ...)."""


class FrontCollapse(NumericalError):
    """The moving fronts came closer than the minimum admissible width."""


class NonConvergence(NumericalError):
    """An iteration hit its cap before reaching the requested tolerance."""
