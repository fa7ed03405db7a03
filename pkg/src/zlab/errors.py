"""Exception hierarchy shared by every module.

The CLI maps ``EvaluationError`` subclasses to exit code 3.
"""

from __future__ import annotations


class EvaluationError(Exception):
    """Base class for numerical failures (poles, divergences, non-convergence)."""

    kind = "evaluation"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class PoleError(EvaluationError):
    """Evaluation point sits on a pole of the function."""

    kind = "pole"


class DomainError(EvaluationError, ValueError):
    """Arguments outside the domain of the operation."""

    kind = "domain"


class DivergenceError(EvaluationError):
    """A defining sum or product diverges at the requested parameters."""

    kind = "divergence"


class ConvergenceError(EvaluationError):
    """An iterative scheme failed to reach the requested tolerance."""

    kind = "convergence"


class ToleranceError(ConvergenceError):
    """Quadrature could not meet its tolerance.

    Carries the best estimate and the error actually achieved.
    """

    kind = "tolerance"

    def __init__(self, message: str, estimate: complex, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["estimate"] = [self.estimate.real, self.estimate.imag]
        d["achieved_error"] = self.error
        return d


class ResourceError(EvaluationError):
    """Request exceeds a configured size ceiling."""

    kind = "resource"
