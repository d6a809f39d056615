"""Exception hierarchy.

Input problems (bad parameters, malformed model files) derive from
:class:`InputError`; numerical or hypothesis failures derive from
:class:`NumericalError`.  The CLI maps the two branches to exit codes 2 and 1.
"""

from __future__ import annotations


class FptError(Exception):
    """Base class for all package errors."""


class InputError(FptError, ValueError):
    """Invalid user input."""


class DomainError(InputError):
    """Argument outside the domain of a function."""


class AdmissibilityError(InputError):
    """Jump measure violates the integrability condition on min(z^2, |z|)."""


class ModelSpecError(InputError):
    """Malformed JSON model specification."""


class ConfigurationError(InputError):
    """Inconsistent configuration, e.g. a drift that is not risk neutral."""


class NumericalError(FptError):
    """Base class for failures during computation."""


class UnsupportedConfigurationError(NumericalError):
    """Requested operation is not defined for this model."""


class RegimeError(NumericalError):
    """Operation requires a different asymptotic regime."""


class HypothesisError(NumericalError):
    """Hypotheses of an asymptotic result do not hold."""


class NoDensityError(NumericalError):
    """The marginal law of X_t is not known to have a density."""


class NonIntegrabilityError(NumericalError):
    """Characteristic function does not decay fast enough to be inverted."""


class MartingaleInfeasibleError(NumericalError):
    """exp(-X) has no finite first moment, so no risk-neutral drift exists."""


class InsufficientSamplesError(NumericalError):
    """Too few Monte Carlo crossings for the requested statistic."""


class ConvergenceError(NumericalError):
    """An iterative or adaptive routine ran out of budget.

    Attributes
    ----------
    partial:
        Best estimate available when the budget was exhausted.
    error:
        Error estimate attached to ``partial``.
    """

    def __init__(self, message: str, partial: float = float("nan"), error: float = float("inf")):
        super().__init__(message)
        self.partial = partial
        self.error = error
