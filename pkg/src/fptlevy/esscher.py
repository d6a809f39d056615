"""Exponential tilting towards the minimiser of the cumulant.

For ``m > 0`` and a finite exponential moment on the left, ``Psi`` attains its
minimum at a unique ``lambda* in (lambda_-, 0)``.  Tilting by
``e^{lambda* X_t - Psi(lambda*) t}`` yields a drift-free process, and this
is what drives the exponential decay of the passage-time density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .cumulant import StripLike, as_strip, psi_derivatives, solve_increasing
from .errors import HypothesisError
from .levy_model import LevyTriplet

FAR_LEFT = 1e6


@dataclass(frozen=True)
class EsscherSolution:
    lambda_star: float
    psi_at_star: float
    d_squared: float
    tilted: LevyTriplet

    def to_dict(self) -> dict:
        return {
            "lambda_star": self.lambda_star,
            "psi_at_star": self.psi_at_star,
            "d_squared": self.d_squared,
            "tilted": self.tilted.to_dict(),
        }


class TiltRelation(NamedTuple):
    lhs: float
    rhs: float
    lhs_error: float
    rhs_error: float

    @property
    def consistent(self) -> bool:
        return abs(self.lhs - self.rhs) <= 2.0 * (self.lhs_error + self.rhs_error)


def _left_slope(strip) -> float:
    """``Psi'`` at the left end of the real strip (limit from the right)."""
    lm = strip.lambda_minus
    trip = strip.triplet
    if math.isinf(lm):
        scale = max(1.0, abs(trip.m) / trip.sigma**2) if trip.sigma > 0 else 1.0
        return psi_derivatives(strip, -FAR_LEFT * scale)[1]
    return psi_derivatives(strip, lm + 1e-12 * max(1.0, abs(lm)))[1]


def find_lambda_star(strip: StripLike) -> EsscherSolution:
    """Locate ``lambda*`` with ``Psi'(lambda*) = 0`` and build the tilted triplet.

    Raises
    ------
    HypothesisError
        If ``m <= 0``, ``lambda_- >= 0`` or ``Psi'`` does not change sign on
        ``(lambda_-, 0)``.
    """
    strip = as_strip(strip)
    trip = strip.triplet
    lm = strip.lambda_minus
    if not trip.m > 0:
        raise HypothesisError(f"positive drift required, got m = {trip.m}")
    if not lm < 0:
        raise HypothesisError(
            f"{trip.jumps.family} measure has no negative exponential moment (lambda_- = {lm})"
        )
    if not _left_slope(strip) < 0:
        raise HypothesisError("Psi' does not change sign on (lambda_-, 0)")

    def f_df(lam):
        _, d1, d2 = psi_derivatives(strip, lam)
        return d1, d2

    lam = solve_increasing(f_df, 0.0, lm, 0.0)
    value, _, d2 = psi_derivatives(strip, lam)
    tilted = LevyTriplet(trip.sigma, 0.0, trip.jumps.tilt(lam))
    return EsscherSolution(lambda_star=lam, psi_at_star=value, d_squared=d2, tilted=tilted)


def tilt_density_relation(model, sol: EsscherSolution, t: float, spec=None) -> TiltRelation:
    """Compare ``p_b(t)`` with ``e^{-lambda* b + Psi(lambda*) t} q_b(t)``.

    ``q_b`` is the passage-time density of the tilted, drift-free model.  Both
    sides go through the full inversion pipeline.
    """
    from .fpt import FptModel, fpt_density
    from .inversion import DEFAULT_SPEC

    spec = spec or DEFAULT_SPEC
    lhs, lhs_err = fpt_density(model, t, spec)
    q, q_err = fpt_density(FptModel(sol.tilted, model.b), t, spec)
    factor = math.exp(-sol.lambda_star * model.b + sol.psi_at_star * t)
    return TiltRelation(lhs, factor * q, lhs_err, factor * q_err)
