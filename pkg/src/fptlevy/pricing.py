"""Unit recovery claims in a structural default model.

The firm value is ``e^{-X_t}`` relative to a debt principal ``K in (0, 1)``,
so default is the passage of ``X`` over ``b = -log K``.  Under the pricing
measure ``e^{-X_t - r t}`` is a martingale, which pins the drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cumulant import psi_inverse, psi_real
from .errors import ConfigurationError, DomainError, MartingaleInfeasibleError
from .esscher import EsscherSolution, find_lambda_star
from .fpt import AsymptoteReport, FptModel, integrate_density, tail_expectation_asymptote
from .inversion import DEFAULT_SPEC, QuadratureSpec
from .levy_model import JumpMeasure, LevyTriplet, NoJumps

# the infinite-horizon integral stops where e^{-r s} drops below this
DISCOUNT_CUTOFF = 1e-13
DRIFT_TOL = 1e-10


@dataclass(frozen=True)
class MarketSpec:
    r: float
    K: float
    T: float = math.inf

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"interest rate must be positive, got {self.r}")
        if not 0.0 < self.K < 1.0:
            raise DomainError(f"debt principal K must lie in (0, 1), got {self.K}")
        if not self.T > 0:
            raise DomainError(f"maturity must be positive, got {self.T}")

    @property
    def b(self) -> float:
        return -math.log(self.K)


def risk_neutral_drift(r: float, sigma: float, jumps: Optional[JumpMeasure] = None) -> float:
    """Drift making ``e^{-X_t - r t}`` a martingale: ``-r + sigma^2/2 + int (e^{-z} - 1 + z) nu(dz)``."""
    jumps = jumps or NoJumps()
    if not jumps.lambda_minus < -1.0:
        raise MartingaleInfeasibleError(
            f"{jumps.family} measure has no exponential moment of order -1 (lambda_- = {jumps.lambda_minus})"
        )
    return -r + 0.5 * sigma**2 + float(jumps.cumulant(-1.0).real)


def risk_neutral_triplet(r: float, sigma: float, jumps: Optional[JumpMeasure] = None) -> LevyTriplet:
    jumps = jumps or NoJumps()
    return LevyTriplet(sigma, risk_neutral_drift(r, sigma, jumps), jumps)


def martingale_defect(triplet: LevyTriplet, r: float) -> float:
    """``Psi(-1) - r``; zero when the discounted firm value is a martingale."""
    return psi_real(triplet, -1.0) - r


def laplace_fpt(model: FptModel, r: float) -> float:
    """``E[e^{-r tau_b}] = e^{-b Psi^{-1}(r)}``."""
    return math.exp(-model.b * psi_inverse(model.strip, r))


def discounted_fpt_integral(
    model: FptModel, r: float, T: float = math.inf, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """``int_0^T e^{-r s} p_b(s) ds`` by quadrature of the density.

    No drift condition is imposed.  ``T = inf`` is cut where the discount
    falls below ``DISCOUNT_CUTOFF``.
    """
    if not r >= 0:
        raise DomainError(f"r must be nonnegative, got {r}")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if math.isinf(T):
        if r == 0:
            raise DomainError("an infinite horizon needs r > 0")
        T = math.log(1.0 / DISCOUNT_CUTOFF) / r
    value, _ = integrate_density(model, 0.0, float(T), spec, weight=lambda s: np.exp(-r * np.asarray(s)))
    return float(value)


def _check_calibrated(model: FptModel, market: MarketSpec) -> None:
    trip = model.triplet
    m_rn = risk_neutral_drift(market.r, trip.sigma, trip.jumps)
    if abs(trip.m - m_rn) > DRIFT_TOL * max(1.0, abs(m_rn)):
        raise ConfigurationError(f"model drift {trip.m} is not the risk-neutral drift {m_rn}")
    if abs(model.b - market.b) > 1e-12 * max(1.0, market.b):
        raise ConfigurationError(f"model level {model.b} does not match -log K = {market.b}")


def urc_value(model: FptModel, market: MarketSpec, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``U_T = E[e^{-r tau_b}; tau_b <= T]`` for a risk-neutral model."""
    _check_calibrated(model, market)
    value = discounted_fpt_integral(model, market.r, market.T, spec)
    return min(1.0, max(0.0, value))


def urc_gap_asymptote(
    model: FptModel, market: MarketSpec, solution: Optional[EsscherSolution] = None
) -> AsymptoteReport:
    """Large-maturity asymptote of ``e^{-b Psi^{-1}(r)} - U_T``.

    The gap is ``E[e^{-r tau_b}; tau_b > T]``, so this is the tail-expectation
    asymptote with ``mu = r``.
    """
    sol = solution or find_lambda_star(model.strip)
    rep = tail_expectation_asymptote(model, market.r, sol)
    return AsymptoteReport(
        kind="urc_gap",
        constant=rep.constant,
        power=rep.power,
        rate=rep.rate,
        auxiliary={**rep.auxiliary, "r": market.r, "b": market.b},
    )
