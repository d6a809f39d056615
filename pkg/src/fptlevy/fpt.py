"""Passage-time density and CDF over a positive level, with large-time asymptotes.

For a spectrally negative process the passage time ``tau_b`` over ``b > 0``
has density ``p_b(t) = (b / t) p(t, b)``, where ``p(t, .)`` is the density of
``X_t``.  Three large-time regimes are covered:

* ``stable``   (m = 0, tail index ``alpha``): ``b K_alpha / (t g(t))``
* ``gaussian`` (m = 0, finite variance):       ``b / sqrt(2 pi c^2) t^{-3/2}``
* ``tilted``   (m > 0, ``lambda_- < 0``):      ``b / sqrt(2 pi d^2) t^{-3/2} e^{-lambda* b + Psi(lambda*) t}``
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from ._parallel import parallel_map
from .cumulant import CumulantStrip
from .errors import ConfigurationError, DomainError, HypothesisError, NoDensityError, RegimeError
from .esscher import EsscherSolution, find_lambda_star
from .inversion import DEFAULT_SPEC, QuadratureSpec, transition_density
from .levy_model import LevyTriplet, ModelDiagnostics, TabulatedTail, diagnose
from .quadrature import integrate

AsymptoteKind = Literal["stable", "gaussian", "tilted"]

# the CDF integral starts from t * 2^-CDF_OCTAVES
CDF_OCTAVES = 48


class HypothesesUnverifiedWarning(UserWarning):
    """Asymptote emitted for a model whose small-jump condition cannot be checked analytically."""


@dataclass(frozen=True)
class FptModel:
    triplet: LevyTriplet
    b: float
    diagnostics: ModelDiagnostics = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.b > 0:
            raise DomainError(f"level b must be positive, got {self.b}")
        diag = diagnose(self.triplet)
        if not diag.density_conditions_ok:
            raise NoDensityError("; ".join(diag.notes) or "density conditions fail")
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "diagnostics", diag)

    @property
    def strip(self) -> CumulantStrip:
        return CumulantStrip(self.triplet)


def fpt_density(model: FptModel, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """``(p_b(t), error_estimate)``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    p, err = transition_density(model.strip, t, model.b, spec)
    w = model.b / t
    return w * p, w * err


def fpt_density_curve(model: FptModel, times, spec: QuadratureSpec = DEFAULT_SPEC):
    times = np.asarray(times, dtype=float)
    rows = parallel_map(lambda s: fpt_density(model, s, spec), times)
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def _density_on(model, spec):
    def f(s):
        return np.array([fpt_density(model, float(v), spec)[0] for v in np.ravel(s)])

    return f


def _interval_breaks(lo: float, hi: float) -> np.ndarray:
    if lo == 0.0:
        return np.concatenate([[0.0], hi * 2.0 ** -np.arange(CDF_OCTAVES, -1, -1)])
    n = max(1, int(math.ceil(math.log2(hi / lo))))
    return np.geomspace(lo, hi, n + 1)


def integrate_density(model: FptModel, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_SPEC, weight=None):
    """``int_lo^hi w(s) p_b(s) ds`` with geometric break points; returns ``(value, error)``."""
    dens = _density_on(model, spec)
    f = dens if weight is None else (lambda s: weight(s) * dens(s))
    return integrate(
        f,
        _interval_breaks(lo, hi),
        abs_tol=max(spec.abs_tol, 1e-13),
        rel_tol=max(spec.rel_tol, 1e-10),
        max_panels=spec.max_panels,
    )


def fpt_cdf(model: FptModel, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``P(tau_b <= t)`` by integrating the density, clamped to ``[0, 1]``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    value, _ = integrate_density(model, 0.0, float(t), spec)
    return float(min(1.0, max(0.0, value)))


def fpt_cdf_curve(model: FptModel, times, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """CDF at each point of an increasing grid, accumulated interval by interval."""
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return times.copy()
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise DomainError("times must be positive and strictly increasing")
    edges = np.concatenate([[0.0], times])
    pieces = parallel_map(
        lambda k: integrate_density(model, edges[k], edges[k + 1], spec)[0], range(times.size)
    )
    return np.clip(np.cumsum(pieces), 0.0, 1.0)


# -- stable-regime constants ---------------------------------------------


def _check_alpha(alpha: float) -> None:
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")


def stable_constant(alpha: float) -> float:
    """``K_alpha = sin(pi/alpha)/pi * Gamma(1 + 1/alpha) * ((alpha - 1)/Gamma(2 - alpha))^{1/alpha}``."""
    _check_alpha(alpha)
    return (
        math.sin(math.pi / alpha)
        / math.pi
        * math.gamma(1.0 + 1.0 / alpha)
        * ((alpha - 1.0) / math.gamma(2.0 - alpha)) ** (1.0 / alpha)
    )


def stable_scale(alpha: float) -> float:
    """``c_alpha = Gamma(2 - alpha) cos(pi alpha / 2) / (1 - alpha)``, positive on (1, 2)."""
    _check_alpha(alpha)
    return math.gamma(2.0 - alpha) * math.cos(0.5 * math.pi * alpha) / (1.0 - alpha)


def stable_limit_integral(alpha: float, tol: float = 1e-13) -> float:
    """Numerically integrate the limiting characteristic function over the line.

    ``2 int_0^inf exp(-c l^alpha) cos(c tan(pi alpha/2) l^alpha) dl``; equals
    ``2 pi K_alpha``, so it serves as an independent check of
    :func:`stable_constant`.
    """
    _check_alpha(alpha)
    c = stable_scale(alpha)
    k = c * math.tan(0.5 * math.pi * alpha)
    cutoff = (40.0 / c) ** (1.0 / alpha)
    # one panel per quarter turn of the phase k l^alpha
    turns = abs(k) * cutoff**alpha / (0.5 * math.pi)
    levels = np.arange(1, int(turns) + 1) * 0.5 * math.pi / abs(k)
    breaks = np.unique(np.concatenate([np.linspace(0.0, cutoff, 9), levels ** (1.0 / alpha)]))

    def f(lam):
        v = lam**alpha
        return np.exp(-c * v) * np.cos(k * v)

    value, _ = integrate(f, breaks, abs_tol=tol, rel_tol=1e-13, max_panels=200000)
    return 2.0 * float(value)


def scaling_g(model: FptModel, x: float) -> float:
    """Exact inverse of ``r(u) = 1 / nu_bar(u)``: ``g(x) = nu_bar^{-1}(1 / x)``."""
    if model.diagnostics.regime != "stable":
        raise RegimeError("g is only defined in the stable regime")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return float(model.triplet.jumps.tail_inverse(1.0 / x))


# -- asymptotes -------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoteReport:
    """Prefactor and rates of a large-time asymptote.

    The asymptote is ``constant * t^power * e^{rate t}``; in the stable
    regime ``t^power`` stands for ``1 / (t g(t))`` and ``power`` is only the
    nominal exponent ``-1 - 1/alpha``.
    """

    kind: str
    constant: float
    power: float
    rate: float
    auxiliary: dict
    hypotheses_verified: bool = True
    scaling: Optional[Callable[[float], float]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.constant > 0:
            raise HypothesisError(f"asymptote constant must be positive, got {self.constant}")
        if self.rate > 0:
            raise HypothesisError(f"exponential rate must be nonpositive, got {self.rate}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "constant": self.constant,
            "power": self.power,
            "rate": self.rate,
            "auxiliary": self.auxiliary,
            "hypotheses_verified": self.hypotheses_verified,
        }


def asymptote_eval(report: AsymptoteReport, t):
    t = np.asarray(t, dtype=float)
    if report.scaling is not None:
        g = np.vectorize(report.scaling, otypes=[float])(t)
        out = report.constant / (t * g)
    else:
        out = report.constant * t**report.power * np.exp(report.rate * t)
    return float(out) if out.ndim == 0 else out


def default_kind(model: FptModel) -> AsymptoteKind:
    if model.triplet.m > 0:
        return "tilted"
    return model.diagnostics.regime


def _zero_drift(model: FptModel, kind: str) -> None:
    if model.triplet.m != 0:
        raise HypothesisError(f"the {kind} asymptote assumes m = 0, got m = {model.triplet.m}")


def asymptote(
    model: FptModel,
    kind: Optional[AsymptoteKind] = None,
    solution: Optional[EsscherSolution] = None,
) -> AsymptoteReport:
    """Large-time asymptote of ``p_b`` for the model's regime (or the requested ``kind``)."""
    kind = kind or default_kind(model)
    diag, b = model.diagnostics, model.b
    if kind == "stable":
        if diag.regime != "stable":
            raise RegimeError("stable asymptote requested for a finite-variance model")
        _zero_drift(model, kind)
        alpha = diag.alpha
        verified = not isinstance(model.triplet.jumps, TabulatedTail)
        if not verified:
            warnings.warn(
                "small-jump condition is not verified for tabulated tails", HypothesesUnverifiedWarning, stacklevel=2
            )
        return AsymptoteReport(
            kind="stable",
            constant=b * stable_constant(alpha),
            power=-1.0 - 1.0 / alpha,
            rate=0.0,
            auxiliary={"alpha": alpha, "K_alpha": stable_constant(alpha), "g_at_1": scaling_g(model, 1.0)},
            hypotheses_verified=verified,
            scaling=lambda x: scaling_g(model, x),
        )
    if kind == "gaussian":
        if diag.regime != "gaussian":
            raise RegimeError("Gaussian asymptote requested for an infinite-variance model")
        _zero_drift(model, kind)
        c2 = diag.c_squared
        return AsymptoteReport(
            kind="gaussian",
            constant=b / math.sqrt(2.0 * math.pi * c2),
            power=-1.5,
            rate=0.0,
            auxiliary={"c_squared": c2},
        )
    if kind == "tilted":
        sol = solution or find_lambda_star(model.strip)
        return AsymptoteReport(
            kind="tilted",
            constant=b * math.exp(-sol.lambda_star * b) / math.sqrt(2.0 * math.pi * sol.d_squared),
            power=-1.5,
            rate=sol.psi_at_star,
            auxiliary={"lambda_star": sol.lambda_star, "psi_at_star": sol.psi_at_star, "d_squared": sol.d_squared},
        )
    raise ConfigurationError(f"unknown asymptote kind {kind!r}")


def tail_expectation_asymptote(
    model: FptModel, mu: float, solution: Optional[EsscherSolution] = None
) -> AsymptoteReport:
    """Asymptote of ``E[e^{-mu tau_b}; tau_b >= t]`` under positive drift.

    Needs ``mu - Psi(lambda*) > 0``, which holds for every ``mu >= 0``.
    """
    sol = solution or find_lambda_star(model.strip)
    gap = mu - sol.psi_at_star
    if not gap > 0:
        raise HypothesisError(f"mu - Psi(lambda*) must be positive, got {gap}")
    b = model.b
    return AsymptoteReport(
        kind="tail_expectation",
        constant=b * math.exp(-sol.lambda_star * b) / (gap * math.sqrt(2.0 * math.pi * sol.d_squared)),
        power=-1.5,
        rate=sol.psi_at_star - mu,
        auxiliary={
            "mu": mu,
            "lambda_star": sol.lambda_star,
            "psi_at_star": sol.psi_at_star,
            "d_squared": sol.d_squared,
        },
    )


def tail_expectation(model: FptModel, mu: float, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``E[e^{-mu tau_b}; t <= tau_b < inf]`` by quadrature of the density."""
    if not mu > 0:
        raise DomainError("mu must be positive for a finite integration range")
    # integrate until the weight e^{-mu s} p_b(s) is negligible
    hi = t + 40.0 / mu
    value, _ = integrate_density(model, float(t), hi, spec, weight=lambda s: np.exp(-mu * np.asarray(s)))
    return float(value)


__all__ = [
    "AsymptoteReport",
    "FptModel",
    "HypothesesUnverifiedWarning",
    "asymptote",
    "asymptote_eval",
    "fpt_cdf",
    "fpt_cdf_curve",
    "fpt_density",
    "fpt_density_curve",
    "integrate_density",
    "scaling_g",
    "stable_constant",
    "stable_limit_integral",
    "stable_scale",
    "tail_expectation",
    "tail_expectation_asymptote",
]
