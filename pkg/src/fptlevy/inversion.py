"""Marginal density of ``X_t`` by Fourier inversion of the characteristic function.

The full-line inversion integral is folded onto the half line using
conjugate symmetry, and the contour is moved from the imaginary axis to
``Re xi = c``, where ``c`` solves ``Psi'(c) = b / t``::

    p(t, b) = (P / pi) * int_0^inf Re exp(-i b u + t (Psi(c + iu) - Psi(c))) du,
    P = exp(-b c + t Psi(c)) <= 1.

The shift is exact (the integrand is analytic on the strip).  It removes the
linear phase at the origin and scales the integrand to peak at 1, so deep
tail values keep their relative accuracy instead of drowning in round-off.
With ``contour="axis"`` (or when no saddle exists) ``c = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from ._parallel import parallel_map
from .cumulant import StripLike, as_strip, psi, saddle_point
from .errors import ConfigurationError, NoDensityError, NonIntegrabilityError
from .levy_model import LevyTriplet, diagnose
from .quadrature import integrate

MAX_CUTOFF = 1e12
UNDERFLOW_LOG = -720.0
_PHASE_GRID = 257


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy knobs for one density evaluation."""

    abs_tol: float = 1e-13
    rel_tol: float = 1e-10
    max_panels: int = 4000
    truncation_decay: float = 1e-16
    contour: Literal["saddle", "axis"] = "saddle"

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ConfigurationError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol >= 0:
            raise ConfigurationError(f"rel_tol must be nonnegative, got {self.rel_tol}")
        if not 0 < self.truncation_decay < self.abs_tol:
            raise ConfigurationError("truncation_decay must lie in (0, abs_tol)")
        if int(self.max_panels) < 1:
            raise ConfigurationError("max_panels must be a positive integer")
        if self.contour not in ("saddle", "axis"):
            raise ConfigurationError(f"contour must be 'saddle' or 'axis', got {self.contour!r}")

    def with_tolerance(self, tol: float) -> "QuadratureSpec":
        """Copy with ``abs_tol = tol`` (truncation tightened if needed)."""
        decay = min(self.truncation_decay, tol * 1e-3)
        return QuadratureSpec(tol, self.rel_tol, self.max_panels, decay, self.contour)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class DensityCurve:
    times: np.ndarray
    values: np.ndarray
    error_estimates: np.ndarray
    b: float
    clamped: np.ndarray = field(default=None)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        e = np.asarray(self.error_estimates, dtype=float)
        if not (t.shape == v.shape == e.shape):
            raise ValueError("times, values and error_estimates must have equal length")
        if t.size and (np.any(t <= 0) or np.any(np.diff(t) <= 0)):
            raise ValueError("times must be positive and increasing")
        clamped = v < 0
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", np.where(clamped, 0.0, v))
        object.__setattr__(self, "error_estimates", e)
        object.__setattr__(self, "clamped", clamped)

    @property
    def any_clamped(self) -> bool:
        return bool(self.clamped.any())


@lru_cache(maxsize=256)
def _has_density(triplet: LevyTriplet) -> bool:
    return diagnose(triplet).density_conditions_ok


def _require_density(strip) -> None:
    if not _has_density(strip.triplet):
        raise NoDensityError(
            "density conditions fail for this model (e.g. compound Poisson without a Gaussian part)"
        )


def _contour_shift(strip, t: float, b: float, spec: QuadratureSpec) -> float:
    if spec.contour == "axis":
        return 0.0
    c = saddle_point(strip, b / t)
    return 0.0 if c is None else c


def _log_envelope(strip, t: float, c: float, base: float, u):
    """``t (Re Psi(c + iu) - Psi(c))``: log modulus of the shifted integrand."""
    return t * (np.real(psi(strip, c + 1j * np.asarray(u, dtype=float))) - base)


def choose_truncation(strip: StripLike, t: float, spec: QuadratureSpec = DEFAULT_SPEC, shift: float = 0.0) -> float:
    """Cutoff ``L`` with ``|integrand(L)| <= truncation_decay`` on the line ``Re xi = shift``.

    Doubles (or halves) from ``L = 1`` to bracket the crossing, then bisects
    in ``log L``.
    """
    strip = as_strip(strip)
    if not t > 0:
        raise ConfigurationError(f"t must be positive, got {t}")
    _require_density(strip)
    target = math.log(spec.truncation_decay)
    base = float(np.real(psi(strip, complex(shift)))) if shift else 0.0

    def g(u):
        return float(_log_envelope(strip, t, shift, base, u))

    lo = hi = 1.0
    if g(hi) > target:
        while g(hi) > target:
            lo, hi = hi, 2.0 * hi
            if hi > MAX_CUTOFF:
                raise NonIntegrabilityError(
                    f"characteristic function has not decayed to {spec.truncation_decay:g} by u = {MAX_CUTOFF:g}"
                )
    else:
        while g(lo) <= target and lo > 1e-12:
            hi, lo = lo, 0.5 * lo
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if g(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1 + 1e-6:
            break
    return hi


def _phase_breaks(phase, cutoff: float) -> np.ndarray:
    """Break points so the phase moves by at most pi/2 per panel."""
    u = np.linspace(0.0, cutoff, _PHASE_GRID)
    ph = phase(u)
    travelled = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(ph)))])
    n = int(travelled[-1] / (0.5 * math.pi))
    if n == 0:
        inner = np.array([])
    else:
        levels = 0.5 * math.pi * np.arange(1, n + 1)
        inner = np.interp(levels, travelled, u)
    # a few initial panels so the rule sees the envelope shape
    base = np.linspace(0.0, cutoff, 5)
    return np.unique(np.concatenate([base, inner]))


def transition_density(
    strip: StripLike,
    t: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> tuple[float, float]:
    """Return ``(p(t, b), error_estimate)``.

    The error estimate combines the quadrature estimate with a bound on the
    truncated tail of the integral.
    """
    strip = as_strip(strip)
    if not t > 0:
        raise ConfigurationError(f"t must be positive, got {t}")
    b = float(b)
    c = _contour_shift(strip, t, b, spec)
    base = float(np.real(psi(strip, complex(c)))) if c else 0.0
    log_scale = -b * c + t * base
    if log_scale < UNDERFLOW_LOG:
        # |p| <= P * cutoff / pi is far below the smallest double
        _require_density(strip)
        return 0.0, 0.0
    cutoff = choose_truncation(strip, t, spec, shift=c)
    scale = math.exp(log_scale) / math.pi

    def integrand(u):
        z = -1j * b * u + t * (psi(strip, c + 1j * u) - base)
        return np.exp(z).real

    def phase(u):
        return -b * u + t * np.imag(psi(strip, c + 1j * u))

    breaks = _phase_breaks(phase, cutoff)
    # tolerances refer to the scaled integral, whose peak integrand value is 1
    value, err = integrate(
        integrand,
        breaks,
        abs_tol=spec.abs_tol / scale if scale > 0 else math.inf,
        rel_tol=spec.rel_tol,
        max_panels=spec.max_panels,
    )
    tail = spec.truncation_decay * cutoff / math.log(1.0 / spec.truncation_decay)
    return scale * float(value), scale * (float(err) + tail)


def density_curve(
    strip: StripLike,
    times,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> DensityCurve:
    """``p(t, b)`` on a time grid; points are evaluated in parallel."""
    strip = as_strip(strip)
    times = np.asarray(times, dtype=float)
    rows = parallel_map(lambda s: transition_density(strip, s, b, spec), times)
    values = np.array([r[0] for r in rows])
    errors = np.array([r[1] for r in rows])
    return DensityCurve(times, values, errors, float(b))
