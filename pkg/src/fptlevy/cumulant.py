"""Cumulant exponent Psi on its strip, its real derivatives, and its inverse.

``E[e^{xi X_t}] = e^{t Psi(xi)}`` wherever the left side is finite, i.e. for
``Re xi > lambda_-``.  The imaginary axis is always admitted, even when
``lambda_- = 0`` (power tails), because that is where the characteristic
function lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConvergenceError, DomainError, UnsupportedConfigurationError
from .levy_model import LevyTriplet

ROOT_TOL = 1e-12
MAX_ITER = 200
BRACKET_LIMIT = 1e150  # keeps lam**2 finite while bracketing


@dataclass(frozen=True)
class CumulantStrip:
    triplet: LevyTriplet

    @property
    def lambda_minus(self) -> float:
        return self.triplet.jumps.lambda_minus

    def contains(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=complex)
        return (xi.real > self.lambda_minus) | (xi.real == 0.0)


StripLike = Union[CumulantStrip, LevyTriplet]


def as_strip(s: StripLike) -> CumulantStrip:
    return s if isinstance(s, CumulantStrip) else CumulantStrip(s)


def psi(strip: StripLike, xi):
    """Evaluate ``Psi(xi)`` for complex ``xi`` (scalar or array)."""
    strip = as_strip(strip)
    xi_arr = np.asarray(xi, dtype=complex)
    if not np.all(strip.contains(xi_arr)):
        raise DomainError(f"xi outside the strip Re xi > {strip.lambda_minus}")
    t = strip.triplet
    out = 0.5 * t.sigma**2 * xi_arr**2 + t.m * xi_arr + t.jumps.cumulant(xi_arr)
    return complex(out) if out.ndim == 0 else out


def psi_real(strip: StripLike, lam):
    """``Psi`` on the real strip, as floats."""
    out = psi(strip, np.asarray(lam, dtype=float))
    return out.real if isinstance(out, np.ndarray) else out.real


def psi_derivatives(strip: StripLike, lam):
    """Return ``(Psi, Psi', Psi'')`` at real ``lam`` inside the strip."""
    strip = as_strip(strip)
    lam_arr = np.asarray(lam, dtype=float)
    if not np.all(lam_arr > strip.lambda_minus):
        raise DomainError(f"lambda outside the real strip ({strip.lambda_minus}, inf)")
    t = strip.triplet
    p = (0.5 * t.sigma**2 * lam_arr**2 + t.m * lam_arr + t.jumps.cumulant(lam_arr)).real
    j1, j2 = t.jumps.cumulant_derivatives(lam_arr)
    d1 = t.m + t.sigma**2 * lam_arr + j1
    d2 = t.sigma**2 + j2
    if lam_arr.ndim == 0:
        return float(p), float(d1), float(d2)
    return p, np.asarray(d1, dtype=float), np.asarray(d2, dtype=float)


def solve_increasing(f_df, target: float, lo: float, hi: float, *, tol: float = ROOT_TOL) -> float:
    """Root of an increasing function on ``(lo, hi)`` by bisection plus safeguarded Newton.

    ``f_df(x)`` returns ``(f(x), f'(x))``.  ``lo``/``hi`` may be infinite; the
    bracket is found by doubling away from the finite end (or from 0).
    """
    # bracket
    if math.isinf(hi):
        anchor = max(lo, 0.0) if math.isfinite(lo) else 0.0
        step = 1.0
        while not (fb := f_df(anchor + step)[0]) >= target:
            step *= 2.0
            if step > BRACKET_LIMIT or not math.isfinite(fb):
                raise ConvergenceError("could not bracket the root from above")
        hi = anchor + step
    if math.isinf(lo):
        anchor = min(hi, 0.0)
        step = 1.0
        while not (fa := f_df(anchor - step)[0]) <= target:
            step *= 2.0
            if step > BRACKET_LIMIT or not math.isfinite(fa):
                raise ConvergenceError("could not bracket the root from below")
        lo = anchor - step
    a, b = lo, hi
    x = 0.5 * (a + b)
    for _ in range(MAX_ITER):
        fx, dfx = f_df(x)
        r = fx - target
        if abs(r) < tol:
            # one Newton polish step recovers the last digits
            polished = x - r / dfx if dfx > 0 and math.isfinite(dfx) else x
            return polished if lo < polished <= hi else x
        if r > 0:
            b = x
        else:
            a = x
        newton = x - r / dfx if dfx > 0 and math.isfinite(dfx) else math.nan
        x = newton if a < newton <= b else 0.5 * (a + b)
        if b - a <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            return x
    raise ConvergenceError(f"root finder did not reach |f| < {tol} in {MAX_ITER} iterations", partial=x)


def psi_inverse(strip: StripLike, r: float) -> float:
    """Unique ``lam >= 0`` with ``Psi(lam) = r`` (requires ``m >= 0``)."""
    strip = as_strip(strip)
    if strip.triplet.m < 0:
        raise UnsupportedConfigurationError("psi_inverse is only defined here for m >= 0")
    if r < 0:
        raise DomainError(f"r must be nonnegative, got {r}")
    if r == 0:
        return 0.0

    def f_df(lam):
        p, d1, _ = psi_derivatives(strip, lam)
        return p, d1

    # relative target for small r, where lam ~ sqrt(r) is ill-conditioned in absolute terms
    return solve_increasing(f_df, r, 0.0, math.inf, tol=ROOT_TOL * min(1.0, r))


def saddle_point(strip: StripLike, slope: float) -> float | None:
    """Solve ``Psi'(c) = slope`` on the real strip.

    A finite ``lambda_- < 0`` is approached no closer than a quarter of its
    distance to 0; if the root lies beyond that, the limit point is returned.
    For power tails (``lambda_- = 0``) ``None`` is returned when no root
    exists with ``c > 0``.
    """
    strip = as_strip(strip)
    lm = strip.lambda_minus
    tol = 1e-10 * max(1.0, abs(slope))

    def f_df(c):
        _, d1, d2 = psi_derivatives(strip, c)
        return d1, d2

    if lm == 0.0:
        if slope <= strip.triplet.m:
            return None
        lo = 0.0
    elif math.isfinite(lm):
        lo = 0.75 * lm
        if f_df(lo)[0] >= slope:
            return lo
    else:
        lo = -math.inf
    return solve_increasing(f_df, slope, lo, math.inf, tol=tol)
