"""Spectrally negative Lévy triplets and their jump-measure catalog.

A jump measure ``nu`` lives on the negative half-line.  Every family below is
described through its tail ``nu_bar(x) = nu((-inf, -x])`` for ``x > 0`` together
with closed-form moment integrals, which keeps the cumulant, the Gaussian
variance ``c^2`` and the tilted measures analytic wherever possible.

Magnitudes ``u = |z|`` are used internally; methods that take ``x`` always
refer to a positive magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar, Literal, Optional

import mpmath
import numpy as np
from scipy import special

from .errors import AdmissibilityError, DomainError, UnsupportedConfigurationError
from .quadrature import integrate

PROBE_GRID = tuple(10.0 ** -k for k in range(1, 7))


def _positive(x, what: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{what} must be positive, got {x!r}")
    return arr


def _out(arr: np.ndarray):
    return float(arr) if arr.ndim == 0 else arr


def _upper_gamma(s: float, y) -> np.ndarray:
    """Upper incomplete gamma Gamma(s, y) for any real s (including s < 0)."""
    f = np.vectorize(lambda v: float(mpmath.gammainc(s, v)), otypes=[float])
    return f(y)


class JumpMeasure:
    """Common interface of the jump-measure families."""

    family: ClassVar[str]

    # -- tail and moments ---------------------------------------------------
    def tail_mass(self, x):
        """Return ``nu((-inf, -x])`` for ``x > 0``."""
        return _out(self._tail(_positive(x)))

    def truncated_second_moment(self, x):
        """Return ``int_{(-x, 0)} z^2 nu(dz)`` for ``x > 0``."""
        return _out(self._trunc2(_positive(x)))

    def tail_first_moment(self, x):
        """Return ``int_{(-inf, -x]} |z| nu(dz)`` for ``x > 0``."""
        return _out(self._tail1(_positive(x)))

    def second_moment(self) -> float:
        """Total ``int z^2 nu(dz)``; ``inf`` for heavy tails."""
        raise NotImplementedError

    def density(self, u):
        """Density of ``nu`` at ``z = -u`` (``u > 0``)."""
        raise NotImplementedError

    # -- classification -----------------------------------------------------
    @property
    def lambda_minus(self) -> float:
        """Left edge of the real domain of the cumulant (0 for power tails)."""
        raise NotImplementedError

    @property
    def tail_index(self) -> Optional[float]:
        """Index alpha in (1, 2) when ``nu_bar`` is regularly varying with index -alpha."""
        return None

    @property
    def activity_index(self) -> float:
        """Power s with ``int_{(-x,0)} z^2 nu(dz) ~ x^{2-s}`` as x -> 0 (0 for finite activity)."""
        raise NotImplementedError

    @property
    def finite_activity(self) -> bool:
        return self.activity_index == 0.0

    # -- cumulant pieces ----------------------------------------------------
    def cumulant(self, xi) -> np.ndarray:
        """Jump part ``int (e^{xi z} - 1 - xi z) nu(dz)``; caller checks the strip."""
        raise NotImplementedError

    def cumulant_derivatives(self, lam) -> tuple[np.ndarray, np.ndarray]:
        """First and second real derivatives of :meth:`cumulant`."""
        raise NotImplementedError

    def tilt(self, lam: float) -> "JumpMeasure":
        """Measure ``e^{lam z} nu(dz)`` as a catalog family."""
        raise UnsupportedConfigurationError(f"{self.family} measures cannot be tilted")

    def tail_inverse(self, y) -> np.ndarray:
        """Solve ``nu_bar(x) = y`` for x."""
        raise NotImplementedError

    def sample_magnitudes(self, rng: np.random.Generator, n: int, eps: float) -> np.ndarray:
        """Draw ``n`` jump magnitudes from ``nu`` restricted to ``|z| >= eps``, normalised."""
        top = float(self.tail_mass(eps)) if eps > 0 else self._total_mass()
        y = top * (1.0 - rng.random(n))
        return self.tail_inverse(y)

    def _total_mass(self) -> float:
        raise UnsupportedConfigurationError(f"{self.family} has infinite activity")

    def to_dict(self) -> dict:
        raise NotImplementedError

    # -- internals -----------------------------------------------------------
    def _tail(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _trunc2(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _tail1(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class NoJumps(JumpMeasure):
    family: ClassVar[str] = "none"

    def second_moment(self) -> float:
        return 0.0

    def density(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    @property
    def lambda_minus(self) -> float:
        return -math.inf

    @property
    def activity_index(self) -> float:
        return 0.0

    def cumulant(self, xi):
        return np.zeros_like(np.asarray(xi, dtype=complex))

    def cumulant_derivatives(self, lam):
        z = np.zeros_like(np.asarray(lam, dtype=float))
        return z, z.copy()

    def tilt(self, lam: float) -> "NoJumps":
        return self

    def tail_inverse(self, y):
        raise UnsupportedConfigurationError("no jumps to sample")

    def to_dict(self) -> dict:
        return {"family": self.family}

    def _tail(self, x):
        return np.zeros_like(x)

    _trunc2 = _tail
    _tail1 = _tail


@dataclass(frozen=True)
class StableTail(JumpMeasure):
    """``nu(dz) = C |z|^{-1-alpha} dz`` on ``z < 0``."""

    C: float
    alpha: float
    family: ClassVar[str] = "stable"

    def __post_init__(self):
        if not self.C > 0 or not math.isfinite(self.C):
            raise DomainError(f"C must be positive, got {self.C}")
        if not 1.0 < self.alpha < 2.0:
            raise AdmissibilityError(f"alpha must lie in (1, 2), got {self.alpha}")

    @property
    def _scale(self) -> float:
        return self.C * special.gamma(-self.alpha)

    def second_moment(self) -> float:
        return math.inf

    def density(self, u):
        u = np.asarray(u, dtype=float)
        return self.C * u ** (-1.0 - self.alpha)

    @property
    def lambda_minus(self) -> float:
        return 0.0

    @property
    def tail_index(self) -> float:
        return self.alpha

    @property
    def activity_index(self) -> float:
        return self.alpha

    def cumulant(self, xi):
        xi = np.asarray(xi, dtype=complex)
        a = self.alpha
        axis = xi.real == 0.0
        lam = xi.imag
        polar = np.abs(lam) ** a * np.exp(1j * np.sign(lam) * math.pi * a / 2.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            power = np.where(axis, polar, np.power(np.where(axis, 1.0, xi), a))
        return self._scale * power

    def cumulant_derivatives(self, lam):
        lam = np.asarray(lam, dtype=float)
        a = self.alpha
        d1 = self._scale * a * lam ** (a - 1.0)
        d2 = self._scale * a * (a - 1.0) * lam ** (a - 2.0)
        return d1, d2

    def tilt(self, lam: float) -> "TemperedStableTail":
        if not lam > 0:
            raise DomainError("a stable measure can only be tilted by lam > 0")
        return TemperedStableTail(self.C, self.alpha, lam)

    def tail_inverse(self, y):
        y = np.asarray(y, dtype=float)
        return (self.C / (self.alpha * y)) ** (1.0 / self.alpha)

    def to_dict(self) -> dict:
        return {"family": self.family, "C": self.C, "alpha": self.alpha}

    def _tail(self, x):
        return self.C * x ** (-self.alpha) / self.alpha

    def _trunc2(self, x):
        return self.C * x ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def _tail1(self, x):
        return self.C * x ** (1.0 - self.alpha) / (self.alpha - 1.0)


@dataclass(frozen=True)
class TemperedStableTail(JumpMeasure):
    """``nu(dz) = C e^{theta z} |z|^{-1-alpha} dz`` on ``z < 0``."""

    C: float
    alpha: float
    theta: float
    family: ClassVar[str] = "tempered_stable"

    def __post_init__(self):
        if not self.C > 0 or not math.isfinite(self.C):
            raise DomainError(f"C must be positive, got {self.C}")
        if not 1.0 < self.alpha < 2.0:
            raise AdmissibilityError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not self.theta > 0 or not math.isfinite(self.theta):
            raise DomainError(f"theta must be positive, got {self.theta}")

    @property
    def _scale(self) -> float:
        return self.C * special.gamma(-self.alpha)

    def second_moment(self) -> float:
        return self.C * special.gamma(2.0 - self.alpha) * self.theta ** (self.alpha - 2.0)

    def density(self, u):
        u = np.asarray(u, dtype=float)
        return self.C * np.exp(-self.theta * u) * u ** (-1.0 - self.alpha)

    @property
    def lambda_minus(self) -> float:
        return -self.theta

    @property
    def activity_index(self) -> float:
        return self.alpha

    def cumulant(self, xi):
        xi = np.asarray(xi, dtype=complex)
        a, th = self.alpha, self.theta
        q = xi / th
        # (1 + q)^a - 1 - a q; complex log1p/expm1 lose accuracy near 0, so use the series there
        small = np.abs(q) < 1e-3
        with np.errstate(invalid="ignore", divide="ignore"):
            excess = np.expm1(a * np.log1p(q)) - a * q
        series = np.zeros_like(q)
        coef = a * (a - 1.0) / 2.0
        qk = q * q
        for k in range(2, 8):
            series = series + coef * qk
            coef *= (a - k) / (k + 1)
            qk = qk * q
        return self._scale * th**a * np.where(small, series, excess)

    def cumulant_derivatives(self, lam):
        lam = np.asarray(lam, dtype=float)
        a, th = self.alpha, self.theta
        d1 = self._scale * a * th ** (a - 1.0) * np.expm1((a - 1.0) * np.log1p(lam / th))
        d2 = self._scale * a * (a - 1.0) * (th + lam) ** (a - 2.0)
        return d1, d2

    def tilt(self, lam: float) -> "TemperedStableTail":
        if not self.theta + lam > 0:
            raise DomainError(f"tilt {lam} leaves the strip (theta={self.theta})")
        return TemperedStableTail(self.C, self.alpha, self.theta + lam)

    def tail_inverse(self, y):
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        for i, v in np.ndenumerate(y):
            # tail is log-convex-ish; bracket in log x
            lo, hi = -40.0, 5.0
            while float(self._tail(np.array(math.exp(hi)))) > v:
                hi += 5.0
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if float(self._tail(np.array(math.exp(mid)))) > v:
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-13:
                    break
            out[i] = math.exp(0.5 * (lo + hi))
        return out

    def sample_magnitudes(self, rng, n, eps):
        # Pareto proposal above eps, accept with prob exp(-theta (u - eps)).
        if not eps > 0:
            raise DomainError("tempered stable sampling needs eps > 0")
        out = np.empty(0)
        while out.size < n:
            k = max(2 * (n - out.size), 64)
            u = eps * (1.0 - rng.random(k)) ** (-1.0 / self.alpha)
            keep = rng.random(k) < np.exp(-self.theta * (u - eps))
            out = np.concatenate([out, u[keep]])
        return out[:n]

    def to_dict(self) -> dict:
        return {"family": self.family, "C": self.C, "alpha": self.alpha, "theta": self.theta}

    def _tail(self, x):
        a, th = self.alpha, self.theta
        return self.C * th**a * _upper_gamma(-a, th * x)

    def _trunc2(self, x):
        a, th = self.alpha, self.theta
        return self.C * th ** (a - 2.0) * special.gamma(2.0 - a) * special.gammainc(2.0 - a, th * x)

    def _tail1(self, x):
        a, th = self.alpha, self.theta
        return self.C * th ** (a - 1.0) * _upper_gamma(1.0 - a, th * x)


@dataclass(frozen=True)
class ExponentialJumps(JumpMeasure):
    """``nu(dz) = a eta e^{eta z} dz`` on ``z < 0`` (compound Poisson, rate a)."""

    a: float
    eta: float
    family: ClassVar[str] = "exponential"

    def __post_init__(self):
        if not self.a > 0 or not math.isfinite(self.a):
            raise DomainError(f"a must be positive, got {self.a}")
        if not self.eta > 0 or not math.isfinite(self.eta):
            raise DomainError(f"eta must be positive, got {self.eta}")

    def second_moment(self) -> float:
        return 2.0 * self.a / self.eta**2

    def density(self, u):
        u = np.asarray(u, dtype=float)
        return self.a * self.eta * np.exp(-self.eta * u)

    @property
    def lambda_minus(self) -> float:
        return -self.eta

    @property
    def activity_index(self) -> float:
        return 0.0

    def cumulant(self, xi):
        xi = np.asarray(xi, dtype=complex)
        a, eta = self.a, self.eta
        # a (eta/(eta+xi) - 1 + xi/eta) over a common denominator
        return a * xi * xi / (eta * (eta + xi))

    def cumulant_derivatives(self, lam):
        lam = np.asarray(lam, dtype=float)
        a, eta = self.a, self.eta
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            d1 = a * lam * (2.0 * eta + lam) / (eta * (eta + lam) ** 2)
            d2 = 2.0 * a * eta / (eta + lam) ** 3
        # at the strip edge lam = -eta the slope diverges to -inf
        return np.where(eta + lam == 0, -np.inf, d1), d2

    def tilt(self, lam: float) -> "ExponentialJumps":
        eta = self.eta + lam
        if not eta > 0:
            raise DomainError(f"tilt {lam} leaves the strip (eta={self.eta})")
        return ExponentialJumps(self.a * self.eta / eta, eta)

    def tail_inverse(self, y):
        y = np.asarray(y, dtype=float)
        return np.log(self.a / y) / self.eta

    def _total_mass(self) -> float:
        return self.a

    def to_dict(self) -> dict:
        return {"family": self.family, "a": self.a, "eta": self.eta}

    def _tail(self, x):
        return self.a * np.exp(-self.eta * x)

    def _trunc2(self, x):
        return 2.0 * self.a / self.eta**2 * special.gammainc(3.0, self.eta * x)

    def _tail1(self, x):
        return self.a * np.exp(-self.eta * x) * (x + 1.0 / self.eta)


@dataclass(frozen=True)
class TabulatedTail(JumpMeasure):
    """Tail given at knots, interpolated log-linearly in (log x, log nu_bar).

    Below the first knot the tail is extended as ``x^{-inner_index}`` and beyond
    the last knot as ``x^{-outer_index}``; by default both indices are read off
    the adjacent segment.  Each segment is an exact power law, so all moment
    integrals have closed forms.
    """

    knots: tuple
    tail_values: tuple
    inner_index: Optional[float] = None
    outer_index: Optional[float] = None
    interpolation: str = "loglinear"
    family: ClassVar[str] = "tabulated"
    _pieces: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        x = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.tail_values, dtype=float)
        if self.interpolation != "loglinear":
            raise DomainError(f"unsupported interpolation {self.interpolation!r}")
        if x.ndim != 1 or x.size < 2 or x.shape != v.shape:
            raise DomainError("need at least two knots with matching tail values")
        order = np.argsort(x)
        x, v = x[order], v[order]
        if np.any(x <= 0) or np.any(np.diff(x) <= 0):
            raise DomainError("knots must be positive and distinct (tail atoms are not allowed)")
        if np.any(v <= 0) or np.any(np.diff(v) > 0):
            raise DomainError("tail values must be positive and nonincreasing in x")
        slopes = np.log(v[:-1] / v[1:]) / np.log(x[1:] / x[:-1])
        inner = float(slopes[0]) if self.inner_index is None else float(self.inner_index)
        outer = float(slopes[-1]) if self.outer_index is None else float(self.outer_index)
        if not 0.0 <= inner < 2.0:
            raise AdmissibilityError(f"inner index {inner} must lie in [0, 2) for a finite truncated second moment")
        if not outer > 1.0:
            raise AdmissibilityError(f"outer index {outer} must exceed 1 for a finite mean")
        # (lo, hi, kappa, index) with nu_bar(u) = kappa * u^-index on [lo, hi]
        pieces = [(0.0, x[0], v[0] * x[0] ** inner, inner)]
        for i, s in enumerate(slopes):
            pieces.append((x[i], x[i + 1], v[i] * x[i] ** s, float(s)))
        pieces.append((x[-1], math.inf, v[-1] * x[-1] ** outer, outer))
        object.__setattr__(self, "knots", tuple(float(k) for k in x))
        object.__setattr__(self, "tail_values", tuple(float(k) for k in v))
        object.__setattr__(self, "inner_index", inner)
        object.__setattr__(self, "outer_index", outer)
        object.__setattr__(self, "_pieces", tuple(pieces))

    # -- piecewise power-law helpers -------------------------------------
    def _piece_of(self, u: np.ndarray) -> np.ndarray:
        return np.searchsorted(np.asarray(self.knots), u, side="left")

    def _moment(self, k: int, lo: float, hi: float) -> float:
        """``int_lo^hi u^k nu(du)`` over the magnitude axis."""
        total = 0.0
        for plo, phi, kappa, s in self._pieces:
            a, b = max(lo, plo), min(hi, phi)
            if not b > a or s == 0.0:
                continue
            if k == s:
                total += s * kappa * math.log(b / a)
            else:
                high = 0.0 if b == math.inf else b ** (k - s)
                low = 0.0 if a == 0.0 else a ** (k - s)
                total += s * kappa * (high - low) / (k - s)
        return total

    def second_moment(self) -> float:
        return self._moment(2, 0.0, math.inf) if self.outer_index > 2.0 else math.inf

    def density(self, u):
        u = np.asarray(u, dtype=float)
        idx = self._piece_of(u)
        kappa = np.array([p[2] for p in self._pieces])[idx]
        s = np.array([p[3] for p in self._pieces])[idx]
        return s * kappa * u ** (-s - 1.0)

    @property
    def lambda_minus(self) -> float:
        return 0.0

    @property
    def tail_index(self) -> Optional[float]:
        return self.outer_index if self.outer_index < 2.0 else None

    @property
    def activity_index(self) -> float:
        return self.inner_index

    def tail_inverse(self, y):
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        for i, v in np.ndenumerate(y):
            for lo, hi, kappa, s in self._pieces:
                if s == 0.0:
                    continue
                top = math.inf if lo == 0.0 else kappa * lo ** (-s)
                bottom = 0.0 if hi == math.inf else kappa * hi ** (-s)
                if bottom <= v <= top:
                    out[i] = (kappa / v) ** (1.0 / s)
                    break
            else:
                raise DomainError(f"tail value {v} is not attained")
        return out

    def _total_mass(self) -> float:
        if self.inner_index > 0:
            return super()._total_mass()
        return self.tail_values[0]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "knots": list(self.knots),
            "tail_values": list(self.tail_values),
            "inner_index": self.inner_index,
            "outer_index": self.outer_index,
            "interpolation": self.interpolation,
        }

    def _tail(self, x):
        idx = self._piece_of(x)
        kappa = np.array([p[2] for p in self._pieces])[idx]
        s = np.array([p[3] for p in self._pieces])[idx]
        return kappa * x ** (-s)

    def _trunc2(self, x):
        return np.vectorize(lambda v: self._moment(2, 0.0, v), otypes=[float])(x)

    def _tail1(self, x):
        return np.vectorize(lambda v: self._moment(1, v, math.inf), otypes=[float])(x)

    # -- numeric Stieltjes integrals for the cumulant ----------------------
    _SERIES: ClassVar[dict] = {
        # kernel(u) = sum_j coef_j(xi) * u^j for |xi| u small
        0: lambda q: {2: q**2 / 2, 3: -(q**3) / 6, 4: q**4 / 24, 5: -(q**5) / 120},
        1: lambda q: {2: q, 3: -(q**2) / 2, 4: q**3 / 6, 5: -(q**4) / 24},
        2: lambda q: {2: 1.0, 3: -q, 4: q**2 / 2, 5: -(q**3) / 6},
    }

    @staticmethod
    def _kernel(kind: int, q: complex, u: np.ndarray) -> np.ndarray:
        if kind == 0:
            return np.expm1(-q * u) + q * u
        if kind == 1:
            return -u * np.expm1(-q * u)
        return u * u * np.exp(-q * u)

    def _stieltjes(self, kind: int, q: complex) -> complex:
        if q == 0:
            return self._moment(2, 0.0, math.inf) if kind == 2 else 0.0
        u_s = 1e-2 / abs(q)
        out = 0j
        for j, coef in self._SERIES[kind](q).items():
            out += coef * self._moment(j, 0.0, u_s)
        last = self._pieces[-1]
        u_tail = max(u_s, last[0])
        if u_tail > u_s:
            breaks = [u_s] + [k for k in self.knots if u_s < k < u_tail] + [u_tail]
            w_breaks = np.log(np.asarray(breaks))
            # resolve oscillation of e^{-i Im(q) u}: one panel per pi of phase
            n_osc = int(abs(q.imag) * (u_tail - u_s) / math.pi)
            if n_osc > 0:
                extra = np.log(np.linspace(u_s, u_tail, n_osc + 2)[1:-1])
                w_breaks = np.unique(np.concatenate([w_breaks, extra]))

            def f(w):
                u = np.exp(w)
                # nu(du) = density * du, du = u dw
                return self._kernel(kind, q, u) * self.density(u) * u

            val, _ = integrate(f, w_breaks, abs_tol=1e-15, rel_tol=1e-12, max_panels=200000)
            out += val
        # closed-form tail on [u_tail, inf) with nu_bar(u) = kappa u^-s
        _, _, kappa, s = last
        with mpmath.workdps(20):
            qm = mpmath.mpc(q.real, q.imag)

            def exp_moment(j):
                return s * kappa * qm ** (s - j) * mpmath.gammainc(j - s, qm * u_tail)

            m1 = s * kappa * u_tail ** (1.0 - s) / (s - 1.0)
            if kind == 0:
                tail = exp_moment(0) - kappa * u_tail ** (-s) + qm * m1
            elif kind == 1:
                tail = m1 - exp_moment(1)
            else:
                tail = exp_moment(2)
            out += complex(tail)
        return out

    def cumulant(self, xi):
        xi = np.asarray(xi, dtype=complex)
        flat = np.array([self._stieltjes(0, complex(v)) for v in xi.ravel()], dtype=complex)
        return flat.reshape(xi.shape)

    def cumulant_derivatives(self, lam):
        lam = np.asarray(lam, dtype=float)
        d1 = np.array([self._stieltjes(1, complex(v)).real for v in lam.ravel()]).reshape(lam.shape)
        d2 = np.array([self._stieltjes(2, complex(v)).real for v in lam.ravel()]).reshape(lam.shape)
        return d1, d2


@dataclass(frozen=True)
class LevyTriplet:
    """Gaussian volatility, drift (compensated convention) and jump measure.

    The cumulant is ``sigma^2 xi^2 / 2 + m xi + int (e^{xi z} - 1 - xi z) nu(dz)``,
    so ``m`` is the mean of ``X_1``.
    """

    sigma: float
    m: float
    jumps: JumpMeasure = field(default_factory=NoJumps)

    def __post_init__(self):
        if not self.sigma >= 0 or not math.isfinite(self.sigma):
            raise DomainError(f"sigma must be nonnegative, got {self.sigma}")
        if not math.isfinite(self.m):
            raise DomainError(f"drift must be finite, got {self.m}")
        if not isinstance(self.jumps, JumpMeasure):
            raise DomainError("jumps must be a JumpMeasure")
        if self.sigma == 0 and isinstance(self.jumps, NoJumps):
            raise DomainError("sigma = 0 without jumps is a deterministic drift")

    def replace(self, **changes) -> "LevyTriplet":
        from dataclasses import replace

        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "m": self.m, "jumps": self.jumps.to_dict()}


@dataclass(frozen=True)
class ModelDiagnostics:
    regime: Literal["stable", "gaussian"]
    alpha: Optional[float]
    c_squared: Optional[float]
    lambda_minus: float
    probe_index: float
    condition2_probe: tuple
    probe_bounded_below: bool
    density_conditions_ok: bool
    drift_positive: bool
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "alpha": self.alpha,
            "c_squared": self.c_squared,
            "lambda_minus": self.lambda_minus if math.isfinite(self.lambda_minus) else "-inf",
            "probe_index": self.probe_index,
            "condition2_probe": [{"x": x, "value": v} for x, v in self.condition2_probe],
            "probe_bounded_below": self.probe_bounded_below,
            "density_conditions_ok": self.density_conditions_ok,
            "drift_positive": self.drift_positive,
            "notes": list(self.notes),
        }


def tail_mass(j: JumpMeasure, x):
    return j.tail_mass(x)


def truncated_second_moment(j: JumpMeasure, x):
    return j.truncated_second_moment(x)


def check_admissible(j: JumpMeasure) -> None:
    """Raise :class:`AdmissibilityError` unless ``int min(z^2, |z|) nu(dz)`` is finite."""
    small = float(j.truncated_second_moment(1.0))
    large = float(j.tail_first_moment(1.0))
    if not (math.isfinite(small) and math.isfinite(large)):
        raise AdmissibilityError(
            f"{j.family} measure is not admissible: small-jump second moment {small}, large-jump mean {large}"
        )


def diagnose(t: LevyTriplet) -> ModelDiagnostics:
    """Classify the regime of ``t`` and evaluate the density conditions.

    The classification is analytic per family; the probe
    ``x^{s-2} int_{(-x,0)} z^2 nu(dz)`` on ``x = 1e-1 .. 1e-6`` is reported
    alongside for transparency.
    """
    j = t.jumps
    check_admissible(j)
    notes = []
    alpha = j.tail_index
    if alpha is not None:
        regime, c2 = "stable", None
    else:
        second = j.second_moment()
        if not math.isfinite(second):
            raise UnsupportedConfigurationError(
                "tail is neither regularly varying with index in (1, 2) nor square integrable"
            )
        regime, c2 = "gaussian", t.sigma**2 + second

    s = j.activity_index
    xs = np.asarray(PROBE_GRID)
    probe_vals = xs ** (s - 2.0) * np.asarray(j.truncated_second_moment(xs), dtype=float)
    bounded = bool(probe_vals[0] > 0 and probe_vals.min() > 1e-6 * probe_vals[0])

    if t.sigma > 0:
        ok = True
        notes.append("sigma > 0: Gaussian component guarantees a density")
    elif s > 0 and (alpha is None or s >= alpha):
        ok = True
        notes.append(f"small-jump probe with index {s:g} is bounded below")
    else:
        ok = False
        if j.finite_activity:
            notes.append(
                "sigma = 0 with finite jump activity: x^(s-2) int z^2 nu(dz) -> 0 for every s in (0, 2); "
                "no density is guaranteed"
            )
        else:
            notes.append(f"small-jump index {s:g} is below the tail index {alpha:g}")
    if t.m > 0:
        notes.append("m > 0: exponential decay regime (Esscher tilt) applies if lambda_- < 0")
    elif t.m < 0:
        notes.append("m < 0: the level may never be reached; no tail asymptote is available")
    return ModelDiagnostics(
        regime=regime,
        alpha=alpha,
        c_squared=c2,
        lambda_minus=j.lambda_minus,
        probe_index=s,
        condition2_probe=tuple(zip(xs.tolist(), probe_vals.tolist())),
        probe_bounded_below=bounded,
        density_conditions_ok=ok,
        drift_positive=t.m > 0,
        notes=tuple(notes),
    )


FAMILIES = {
    cls.family: cls for cls in (NoJumps, StableTail, TemperedStableTail, ExponentialJumps, TabulatedTail)
}
