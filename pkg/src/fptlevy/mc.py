"""Monte Carlo passage times, used as an independent check of the inversion pipeline.

Each step applies a Gaussian increment (Brownian part plus the variance of
jumps smaller than ``eps``), then the compound-Poisson jumps of size at least
``eps``.  Jumps only go down, so an upward crossing can only come from the
continuous part.  Between grid points a Brownian-bridge test catches
excursions above the level that the endpoints miss.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, TextIO

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._parallel import parallel_map
from .errors import ConfigurationError, InsufficientSamplesError
from .fpt import FptModel, fpt_cdf_curve
from .inversion import DEFAULT_SPEC, QuadratureSpec
from .levy_model import LevyTriplet

CHUNK = 8192
MIN_CROSSINGS = 100
# finite-activity families put every jump into the compound-Poisson part
_ALL_JUMPS = 1e-300


@dataclass(frozen=True)
class SimConfig:
    n_paths: int
    dt: float
    horizon: float
    eps: float = 1e-3
    seed: int = 0
    bridge: bool = True

    def __post_init__(self):
        if int(self.n_paths) < 1:
            raise ConfigurationError("n_paths must be a positive integer")
        if not self.dt > 0 or not self.horizon > 0:
            raise ConfigurationError("dt and horizon must be positive")
        if self.dt > self.horizon:
            raise ConfigurationError(f"dt = {self.dt} exceeds the horizon {self.horizon}")
        if not self.eps > 0:
            raise ConfigurationError("eps must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FptSampleSet:
    """Crossing times of the paths that crossed before the horizon, in path order."""

    crossing_times: np.ndarray
    censored_count: int
    n_paths: int
    b: float
    config: SimConfig

    def __post_init__(self):
        if self.crossing_times.size + self.censored_count != self.n_paths:
            raise ValueError("crossed plus censored paths must equal n_paths")

    @property
    def crossing_fraction(self) -> float:
        return self.crossing_times.size / self.n_paths

    def to_csv(self, fh: TextIO, header: Optional[dict] = None) -> None:
        meta = {"b": self.b, "n_paths": self.n_paths, "censored": self.censored_count, **self.config.to_dict()}
        if header:
            fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        fh.write("crossing_time\n")
        for v in self.crossing_times:
            fh.write(f"{float(v)!r}\n")


@dataclass(frozen=True)
class _Plan:
    drift: float
    vol: float
    rate: float
    eps: float


def _plan(triplet: LevyTriplet, eps: float) -> _Plan:
    j = triplet.jumps
    if j.family == "none":
        return _Plan(triplet.m, triplet.sigma, 0.0, eps)
    if j.finite_activity:
        eps = _ALL_JUMPS
    var = triplet.sigma**2 + float(j.truncated_second_moment(eps))
    # compensator of the big jumps moves into the drift
    drift = triplet.m + float(j.tail_first_moment(eps))
    return _Plan(drift, math.sqrt(var), float(j.tail_mass(eps)), eps)


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(chunk,))))


def _jump_totals(triplet, plan, rng, n: int, dt: float) -> np.ndarray:
    counts = rng.poisson(plan.rate * dt, n)
    total = int(counts.sum())
    if total == 0:
        return np.zeros(n)
    mags = triplet.jumps.sample_magnitudes(rng, total, plan.eps)
    owner = np.repeat(np.arange(n), counts)
    return -np.bincount(owner, weights=mags, minlength=n)


def _simulate_chunk(triplet, plan, b, cfg, chunk, n) -> np.ndarray:
    rng = _rng(cfg.seed, chunk)
    n_steps = int(math.ceil(cfg.horizon / cfg.dt - 1e-9))
    dt = cfg.horizon / n_steps
    sd = plan.vol * math.sqrt(dt)
    tau = np.full(n, np.inf)
    idx = np.arange(n)
    x = np.zeros(n)
    for step in range(n_steps):
        if idx.size == 0:
            break
        t0 = step * dt
        x1 = x + plan.drift * dt + sd * rng.standard_normal(idx.size)
        hit = x1 >= b
        frac = np.empty(idx.size)
        # linear interpolation of the endpoint crossing
        with np.errstate(divide="ignore", invalid="ignore"):
            frac[hit] = np.clip((b - x[hit]) / (x1[hit] - x[hit]), 0.0, 1.0)
        if cfg.bridge and plan.vol > 0:
            below = ~hit
            p = np.exp(-2.0 * (b - x[below]) * (b - x1[below]) / (plan.vol**2 * dt))
            u = rng.random(below.sum())
            bridged = np.zeros(idx.size, dtype=bool)
            bridged[below] = u < p
            # crossing instant inside the step is not resolved; take it uniform
            frac[bridged] = rng.random(int(bridged.sum()))
            hit |= bridged
        tau[idx[hit]] = t0 + frac[hit] * dt
        keep = ~hit
        idx, x = idx[keep], x1[keep]
        if plan.rate > 0:
            x = x + _jump_totals(triplet, plan, rng, idx.size, dt)
    return tau


def simulate_fpt(triplet: LevyTriplet, b: float, config: SimConfig) -> FptSampleSet:
    """Simulate ``config.n_paths`` paths up to the horizon and record passage times over ``b``.

    Paths are generated in fixed-size chunks, each with its own seed stream,
    so the result does not depend on the number of worker threads.
    """
    if not b > 0:
        raise ConfigurationError(f"level b must be positive, got {b}")
    plan = _plan(triplet, config.eps)
    sizes = [min(CHUNK, config.n_paths - k) for k in range(0, config.n_paths, CHUNK)]
    parts = parallel_map(lambda k: _simulate_chunk(triplet, plan, float(b), config, k, sizes[k]), range(len(sizes)))
    tau = np.concatenate(parts)
    crossed = tau[np.isfinite(tau)]
    return FptSampleSet(crossed, int(tau.size - crossed.size), config.n_paths, float(b), config)


def simulate_increments(triplet: LevyTriplet, n: int, t: float = 1.0, eps: float = 1e-3, seed: int = 0) -> np.ndarray:
    """Draw ``n`` copies of ``X_t`` in a single step of the simulation scheme."""
    plan = _plan(triplet, eps)

    def chunk(k: int) -> np.ndarray:
        size = min(CHUNK, n - k * CHUNK)
        rng = _rng(seed, k)
        x = plan.drift * t + plan.vol * math.sqrt(t) * rng.standard_normal(size)
        if plan.rate > 0:
            x = x + _jump_totals(triplet, plan, rng, size, t)
        return x

    return np.concatenate(parallel_map(chunk, range(-(-n // CHUNK)))) if n else np.zeros(0)


def jump_magnitudes(triplet: LevyTriplet, n: int, eps: float = 1e-3, seed: int = 0) -> np.ndarray:
    """Magnitudes ``|z|`` of the simulated big jumps (jumps are ``-magnitude``)."""
    plan = _plan(triplet, eps)
    if plan.rate == 0:
        return np.zeros(0)
    return triplet.jumps.sample_magnitudes(_rng(seed, 0), n, plan.eps)


def ks_distance(
    samples: FptSampleSet,
    model: FptModel,
    spec: QuadratureSpec = DEFAULT_SPEC,
    grid_size: int = 120,
) -> float:
    """Sup distance between empirical and analytic passage-time CDFs, both conditioned on crossing."""
    n = samples.crossing_times.size
    if n < MIN_CROSSINGS:
        raise InsufficientSamplesError(f"only {n} crossings; at least {MIN_CROSSINGS} are needed")
    h = samples.config.horizon
    grid = np.unique(
        np.concatenate([np.linspace(h / grid_size, h, grid_size), np.geomspace(h * 1e-4, h, grid_size // 3)])
    )
    cdf = fpt_cdf_curve(model, grid, spec)
    if not cdf[-1] > 0:
        raise InsufficientSamplesError("analytic crossing probability before the horizon is zero")
    interp = PchipInterpolator(np.concatenate([[0.0], grid]), np.concatenate([[0.0], cdf / cdf[-1]]))
    x = np.sort(samples.crossing_times)
    f = np.clip(interp(x), 0.0, 1.0)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
