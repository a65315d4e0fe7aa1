"""Discretized Brownian local time and the Kesten-Spitzer process.

Brownian motion is sampled on a grid of step ``dt``; the local time is the
occupation density over spatial bins ``[j h, (j+1) h)``. The process

    Delta_t = int_0^inf L_t(x) dZ+(x) + int_0^inf L_t(-x) dZ-(x)

is then a Gaussian sum over bins with independent N(0, h) weights, bins with
j >= 0 drawing from Z+ and bins with j < 0 from Z-.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng

SELF_INTERSECTION_CONSTANT = 8.0 / (3.0 * math.sqrt(2.0 * math.pi))
EXPECTED_LOCAL_TIME_AT_ZERO = math.sqrt(2.0 / math.pi)


@dataclass
class LimitConfig:
    dt: float = 1e-4
    h: float = 1e-2
    T: float = 1.0
    times: tuple[float, ...] = (1.0,)
    replicates: int = 5000
    seed: int = 0
    threads: int | None = 1

    def __post_init__(self):
        self.times = tuple(float(t) for t in self.times)
        if self.dt <= 0 or self.h <= 0:
            raise ValueError("dt and h must be positive")
        if not self.times or any(t <= 0 or t > self.T + 1e-12 for t in self.times):
            raise ValueError("times must lie in (0, T]")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def step_index(self, t: float) -> int:
        return int(round(t / self.dt))

    def to_dict(self) -> dict:
        return {"dt": self.dt, "h": self.h, "T": self.T, "times": list(self.times),
                "replicates": self.replicates, "seed": self.seed}


@dataclass
class LocalTimeField:
    """Bin-wise local time ``L_t(x_j)`` at each requested time (rows)."""

    edges: np.ndarray      # left edges x_j
    h: float
    times: np.ndarray
    values: np.ndarray     # len(times) x len(edges)

    def mass(self) -> np.ndarray:
        return self.h * self.values.sum(axis=1)

    def squared_integral(self) -> np.ndarray:
        return self.h * np.sum(self.values ** 2, axis=1)

    def at_zero(self) -> np.ndarray:
        # B_0 = 0, so the bin [0, h) is always inside the field
        j = int(round(-self.edges[0] / self.h))
        return self.values[:, j]


@dataclass
class DeltaBatch:
    times: np.ndarray
    values: np.ndarray     # replicates x len(times)
    seed: int
    config: LimitConfig


def brownian_bins(config: LimitConfig, index: int) -> np.ndarray:
    """Spatial bin index of B at grid times 0, dt, ..., (N-1) dt."""
    rng = _rng.stream(config.seed, index, _rng.BROWNIAN, "limit")
    N = config.n_steps
    b = np.empty(N)
    b[0] = 0.0
    np.cumsum(rng.standard_normal(N - 1) * math.sqrt(config.dt), out=b[1:])
    return np.floor(b / config.h).astype(np.int64)


def _field(config: LimitConfig, bins: np.ndarray, times) -> LocalTimeField:
    lo = int(bins.min())
    width = int(bins.max()) - lo + 1
    vals = np.empty((len(times), width))
    for j, t in enumerate(times):
        k = config.step_index(t)
        vals[j] = np.bincount(bins[:k] - lo, minlength=width) * (config.dt / config.h)
    return LocalTimeField(config.h * np.arange(lo, lo + width), config.h, np.asarray(times), vals)


def simulate_bm_local_time(config: LimitConfig, t: float | None = None, index: int = 0) -> LocalTimeField:
    """Local time field of replicate ``index`` at ``t`` (default: every configured time)."""
    times = config.times if t is None else (float(t),)
    if any(s > config.T + 1e-12 for s in times):
        raise ValueError("t exceeds the horizon T")
    return _field(config, brownian_bins(config, index), times)


def quadratic_functional_batch(config: LimitConfig, thetas, times) -> np.ndarray:
    """Per-replicate ``int (sum_k theta_k L_{t_k}(x))^2 dx``."""
    thetas = np.asarray(thetas, dtype=float)

    def one(i):
        f = _field(config, brownian_bins(config, i), times)
        comb = thetas @ f.values
        return config.h * float(np.sum(comb ** 2))

    return np.array(_rng.parallel_map(one, range(config.replicates), config.threads))


def local_time_functionals(config: LimitConfig) -> dict[str, np.ndarray]:
    """Per-replicate ``int L_t^2 dx``, ``L_t(0)`` and total mass at each configured time."""

    def one(i):
        f = simulate_bm_local_time(config, index=i)
        return np.stack([f.squared_integral(), f.at_zero(), f.mass()])

    out = np.array(_rng.parallel_map(one, range(config.replicates), config.threads))
    return {"sq_integral": out[:, 0, :], "at_zero": out[:, 1, :], "mass": out[:, 2, :]}


def delta_path(config: LimitConfig, index: int) -> np.ndarray:
    """``Delta_t`` of one replicate at every configured time."""
    bins = brownian_bins(config, index)
    lo, hi = int(bins.min()), int(bins.max())
    sd = math.sqrt(config.h)
    # Z+ covers bins 0..hi, Z- covers bins -1..lo (stored outward from the origin)
    zpos = _rng.stream(config.seed, index, _rng.NOISE_POS, "limit").standard_normal(hi + 1) * sd
    zneg = _rng.stream(config.seed, index, _rng.NOISE_NEG, "limit").standard_normal(-lo) * sd
    weights = np.concatenate((zneg[::-1], zpos))      # bins lo..hi
    w = weights[bins - lo]
    running = np.cumsum(w) * (config.dt / config.h)
    idx = np.array([config.step_index(t) for t in config.times]) - 1
    return running[idx]


def simulate_delta(config: LimitConfig) -> DeltaBatch:
    rows = _rng.parallel_map(lambda i: delta_path(config, i), range(config.replicates), config.threads)
    return DeltaBatch(np.asarray(config.times), np.vstack(rows), config.seed, config)


def delta_covariance(s: float, t: float, c: float = SELF_INTERSECTION_CONSTANT) -> float:
    """``Cov(Delta_s, Delta_t)`` for a self-similar process of index 3/4 with stationary increments."""
    return 0.5 * c * (s ** 1.5 + t ** 1.5 - abs(t - s) ** 1.5)


def delta_refinement(config: LimitConfig) -> tuple[np.ndarray, np.ndarray]:
    """Coupled ``Delta`` samples on the grid ``(dt, h)`` and on ``(dt/2, h/2)``.

    Both discretizations share one Brownian path (the coarse path is every
    other point of the fine one) and one white noise (each coarse bin weight
    is the sum of the two fine weights it contains), so the difference of the
    two columns isolates the discretization error.
    """
    fine_dt, fine_h = config.dt / 2.0, config.h / 2.0
    scale = config.dt / config.h   # identical on both grids

    def one(i):
        rng = _rng.stream(config.seed, i, _rng.BROWNIAN, "refine")
        N = 2 * config.n_steps
        b = np.empty(N)
        b[0] = 0.0
        np.cumsum(rng.standard_normal(N - 1) * math.sqrt(fine_dt), out=b[1:])
        fine = np.floor(b / fine_h).astype(np.int64)
        coarse = np.floor(b[::2] / config.h).astype(np.int64)
        lo = 2 * min(int(coarse.min()), int(fine.min()) // 2)
        hi = 2 * max(int(coarse.max()), int(fine.max()) // 2) + 1
        wf = _rng.stream(config.seed, i, _rng.MISC, "refine").standard_normal(hi - lo + 1) * math.sqrt(fine_h)
        wc = wf[0::2] + wf[1::2]
        run_f = np.cumsum(wf[fine - lo]) * scale
        run_c = np.cumsum(wc[coarse - lo // 2]) * scale
        kc = np.array([config.step_index(t) for t in config.times])
        return run_c[kc - 1], run_f[2 * kc - 1]

    pairs = _rng.parallel_map(one, range(config.replicates), config.threads)
    return np.vstack([p[0] for p in pairs]), np.vstack([p[1] for p in pairs])
