"""Random walk in random scenery: ``Sigma_n = sum_{k=0}^n xi_{S_k}``."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .scenery import DEFAULT_BUFFER_CAP, SceneryModel, SceneryWindow
from .walk import IncrementLaw, PropertyPReport, WalkPath, check_property_P, local_time, sample_walk

EXACT_PATH_LIMIT = 10_000_000


@dataclass
class RwrsConfig:
    law: IncrementLaw
    model: SceneryModel
    n: int
    times: tuple[float, ...] = (1.0,)
    replicates: int = 1000
    seed: int = 0
    threads: int | None = 1
    buffer_cap: int = DEFAULT_BUFFER_CAP
    property_p: PropertyPReport | None = field(default=None, repr=False)

    def __post_init__(self):
        self.times = tuple(float(t) for t in self.times)
        if not self.times:
            raise ValueError("need at least one time")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if self.times[0] <= 0 or self.times[-1] > 1:
            raise ValueError("times must lie in (0, 1]")
        if self.replicates < 1 or self.n < 1:
            raise ValueError("need n >= 1 and at least one replicate")
        if self.property_p is None:
            self.property_p = check_property_P(self.law)
        if not self.property_p.holds:
            warnings.warn("property (P) could not be confirmed for this step law", stacklevel=2)

    def to_dict(self) -> dict:
        return {
            "law": self.law.to_dict(),
            "model": self.model.to_dict(),
            "n": self.n,
            "times": list(self.times),
            "replicates": self.replicates,
            "seed": self.seed,
            "property_p": self.property_p.to_dict(),
        }


@dataclass
class RwrsBatch:
    times: np.ndarray
    steps: np.ndarray          # [n t_j]
    raw: np.ndarray            # replicates x m
    normalized: np.ndarray     # raw / n^(3/4)
    n: int
    seed: int

    @property
    def replicates(self) -> int:
        return self.raw.shape[0]

    def summary(self) -> dict:
        out = []
        for j, t in enumerate(self.times):
            col = self.normalized[:, j]
            q = np.quantile(col, [0.05, 0.25, 0.5, 0.75, 0.95])
            out.append({
                "t": float(t), "step": int(self.steps[j]),
                "mean": float(col.mean()), "variance": float(col.var(ddof=1)) if len(col) > 1 else 0.0,
                "quantiles": {k: float(v) for k, v in zip(("q05", "q25", "q50", "q75", "q95"), q)},
            })
        return {"n": self.n, "seed": self.seed, "replicates": self.replicates, "by_time": out}


def rwrs_path(path: WalkPath, scenery: SceneryWindow) -> np.ndarray:
    """Running sums ``Sigma_0, ..., Sigma_n`` along one walk."""
    return np.cumsum(scenery.at(path.positions))


def simulate_one(law: IncrementLaw, model: SceneryModel, n: int, steps: np.ndarray,
                 seed: int, index: int, buffer_cap: int = DEFAULT_BUFFER_CAP,
                 label: str = "rwrs") -> np.ndarray:
    path = sample_walk(law, n, _rng.stream(seed, index, _rng.WALK, label))
    lo, hi = int(path.positions.min()), int(path.positions.max())
    scenery = model.sample(lo, hi, _rng.stream(seed, index, _rng.SCENERY, label), buffer_cap)
    return rwrs_path(path, scenery)[steps]


def simulate_rwrs(config: RwrsConfig, label: str = "rwrs") -> RwrsBatch:
    """Monte Carlo batch of ``Sigma_[n t_j]``, one independent walk/scenery pair per replicate."""
    steps = _rng.floor_times(config.n, config.times)
    rows = _rng.parallel_map(
        lambda i: simulate_one(config.law, config.model, config.n, steps, config.seed, i,
                               config.buffer_cap, label),
        range(config.replicates), config.threads)
    raw = np.vstack(rows)
    return RwrsBatch(np.asarray(config.times), steps, raw, raw / config.n ** 0.75,
                     config.n, config.seed)


@dataclass
class MomentIdentity:
    lhs: float
    rhs: float
    tolerance: float
    mode: str
    paths: int

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def agreement(self) -> bool:
        return self.difference <= self.tolerance


def _covariance_table(model: SceneryModel, max_lag: int) -> np.ndarray:
    r = np.array([model.covariance(k) for k in range(max_lag + 1)], dtype=object)
    if any(v is None for v in r):
        raise ValueError(f"{type(model).__name__} has no analytic covariance")
    return r.astype(float)


def enumerate_paths(law: IncrementLaw, n: int, chunk: int = 1 << 16):
    """Yield ``(positions, probabilities)`` blocks covering every n-step path."""
    m = len(law.steps)
    total = m ** n
    if total > EXACT_PATH_LIMIT:
        raise ValueError(f"{total} paths exceed the enumeration limit {EXACT_PATH_LIMIT}")
    steps = np.asarray(law.steps, dtype=np.int64)
    logp = np.log(np.asarray(law.probs))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.empty((len(idx), n), dtype=np.int64)
        rest = idx.copy()
        for k in range(n):
            digits[:, k] = rest % m
            rest //= m
        pos = np.zeros((len(idx), n + 1), dtype=np.int64)
        np.cumsum(steps[digits], axis=1, out=pos[:, 1:])
        yield pos, np.exp(logp[digits].sum(axis=1))


def expected_alpha_exact(law: IncrementLaw, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``E alpha(n, i)`` by enumerating every path and convolving its local time."""
    L = n * law.max_step
    lags = np.arange(-2 * L, 2 * L + 1)
    acc = np.zeros(len(lags))
    for pos, prob in enumerate_paths(law, n):
        width = 2 * L + 1
        counts = np.zeros((len(prob), width))
        np.add.at(counts, (np.repeat(np.arange(len(prob)), n + 1), (pos + L).ravel()), 1.0)
        for d in range(width):
            a = np.einsum("pj,pj->p", counts[:, d:], counts[:, :width - d])
            acc[2 * L + d] += prob @ a
            if d:
                acc[2 * L - d] += prob @ a
    return lags, acc


def second_moment_identity(law: IncrementLaw, model: SceneryModel, n: int,
                           mode: str = "exact", replicates: int = 2000, seed: int = 0,
                           tol: float = 1e-10, threads: int | None = 1) -> MomentIdentity:
    """Compare ``E Sigma_n^2`` with ``sum_i E alpha(n, i) r(i)``.

    In exact mode the left side is a direct double sum over time pairs for
    every path and the right side goes through local-time convolutions. In
    Monte Carlo mode each replicate contributes ``Sigma_n^2 - sum_i alpha(n,i) r(i)``
    whose mean must vanish within four standard errors.
    """
    if mode == "exact":
        L = n * law.max_step
        r = _covariance_table(model, 2 * L)
        lhs = 0.0
        npaths = 0
        for pos, prob in enumerate_paths(law, n):
            diff = np.abs(pos[:, :, None] - pos[:, None, :])
            lhs += float(prob @ r[diff].sum(axis=(1, 2)))
            npaths += len(prob)
        lags, ea = expected_alpha_exact(law, n)
        rhs = float(ea @ r[np.abs(lags)])
        return MomentIdentity(lhs, rhs, tol, "exact", npaths)
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")

    def one(i):
        path = sample_walk(law, n, _rng.stream(seed, i, _rng.WALK, "moment"))
        lo, hi = int(path.positions.min()), int(path.positions.max())
        sc = model.sample(lo, hi, _rng.stream(seed, i, _rng.SCENERY, "moment"))
        s = float(sc.at(path.positions).sum())
        prof = local_time(path)
        c = prof.counts.astype(float)
        alpha = np.correlate(c, c, mode="full")
        w = len(c)
        r = _covariance_table(model, w - 1)
        cond = float(alpha @ r[np.abs(np.arange(-(w - 1), w))])
        return s * s, cond

    vals = np.array(_rng.parallel_map(one, range(replicates), threads))
    d = vals[:, 0] - vals[:, 1]
    se = float(d.std(ddof=1) / np.sqrt(replicates))
    return MomentIdentity(float(vals[:, 0].mean()), float(vals[:, 1].mean()), 4.0 * se, "mc", replicates)
