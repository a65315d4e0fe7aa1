"""Integer random walks, their local times and self-intersection counts."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

TOL = 1e-12


class InvalidLaw(ValueError):
    pass


@dataclass(frozen=True)
class IncrementLaw:
    """Finite-support, centered step distribution on the integers."""

    steps: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.steps) != len(self.probs):
            raise InvalidLaw("steps and probabilities differ in length")
        if len(set(self.steps)) != len(self.steps):
            raise InvalidLaw("duplicate steps")
        p = np.asarray(self.probs, dtype=float)
        if np.any(p <= 0) or np.any(p > 1):
            raise InvalidLaw("probabilities must lie in (0, 1]")
        if abs(p.sum() - 1.0) > TOL:
            raise InvalidLaw(f"probabilities sum to {p.sum()!r}, not 1")
        if len(self.steps) < 2:
            raise InvalidLaw("need at least two distinct atoms")
        if abs(float(np.dot(self.steps, p))) > TOL:
            raise InvalidLaw("increments are not centered")
        order = np.argsort(self.steps)
        object.__setattr__(self, "steps", tuple(int(self.steps[i]) for i in order))
        object.__setattr__(self, "probs", tuple(float(self.probs[i]) for i in order))

    @classmethod
    def from_atoms(cls, atoms: Mapping[int, float] | Iterable[tuple[int, float]]) -> "IncrementLaw":
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        steps, probs = zip(*[(int(s), float(p)) for s, p in items])
        return cls(steps, probs)

    @classmethod
    def simple(cls) -> "IncrementLaw":
        return cls((-1, 1), (0.5, 0.5))

    @property
    def atoms(self) -> list[tuple[int, float]]:
        return list(zip(self.steps, self.probs))

    @property
    def variance(self) -> float:
        return float(np.dot(np.square(self.steps), self.probs))

    @property
    def max_step(self) -> int:
        return max(abs(s) for s in self.steps)

    def truncated(self, q: int) -> "tuple[tuple[int, ...], tuple[float, ...]] | None":
        """Support and renormalized weights of the law restricted to [-q, q]."""
        kept = [(s, p) for s, p in self.atoms if abs(s) <= q]
        if not kept:
            return None
        mass = sum(p for _, p in kept)
        return tuple(s for s, _ in kept), tuple(p / mass for _, p in kept)

    def draw(self, size: int, rng: np.random.Generator) -> np.ndarray:
        # inverse-cdf sampling: chunked calls consume the stream exactly like one big call
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, rng.random(size), side="right")
        return np.asarray(self.steps, dtype=np.int64)[idx]

    def to_dict(self) -> dict:
        return {"atoms": [[s, p] for s, p in self.atoms]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "IncrementLaw":
        return cls.from_atoms([(s, p) for s, p in d["atoms"]])


@dataclass(frozen=True)
class WalkPath:
    n: int
    positions: np.ndarray

    def __post_init__(self):
        if len(self.positions) != self.n + 1:
            raise ValueError("path must hold n + 1 positions")
        if self.positions[0] != 0:
            raise ValueError("walk must start at 0")


@dataclass(frozen=True)
class LocalTimeProfile:
    """Occupation counts ``N_n(i)`` stored densely from site ``left``."""

    left: int
    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum()) - 1

    @property
    def right(self) -> int:
        return self.left + len(self.counts) - 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.left, self.left + len(self.counts))

    def at(self, site: int) -> int:
        j = site - self.left
        if 0 <= j < len(self.counts):
            return int(self.counts[j])
        return 0


@dataclass
class PropertyPReport:
    holds: bool
    witness_q: int | None
    reachable_check: str
    status: str = "inconclusive"
    tried: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "status": self.status,
            "witness_q": self.witness_q,
            "reachable_check": self.reachable_check,
            "tried": self.tried,
        }


def sample_walk(law: IncrementLaw, n: int, rng: np.random.Generator) -> WalkPath:
    if n < 0:
        raise ValueError("n must be nonnegative")
    pos = np.zeros(n + 1, dtype=np.int64)
    if n:
        np.cumsum(law.draw(n, rng), out=pos[1:])
    return WalkPath(n, pos)


def _reachable(support: Sequence[int], bound: int) -> set[int]:
    """Sites of [-bound, bound] reachable from 0 by adding support elements.

    Search runs inside a wider box so excursions beyond ``bound`` are allowed.
    """
    smax = max(abs(s) for s in support)
    box = bound + smax * smax + smax
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in support:
            y = x + s
            if -box <= y <= box and y not in seen:
                seen.add(y)
                queue.append(y)
    return {x for x in seen if -bound <= x <= bound}


def check_property_P(law: IncrementLaw, q_max: int = 10, reach_bound: int = 20) -> PropertyPReport:
    """Look for a truncation level q whose truncated law generates all of Z.

    A level passes when its support has both signs and gcd 1, confirmed by
    reachability of every site in ``[-reach_bound, reach_bound]``. Failure of
    every level up to ``q_max`` is reported as inconclusive, not as a failure.
    """
    if q_max < 1 or reach_bound < 1:
        raise ValueError("q_max and reach_bound must be >= 1")
    tried = []
    for q in range(1, q_max + 1):
        trunc = law.truncated(q)
        if trunc is None:
            continue
        support = [s for s in trunc[0] if s != 0]
        both = any(s > 0 for s in support) and any(s < 0 for s in support)
        g = reduce(gcd, (abs(s) for s in support), 0)
        entry = {"q": q, "support": list(trunc[0]), "both_signs": both, "gcd": g}
        tried.append(entry)
        if not (both and g == 1):
            continue
        reached = _reachable(support, reach_bound)
        entry["reached"] = len(reached)
        if len(reached) == 2 * reach_bound + 1:
            return PropertyPReport(
                True, q,
                f"all {2 * reach_bound + 1} sites in [-{reach_bound}, {reach_bound}] reached "
                f"from support {list(trunc[0])}",
                status="holds", tried=tried,
            )
    return PropertyPReport(
        False, None,
        f"no q <= {q_max} passed the both-signs/gcd-1 criterion with full reachability",
        status="inconclusive", tried=tried,
    )


def local_time(path: WalkPath) -> LocalTimeProfile:
    pos = path.positions
    left = int(pos.min())
    return LocalTimeProfile(left, np.bincount(pos - left).astype(np.int64))


def streaming_local_time(law: IncrementLaw, n: int, rng: np.random.Generator,
                         chunk: int = 1 << 20) -> LocalTimeProfile:
    """Local time of an n-step walk accumulated without storing the path.

    Consumes ``rng`` exactly as :func:`sample_walk` does, so both give the
    same profile for the same seed.
    """
    left, counts = 0, np.ones(1, dtype=np.int64)
    current = 0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        pos = current + np.cumsum(law.draw(m, rng))
        lo = min(left, int(pos.min()))
        hi = max(left + len(counts) - 1, int(pos.max()))
        if lo < left or hi > left + len(counts) - 1:
            grown = np.zeros(hi - lo + 1, dtype=np.int64)
            grown[left - lo:left - lo + len(counts)] = counts
            counts, left = grown, lo
        counts += np.bincount(pos - left, minlength=len(counts))
        current = int(pos[-1])
        done += m
    return LocalTimeProfile(left, counts)


def self_intersection(profile: LocalTimeProfile, i: int) -> int:
    """``alpha(n, i) = sum_j N(j) N(j - i)``."""
    c = profile.counts
    i = abs(int(i))
    if i >= len(c):
        return 0
    return int(np.dot(c[i:], c[:len(c) - i]))


def self_intersection_table(profile: LocalTimeProfile) -> tuple[np.ndarray, np.ndarray]:
    """All nonzero-range lags and ``alpha(n, i)`` by direct self-convolution."""
    c = profile.counts
    w = len(c)
    return np.arange(-(w - 1), w), np.correlate(c, c, mode="full")


def max_local_time(profile: LocalTimeProfile) -> int:
    return int(profile.counts.max())


def expected_self_intersection(law: IncrementLaw, n: int, lags: Sequence[int]) -> np.ndarray:
    """Exact ``E alpha(n, i)`` from the step-by-step distribution of S_m.

    Uses ``E alpha(n,i) = (n+1) 1{i=0} + sum_{m=1}^n (n+1-m) (P(S_m=i) + P(S_m=-i))``.
    """
    smax = law.max_step
    width = 2 * n * smax + 1
    dist = np.zeros(width)
    dist[n * smax] = 1.0
    lags = np.asarray(lags, dtype=np.int64)
    out = np.where(lags == 0, float(n + 1), 0.0)
    for m in range(1, n + 1):
        new = np.zeros(width)
        for s, p in law.atoms:
            if s >= 0:
                new[s:] += p * dist[:width - s]
            else:
                new[:width + s] += p * dist[-s:]
        dist = new
        idx_p = n * smax + lags
        idx_m = n * smax - lags
        ok_p = (idx_p >= 0) & (idx_p < width)
        ok_m = (idx_m >= 0) & (idx_m < width)
        pp = np.where(ok_p, dist[np.clip(idx_p, 0, width - 1)], 0.0)
        pm = np.where(ok_m, dist[np.clip(idx_m, 0, width - 1)], 0.0)
        out += (n + 1 - m) * (pp + pm)
    return out
