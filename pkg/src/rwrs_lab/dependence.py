"""Dominating functions for the theta_2 weak-dependence coefficients.

Coefficients are never estimated from data; each scenery family comes with an
analytic upper bound g, and the helpers here decide whether g satisfies the
decay assumption used by the limit theorem:

* ``x -> x**1.5 * g(x)`` is non-increasing, and
* ``sum_i 2**(1.5 i) g(2**(i eps)) < inf`` for some ``0 < eps < 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .scenery import IID, DoublingMap, IteratedFunction, LinearProcess, SceneryModel

SERIES_TOL = 1e-15
MAX_TERMS = 100_000


@dataclass(frozen=True)
class DecayBound:
    """``g(x) = C rate**x`` (geometric) or ``g(x) = C x**-rate`` (polynomial).

    ``C = 0`` encodes a vanishing coefficient (independent scenery).
    """

    family: str
    C: float
    rate: float
    provenance: str = ""

    def __post_init__(self):
        if self.family not in ("geometric", "polynomial"):
            raise ValueError(f"unknown decay family {self.family!r}")
        if self.C < 0:
            raise ValueError("C must be nonnegative")
        if self.family == "geometric" and not 0 < self.rate < 1:
            raise ValueError("geometric rate must lie in (0, 1)")
        if self.family == "polynomial" and self.rate <= 0:
            raise ValueError("polynomial exponent must be positive")

    @classmethod
    def geometric(cls, C: float, rho: float, provenance: str = "") -> "DecayBound":
        return cls("geometric", C, rho, provenance)

    @classmethod
    def polynomial(cls, C: float, a: float, provenance: str = "") -> "DecayBound":
        return cls("polynomial", C, a, provenance)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "geometric":
            return self.C * np.power(self.rate, x)
        return self.C * np.power(x, -self.rate)

    @property
    def monotone_from(self) -> float:
        """Smallest x beyond which x**1.5 g(x) is non-increasing."""
        if self.C == 0:
            return 0.0
        if self.family == "geometric":
            return 1.5 / math.log(1.0 / self.rate)
        return 0.0 if self.rate >= 1.5 else math.inf

    def redominated(self, x):
        """g with the rise of x**1.5 g(x) below the threshold flattened out.

        For x < x0, ``max(g(x), g(x0) (x0/x)**1.5)``; identical to g beyond x0.
        """
        x = np.asarray(x, dtype=float)
        x0 = self.monotone_from
        if self.family != "geometric" or x0 <= 0:
            return self(x)
        flat = self(x0) * np.power(x0 / x, 1.5)
        return np.where(x < x0, np.maximum(self(x), flat), self(x))

    def to_dict(self) -> dict:
        return {"family": self.family, "C": self.C, "rate": self.rate, "provenance": self.provenance}


@dataclass
class A2Report:
    epsilon: float
    monotone_ok: bool
    series_value: float
    tail_bound: float
    verdict: bool
    terms: int
    bound: DecayBound
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "monotone_ok": self.monotone_ok,
            "series_value": self.series_value,
            "tail_bound": self.tail_bound,
            "verdict": self.verdict,
            "terms": self.terms,
            "bound": self.bound.to_dict(),
            "notes": self.notes,
        }


def theta_bound(model: SceneryModel, rng: np.random.Generator | None = None,
                sample_length: int = 200_000) -> DecayBound:
    """Analytic dominating function for theta_2 of a scenery model."""
    if isinstance(model, IID):
        return DecayBound.geometric(0.0, 0.5, "iid: theta_2(n) = 0 for n >= 1")
    if isinstance(model, LinearProcess):
        # independent copies with eps'_i = eps_i for i > 0: only the first term of
        # the delta_2 display survives, ||eps_0 - eps'_0||_2 sum_{j >= i} |a_j|
        gap = math.sqrt(2.0) * model.scale
        if model.rule == "geometric":
            return DecayBound.geometric(
                gap / (1.0 - model.rate), model.rate,
                "linear process: sqrt(2) s sum_{j>=i} rho^j")
        a = model.rate
        return DecayBound.polynomial(
            gap / (a - 1.0), a - 1.0,
            "linear process: sqrt(2) s sum_{j>=i} (j+1)^-a <= sqrt(2) s i^(1-a)/(a-1)")
    if isinstance(model, IteratedFunction):
        sd = model.stationary_sd()
        how = "exact stationary variance"
        if sd is None:
            rng = np.random.default_rng(0) if rng is None else rng
            sd = float(np.std(model.sample(0, sample_length - 1, rng).values))
            how = f"stationary sd estimated from {sample_length} samples"
        if model.kappa == 0:
            return DecayBound.geometric(0.0, 0.5, "iterated function with kappa=0 is i.i.d.")
        return DecayBound.geometric(
            math.sqrt(2.0) * sd, model.kappa,
            f"iterated function: kappa^i ||xi_0 - xi_0*||_2 ({how})")
    if isinstance(model, DoublingMap):
        return DecayBound.geometric(
            1.0, model.rho, "doubling map: C rho^i with C unknown, set to 1")
    raise TypeError(f"no decay bound for {type(model).__name__}")


def check_A2(g: DecayBound, epsilon: float) -> A2Report:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    notes = []
    x0 = g.monotone_from
    if g.family == "polynomial":
        monotone = g.C == 0 or g.rate >= 1.5
    else:
        monotone = True
        if x0 > 1:
            notes.append(
                f"x^1.5 g(x) rises below x0 = {x0:.4g}; g is replaced there by "
                "max(g(x), g(x0) (x0/x)^1.5)")

    if g.C == 0:
        return A2Report(epsilon, True, 0.0, 0.0, True, 1, g, notes + ["g vanishes identically"])

    if g.family == "polynomial":
        expo = 1.5 - g.rate * epsilon
        if expo >= 0:
            # terms C 2^(i expo) do not go to zero
            partial = sum(g.C * 2.0 ** (i * expo) for i in range(64))
            notes.append(f"terms grow like 2^({expo:.4g} i): series diverges")
            return A2Report(epsilon, monotone, partial, math.inf, False, 64, g, notes)
        q = 2.0 ** expo
        total, i, term = 0.0, 0, g.C
        while term >= SERIES_TOL and i < MAX_TERMS:
            total += term
            i += 1
            term = g.C * q ** i
        tail = term / (1.0 - q)
        return A2Report(epsilon, monotone, total, tail, monotone and math.isfinite(tail), i, g, notes)

    def term(i):
        x = 2.0 ** (i * epsilon)
        return 2.0 ** (1.5 * i) * float(g.redominated(x))

    total, i = 0.0, 0
    t = term(0)
    tail = math.inf
    while i < MAX_TERMS:
        total += t
        i += 1
        nxt = term(i)
        x = 2.0 ** (i * epsilon)
        if nxt < SERIES_TOL and x >= x0:
            # beyond x0 successive ratios 2^1.5 rho^(x (2^eps - 1)) only shrink
            q = 2.0 ** 1.5 * g.rate ** (x * (2.0 ** epsilon - 1.0))
            if q < 1:
                tail = nxt / (1.0 - q)
                break
        t = nxt
    return A2Report(epsilon, monotone, total, tail, monotone and math.isfinite(tail), i, g, notes)


def find_epsilon(g: DecayBound) -> float | None:
    """An epsilon in (0, 1) for which the series converges, if one exists."""
    if g.C == 0 or g.family == "geometric":
        return 0.5
    if g.rate > 1.5:
        return 0.5 * (1.0 + 1.5 / g.rate)
    return None


def a2_verdict(g: DecayBound, epsilon: float | None = None) -> A2Report:
    """Check the assumption at ``epsilon``, or search for a working epsilon."""
    if epsilon is not None:
        return check_A2(g, epsilon)
    eps = find_epsilon(g)
    if eps is None:
        rep = check_A2(g, 0.999)
        rep.notes.append("no epsilon in (0, 1) works: need a * epsilon > 3/2")
        return rep
    return check_A2(g, eps)


def covariance_tail_bound(model: SceneryModel, K: int, r0: float | None = None,
                          lam: float = 0.0) -> float:
    """Bound on ``2 sum_{k>K} k**lam |r(k)|`` via ``|r(k)| <= ||xi_0||_2 g(k)``."""
    g = theta_bound(model)
    if r0 is None:
        r0 = model.covariance(0)
    if r0 is None:
        return math.nan
    norm = math.sqrt(max(r0, 0.0))
    return 2.0 * norm * _weighted_tail(g, K, lam)


def _weighted_tail(g: DecayBound, K: int, lam: float) -> float:
    """``sum_{k>K} k**lam g(k)``."""
    if g.C == 0:
        return 0.0
    if g.family == "polynomial":
        e = g.rate - lam
        if e <= 1:
            return math.inf
        K = max(K, 1)
        return g.C * (K ** (1.0 - e) / (e - 1.0))
    k = K + 1
    total = 0.0
    while True:
        q = ((k + 1) / k) ** lam * g.rate
        term = k ** lam * float(g(k))
        if q < 1:
            return total + term / (1.0 - q)
        total += term
        k += 1


@dataclass
class WeightedCovSum:
    lam: float
    K: int
    partial: float
    tail_bound: float
    source: str

    def to_dict(self) -> dict:
        return dict(lam=self.lam, K=self.K, partial=self.partial,
                    tail_bound=self.tail_bound, source=self.source)


def weighted_cov_sum(model: SceneryModel, lam: float, K: int,
                     rng: np.random.Generator | None = None,
                     sample_length: int = 1_000_000) -> WeightedCovSum:
    """``sum_{|k|<=K} |k|**lam |r(k)|`` plus a bound on the rest of the series."""
    if not 0 <= lam < 0.5:
        raise ValueError("lambda must lie in [0, 1/2)")
    r = [model.covariance(k) for k in range(K + 1)]
    source = "analytic"
    if any(v is None for v in r):
        from .scenery import empirical_covariance
        rng = np.random.default_rng(0) if rng is None else rng
        r = empirical_covariance(model, K, sample_length, rng).r
        source = "empirical"
    r = np.asarray(r, dtype=float)
    k = np.arange(1, K + 1, dtype=float)
    partial = float(abs(r[0]) + 2.0 * np.sum(k ** lam * np.abs(r[1:])))
    tail = covariance_tail_bound(model, K, r0=float(r[0]), lam=lam)
    return WeightedCovSum(lam, K, partial, tail, source)
