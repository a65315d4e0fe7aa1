"""Stationary centered sceneries indexed by the integer sites.

Four families are available: i.i.d. values, causal linear processes, iterated
random functions ``xi_n = f(xi_{n-1}) + eps_n`` and observables of the
doubling map read off an i.i.d. fair bit stream.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Mapping

import numpy as np
from scipy import signal

DEFAULT_BUFFER_CAP = 50_000_000
TAIL_TOL = 1e-8


class SceneryError(ValueError):
    pass


class NegativeLongRunVariance(SceneryError):
    """Raised when an estimate of sum_k r(k) comes out negative."""


# unit-variance symmetric innovation laws
INNOVATIONS = ("normal", "uniform", "rademacher")


def draw_innovations(dist: str, size: int, rng: np.random.Generator) -> np.ndarray:
    if dist == "normal":
        return rng.standard_normal(size)
    if dist == "uniform":
        return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size)
    if dist == "rademacher":
        return 2.0 * rng.integers(0, 2, size) - 1.0
    raise SceneryError(f"unknown innovation law {dist!r}")


@dataclass(frozen=True)
class SceneryWindow:
    left: int
    right: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.right - self.left + 1:
            raise ValueError("window length does not match its index range")

    def at(self, sites) -> np.ndarray:
        return self.values[np.asarray(sites) - self.left]


@dataclass
class CovarianceSummary:
    lags: np.ndarray
    r: np.ndarray
    se: np.ndarray
    sigma_inf_sq: float
    sigma_inf_sq_se: float
    truncation_error_bound: float
    sample_length: int

    def to_dict(self) -> dict:
        return {
            "lags": self.lags.tolist(),
            "r": self.r.tolist(),
            "se": self.se.tolist(),
            "sigma_inf_sq": self.sigma_inf_sq,
            "sigma_inf_sq_se": self.sigma_inf_sq_se,
            "truncation_error_bound": self.truncation_error_bound,
            "sample_length": self.sample_length,
        }


class SceneryModel:
    """Common surface of the scenery families."""

    kind = "base"

    def sample(self, left: int, right: int, rng: np.random.Generator,
               buffer_cap: int = DEFAULT_BUFFER_CAP) -> SceneryWindow:
        raise NotImplementedError

    def covariance(self, k: int) -> float | None:
        return None

    def variance(self) -> float | None:
        return self.covariance(0)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        d.update(asdict(self))
        return d


@dataclass(frozen=True)
class IID(SceneryModel):
    dist: str = "normal"
    scale: float = 1.0
    kind = "iid"

    def __post_init__(self):
        if self.dist not in INNOVATIONS:
            raise SceneryError(f"unknown marginal {self.dist!r}")
        if self.scale < 0:
            raise SceneryError("scale must be nonnegative")

    def sample(self, left, right, rng, buffer_cap=DEFAULT_BUFFER_CAP):
        width = _width(left, right, buffer_cap)
        return SceneryWindow(left, right, self.scale * draw_innovations(self.dist, width, rng))

    def covariance(self, k):
        return self.scale ** 2 if k == 0 else 0.0


@dataclass(frozen=True)
class LinearProcess(SceneryModel):
    """``xi_n = sum_j a_j eps_{n-j}`` with geometric or power-law coefficients.

    ``rule="geometric"``: a_j = rate**j.  ``rule="polynomial"``: a_j = (j+1)**-rate.
    The sum is cut at the smallest lag J whose neglected tail
    ``scale * sum_{j>J} |a_j|`` is below ``tail_tol``.
    """

    rule: str = "geometric"
    rate: float = 0.5
    innovation: str = "normal"
    scale: float = 1.0
    tail_tol: float = TAIL_TOL
    kind = "linear"

    def __post_init__(self):
        if self.rule == "geometric" and not 0 <= self.rate < 1:
            raise SceneryError("geometric coefficients need 0 <= rate < 1")
        if self.rule == "polynomial" and self.rate <= 1:
            raise SceneryError("polynomial coefficients need rate > 1 for summability")
        if self.rule not in ("geometric", "polynomial"):
            raise SceneryError(f"unknown coefficient rule {self.rule!r}")
        if self.innovation not in INNOVATIONS:
            raise SceneryError(f"unknown innovation law {self.innovation!r}")

    def tail_sum(self, i: int) -> float:
        """``sum_{j >= i} |a_j|`` (an upper bound for the polynomial rule)."""
        if self.rule == "geometric":
            return self.rate ** i / (1.0 - self.rate)
        a = self.rate
        if i == 0:
            return 1.0 + 1.0 / (a - 1.0)
        return i ** (1.0 - a) / (a - 1.0)

    @property
    def truncation_lag(self) -> int:
        if self.scale == 0:
            return 0
        target = self.tail_tol / self.scale
        if self.rule == "geometric":
            if self.rate == 0:
                return 0
            # rate^(J+1) / (1 - rate) < target
            j = math.log(target * (1.0 - self.rate)) / math.log(self.rate) - 1.0
            return max(0, math.ceil(j))
        a = self.rate
        # sum_{j>J} (j+1)^-a <= (J+1)^(1-a) / (a-1) < target
        j = (target * (a - 1.0)) ** (1.0 / (1.0 - a)) - 1.0
        return max(0, math.ceil(j))

    def coefficients(self, J: int | None = None) -> np.ndarray:
        J = self.truncation_lag if J is None else J
        j = np.arange(J + 1, dtype=float)
        if self.rule == "geometric":
            return self.rate ** j
        return (j + 1.0) ** (-self.rate)

    def sample(self, left, right, rng, buffer_cap=DEFAULT_BUFFER_CAP):
        J = self.truncation_lag
        width = _width(left, right, buffer_cap, extra=J)
        eps = self.scale * draw_innovations(self.innovation, width + J, rng)
        a = self.coefficients(J)
        if J > 256:
            vals = signal.fftconvolve(eps, a, mode="valid")
        else:
            vals = np.convolve(eps, a, mode="valid")
        return SceneryWindow(left, right, vals)

    def covariance(self, k):
        if self.rule != "geometric":
            return None
        rho = self.rate
        return self.scale ** 2 * rho ** abs(k) / (1.0 - rho * rho)


ITERATED_MAPS = ("linear", "tanh")


@dataclass(frozen=True)
class IteratedFunction(SceneryModel):
    """Markov chain ``xi_n = f(xi_{n-1}) + eps_n`` with a kappa-Lipschitz f.

    ``f(x) = kappa x`` or ``f(x) = kappa tanh(x)``; both are odd, so symmetric
    innovations give a centered stationary law.
    """

    kappa: float = 0.5
    map: str = "linear"
    innovation: str = "normal"
    scale: float = 1.0
    tail_tol: float = TAIL_TOL
    kind = "iterated"

    def __post_init__(self):
        if not 0 <= self.kappa < 1:
            raise SceneryError("contraction factor must lie in [0, 1)")
        if self.map not in ITERATED_MAPS:
            raise SceneryError(f"unknown map {self.map!r}")
        if self.innovation not in INNOVATIONS:
            raise SceneryError(f"unknown innovation law {self.innovation!r}")

    @property
    def exact_start(self) -> bool:
        return self.map == "linear" and self.innovation == "normal"

    @property
    def burn_in(self) -> int:
        if self.exact_start or self.kappa == 0:
            return 0
        return math.ceil(math.log(self.tail_tol) / math.log(self.kappa))

    def sample(self, left, right, rng, buffer_cap=DEFAULT_BUFFER_CAP):
        B = self.burn_in
        width = _width(left, right, buffer_cap, extra=B)
        eps = self.scale * draw_innovations(self.innovation, width + B, rng)
        if self.exact_start:
            sd = self.scale / math.sqrt(1.0 - self.kappa ** 2)
            x0 = sd * rng.standard_normal()
            # x_left = x0, then x_i = kappa x_{i-1} + eps_i
            vals = signal.lfilter([1.0], [1.0, -self.kappa], eps[1:], zi=[self.kappa * x0])[0]
            return SceneryWindow(left, right, np.concatenate(([x0], vals)))
        if self.map == "linear":
            out = signal.lfilter([1.0], [1.0, -self.kappa], eps)
        else:
            out = np.empty(width + B)
            x = out[0] = eps[0]
            k = self.kappa
            for i in range(1, width + B):
                x = k * math.tanh(x) + eps[i]
                out[i] = x
        return SceneryWindow(left, right, out[B:])

    def covariance(self, k):
        if self.map != "linear":
            return None
        s2 = self.scale ** 2 / (1.0 - self.kappa ** 2)
        return s2 * self.kappa ** abs(k)

    def stationary_sd(self) -> float | None:
        if self.map == "linear":
            return self.scale / math.sqrt(1.0 - self.kappa ** 2)
        return None


# observable name -> (function on [0,1), exact Lebesgue mean)
OBSERVABLES = {
    "x-1/2": (lambda x: x, 0.5),
    "cos": (lambda x: np.cos(2.0 * np.pi * x), 0.0),
}


@dataclass(frozen=True)
class DoublingMap(SceneryModel):
    """``xi_i = h(T^i x) - mean``, T the doubling map, x Lebesgue-distributed.

    The orbit point at site i is the binary fraction ``0.b_i b_{i+1} ... b_{i+W-1}``
    of an i.i.d. fair bit stream, so ``x_{i+1} = 2 x_i mod 1`` holds up to the
    ``2**-W`` truncation and the orbit never degenerates numerically.
    """

    observable: str = "x-1/2"
    bits: int = 53
    rho: float = 0.5
    kind = "doubling"

    def __post_init__(self):
        if self.observable not in OBSERVABLES:
            raise SceneryError(f"unknown observable {self.observable!r}")
        if not 1 <= self.bits <= 64:
            raise SceneryError("bit window must be between 1 and 64")
        if not 0 < self.rho < 1:
            raise SceneryError("rho must lie in (0, 1)")

    def orbit(self, left, right, rng, buffer_cap=DEFAULT_BUFFER_CAP) -> np.ndarray:
        W = self.bits
        width = _width(left, right, buffer_cap, extra=W - 1)
        b = rng.integers(0, 2, width + W - 1, dtype=np.uint64)
        acc = np.zeros(width, dtype=np.uint64)
        for j in range(W):
            acc |= b[j:j + width] << np.uint64(W - 1 - j)
        return acc.astype(float) / 2.0 ** W

    def sample(self, left, right, rng, buffer_cap=DEFAULT_BUFFER_CAP):
        h, mean = OBSERVABLES[self.observable]
        x = self.orbit(left, right, rng, buffer_cap)
        return SceneryWindow(left, right, h(x) - mean)

    def covariance(self, k):
        if self.observable != "x-1/2":
            return None
        return 2.0 ** (-abs(k)) / 12.0


MODEL_KINDS = {cls.kind: cls for cls in (IID, LinearProcess, IteratedFunction, DoublingMap)}


def model_from_dict(d: Mapping) -> SceneryModel:
    d = dict(d)
    kind = d.pop("kind")
    try:
        cls = MODEL_KINDS[kind]
    except KeyError:
        raise SceneryError(f"unknown scenery kind {kind!r}") from None
    return cls(**d)


def _width(left: int, right: int, cap: int, extra: int = 0) -> int:
    if left > right:
        raise SceneryError("empty window: left > right")
    width = right - left + 1
    if width + extra > cap:
        raise SceneryError(
            f"window of {width} sites needs a buffer of {width + extra} values, above the cap {cap}")
    return width


def sample_scenery(model: SceneryModel, left: int, right: int, rng: np.random.Generator,
                   buffer_cap: int = DEFAULT_BUFFER_CAP) -> SceneryWindow:
    return model.sample(left, right, rng, buffer_cap)


def analytic_covariance(model: SceneryModel, k: int) -> float | None:
    """Exact r(k) = E(xi_0 xi_k) where a closed form exists, else None."""
    if k < 0:
        raise ValueError("lag must be nonnegative")
    return model.covariance(k)


def _autocov(x: np.ndarray, kmax: int) -> np.ndarray:
    n = len(x)
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, nfft)
    ac = np.fft.irfft(f * np.conj(f), nfft)[:kmax + 1]
    return ac / n


def empirical_covariance(model: SceneryModel, k_max: int, sample_length: int,
                         rng: np.random.Generator, blocks: int = 100,
                         values: np.ndarray | None = None) -> CovarianceSummary:
    """Biased autocovariances of one long window with block-jackknife errors.

    ``sigma_inf_sq = r(0) + 2 sum_{k=1}^{k_max} r(k)``; a negative value
    raises :class:`NegativeLongRunVariance`.
    """
    if values is None:
        values = model.sample(0, sample_length - 1, rng).values
    x = np.asarray(values, dtype=float)
    n = len(x)
    if n <= 4 * k_max:
        raise ValueError("sample_length must be much larger than k_max")
    x = x - x.mean()
    r = _autocov(x, k_max)
    weights = np.r_[1.0, 2.0 * np.ones(k_max)]
    sig = float(weights @ r)

    # delete-one-block jackknife on the lagged product sums
    edges = np.linspace(0, n, blocks + 1).astype(np.int64)
    block_sums = np.empty((blocks, k_max + 1))
    for k in range(k_max + 1):
        prod = x[:n - k] * x[k:]
        cs = np.concatenate(([0.0], np.cumsum(prod)))
        hi = np.minimum(edges[1:], n - k)
        lo = np.minimum(edges[:-1], n - k)
        block_sums[:, k] = cs[hi] - cs[lo]
    total = block_sums.sum(axis=0)
    sizes = np.diff(edges)
    loo = (total[None, :] - block_sums) / (n - sizes)[:, None]
    loo_sig = loo @ weights
    c = (blocks - 1) / blocks
    se = np.sqrt(c * np.sum((loo - loo.mean(axis=0)) ** 2, axis=0))
    sig_se = float(np.sqrt(c * np.sum((loo_sig - loo_sig.mean()) ** 2)))
    if sig < 0:
        raise NegativeLongRunVariance(
            f"estimated sum of covariances is negative ({sig:.4g}); "
            "the model is degenerate or k_max is too small")
    from .dependence import covariance_tail_bound
    return CovarianceSummary(
        lags=np.arange(k_max + 1), r=r, se=se, sigma_inf_sq=sig, sigma_inf_sq_se=sig_se,
        truncation_error_bound=covariance_tail_bound(model, k_max, r0=float(r[0])),
        sample_length=n,
    )


def sigma_inf_sq(model: SceneryModel) -> float | None:
    """Closed-form ``sum_k r(k)`` when the covariance is analytic."""
    if isinstance(model, IID):
        return model.scale ** 2
    if isinstance(model, LinearProcess) and model.rule == "geometric":
        return model.scale ** 2 / (1.0 - model.rate) ** 2
    if isinstance(model, IteratedFunction) and model.map == "linear":
        k = model.kappa
        return model.scale ** 2 / (1.0 - k * k) * (1.0 + k) / (1.0 - k)
    if isinstance(model, DoublingMap) and model.observable == "x-1/2":
        return 0.25
    return None
