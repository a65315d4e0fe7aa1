"""Desk-scale statistical checks of the occupation-time and limit statements.

Every check returns a :class:`CheckResult` carrying its statistic, the
threshold it was held to, the sample sizes and the seeds it used.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import _rng
from .export import jsonable
from .dependence import DecayBound, a2_verdict, check_A2, theta_bound
from .limit import (SELF_INTERSECTION_CONSTANT, LimitConfig, delta_covariance,
                    local_time_functionals, quadratic_functional_batch, simulate_delta)
from .rwrs import RwrsConfig, second_moment_identity, simulate_rwrs
from .scenery import IID, DoublingMap, LinearProcess, SceneryModel, empirical_covariance
from .walk import (IncrementLaw, local_time, max_local_time, sample_walk, self_intersection,
                   self_intersection_table)


class KSResult(NamedTuple):
    statistic: float
    pvalue: float


def kolmogorov_sf(lam: float) -> float:
    """``Q(lam) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lam^2)``."""
    if lam <= 0:
        return 1.0
    if lam < 1.0:
        # Jacobi-transformed series converges fast for small lam
        s = sum(math.exp(-((2 * k - 1) ** 2) * math.pi ** 2 / (8.0 * lam * lam)) for k in range(1, 20))
        return max(0.0, min(1.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * s))
    total = 0.0
    for k in range(1, 200):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-300:
            break
    return max(0.0, min(1.0, 2.0 * total))


def ks_two_sample(a, b) -> KSResult:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("samples must be nonempty")
    pts = np.concatenate((a, b))
    fa = np.searchsorted(a, pts, side="right") / len(a)
    fb = np.searchsorted(b, pts, side="right") / len(b)
    d = float(np.max(np.abs(fa - fb)))
    lam = d * math.sqrt(len(a) * len(b) / (len(a) + len(b)))
    return KSResult(d, kolmogorov_sf(lam))


@dataclass
class CheckResult:
    name: str
    statistic: float
    threshold: str
    passed: bool
    sample_sizes: dict
    seeds: dict
    runtime: float = 0.0
    mandatory: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name, "statistic": self.statistic, "threshold": self.threshold,
            "pass": self.passed, "mandatory": self.mandatory, "sample_sizes": self.sample_sizes,
            "seeds": self.seeds, "runtime": round(self.runtime, 3), "details": jsonable(self.details),
        }

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        sizes = ",".join(f"{k}={v}" for k, v in self.sample_sizes.items())
        seeds = ",".join(f"{k}={v}" for k, v in self.seeds.items())
        return (f"{mark}  {self.name}: statistic={self.statistic:.6g} threshold {self.threshold} "
                f"[{sizes}] seeds[{seeds}]")


@dataclass
class VerificationReport:
    checks: list[CheckResult]
    config: dict

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks if c.mandatory)

    def to_dict(self) -> dict:
        return {"overall": self.overall, "config": self.config,
                "checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [c.line() + ("  (mandatory)" if c.mandatory else "") for c in self.checks]
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


def _timed(fn: Callable[[], CheckResult]) -> CheckResult:
    t0 = time.perf_counter()
    res = fn()
    res.runtime = time.perf_counter() - t0
    return res


def _slope(ns, values) -> float:
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def brute_force_alpha(positions: np.ndarray, i: int) -> int:
    d = positions[:, None] - positions[None, :]
    return int(np.count_nonzero(d == i))


# ---------------------------------------------------------------- exact identities

def check_exact_identities(law: IncrementLaw | None = None, ns: Sequence[int] = (0, 1, 2, 5, 8, 12, 100, 1000),
                           replicates: int = 50, seed: int = 0) -> CheckResult:
    """Mass, symmetry, total pairs, diagonal and brute-force agreement on sampled paths."""
    law = law or IncrementLaw.simple()

    def run():
        bad = []
        for n in ns:
            for r in range(replicates):
                path = sample_walk(law, n, _rng.stream(seed, r, _rng.WALK, f"identities-{n}"))
                prof = local_time(path)
                lags, alpha = self_intersection_table(prof)
                if prof.counts.sum() != n + 1:
                    bad.append((n, r, "mass"))
                if not np.array_equal(alpha, alpha[::-1]):
                    bad.append((n, r, "symmetry"))
                if alpha.sum() != (n + 1) ** 2:
                    bad.append((n, r, "total pairs"))
                if alpha[len(alpha) // 2] != int(np.sum(prof.counts ** 2)):
                    bad.append((n, r, "diagonal"))
                if n <= 12:
                    for i, a in zip(lags, alpha):
                        if brute_force_alpha(path.positions, int(i)) != a:
                            bad.append((n, r, f"brute force lag {i}"))
        return CheckResult("exact local-time identities", float(len(bad)), "== 0", not bad,
                           {"paths": len(ns) * replicates, "n_grid": list(ns)}, {"master": seed},
                           mandatory=True, details={"violations": bad[:20]})
    return _timed(run)


def check_second_moment_exact(law: IncrementLaw | None = None, n_max: int = 8,
                              models: Sequence[SceneryModel] | None = None) -> CheckResult:
    law = law or IncrementLaw.simple()
    models = models or [IID(), LinearProcess("geometric", 0.5), DoublingMap("x-1/2")]

    def run():
        worst, rows = 0.0, []
        for m in models:
            for n in range(1, n_max + 1):
                res = second_moment_identity(law, m, n, mode="exact")
                err = res.difference / max(1.0, abs(res.lhs))
                worst = max(worst, err)
                rows.append({"model": m.kind, "n": n, "lhs": res.lhs, "rhs": res.rhs})
        return CheckResult("second-moment identity (exact enumeration)", worst, "<= 1e-10",
                           worst <= 1e-10, {"n_max": n_max, "models": len(models)}, {},
                           mandatory=True, details={"rows": rows})
    return _timed(run)


def check_occupation_conservation(config: LimitConfig | None = None) -> CheckResult:
    config = config or LimitConfig(times=(0.25, 0.5, 1.0), replicates=50)

    def run():
        f = local_time_functionals(config)
        err = float(np.max(np.abs(f["mass"] - np.asarray(config.times)[None, :])))
        return CheckResult("occupation conservation h*sum L_t = t", err, "<= 1e-12", err <= 1e-12,
                           {"replicates": config.replicates}, {"master": config.seed}, mandatory=True)
    return _timed(run)


# ---------------------------------------------------------------- scenery / limit constants

def check_sigma_closed_forms(seed: int = 0, length: int = 1_000_000, k_max: int = 40,
                             rel_tol: float = 0.05) -> list[CheckResult]:
    out = []
    for model, target in ((LinearProcess("geometric", 0.5), 4.0), (DoublingMap("x-1/2"), 0.25)):
        def run(model=model, target=target):
            s = _rng.sub_seed(seed, f"sigma-{model.kind}")
            cov = empirical_covariance(model, k_max, length, _rng.stream(s, 0, _rng.SCENERY))
            rel = abs(cov.sigma_inf_sq - target) / target
            return CheckResult(f"sigma_inf^2 closed form ({model.kind})", rel, f"<= {rel_tol}", rel <= rel_tol,
                               {"length": length, "k_max": k_max}, {"master": s},
                               details={"estimate": cov.sigma_inf_sq, "target": target,
                                        "jackknife_se": cov.sigma_inf_sq_se})
        out.append(_timed(run))
    return out


def check_brownian_constant(config: LimitConfig | None = None, rel_tol: float = 0.05) -> list[CheckResult]:
    """``E int L_1^2`` and ``E L_1(0)`` against their closed forms."""
    config = config or LimitConfig(times=(1.0,), replicates=5000)
    holder = {}

    def run():
        f = local_time_functionals(config)
        holder["f"] = f
        est = float(f["sq_integral"][:, -1].mean())
        rel = abs(est - SELF_INTERSECTION_CONSTANT) / SELF_INTERSECTION_CONSTANT
        return CheckResult("Brownian self-intersection E int L_1^2", rel, f"<= {rel_tol}", rel <= rel_tol,
                           {"replicates": config.replicates, "dt": config.dt, "h": config.h},
                           {"master": config.seed},
                           details={"estimate": est, "target": SELF_INTERSECTION_CONSTANT})

    first = _timed(run)
    f = holder["f"]
    est0 = float(f["at_zero"][:, -1].mean())
    target0 = math.sqrt(2.0 / math.pi) * config.times[-1] ** 0.5
    rel0 = abs(est0 - target0) / target0
    second = CheckResult("Brownian E L_1(0)", rel0, f"<= {rel_tol}", rel0 <= rel_tol,
                         first.sample_sizes, first.seeds, details={"estimate": est0, "target": target0})
    return [first, second]


def check_self_similarity(config: LimitConfig | None = None, tol: float = 0.10) -> CheckResult:
    config = config or LimitConfig(times=(0.25, 0.5, 1.0), replicates=5000)

    def run():
        d = simulate_delta(config)
        t = np.asarray(config.times)
        ratios = d.values.var(axis=0, ddof=1) / t ** 1.5
        spread = float(ratios.max() / ratios.min() - 1.0)
        return CheckResult("self-similarity Var(Delta_t)/t^1.5", spread, f"max/min - 1 <= {tol}", spread <= tol,
                           {"replicates": config.replicates, "dt": config.dt, "h": config.h},
                           {"master": config.seed}, details={"ratios": ratios, "times": t})
    return _timed(run)


# ---------------------------------------------------------------- RWRS scaling

def check_variance_scaling(law: IncrementLaw | None, model: SceneryModel, ns=(256, 1024, 4096),
                           replicates: int = 2000, seed: int = 0, lo: float = 1.4, hi: float = 1.6,
                           mandatory: bool = False, threads: int | None = 1) -> CheckResult:
    law = law or IncrementLaw.simple()

    def run():
        var = []
        for n in ns:
            b = simulate_rwrs(RwrsConfig(law, model, n, (1.0,), replicates, seed, threads),
                              label=f"scaling-{n}")
            var.append(float(b.raw[:, 0].var(ddof=1)))
        s = _slope(ns, var)
        return CheckResult(f"variance scaling slope ({model.kind})", s, f"in [{lo}, {hi}]", lo <= s <= hi,
                           {"replicates": replicates, "n_grid": list(ns)}, {"master": seed},
                           mandatory=mandatory, details={"variances": var})
    return _timed(run)


def _walk_profiles(law, n, replicates, seed, label):
    return [local_time(sample_walk(law, n, _rng.stream(seed, r, _rng.WALK, label))) for r in range(replicates)]


def check_prop_local_time(law: IncrementLaw | None = None, ns=(256, 1024, 4096), replicates: int = 500,
                          seed: int = 0, lags=(0, 1, 2, 4, 8, 16), lams=(0.25, 0.5, 0.75)) -> list[CheckResult]:
    """Maximum local time, moment growth of alpha(n,0), and spatial regularity of alpha(n,.)."""
    law = law or IncrementLaw.simple()
    t0 = time.perf_counter()
    med, m1, m2, diffs = [], [], [], []
    lags = list(lags)
    for n in ns:
        profs = _walk_profiles(law, n, replicates, seed, f"prop41-{n}")
        mx = np.array([max_local_time(p) for p in profs]) / n ** 0.75
        a = np.array([[self_intersection(p, i) for i in lags] for p in profs], dtype=float)
        med.append(float(np.median(mx)))
        m1.append(float(a[:, 0].mean()))
        m2.append(float(np.mean(a[:, 0] ** 2)))
        diffs.append(a)
    elapsed = time.perf_counter() - t0
    sizes = {"replicates": replicates, "n_grid": list(ns)}
    seeds = {"master": seed}
    out = []
    dec = all(b < a for a, b in zip(med, med[1:]))
    out.append(CheckResult("Prop (i): medians of n^-3/4 max N decrease", float(med[-1] - med[0]),
                           "strictly decreasing", dec, sizes, seeds, elapsed, details={"medians": med}))
    for p, mom in ((1, m1), (2, m2)):
        s = _slope(ns, mom)
        out.append(CheckResult(f"Prop (ii)(a): slope of log E alpha(n,0)^{p}", s, f"<= {1.5 * p + 0.1}",
                               s <= 1.5 * p + 0.1, sizes, seeds, details={"moments": mom}))
    for lam in lams:
        per_n = []
        for n, a in zip(ns, diffs):
            best = 0.0
            for x in range(len(lags)):
                for y in range(x + 1, len(lags)):
                    l2 = math.sqrt(float(np.mean((a[:, x] - a[:, y]) ** 2)))
                    best = max(best, l2 / (n ** ((3 - lam) / 2) * abs(lags[x] - lags[y]) ** lam))
            per_n.append(best)
        ratio = max(per_n) / min(per_n)
        out.append(CheckResult(f"Prop (iii): Hoelder ratio stability lambda={lam}", ratio, "max/min <= 2",
                               bool(np.all(np.isfinite(per_n))) and ratio <= 2.0, sizes, seeds,
                               details={"max_ratio_by_n": per_n, "lags": lags}))
    return out


def check_quadratic_functional(law: IncrementLaw | None = None, n: int = 4096, replicates: int = 1000,
                               limit_config: LimitConfig | None = None, seed: int = 0,
                               level: float = 0.01) -> list[CheckResult]:
    """KS comparison of ``n^-3/2 sum_i (sum_k theta_k N_[n t_k](i))^2`` with its Brownian counterpart."""
    law = law or IncrementLaw.simple()
    limit_config = limit_config or LimitConfig(replicates=5000, seed=_rng.sub_seed(seed, "quad-limit"))
    out = []
    for thetas, times in (((1.0,), (1.0,)), ((1.0, -1.0), (0.5, 1.0))):
        def run(thetas=thetas, times=times):
            steps = _rng.floor_times(n, times)
            vals = []
            for r in range(replicates):
                pos = sample_walk(law, n, _rng.stream(seed, r, _rng.WALK, "quadratic")).positions
                lo = int(pos.min())
                comb = np.zeros(int(pos.max()) - lo + 1)
                for th, k in zip(thetas, steps):
                    comb += th * np.bincount(pos[:k + 1] - lo, minlength=len(comb))
                vals.append(float(np.sum(comb ** 2)) / n ** 1.5)
            vals = np.array(vals)
            ref = quadratic_functional_batch(limit_config, thetas, times)
            ks = ks_two_sample(vals, ref)
            return CheckResult(f"Prop (ii)(b): KS quadratic functional theta={list(thetas)} t={list(times)}",
                               ks.pvalue, f"p > {level}", ks.pvalue > level,
                               {"replicates": replicates, "n": n, "limit_replicates": limit_config.replicates},
                               {"master": seed, "limit": limit_config.seed},
                               details={"D": ks.statistic, "mean_walk": vals.mean(), "mean_limit": ref.mean(),
                                        "min_walk": vals.min()})
        out.append(_timed(run))
    return out


# ---------------------------------------------------------------- limit theorem

def estimate_sigma_inf_sq(model: SceneryModel, seed: int, length: int = 1_000_000, k_max: int = 40) -> float:
    s = _rng.sub_seed(seed, f"sigma-{model.kind}")
    return empirical_covariance(model, k_max, length, _rng.stream(s, 0, _rng.SCENERY)).sigma_inf_sq


def check_fdd_convergence(model: SceneryModel, law: IncrementLaw | None = None, n: int = 4096,
                          replicates: int = 2000, limit_config: LimitConfig | None = None,
                          seed: int = 0, level: float = 0.01, cov_tol: float = 0.15,
                          sigma_sq: float | None = None, delta=None, mandatory: bool = False,
                          threads: int | None = 1) -> list[CheckResult]:
    """KS at t=1 against ``sigma_inf * Delta_1`` and the two-time covariance."""
    law = law or IncrementLaw.simple()
    limit_config = limit_config or LimitConfig(times=(0.5, 1.0), replicates=5000,
                                               seed=_rng.sub_seed(seed, "fdd-limit"))
    t0 = time.perf_counter()
    if sigma_sq is None:
        sigma_sq = estimate_sigma_inf_sq(model, seed)
    if sigma_sq <= 0:
        # sigma_inf enters under a square root and as a scale; zero makes the comparison degenerate
        raise ValueError(f"sigma_inf^2 estimate {sigma_sq:.3g} is not positive: invalid model or lag cap too small")
    if delta is None:
        delta = simulate_delta(limit_config)
    batch = simulate_rwrs(RwrsConfig(law, model, n, (0.5, 1.0), replicates, seed, threads), label="fdd")
    ks = ks_two_sample(batch.normalized[:, 1], math.sqrt(sigma_sq) * delta.values[:, -1])
    sizes = {"n": n, "replicates": replicates, "limit_replicates": delta.values.shape[0]}
    seeds = {"master": seed, "limit": delta.seed}
    elapsed = time.perf_counter() - t0
    a = CheckResult(f"fdd KS at t=1 ({model.kind})", ks.pvalue, f"p > {level}", ks.pvalue > level,
                    sizes, seeds, elapsed, mandatory=mandatory,
                    details={"D": ks.statistic, "sigma_inf_sq": sigma_sq,
                             "var_rwrs": batch.normalized[:, 1].var(ddof=1),
                             "var_limit": sigma_sq * delta.values[:, -1].var(ddof=1)})
    c_rwrs = float(np.cov(batch.raw[:, 0], batch.raw[:, 1])[0, 1] / n ** 1.5)
    ti = list(delta.times)
    c_lim = float(sigma_sq * np.cov(delta.values[:, ti.index(0.5)], delta.values[:, ti.index(1.0)])[0, 1])
    rel = abs(c_rwrs - c_lim) / abs(c_lim)
    b = CheckResult(f"fdd covariance (Sigma_n/2, Sigma_n) ({model.kind})", rel, f"<= {cov_tol}", rel <= cov_tol,
                    sizes, seeds, details={"rwrs": c_rwrs, "limit": c_lim,
                                           "closed_form": sigma_sq * delta_covariance(0.5, 1.0)})
    return [a, b]


def check_fdd_calibration(models: Sequence[SceneryModel], n_seeds: int = 20, required: int = 18,
                          seed: int = 0, n: int = 4096, replicates: int = 2000,
                          limit_replicates: int = 5000, level: float = 0.01,
                          threads: int | None = 1) -> list[CheckResult]:
    """Repeat the t=1 KS acceptance over independent master seeds."""
    t0 = time.perf_counter()
    passes = {m.kind: [] for m in models}
    seeds = [_rng.sub_seed(seed, f"calibration-{k}") for k in range(n_seeds)]
    for s in seeds:
        cfg = LimitConfig(times=(0.5, 1.0), replicates=limit_replicates, seed=_rng.sub_seed(s, "fdd-limit"),
                          threads=threads)
        delta = simulate_delta(cfg)
        for m in models:
            res = check_fdd_convergence(m, n=n, replicates=replicates, limit_config=cfg, seed=s,
                                        level=level, delta=delta, threads=threads)[0]
            passes[m.kind].append(res.statistic)
    elapsed = time.perf_counter() - t0
    out = []
    for m in models:
        p = np.array(passes[m.kind])
        k = int(np.sum(p > level))
        out.append(CheckResult(f"fdd KS level calibration ({m.kind})", float(k), f">= {required}/{n_seeds}",
                               k >= required, {"n": n, "replicates": replicates,
                                               "limit_replicates": limit_replicates, "seeds": n_seeds},
                               {"master": seed, "per_seed": seeds}, elapsed / len(models),
                               details={"pvalues": p}))
    return out


def check_tightness_moment(model: SceneryModel, law: IncrementLaw | None = None, ns=(1024, 4096),
                           grid=(0.25, 0.5, 0.75, 1.0), replicates: int = 1000, seed: int = 0,
                           factor: float = 2.0, threads: int | None = 1) -> CheckResult:
    """``E|Sigma_[nt] - Sigma_[nt1]|^2 / (n^1.5 (t - t1)^1.5)`` over all grid pairs."""
    law = law or IncrementLaw.simple()

    def run():
        pairs = [(grid[a], grid[b]) for a in range(len(grid)) for b in range(a + 1, len(grid))]
        per_n, tables = [], []
        for n in ns:
            b = simulate_rwrs(RwrsConfig(law, model, n, tuple(grid), replicates, seed, threads),
                              label=f"tightness-{n}")
            tbl = []
            for t1, t in pairs:
                j1, j = grid.index(t1), grid.index(t)
                m2 = float(np.mean((b.raw[:, j] - b.raw[:, j1]) ** 2))
                tbl.append(m2 / (n ** 1.5 * (t - t1) ** 1.5))
            tables.append(tbl)
            per_n.append(max(tbl))
        ratio = max(per_n) / min(per_n)
        ok = bool(np.all(np.isfinite(per_n))) and ratio <= factor
        return CheckResult(f"tightness moment ratio ({model.kind})", ratio, f"max/min over n <= {factor}", ok,
                           {"replicates": replicates, "n_grid": list(ns), "pairs": len(pairs)},
                           {"master": seed}, details={"max_by_n": per_n, "ratios": tables, "pairs": pairs})
    return _timed(run)


# ---------------------------------------------------------------- decay assumption

def check_a2_suite() -> list[CheckResult]:
    cases = [
        ("geometric C=1 rho=0.5, eps=0.5", DecayBound.geometric(1.0, 0.5), 0.5, True),
        ("geometric from linear process rho=0.5, eps=0.5", theta_bound(LinearProcess("geometric", 0.5)), 0.5, True),
        ("geometric from doubling map, eps=0.5", theta_bound(DoublingMap()), 0.5, True),
        ("polynomial a=2", DecayBound.polynomial(1.0, 2.0), None, True),
        ("polynomial a=1.6", DecayBound.polynomial(1.0, 1.6), None, True),
        ("polynomial a=1", DecayBound.polynomial(1.0, 1.0), None, False),
    ]
    out = []
    for name, g, eps, expected in cases:
        rep = check_A2(g, eps) if eps is not None else a2_verdict(g)
        out.append(CheckResult(f"A2 verdict: {name}", float(rep.verdict), f"verdict == {expected}",
                               rep.verdict == expected, {}, {}, details=rep.to_dict()))
    return out


# ---------------------------------------------------------------- suite

def run_suite(seed: int = 0, quick: bool = True, threads: int | None = 1) -> VerificationReport:
    """Mandatory checks (always) plus the full statistical battery unless ``quick``."""
    law = IncrementLaw.simple()
    checks: list[CheckResult] = []
    checks.append(check_exact_identities(law, seed=_rng.sub_seed(seed, "identities"),
                                         replicates=10 if quick else 50))
    checks.append(check_second_moment_exact(law, n_max=6 if quick else 8))
    checks.append(check_occupation_conservation(
        LimitConfig(times=(0.25, 0.5, 1.0), replicates=20 if quick else 100,
                    seed=_rng.sub_seed(seed, "occupation"), threads=threads)))
    if quick:
        checks.append(check_variance_scaling(law, IID(), ns=(256, 1024, 4096), replicates=800,
                                             seed=_rng.sub_seed(seed, "scaling-iid"), mandatory=True,
                                             threads=threads))
        cfg = LimitConfig(dt=4e-4, h=2e-2, times=(0.5, 1.0), replicates=2000,
                          seed=_rng.sub_seed(seed, "fdd-limit"), threads=threads)
        checks.extend(check_fdd_convergence(IID(), law, n=1024, replicates=1000, limit_config=cfg,
                                            seed=_rng.sub_seed(seed, "fdd-iid"), sigma_sq=1.0,
                                            mandatory=True, threads=threads)[:1])
        return VerificationReport(checks, {"seed": seed, "quick": quick})

    models = [IID(), LinearProcess("geometric", 0.5), DoublingMap("x-1/2")]
    checks.extend(check_sigma_closed_forms(_rng.sub_seed(seed, "sigma")))
    checks.extend(check_brownian_constant(LimitConfig(replicates=5000, seed=_rng.sub_seed(seed, "bm"),
                                                      threads=threads)))
    checks.append(check_self_similarity(LimitConfig(times=(0.25, 0.5, 1.0), replicates=5000,
                                                    seed=_rng.sub_seed(seed, "selfsim"), threads=threads)))
    for m in models:
        checks.append(check_variance_scaling(law, m, seed=_rng.sub_seed(seed, f"scaling-{m.kind}"),
                                             mandatory=True, threads=threads))
    lim = LimitConfig(times=(0.5, 1.0), replicates=5000, seed=_rng.sub_seed(seed, "fdd-limit"), threads=threads)
    delta = simulate_delta(lim)
    for m in models:
        res = check_fdd_convergence(m, law, limit_config=lim, delta=delta,
                                    seed=_rng.sub_seed(seed, f"fdd-{m.kind}"), threads=threads)
        res[0].mandatory = m.kind == "iid"
        checks.extend(res)
    checks.extend(check_prop_local_time(law, seed=_rng.sub_seed(seed, "prop41")))
    checks.extend(check_quadratic_functional(law, seed=_rng.sub_seed(seed, "quadratic")))
    for m in models:
        checks.append(check_tightness_moment(m, law, seed=_rng.sub_seed(seed, f"tight-{m.kind}"),
                                             threads=threads))
    checks.extend(check_a2_suite())
    return VerificationReport(checks, {"seed": seed, "quick": quick})
