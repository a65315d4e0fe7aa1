"""Command-line front end.

    rwrs-lab simulate-rwrs --model ar1 --rho 0.5 --n 4096 --replicates 2000 --seed 7
    rwrs-lab simulate-limit --replicates 5000 --times 0.5,1
    rwrs-lab local-time --n 10000 --seed 3
    rwrs-lab dependence --family polynomial --a 1.0
    rwrs-lab verify --quick --seed 42
    rwrs-lab export --what scenery --model doubling --left -50 --right 50

Options may also come from a JSON document (``--config file.json``); flags
given on the command line override it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, _rng, export
from .dependence import DecayBound, a2_verdict, theta_bound, weighted_cov_sum
from .limit import LimitConfig, simulate_bm_local_time, simulate_delta
from .rwrs import RwrsConfig, simulate_rwrs
from .scenery import IID, DoublingMap, IteratedFunction, LinearProcess, empirical_covariance
from .verify import run_suite
from .walk import (IncrementLaw, check_property_P, local_time, max_local_time,
                   sample_walk, self_intersection_table)

OUTPUT_ENV = "RWRS_LAB_OUTPUT"

SCENERY_DEFAULTS = {
    "model": "iid", "dist": "normal", "rho": 0.5, "coef_rule": "geometric", "kappa": 0.5,
    "map": "linear", "innovation": "normal", "scale": 1.0, "observable": "x-1/2", "bits": 53,
}

DEFAULTS = {
    "simulate-rwrs": {**SCENERY_DEFAULTS, "law": "simple", "n": 1024, "times": "1.0",
                      "replicates": 1000, "seed": 0, "format": "csv"},
    "simulate-limit": {"dt": 1e-4, "h": 1e-2, "T": 1.0, "times": "1.0", "replicates": 5000,
                       "seed": 0, "format": "csv", "field": False},
    "local-time": {"law": "simple", "n": 10_000, "seed": 0, "format": "csv", "q_max": 10,
                   "reach_bound": 20},
    "dependence": {**SCENERY_DEFAULTS, "model": None, "family": "geometric", "C": 1.0, "a": 2.0,
                   "epsilon": None, "lam": None, "K": 50, "seed": 0},
    "verify": {"quick": False, "seed": 0},
    "export": {**SCENERY_DEFAULTS, "what": "scenery", "left": -100, "right": 100, "seed": 0,
               "k_max": 40, "length": 100_000},
}


class ConfigError(ValueError):
    pass


def parse_law(spec: str) -> IncrementLaw:
    if spec == "simple":
        return IncrementLaw.simple()
    try:
        atoms = [(int(s), float(p)) for s, p in (item.split(":") for item in spec.split(","))]
    except ValueError as exc:
        raise ConfigError(f"cannot parse step law {spec!r}; use 'simple' or 'step:prob,...'") from exc
    return IncrementLaw.from_atoms(atoms)


def parse_times(spec) -> tuple[float, ...]:
    if isinstance(spec, (list, tuple)):
        return tuple(float(t) for t in spec)
    return tuple(float(t) for t in str(spec).split(","))


def build_model(o: dict):
    kind = o["model"]
    if kind == "iid":
        return IID(o["dist"], o["scale"])
    if kind == "ar1":
        return LinearProcess("geometric", o["rho"], o["innovation"], o["scale"])
    if kind == "linear":
        return LinearProcess(o["coef_rule"], o["rho"], o["innovation"], o["scale"])
    if kind == "iterated":
        return IteratedFunction(o["kappa"], o["map"], o["innovation"], o["scale"])
    if kind == "doubling":
        return DoublingMap(o["observable"], o["bits"], o["rho"])
    raise ConfigError(f"unknown model {kind!r}")


def _scenery_flags(p):
    p.add_argument("--model", choices=["iid", "ar1", "linear", "iterated", "doubling"])
    p.add_argument("--dist", help="iid marginal: normal, uniform, rademacher")
    p.add_argument("--rho", type=float, help="ar1/linear coefficient rate; doubling-map decay rate")
    p.add_argument("--coef-rule", dest="coef_rule", choices=["geometric", "polynomial"])
    p.add_argument("--kappa", type=float)
    p.add_argument("--map", choices=["linear", "tanh"])
    p.add_argument("--innovation")
    p.add_argument("--scale", type=float)
    p.add_argument("--observable", choices=["x-1/2", "cos"])
    p.add_argument("--bits", type=int)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rwrs-lab", argument_default=argparse.SUPPRESS,
                                 description="Random walks in weakly dependent random scenery")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON document with option values")
        p.add_argument("--out-dir", dest="out_dir", help=f"output directory (default ${OUTPUT_ENV} or ./rwrs_output)")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, help="worker threads; results do not depend on it")

    p = sub.add_parser("simulate-rwrs", argument_default=argparse.SUPPRESS, help="Monte Carlo batch of n^-3/4 Sigma_[nt]")
    common(p)
    _scenery_flags(p)
    p.add_argument("--law")
    p.add_argument("--n", type=int)
    p.add_argument("--times")
    p.add_argument("--replicates", type=int)
    p.add_argument("--format", choices=["csv", "json"])

    p = sub.add_parser("simulate-limit", argument_default=argparse.SUPPRESS, help="samples of the limit process Delta_t")
    common(p)
    p.add_argument("--dt", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--times")
    p.add_argument("--replicates", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--field", action="store_true", help="also export replicate 0's local-time field")

    p = sub.add_parser("local-time", argument_default=argparse.SUPPRESS, help="local time profile and alpha table of one walk")
    common(p)
    p.add_argument("--law")
    p.add_argument("--n", type=int)
    p.add_argument("--q-max", dest="q_max", type=int)
    p.add_argument("--reach-bound", dest="reach_bound", type=int)
    p.add_argument("--format", choices=["csv", "json"])

    p = sub.add_parser("dependence", argument_default=argparse.SUPPRESS, help="decay bound and assumption verdict")
    common(p)
    _scenery_flags(p)
    p.add_argument("--family", choices=["geometric", "polynomial"])
    p.add_argument("--C", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--lambda", dest="lam", type=float, help="weighted covariance sum exponent (needs --model)")
    p.add_argument("--K", type=int)

    p = sub.add_parser("verify", argument_default=argparse.SUPPRESS, help="run the verification suite")
    common(p)
    p.add_argument("--quick", action="store_true", help="mandatory checks only, reduced sizes")

    p = sub.add_parser("export", argument_default=argparse.SUPPRESS, help="scenery windows, model and covariance documents")
    common(p)
    _scenery_flags(p)
    p.add_argument("--what", choices=["scenery", "model", "covariance"])
    p.add_argument("--left", type=int)
    p.add_argument("--right", type=int)
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--length", type=int)
    return ap


def resolve(ns: argparse.Namespace) -> dict:
    """Defaults, then the --config document, then explicit flags."""
    flags = vars(ns).copy()
    cmd = flags.pop("command")
    opts = dict(DEFAULTS[cmd])
    opts.update({"threads": None, "out_dir": os.environ.get(OUTPUT_ENV, "rwrs_output")})
    cfg = flags.pop("config", None)
    if cfg:
        try:
            doc = json.loads(Path(cfg).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {cfg}: {exc}") from exc
        # documents echoed into output metadata carry the subcommand name
        if doc.pop("command", cmd) != cmd:
            raise ConfigError(f"config document is for a different subcommand than {cmd!r}")
        unknown = set(doc) - set(opts)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        opts.update(doc)
    opts.update(flags)
    opts["command"] = cmd
    return opts


def _echo(opts: dict) -> dict:
    return {k: v for k, v in sorted(opts.items()) if k not in ("out_dir", "threads", "config")}


def cmd_simulate_rwrs(o: dict) -> int:
    law, model = parse_law(o["law"]), build_model(o)
    cfg = RwrsConfig(law, model, int(o["n"]), parse_times(o["times"]), int(o["replicates"]),
                     int(o["seed"]), o["threads"])
    batch = simulate_rwrs(cfg)
    out = Path(o["out_dir"])
    meta = {"config": _echo(o), "seed": cfg.seed}
    summary = {**batch.summary(), "config": _echo(o), "property_p": cfg.property_p.to_dict()}
    if o["format"] == "csv":
        path = export.write_csv(out / "rwrs_batch.csv", "rwrs-batch", meta,
                                ["replicate", "t", "raw", "normalized"], export.batch_rows(batch))
    else:
        path = export.write_json(out / "rwrs_batch.json", {**meta, "times": batch.times, "steps": batch.steps,
                                                           "raw": batch.raw, "normalized": batch.normalized})
    export.write_json(out / "rwrs_summary.json", summary)
    print(f"simulate-rwrs seed={cfg.seed} n={cfg.n} replicates={cfg.replicates} model={model.kind}")
    for row in summary["by_time"]:
        print(f"  t={row['t']:.4g}  mean={row['mean']:+.4f}  var={row['variance']:.4f}")
    print(f"  wrote {path}")
    return 0


def cmd_simulate_limit(o: dict) -> int:
    cfg = LimitConfig(float(o["dt"]), float(o["h"]), float(o["T"]), parse_times(o["times"]),
                      int(o["replicates"]), int(o["seed"]), o["threads"])
    delta = simulate_delta(cfg)
    out = Path(o["out_dir"])
    meta = {"config": _echo(o), "seed": cfg.seed}
    if o["format"] == "csv":
        path = export.write_csv(out / "delta_batch.csv", "delta-batch", meta, ["replicate", "t", "delta"],
                                export.delta_rows(delta))
    else:
        path = export.write_json(out / "delta_batch.json", {**meta, "times": delta.times, "values": delta.values})
    if o["field"]:
        f = simulate_bm_local_time(cfg, index=0)
        export.write_csv(out / "local_time_field.csv", "local-time-field", meta, ["t", "x", "L"],
                         export.field_rows(f))
    print(f"simulate-limit seed={cfg.seed} replicates={cfg.replicates} dt={cfg.dt} h={cfg.h}")
    for j, t in enumerate(delta.times):
        col = delta.values[:, j]
        print(f"  t={t:.4g}  var={col.var(ddof=1):.4f}  var/t^1.5={col.var(ddof=1) / t ** 1.5:.4f}")
    print(f"  wrote {path}")
    return 0


def cmd_local_time(o: dict) -> int:
    law = parse_law(o["law"])
    seed = int(o["seed"])
    rep = check_property_P(law, int(o["q_max"]), int(o["reach_bound"]))
    path = sample_walk(law, int(o["n"]), _rng.stream(seed, 0, _rng.WALK, "cli-local-time"))
    prof = local_time(path)
    lags, alpha = self_intersection_table(prof)
    out = Path(o["out_dir"])
    meta = {"config": _echo(o), "seed": seed}
    if o["format"] == "csv":
        export.write_csv(out / "local_time.csv", "local-time", meta, ["site", "count"], export.profile_rows(prof))
        export.write_csv(out / "alpha.csv", "self-intersection", meta, ["site", "count"],
                         export.alpha_rows(lags, alpha))
    else:
        export.write_json(out / "local_time.json", {**meta, "left": prof.left, "counts": prof.counts.tolist(),
                                                    "alpha_lags": lags.tolist(), "alpha": alpha.tolist()})
    print(f"local-time seed={seed} n={path.n} property(P)={rep.status} witness_q={rep.witness_q}")
    print(f"  range=[{prof.left}, {prof.right}] max N={max_local_time(prof)} alpha(n,0)={alpha[len(alpha) // 2]}")
    return 0


def cmd_dependence(o: dict) -> int:
    doc = {"config": _echo(o)}
    if o["model"]:
        model = build_model(o)
        g = theta_bound(model, np.random.default_rng(int(o["seed"])))
        if o["lam"] is not None:
            doc["weighted_cov_sum"] = weighted_cov_sum(model, float(o["lam"]), int(o["K"]),
                                                       np.random.default_rng(int(o["seed"]))).to_dict()
    elif o["family"] == "geometric":
        g = DecayBound.geometric(float(o["C"]), float(o["rho"]), "command line")
    else:
        g = DecayBound.polynomial(float(o["C"]), float(o["a"]), "command line")
    rep = a2_verdict(g, None if o["epsilon"] is None else float(o["epsilon"]))
    doc.update(rep.to_dict())
    text = json.dumps(export.jsonable(doc), indent=2, sort_keys=True)
    print(text)
    export.write_json(Path(o["out_dir"]) / "dependence.json", export.jsonable(doc))
    return 0


def cmd_verify(o: dict) -> int:
    report = run_suite(int(o["seed"]), bool(o["quick"]), o["threads"])
    out = Path(o["out_dir"])
    doc = report.to_dict()
    doc["config"] = _echo(o)
    export.write_json(out / "verification.json", doc)
    (out / "verification.txt").write_text(report.to_text() + "\n")
    print(report.to_text())
    return 0 if report.overall else 1


def cmd_export(o: dict) -> int:
    model = build_model(o)
    out = Path(o["out_dir"])
    seed = int(o["seed"])
    meta = {"config": _echo(o), "seed": seed}
    if o["what"] == "model":
        path = export.write_json(out / "model.json", model.to_dict())
    elif o["what"] == "scenery":
        w = model.sample(int(o["left"]), int(o["right"]), _rng.stream(seed, 0, _rng.SCENERY, "cli-export"))
        path = export.write_csv(out / "scenery.csv", "scenery-window", meta, ["site", "value"],
                                export.scenery_rows(w))
    else:
        cov = empirical_covariance(model, int(o["k_max"]), int(o["length"]),
                                   _rng.stream(seed, 0, _rng.SCENERY, "cli-covariance"))
        analytic = [model.covariance(k) for k in range(int(o["k_max"]) + 1)]
        path = export.write_json(out / "covariance.json", export.jsonable({**meta, **cov.to_dict(), "analytic": analytic}))
    print(f"export {o['what']} model={model.kind} seed={seed} -> {path}")
    return 0


COMMANDS = {
    "simulate-rwrs": cmd_simulate_rwrs,
    "simulate-limit": cmd_simulate_limit,
    "local-time": cmd_local_time,
    "dependence": cmd_dependence,
    "verify": cmd_verify,
    "export": cmd_export,
}


def run(argv=None) -> int:
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = resolve(ns)
        return COMMANDS[opts["command"]](opts)
    except (ValueError, KeyError, TypeError) as exc:
        # ConfigError, InvalidLaw and SceneryError are ValueErrors
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
