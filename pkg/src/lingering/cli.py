"""Command-line driver: ``lingering {simulate,sweep-alpha,verify,trace}``.

Each command reads an optional JSON config (``--config``), lets ``--seed``,
``--workers`` and ``--out`` override it, and writes its artifacts plus a
``run.json`` sidecar into the output directory.  Exit codes: 0 success,
1 a check or sweep point failed, 2 bad configuration, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from . import oracles
from .distributions import DistributionSpec, ParameterError, RngStream, derive_stream_id
from .distributions import geometric_xi_for_load, point_mass
from .estimators import (EstimationError, NotTransientError, growth_rate, lingering_stats,
                         scaling_F, stationary_mean)
from .model import DivergedCycleError, ModelParams, SystemState, simulate_chain, trace_cycles
from .regression import WINDOW_MODES, SweepFailure, default_rho_grid, sweep_alpha, warm_start

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INCONCLUSIVE = 0, 1, 2, 3

log = logging.getLogger("lingering")


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "model": {"R": 2, "beta": 2.0, "rho": 0.99, "xi": None, "zeta": {"kind": "point_mass", "c": 1},
              "instant_empty_switch": True},
    "run": {"seed": None, "workers": 1, "n_epochs": 20_000, "burn_in": None, "n_batches": 30,
            "initial": "empty", "stop_above": None, "min_level": None, "full": True},
    "sweep": {"rho_grid": None, "x_min": 2.0, "x_max": 5.3, "n_points": 10, "n_epochs": 20_000,
              "burn_in_fraction": 0.2, "window": "auto"},
    "verify": {"checks": None},
    "trace": {"n_cycles": 10, "initial": "warm", "max_rows": 5_000_000},
}


# ----------------------------------------------------------------- config


def load_config(path: str | None) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    try:
        user = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(user, dict):
        raise ConfigError(f"{path}: top level must be an object")
    for section, body in user.items():
        if section not in cfg:
            raise ConfigError(f"{path}: unknown section {section!r} (expected one of {sorted(cfg)})")
        if not isinstance(body, dict):
            raise ConfigError(f"{path}: section {section!r} must be an object")
        for key, value in body.items():
            if key not in cfg[section]:
                raise ConfigError(f"{path}: unknown key {section}.{key}")
            cfg[section][key] = value
    return cfg


def _number(cfg, section, key, kind=float, positive=False, allow_none=False):
    v = cfg[section][key]
    if v is None and allow_none:
        return None
    try:
        if kind is int and (isinstance(v, bool) or float(v) != int(v)):
            raise ValueError
        out = kind(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}: expected {kind.__name__}, got {v!r}") from None
    if positive and not out > 0:
        raise ConfigError(f"{section}.{key}: must be positive, got {v!r}")
    return out


def build_params(cfg: dict, rho: float | None = None) -> ModelParams:
    m = cfg["model"]
    beta = m["beta"]
    if isinstance(beta, str):
        if beta.lower() not in ("inf", "infinity"):
            raise ConfigError(f"model.beta: expected a number or \"inf\", got {beta!r}")
        beta = math.inf
    try:
        if m["xi"] is not None and rho is None:
            xi = DistributionSpec.from_record(m["xi"])
        else:
            xi = geometric_xi_for_load(float(m["rho"] if rho is None else rho))
        zeta = DistributionSpec.from_record(m["zeta"]) if m["zeta"] is not None else point_mass(1)
        instant = m["instant_empty_switch"]
        if not isinstance(instant, bool):
            raise ConfigError(f"model.instant_empty_switch: expected true or false, got {instant!r}")
        return ModelParams(R=_number(cfg, "model", "R", int), beta=float(beta), xi=xi, zeta=zeta,
                           instant_empty_switch=instant)
    except (ParameterError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"model: {exc}") from exc


def _initial_state(spec, params: ModelParams, where: str) -> SystemState:
    if spec == "empty":
        return SystemState.empty(params.R)
    if spec == "warm":
        return warm_start(params)
    if isinstance(spec, dict) and set(spec) == {"active", "inactive"}:
        try:
            state = SystemState(tuple(spec["active"]), tuple(spec["inactive"]))
        except (ParameterError, TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        if len(state.active) != params.R:
            raise ConfigError(f"{where}: expected {params.R} queue lengths per group")
        return state
    raise ConfigError(f"{where}: expected \"empty\", \"warm\" or {{\"active\": [...], \"inactive\": [...]}}")


def _echo(cfg: dict) -> dict:
    """Config as echoed into outputs; the worker count never changes results, so it is left out."""
    out = copy.deepcopy(cfg)
    out["run"].pop("workers", None)
    return out


# ----------------------------------------------------------------- output


def _json_dump(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def _write_csv(path: Path, header_lines: list[str], columns: list[str], rows):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    path.write_text(buf.getvalue())


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _header(command: str, cfg: dict, seed: int) -> list[str]:
    return [f"schema_version: {SCHEMA_VERSION}", f"command: {command}", f"seed: {seed}",
            "config: " + json.dumps(_clean(_echo(cfg)), sort_keys=True)]


def _sidecar(out: Path, command: str, cfg: dict, seed: int, status: str, files: list[str]):
    _json_dump({"schema_version": SCHEMA_VERSION, "command": command, "seed": seed,
                "config": _clean(_echo(cfg)), "status": status, "files": files}, out / "run.json")


# --------------------------------------------------------------- commands


def cmd_simulate(cfg: dict, seed: int, out: Path) -> int:
    params = build_params(cfg)
    run = cfg["run"]
    n = _number(cfg, "run", "n_epochs", int, positive=True)
    burn_in = _number(cfg, "run", "burn_in", int, allow_none=True)
    n_batches = _number(cfg, "run", "n_batches", int, positive=True)
    stop_above = _number(cfg, "run", "stop_above", int, allow_none=True)
    if stop_above is None and params.rho >= 1:
        stop_above = 10**7
    q0 = _initial_state(run["initial"], params, "run.initial")
    stream = RngStream(seed, derive_stream_id("simulate"))
    full = bool(run["full"])
    try:
        chain = simulate_chain(q0, n, params, stream, full=full, stop_above=stop_above)
    except DivergedCycleError as exc:
        raise ConfigError(f"run: {exc}; lower rho or set run.stop_above") from exc
    rows = [(0, int(chain.norms[0]), "", "")]
    rows += [(k + 1, int(chain.norms[k + 1]), int(chain.t_star[k]), int(chain.tau_max[k]))
             for k in range(chain.n_epochs)]
    _write_csv(out / "trajectory.csv", _header("simulate", cfg, seed),
               ["epoch", "norm", "t_star", "tau_max"], rows)
    summary = {"schema_version": SCHEMA_VERSION, "seed": seed, "rho": params.rho,
               "beta": "inf" if params.infinite_beta else params.beta, "R": params.R,
               "n_epochs": chain.n_epochs, "stopped_early": chain.stopped,
               "stationary_mean": None, "F": None, "growth_rate": None, "lingering": None}
    status = "ok"
    if params.rho < 1:
        try:
            est = stationary_mean(chain.norms, burn_in=burn_in, n_batches=n_batches)
            summary["stationary_mean"] = {"mean": est.mean, "ci_half_width": est.ci_half_width,
                                          "n_epochs": est.n_epochs, "burn_in": est.burn_in}
            if est.mean > 0:
                summary["F"] = scaling_F(est.mean, params.rho)
        except EstimationError as exc:
            summary["stationary_mean_error"] = str(exc)
            status = "failed"
    else:
        min_level = _number(cfg, "run", "min_level", float, allow_none=True)
        try:
            summary["growth_rate"] = growth_rate(chain.norms, min_level=min_level)
        except (NotTransientError, EstimationError) as exc:
            summary["growth_rate_error"] = str(exc)
            status = "failed"
    if full and chain.n_epochs:
        try:
            st = lingering_stats(chain)
            summary["lingering"] = {k: getattr(st, k) for k in st.__dataclass_fields__}
        except EstimationError:
            pass
    _json_dump(_clean(summary), out / "summary.json")
    _sidecar(out, "simulate", cfg, seed, status, ["trajectory.csv", "summary.json"])
    return EXIT_OK if status == "ok" else EXIT_FAIL


def cmd_sweep_alpha(cfg: dict, seed: int, out: Path, workers: int) -> int:
    params = build_params(cfg)
    sw = cfg["sweep"]
    if sw["rho_grid"] is not None:
        grid = np.asarray(sw["rho_grid"], dtype=float)
    else:
        grid = default_rho_grid(_number(cfg, "sweep", "n_points", int, positive=True),
                                _number(cfg, "sweep", "x_min"), _number(cfg, "sweep", "x_max"))
    if sw["window"] not in WINDOW_MODES:
        raise ConfigError(f"sweep.window: expected one of {WINDOW_MODES}, got {sw['window']!r}")
    budget = sw["n_epochs"]
    try:
        points, result = sweep_alpha(
            params.beta, rho_grid=grid, R=params.R, n_epochs=budget, seed=seed, workers=workers,
            params_base=params, burn_in_fraction=_number(cfg, "sweep", "burn_in_fraction"),
            n_batches=_number(cfg, "run", "n_batches", int, positive=True),
            window=sw["window"], on_error="record")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    rows = [(_fmt(p.rho), _fmt(p.x), _fmt(p.F), _fmt(p.mean), _fmt(p.ci), p.n_epochs)
            for p in points if not isinstance(p, SweepFailure)]
    _write_csv(out / "sweep.csv", _header("sweep-alpha", cfg, seed),
               ["rho", "x", "F", "mean", "ci", "n_epochs"], rows)
    failures = [{"rho": p.rho, "error": p.error} for p in points if isinstance(p, SweepFailure)]
    record = {"schema_version": SCHEMA_VERSION, "seed": seed, "R": params.R,
              "beta": "inf" if params.infinite_beta else params.beta, "window": sw["window"],
              "alpha_hat": None, "log_c_hat": None, "window_start": None, "rss": None,
              "n_points": None, "failures": failures}
    if result is not None:
        record.update(result.to_record())
    _json_dump(_clean(record), out / "result.json")
    ok = result is not None and not failures
    _sidecar(out, "sweep-alpha", cfg, seed, "ok" if ok else "failed", ["sweep.csv", "result.json"])
    return EXIT_OK if ok else EXIT_FAIL


# Default verification suite; each entry is a check name plus its budget.
DEFAULT_CHECKS = [
    {"name": "bound_max", "instances": 100, "n_samples": 10_000},
    {"name": "bound_max_sqrt", "instances": 20, "n_samples": 10_000},
    {"name": "tstar_gap", "rho": 0.5, "grid": [[100, 100], [1000, 1000], [10000, 10000]], "n_samples": 2000},
    {"name": "tstar_gap", "rho": 0.9, "grid": [[100, 100], [1000, 1000], [10000, 10000]], "n_samples": 2000},
    {"name": "hitting_time_mean", "rho": 0.9, "a": [1, 10, 100], "n_samples": 20_000},
    {"name": "release_count", "beta": 2.0, "horizon": 1000, "n_samples": 20_000},
    {"name": "tail_B", "beta": 2.0, "horizon": 4000, "n_samples": 50_000, "tolerance": 0.3},
    {"name": "a_scaling", "beta": 1.2, "rho": 0.99, "a1": [100, 1000, 10000], "n_samples": 2000,
     "target": 0.4, "tolerance": 0.15},
]

_CHECK_KEYS = {
    "bound_max": {"instances", "n_samples", "x", "walk"},
    "bound_max_sqrt": {"instances", "n_samples", "x", "walk"},
    "tstar_gap": {"rho", "grid", "n_samples"},
    "hitting_time_mean": {"rho", "a", "n_samples"},
    "release_count": {"beta", "horizon", "n_samples", "tolerance"},
    "tail_B": {"beta", "horizon", "n_samples", "tolerance", "method"},
    "a_scaling": {"beta", "rho", "a1", "n_samples", "target", "tolerance"},
    "drift": {"beta", "rho", "a", "n_samples"},
}


def _random_walk_instance(g: np.random.Generator, non_negative: bool):
    """A random (x, WalkSpec) pair for the property-style bound checks."""
    R = int(g.integers(1, 5))
    x = g.integers(0, 2001, size=R)
    if non_negative:
        x[0] = max(x[0], 1)
    choice = int(g.integers(0, 5))
    if choice == 0:
        spec = oracles.WalkSpec.from_distribution(DistributionSpec("geometric", (float(g.uniform(0.2, 1.0)),)))
    elif choice == 1:
        spec = oracles.WalkSpec.from_distribution(DistributionSpec("poisson", (float(g.uniform(0.05, 3.0)),)))
    elif choice == 2:
        spec = oracles.WalkSpec.from_distribution(
            DistributionSpec("bernoulli", (float(g.uniform(0, 1)), int(g.integers(1, 5)))))
    elif choice == 3:
        spec = oracles.WalkSpec.from_distribution(point_mass(int(g.integers(0, 4))))
    else:
        spec = oracles.WalkSpec.hitting_time(geometric_xi_for_load(float(g.uniform(0.1, 1.8))))
    if non_negative and not spec.step_mean > 0:
        spec = oracles.WalkSpec.from_distribution(point_mass(1))
    return x, spec


def _walk_from_record(rec: dict) -> "oracles.WalkSpec":
    rec = dict(rec)
    mode = rec.pop("mode", "direct")
    gen = DistributionSpec.from_record(rec.pop("generator"))
    if mode == "hitting_time":
        return oracles.WalkSpec.hitting_time(gen)
    return oracles.WalkSpec.from_distribution(gen, shift=int(rec.pop("shift", 0)), sign=int(rec.pop("sign", 1)))


def _run_check(entry: dict, seed: int, index: int, base: ModelParams) -> list[dict]:
    name = entry["name"]
    stream = RngStream(seed, derive_stream_id("verify", index))
    p = {k: v for k, v in entry.items() if k != "name"}

    def model(rho, beta):
        return ModelParams.standard(float(rho), beta=float(beta), R=base.R,
                                    instant_empty_switch=base.instant_empty_switch)

    if name in ("bound_max", "bound_max_sqrt"):
        fn = oracles.verify_bound_max if name == "bound_max" else oracles.verify_bound_max_sqrt
        n = int(p.get("n_samples", 10_000))
        if "x" in p:
            spec = _walk_from_record(p["walk"])
            return [fn(p["x"], spec, n, stream).to_record()]
        g = stream.spawn("instances").generator
        out = []
        for i in range(int(p.get("instances", 1))):
            x, spec = _random_walk_instance(g, name == "bound_max_sqrt")
            out.append(fn(x, spec, n, stream.spawn("instance", i)).to_record())
        return out
    if name == "tstar_gap":
        params = model(p.get("rho", 0.9), math.inf)
        return [oracles.verify_tstar_gap(p.get("grid"), params, int(p.get("n_samples", 2000)), stream).to_record()]
    if name == "hitting_time_mean":
        params = model(p.get("rho", 0.9), math.inf)
        return [oracles.verify_hitting_time_mean(int(a), params, int(p.get("n_samples", 20_000)),
                                                 stream.spawn("a", int(a))).to_record()
                for a in p.get("a", [1, 10, 100])]
    if name == "release_count":
        beta = float(p.get("beta", 2.0))
        rc = oracles.release_count_distribution(beta, int(p.get("horizon", 1000)), int(p.get("n_samples", 20_000)),
                                                stream, tolerance=float(p.get("tolerance", 0.01)))
        decreasing = bool(np.all(np.diff(rc.tail) <= 0))
        positive = rc.p_zero - oracles.GUARD * rc.p_zero_stderr > 0
        verdict = oracles.INCONCLUSIVE if rc.inconclusive else (
            oracles.PASS if positive and decreasing else oracles.FAIL)
        return [oracles.CheckResult("release_count", dict(p, beta=beta), rc.p_zero, 0.0, rc.p_zero_stderr,
                                    verdict).to_record()]
    if name == "tail_B":
        beta = float(p.get("beta", 2.0))
        est = oracles.tail_exponent_B(beta, int(p.get("horizon", 4000)), int(p.get("n_samples", 50_000)),
                                      stream, method=p.get("method", "pmf"))
        tol = float(p.get("tolerance", 0.3))
        verdict = oracles.PASS if abs(est.exponent_hat - beta) <= tol else oracles.FAIL
        return [oracles.CheckResult("tail_B", dict(p, beta=beta), est.exponent_hat, beta, est.stderr,
                                    verdict).to_record()]
    if name == "a_scaling":
        beta = float(p.get("beta", 1.2))
        est = oracles.scaling_of_A_at_Tstar(beta, p.get("a1", [100, 1000, 10000]), int(p.get("n_samples", 2000)),
                                            stream, params=model(p.get("rho", 0.99), beta))
        target, tol = float(p.get("target", 0.4)), float(p.get("tolerance", 0.15))
        if est.degenerate:
            verdict = oracles.INCONCLUSIVE
        else:
            verdict = oracles.PASS if abs(est.slope - target) <= tol else oracles.FAIL
        return [oracles.CheckResult("a_scaling", dict(p, beta=beta), est.slope, target, est.stderr,
                                    verdict).to_record()]
    if name == "drift":
        params = model(p.get("rho", 0.9), p.get("beta", 0.3))
        est = oracles.estimate_drift(int(p.get("a", 1000)), params, int(p.get("n_samples", 10**6)), stream)
        verdict = oracles.PASS if abs(est.drift - est.heuristic) <= oracles.GUARD * est.stderr else oracles.FAIL
        return [oracles.CheckResult("drift", p, est.drift, est.heuristic, est.stderr, verdict).to_record()]
    raise ConfigError(f"verify: unknown check {name!r}")


def _validate_checks(checks) -> list[dict]:
    if not isinstance(checks, list) or not checks:
        raise ConfigError("verify.checks: expected a non-empty list")
    for i, entry in enumerate(checks):
        if not isinstance(entry, dict) or "name" not in entry:
            raise ConfigError(f"verify.checks[{i}]: expected an object with a \"name\"")
        allowed = _CHECK_KEYS.get(entry["name"])
        if allowed is None:
            raise ConfigError(f"verify.checks[{i}]: unknown check {entry['name']!r} "
                              f"(known: {', '.join(sorted(_CHECK_KEYS))})")
        extra = set(entry) - allowed - {"name"}
        if extra:
            raise ConfigError(f"verify.checks[{i}]: unknown keys {sorted(extra)} for {entry['name']}")
    return checks


def cmd_verify(cfg: dict, seed: int, out: Path, workers: int) -> int:
    base = build_params(cfg)
    checks = _validate_checks(cfg["verify"]["checks"] if cfg["verify"]["checks"] is not None
                              else DEFAULT_CHECKS)
    cfg = copy.deepcopy(cfg)
    cfg["verify"]["checks"] = checks
    tasks = [delayed(_run_check)(entry, seed, i, base) for i, entry in enumerate(checks)]
    try:
        if workers == 1:
            results = [fn(*a, **kw) for fn, a, kw in tasks]
        else:
            results = Parallel(n_jobs=workers)(tasks)
    except (ParameterError, TypeError, KeyError) as exc:
        raise ConfigError(f"verify: {exc}") from exc
    records = []
    for group in results:
        for rec in group:
            rec["schema_version"] = SCHEMA_VERSION
            records.append(_clean(rec))
    _json_dump(records, out / "verification.json")
    verdicts = {r["verdict"] for r in records}
    if oracles.FAIL in verdicts:
        code, status = EXIT_FAIL, "failed"
    elif oracles.INCONCLUSIVE in verdicts:
        code, status = EXIT_INCONCLUSIVE, "inconclusive"
    else:
        code, status = EXIT_OK, "ok"
    _sidecar(out, "verify", cfg, seed, status, ["verification.json"])
    return code


def cmd_trace(cfg: dict, seed: int, out: Path) -> int:
    params = build_params(cfg)
    tr = cfg["trace"]
    n_cycles = _number(cfg, "trace", "n_cycles", int, positive=True)
    max_rows = _number(cfg, "trace", "max_rows", int, positive=True)
    q0 = _initial_state(tr["initial"], params, "trace.initial")
    max_slots = max_rows // (2 * params.R)
    try:
        rows = trace_cycles(q0, n_cycles, params, RngStream(seed, derive_stream_id("trace")),
                            max_slots=max_slots)
    except ParameterError as exc:
        raise ConfigError(f"trace: {exc} (trace.max_rows = {max_rows}); trace fewer cycles") from exc
    _write_csv(out / "trace.csv", _header("trace", cfg, seed) + [
        "switch_slots: " + json.dumps([int(s) for s in rows.switch_slots])],
        ["slot", "queue", "group", "length", "released"],
        zip(rows.slot.tolist(), rows.queue.tolist(), rows.group.tolist(),
            rows.length.tolist(), rows.released.tolist()))
    _sidecar(out, "trace", cfg, seed, "ok", ["trace.csv"])
    return EXIT_OK


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lingering",
                                     description="Two-group scheduling model with queue-based releases.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("simulate", "run one embedded chain"),
                       ("sweep-alpha", "estimate F over a load grid and fit the scaling exponent"),
                       ("verify", "run Monte-Carlo checks and write a verification report"),
                       ("trace", "write slot-level queue lengths for a few cycles")):
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, help="master seed (overrides run.seed)")
        p.add_argument("--workers", type=int, help="parallel worker processes (overrides run.workers)")
        p.add_argument("--out", default=".", help="output directory (default: current directory)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["run"]["seed"] = args.seed
        if args.workers is not None:
            cfg["run"]["workers"] = args.workers
        if cfg["run"]["seed"] is None:
            raise ConfigError("no seed: set run.seed in the config or pass --seed")
        seed = _number(cfg, "run", "seed", int)
        if not 0 <= seed < 2**64:
            raise ConfigError("run.seed: must fit in an unsigned 64-bit integer")
        workers = _number(cfg, "run", "workers", int, positive=True)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "simulate":
            return cmd_simulate(cfg, seed, out)
        if args.command == "sweep-alpha":
            return cmd_sweep_alpha(cfg, seed, out, workers)
        if args.command == "verify":
            return cmd_verify(cfg, seed, out, workers)
        return cmd_trace(cfg, seed, out)
    except ConfigError as exc:
        print(f"lingering: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
