"""Experiment harness.

Two subcommands:

* ``run``: one experiment from a JSON config, writing run.csv, run.json,
  certificates.csv and summary.json into the output directory.
* ``sweep``: cartesian product over a JSON grid of dotted config paths, one
  cell directory per combination plus a sweep.csv overview.

All configuration comes from the config file and flags; the environment is
never consulted. The config is validated completely before any artifact is
created, so a rejected run leaves no partial output.

Exit codes: 0 success (including runs that stop at max_iters), 2 invalid
config or problem definition, 3 solver failure (partial logs are written),
4 failure to write artifacts.
"""

from __future__ import annotations

import argparse
import copy
import csv
import itertools
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .apps import kkt_residuals, library_entry, library_labels
from .fields import AssumptionError, FeasibilityError, monotonicity_probe, sample_pairs
from .kernels import active_backend
from .solver import (
    STATUS_CONVERGED,
    STATUS_MAX_ITERS,
    RunRecord,
    Schedules,
    fejer_start_index,
    ppm_absolute,
    ppm_relative,
    quasi_fejer_check,
    run_record_payload,
    scaled_schedules,
    write_run_csv,
    _fmt,
)

__all__ = ["main", "ConfigError", "ExperimentConfig", "parse_config", "run_experiment"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_ARTIFACTS = 4

_SLACK_TOL = 1e-7
_TERMWISE_TOL = 1e-9


class ConfigError(ValueError):
    """The experiment description cannot be run as given."""


@dataclass(frozen=True)
class ExperimentConfig:
    label: str
    overrides: dict
    algorithm: str
    schedules: Schedules
    max_iters: int
    stop_tol: Optional[float]
    seed: int
    output_dir: Optional[str]
    prox_coefficient: float
    raw: dict

    def payload(self) -> dict:
        return copy.deepcopy(self.raw)


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _take(src: dict, key: str, default):
    return src[key] if key in src else default


def _check_keys(src: dict, allowed, where: str) -> None:
    extra = sorted(set(src) - set(allowed))
    _expect(not extra, f"unknown {where} keys: {extra}")


def parse_config(raw: object) -> ExperimentConfig:
    """Validate a decoded config document; raises ConfigError on any defect."""
    _expect(isinstance(raw, dict), "config must be a JSON object")
    _check_keys(
        raw,
        (
            "problem",
            "algorithm",
            "schedules",
            "max_iters",
            "stop_tol",
            "seed",
            "output_dir",
            "prox_coefficient",
        ),
        "config",
    )

    problem = _take(raw, "problem", None)
    _expect(isinstance(problem, dict), "config needs a 'problem' object")
    _check_keys(problem, ("label", "overrides"), "problem")
    label = _take(problem, "label", None)
    _expect(isinstance(label, str) and label, "problem.label must be a nonempty string")
    overrides = _take(problem, "overrides", {})
    _expect(isinstance(overrides, dict), "problem.overrides must be an object")

    algorithm = _take(raw, "algorithm", None)
    _expect(algorithm in ("absolute", "relative"), "algorithm must be 'absolute' or 'relative'")

    sch = _take(raw, "schedules", None)
    _expect(isinstance(sch, dict), "config needs a 'schedules' object")
    _check_keys(sch, ("lambda0", "theta0", "sigma0", "eps0", "decay"), "schedules")
    err_key = "theta0" if algorithm == "absolute" else "sigma0"
    other_key = "sigma0" if algorithm == "absolute" else "theta0"
    _expect(err_key in sch, f"{algorithm} runs need schedules.{err_key}")
    _expect(other_key not in sch, f"schedules.{other_key} does not apply to {algorithm} runs")
    for key in ("lambda0", "theta0", "sigma0", "eps0", "decay"):
        if key in sch:
            _expect(
                isinstance(sch[key], (int, float)) and not isinstance(sch[key], bool),
                f"schedules.{key} must be a number",
            )
    try:
        schedules = Schedules.geometric(
            lam=float(_take(sch, "lambda0", 1.0)),
            theta0=float(sch["theta0"]) if algorithm == "absolute" else None,
            sigma0=float(sch["sigma0"]) if algorithm == "relative" else None,
            eps0=float(_take(sch, "eps0", 0.0)),
            decay=float(_take(sch, "decay", 0.9)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad schedules: {exc}") from exc

    max_iters = _take(raw, "max_iters", 500)
    _expect(
        isinstance(max_iters, int) and not isinstance(max_iters, bool) and max_iters >= 1,
        "max_iters must be a positive integer",
    )
    stop_tol = _take(raw, "stop_tol", None)
    if stop_tol is not None:
        _expect(
            isinstance(stop_tol, (int, float))
            and not isinstance(stop_tol, bool)
            and float(stop_tol) > 0.0,
            "stop_tol must be null or a positive number",
        )
        stop_tol = float(stop_tol)
    seed = _take(raw, "seed", 0)
    _expect(
        isinstance(seed, int) and not isinstance(seed, bool) and 0 <= seed < 2**64,
        "seed must be an unsigned 64-bit integer",
    )
    output_dir = _take(raw, "output_dir", None)
    _expect(
        output_dir is None or (isinstance(output_dir, str) and output_dir),
        "output_dir must be a nonempty string when present",
    )
    prox = _take(raw, "prox_coefficient", 1.0)
    _expect(
        isinstance(prox, (int, float)) and not isinstance(prox, bool) and float(prox) > 0.0,
        "prox_coefficient must be a positive number",
    )
    return ExperimentConfig(
        label=label,
        overrides=overrides,
        algorithm=algorithm,
        schedules=schedules,
        max_iters=max_iters,
        stop_tol=stop_tol,
        seed=seed,
        output_dir=output_dir,
        prox_coefficient=float(prox),
        raw=copy.deepcopy(raw) if isinstance(raw, dict) else {},
    )


def _load_json(path: str, what: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} file {path!r} is not valid JSON: {exc}") from exc


# -- certificates ---------------------------------------------------------------------


def _certificate_table(rec: RunRecord, sched: Schedules):
    """Rows of certificates.csv plus the violation summary (None when the
    run has no declared solution to certify against)."""
    header = ["k", "fejer_slack", "zeta", "gamma", "beta", "bound", "within_bound"]
    q = rec.known_solution
    if q is None or not rec.step_dists:
        rows = [[str(k), "", "", "", "", "", ""] for k in range(len(rec.iterates))]
        return header, rows, None

    M = rec.manifold
    lam_hat = sched.lam_min
    err = sched.theta if rec.mode == "absolute" else sched.sigma
    n = rec.iterations()
    zeta = [M.dist(q, p) ** 2 for p in rec.iterates]
    gamma = [2.0 * err.value(k) / lam_hat for k in range(n)]
    if rec.mode == "absolute":
        beta = [
            (2.0 / lam_hat) * (sched.theta.value(k) + 2.0 * sched.eps.value(k))
            for k in range(n)
        ]
    else:
        beta = [(4.0 / lam_hat) * sched.eps.value(k) for k in range(n)]

    rows = [["0", "", _fmt(zeta[0]), "", "", "", ""]]
    termwise_violations = 0
    for k in range(n):
        bound = (1.0 + gamma[k]) * zeta[k] + beta[k]
        ok = zeta[k + 1] <= bound + _TERMWISE_TOL
        if not ok:
            termwise_violations += 1
        rows.append(
            [
                str(k + 1),
                _fmt(rec.fejer_slacks[k]),
                _fmt(zeta[k + 1]),
                _fmt(gamma[k]),
                _fmt(beta[k]),
                _fmt(bound),
                "1" if ok else "0",
            ]
        )

    try:
        kbar = fejer_start_index(sched, rec.mode)
    except ValueError:
        kbar = None
    past = rec.fejer_slacks[kbar:] if kbar is not None else []
    slack_violations = sum(1 for s in past if s < -_SLACK_TOL)
    summary = {
        "fejer_start_index": kbar,
        "slack_min_past_start": float(min(past)) if past else None,
        "slack_violations_past_start": slack_violations,
        "termwise_violations": termwise_violations,
        "quasi_fejer_ok": quasi_fejer_check(zeta, gamma, beta, tol=_TERMWISE_TOL),
        "violations_total": slack_violations + termwise_violations,
    }
    return header, rows, summary


# -- single run -------------------------------------------------------------------------


def run_experiment(cfg: ExperimentConfig, out_dir: str) -> tuple:
    """Build the problem, run the solver, write artifacts.

    Returns (exit_code, record, summary_dict). Raises ConfigError before any
    artifact exists; OSError afterwards means a partial artifact set.
    """
    try:
        entry = library_entry(cfg.label, cfg.overrides)
    except (ValueError, AssumptionError, TypeError) as exc:
        raise ConfigError(f"cannot build problem {cfg.label!r}: {exc}") from exc

    sched = scaled_schedules(cfg.schedules, cfg.prox_coefficient)
    solve = ppm_absolute if cfg.algorithm == "absolute" else ppm_relative
    t0 = time.perf_counter()
    try:
        rec = solve(entry.vip, sched, entry.start, max_iters=cfg.max_iters, stop_tol=cfg.stop_tol)
    except (FeasibilityError, ValueError) as exc:
        raise ConfigError(f"run rejected: {exc}") from exc
    wall = time.perf_counter() - t0

    pairs = sample_pairs(entry.vip.field.domain, entry.start, radius=1.0, count=64, seed=cfg.seed)
    probe = monotonicity_probe(entry.vip.field, pairs)
    cert_header, cert_rows, cert_summary = _certificate_table(rec, sched)

    M = rec.manifold
    final = rec.iterates[-1]
    summary = {
        "label": cfg.label,
        "algorithm": cfg.algorithm,
        "status": rec.status,
        "message": rec.message,
        "iterations": rec.iterations(),
        "stop_tol": None if rec.stop_tol != rec.stop_tol else rec.stop_tol,
        "wall_time_s": wall,
        "seed": cfg.seed,
        "backend": active_backend(),
        "final_step_dist": rec.step_dists[-1] if rec.step_dists else None,
        "final_residual_norm": M.norm(rec.residuals[-1]) if rec.residuals else None,
        "dist_to_solution": (
            M.dist(final, rec.known_solution) if rec.known_solution is not None else None
        ),
        "diagnostics": {
            "step_dist_tail": max(rec.step_dists[-10:]) if rec.step_dists else 0.0,
            "residual_tail": (
                max(M.norm(e) for e in rec.residuals[-10:]) if rec.residuals else 0.0
            ),
            "dist_to_solution_tail": (
                max(M.dist(p, rec.known_solution) for p in rec.iterates[-10:])
                if rec.known_solution is not None
                else None
            ),
        },
        "certificates": cert_summary,
        "monotonicity_probe": {
            "pairs": probe.pairs,
            "violations": probe.violations,
            "min_gap": probe.min_gap,
        },
    }
    if entry.kind == "nlp":
        summary["kkt"] = kkt_residuals(entry.problem, final)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_run_csv(rec, out / "run.csv")
    with open(out / "run.json", "w", encoding="utf-8") as fh:
        json.dump(
            {"config": cfg.payload(), "backend": active_backend(), "record": run_record_payload(rec)},
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    with open(out / "certificates.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cert_header)
        writer.writerows(cert_rows)
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    code = EXIT_OK if rec.status in (STATUS_CONVERGED, STATUS_MAX_ITERS) else EXIT_SOLVER
    return code, rec, summary


def _cmd_run(args) -> int:
    raw = _load_json(args.config, "config")
    if args.seed is not None:
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        raw = dict(raw)
        raw["seed"] = args.seed
    cfg = parse_config(raw)
    out_dir = args.out or cfg.output_dir or "runs"
    try:
        code, rec, _ = run_experiment(cfg, out_dir)
    except OSError as exc:
        print(f"error: cannot write artifacts: {exc}", file=sys.stderr)
        return EXIT_ARTIFACTS
    print(f"{cfg.label} [{cfg.algorithm}] status={rec.status} iterations={rec.iterations()}")
    if code == EXIT_SOLVER:
        print(f"solver failed: {rec.message} (partial logs in {out_dir})", file=sys.stderr)
    return code


# -- sweep --------------------------------------------------------------------------------


def _set_dotted(doc: dict, path: str, value) -> None:
    parts = path.split(".")
    node = doc
    for part in parts[:-1]:
        if part not in node or not isinstance(node[part], dict):
            node[part] = {}
        node = node[part]
    node[parts[-1]] = value


def _cell_value(v) -> str:
    return v if isinstance(v, str) else json.dumps(v)


def _cmd_sweep(args) -> int:
    base = _load_json(args.config, "config")
    grid = _load_json(args.grid, "grid")
    _expect(isinstance(base, dict), "config must be a JSON object")
    _expect(isinstance(grid, dict) and grid, "grid must be a nonempty JSON object")
    for key, values in grid.items():
        _expect(
            isinstance(values, list) and values,
            f"grid entry {key!r} must be a nonempty array of values",
        )
    parse_config(base)  # reject a broken base before creating anything

    keys = list(grid)
    out = Path(args.out or base.get("output_dir") or "sweep")
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["cell", *keys, "status", "iterations", "final_dist", "cert_violations"])
            for idx, combo in enumerate(itertools.product(*(grid[k] for k in keys))):
                cell = f"cell_{idx:04d}"
                doc = copy.deepcopy(base)
                doc.pop("output_dir", None)
                for key, value in zip(keys, combo):
                    _set_dotted(doc, key, value)
                row = [cell, *(_cell_value(v) for v in combo)]
                try:
                    cfg = parse_config(doc)
                    _, rec, summary = run_experiment(cfg, out / cell)
                except ConfigError as exc:
                    print(f"{cell}: config error: {exc}", file=sys.stderr)
                    writer.writerow(row + ["config-error", "", "", ""])
                    continue
                dist = summary["dist_to_solution"]
                certs = summary["certificates"]
                writer.writerow(
                    row
                    + [
                        rec.status,
                        str(rec.iterations()),
                        "" if dist is None else _fmt(dist),
                        "" if certs is None else str(certs["violations_total"]),
                    ]
                )
    except OSError as exc:
        print(f"error: cannot write artifacts: {exc}", file=sys.stderr)
        return EXIT_ARTIFACTS
    print(f"sweep finished: {out / 'sweep.csv'}")
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hadprox",
        description="Inexact proximal point experiments on Hadamard manifolds.",
        epilog=f"problem labels: {', '.join(library_labels())}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a JSON config")
    run.add_argument("--config", required=True, help="path to the experiment config JSON")
    run.add_argument("--out", default=None, help="output directory (overrides config)")
    run.add_argument("--seed", type=int, default=None, help="seed override (unsigned 64-bit)")

    sweep = sub.add_parser("sweep", help="run a grid of experiments")
    sweep.add_argument("--config", required=True, help="path to the base config JSON")
    sweep.add_argument("--grid", required=True, help="JSON object: dotted config path -> values")
    sweep.add_argument("--out", default=None, help="output directory (overrides config)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
