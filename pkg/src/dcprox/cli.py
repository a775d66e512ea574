"""Command-line front end: generate toy data, train models, run solver
benchmarks, and emit machine-readable result tables.

Subcommands
-----------
toygen        write a synthetic train/test/unlabeled triple in libsvm format
train         fit sparse logistic regression with a chosen solver and penalty
transductive  fit the transductive model and its supervised counterpart
benchmark     run several solvers over several seeds and tabulate results

Exit codes: 0 success, 2 usage or I/O error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import DcaConfig, GistConfig, dca_solve, gist_solve, proximal_gradient_solve
from .data import (ToySpec, accuracy, fit_apply_standardizer, generate_toy,
                   read_libsvm, write_libsvm)
from .direction import InnerConfig
from .losses import LogisticLoss, TransductiveLogisticLoss
from .newton import OuterConfig, dc_newton_solve, stationarity_check
from .objective import CompositeObjective
from .penalties import CappedL1Penalty, L1Penalty
from .sparse import Dataset
from .trace import LINE_SEARCH_FAILED

SOLVERS = ("dcpn", "gist", "dca", "proxgrad")
PENALTIES = ("l1", "capped_l1")


class SystemExit2(Exception):
    """Usage/configuration error, mapped to exit code 2."""


class SolverFailure(Exception):
    """Solver did not produce a usable iterate, mapped to exit code 3."""


@dataclass
class RunConfig:
    """Parsed invocation: one solver run (or a benchmark sweep) worth of
    choices. Hyperparameters are explicit; nothing is tuned silently."""

    command: str
    solver: str = "dcpn"
    penalty: str = "capped_l1"
    lam: float | None = None
    theta: float | None = None
    gamma: float | None = None
    tau: float = 1.0
    seed: int = 0
    train_path: str | None = None
    test_path: str | None = None
    unlabeled_path: str | None = None
    out_dir: str = "."
    standardize: str = "full"      # full | scale | none
    intercept: bool = False
    rel_tol: float = 1e-6
    max_iters: int | None = None
    alpha: float = 0.1
    lbfgs_memory: int = 5
    inner_max_iters: int = 500
    monotone_gist: bool = False
    zero_times: bool = False
    # toy sweep shape (benchmark / transductive)
    toy_dim: int | None = None
    toy_relevant: int | None = None
    toy_n_train: int | None = None
    toy_n_test: int = 0
    toy_n_unlabeled: int = 0
    solvers: tuple = ("dcpn", "gist", "dca")
    seeds: tuple = (0,)


@dataclass
class ResultRecord:
    solver: str
    seed: int
    objective: float
    accuracy_pct: float | None
    time_s: float
    iterations: int
    evals: int
    stationarity: float
    status: str
    hyperparameters: dict

    def as_dict(self):
        return dataclasses.asdict(self)


def _build_penalty(cfg: RunConfig, dim: int, intercept: bool):
    if cfg.lam is None:
        raise SystemExit2("--lam is required")
    lam = cfg.lam
    if intercept:
        weights = np.full(dim, float(cfg.lam))
        weights[-1] = 0.0  # appended bias column stays unpenalized
        lam = weights
    if cfg.penalty == "l1":
        return L1Penalty(lam)
    if cfg.theta is None:
        raise SystemExit2("--theta is required for the capped_l1 penalty")
    return CappedL1Penalty(lam, cfg.theta)


def _with_intercept(data: Dataset) -> Dataset:
    return Dataset(data.features.hstack_ones(), data.labels)


def _load_datasets(cfg: RunConfig):
    """Read train/test (+unlabeled), align dimensions, standardize."""
    if cfg.train_path is None:
        raise SystemExit2("--train is required")
    train = read_libsvm(cfg.train_path)
    extras = {}
    if cfg.test_path:
        extras["test"] = read_libsvm(cfg.test_path)
    if cfg.unlabeled_path:
        extras["unlabeled"] = read_libsvm(cfg.unlabeled_path)
    dim = max([train.n_features] + [d.n_features for d in extras.values()])
    train = Dataset(train.features.with_n_cols(dim), train.labels)
    extras = {k: Dataset(d.features.with_n_cols(dim), d.labels) for k, d in extras.items()}

    if cfg.standardize != "none":
        with_mean = cfg.standardize == "full"
        train, transformed, _ = fit_apply_standardizer(
            train, list(extras.values()), with_mean=with_mean)
        extras = dict(zip(extras.keys(), transformed))
    if cfg.intercept:
        train = _with_intercept(train)
        extras = {k: _with_intercept(d) for k, d in extras.items()}
    return train, extras.get("test"), extras.get("unlabeled")


def _run_solver(cfg: RunConfig, obj: CompositeObjective, smooth):
    """Dispatch one solver run; returns (x, trace)."""
    if cfg.solver == "dcpn":
        outer = OuterConfig(alpha=cfg.alpha, rel_obj_tol=cfg.rel_tol,
                            lbfgs_memory=cfg.lbfgs_memory,
                            max_outer_iters=cfg.max_iters or 1000)
        inner = InnerConfig(max_iters=cfg.inner_max_iters)
        x, trace, _report = dc_newton_solve(obj, outer, inner)
        return x, trace
    if cfg.solver == "gist":
        gcfg = GistConfig(monotone=cfg.monotone_gist, rel_obj_tol=cfg.rel_tol,
                          max_iters=cfg.max_iters or 10000)
        return gist_solve(obj, gcfg)
    if cfg.solver == "dca":
        dcfg = DcaConfig(rel_obj_tol=cfg.rel_tol,
                         max_dc_iters=min(cfg.max_iters or 20, 20))
        return dca_solve(obj, dcfg)
    if cfg.solver == "proxgrad":
        if cfg.penalty != "l1":
            raise SystemExit2("proxgrad is a convex baseline; use --penalty l1")
        x, trace = proximal_gradient_solve(smooth, obj.nonsmooth, dim=obj.dim,
                                           tol=max(cfg.rel_tol, 1e-10),
                                           max_iters=cfg.max_iters or 20000)
        return x, trace
    raise SystemExit2(f"unknown solver {cfg.solver!r}")


def _fit_record(cfg: RunConfig, train: Dataset, test: Dataset | None,
                unlabeled: Dataset | None = None, solver: str | None = None,
                seed: int | None = None):
    """Train once and assemble the ResultRecord; timing wraps the solver call
    only."""
    solver = solver or cfg.solver
    seed = cfg.seed if seed is None else seed
    run_cfg = dataclasses.replace(cfg, solver=solver)

    if cfg.command == "transductive" and unlabeled is not None:
        smooth = TransductiveLogisticLoss(train, unlabeled,
                                          gamma=cfg.gamma or 0.0, tau=cfg.tau)
    else:
        smooth = LogisticLoss(train)
    pen = _build_penalty(cfg, train.n_features, cfg.intercept)
    obj = CompositeObjective(smooth, pen, train.n_features)

    t0 = time.perf_counter()
    x, trace = _run_solver(run_cfg, obj, smooth)
    elapsed = time.perf_counter() - t0
    if trace.status == LINE_SEARCH_FAILED:
        raise SolverFailure(f"{solver}: line search failed "
                            f"(iteration {len(trace)}, F={trace.final_objective})")

    record = ResultRecord(
        solver=solver, seed=seed,
        objective=float(trace.final_objective),
        accuracy_pct=accuracy(test, x) if test is not None and test.n_examples else None,
        time_s=0.0 if cfg.zero_times else elapsed,
        iterations=len(trace), evals=trace.total_evals,
        stationarity=stationarity_check(obj, x),
        status=trace.status,
        hyperparameters=_hyper_dict(cfg))
    return x, trace, record


def _hyper_dict(cfg: RunConfig):
    hyper = {"penalty": cfg.penalty, "lam": cfg.lam, "rel_tol": cfg.rel_tol}
    if cfg.penalty == "capped_l1":
        hyper["theta"] = cfg.theta
    if cfg.command == "transductive":
        hyper["gamma"] = cfg.gamma
        hyper["tau"] = cfg.tau
    if cfg.intercept:
        hyper["intercept"] = True
    return hyper


def _write_model(x, path):
    with open(path, "w", encoding="utf-8") as fh:
        for i, v in enumerate(x):
            if v != 0.0:
                fh.write(f"{i}:{v:.17g}\n")


def _write_trace(trace, path, zero_times=False):
    with open(path, "w", encoding="utf-8") as fh:
        for r in trace.records:
            d = r.as_dict()
            if zero_times:
                d["wall_time"] = 0.0
            fh.write(json.dumps(d, sort_keys=True) + "\n")


def _write_json(payload, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def cmd_toygen(cfg: RunConfig) -> int:
    if cfg.toy_dim is None or cfg.toy_relevant is None or cfg.toy_n_train is None:
        raise SystemExit2("toygen needs --dim, --relevant and --n-train")
    spec = ToySpec(dim=cfg.toy_dim, n_relevant=cfg.toy_relevant,
                   n_train=cfg.toy_n_train, n_test=cfg.toy_n_test,
                   n_unlabeled=cfg.toy_n_unlabeled, seed=cfg.seed)
    train, test, unlabeled = generate_toy(spec)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_libsvm(train, out / "train.libsvm")
    print(f"wrote {out / 'train.libsvm'} ({train.n_examples} examples)")
    if test.n_examples:
        write_libsvm(test, out / "test.libsvm")
        print(f"wrote {out / 'test.libsvm'} ({test.n_examples} examples)")
    if unlabeled.n_examples:
        # unlabeled rows get a placeholder +1 label so the libsvm format holds
        write_libsvm(Dataset(unlabeled.features, np.ones(unlabeled.n_examples, dtype=np.int64)),
                     out / "unlabeled.libsvm")
        print(f"wrote {out / 'unlabeled.libsvm'} ({unlabeled.n_examples} examples)")
    return 0


def cmd_train(cfg: RunConfig) -> int:
    train, test, _ = _load_datasets(cfg)
    x, trace, record = _fit_record(cfg, train, test)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_model(x, out / "model.txt")
    _write_trace(trace, out / "trace.jsonl", cfg.zero_times)
    _write_json(record.as_dict(), out / "result.json")
    acc = "" if record.accuracy_pct is None else f" acc={record.accuracy_pct:.2f}%"
    print(f"{record.solver}: status={record.status} F={record.objective:.6f}"
          f"{acc} iters={record.iterations} time={record.time_s:.2f}s")
    return 0


def cmd_transductive(cfg: RunConfig) -> int:
    if cfg.gamma is None:
        raise SystemExit2("--gamma is required for transductive training")
    if cfg.toy_dim is not None:
        if cfg.toy_relevant is None or cfg.toy_n_train is None:
            raise SystemExit2("toy mode needs --toy-relevant and --toy-n-train")
        spec = ToySpec(dim=cfg.toy_dim, n_relevant=cfg.toy_relevant,
                       n_train=cfg.toy_n_train, n_test=cfg.toy_n_test,
                       n_unlabeled=cfg.toy_n_unlabeled, seed=cfg.seed)
        train, test, unlabeled = generate_toy(spec)
        if cfg.standardize != "none":
            train, (test, unlabeled), _ = fit_apply_standardizer(
                train, [test, unlabeled], with_mean=cfg.standardize == "full")
    else:
        if cfg.unlabeled_path is None:
            raise SystemExit2("transductive needs --unlabeled (or a toy spec)")
        train, test, unlabeled = _load_datasets(cfg)

    # transductive model and its purely supervised counterpart on the same split
    x_t, trace_t, rec_t = _fit_record(cfg, train, test, unlabeled, solver=cfg.solver)
    rec_t.solver = f"{cfg.solver}+transductive"
    sup_cfg = dataclasses.replace(cfg, gamma=0.0)
    x_s, trace_s, rec_s = _fit_record(sup_cfg, train, test, None, solver=cfg.solver)
    rec_s.solver = f"{cfg.solver}+supervised"

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_model(x_t, out / "transductive_model.txt")
    _write_model(x_s, out / "supervised_model.txt")
    _write_json({"transductive": rec_t.as_dict(), "supervised": rec_s.as_dict()},
                out / "result.json")
    for rec in (rec_s, rec_t):
        acc = "" if rec.accuracy_pct is None else f" acc={rec.accuracy_pct:.2f}%"
        print(f"{rec.solver}: F={rec.objective:.6f}{acc} iters={rec.iterations}")
    return 0


def cmd_benchmark(cfg: RunConfig) -> int:
    toy_mode = cfg.toy_dim is not None
    if toy_mode and (cfg.toy_relevant is None or cfg.toy_n_train is None):
        raise SystemExit2("toy mode needs --toy-relevant and --toy-n-train")
    if not toy_mode and cfg.train_path is None:
        raise SystemExit2("benchmark needs --train or a --toy-dim spec")

    records = []
    for seed in cfg.seeds:
        seed_cfg = dataclasses.replace(cfg, seed=seed)
        if toy_mode:
            spec = ToySpec(dim=cfg.toy_dim, n_relevant=cfg.toy_relevant,
                           n_train=cfg.toy_n_train, n_test=cfg.toy_n_test,
                           seed=seed)
            train, test, _ = generate_toy(spec)
            if cfg.standardize != "none":
                train, (test,), _ = fit_apply_standardizer(
                    train, [test], with_mean=cfg.standardize == "full")
        else:
            train, test, _ = _load_datasets(seed_cfg)
        for solver in cfg.solvers:
            try:
                _x, _trace, record = _fit_record(seed_cfg, train, test, solver=solver)
            except (SolverFailure, ValueError) as exc:
                record = ResultRecord(solver=solver, seed=seed,
                                      objective=float("nan"), accuracy_pct=None,
                                      time_s=0.0, iterations=0, evals=0,
                                      stationarity=float("nan"),
                                      status=f"failed: {exc}",
                                      hyperparameters=_hyper_dict(seed_cfg))
            records.append(record)

    records.sort(key=lambda r: (r.solver, r.seed))
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    per_seed_cols = ["solver", "seed", "objective", "accuracy_pct", "time_s",
                     "iterations", "evals", "stationarity", "status"]
    with open(out / "results.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(per_seed_cols)
        for r in records:
            writer.writerow([_fmt(getattr(r, c)) for c in per_seed_cols])

    summary_rows = _summarize(records)
    summary_cols = ["solver", "n_seeds", "objective_mean", "objective_std",
                    "accuracy_mean", "accuracy_std", "time_mean", "time_std",
                    "iterations_mean", "rel_obj_diff_vs_gist_pct"]
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(summary_cols)
        for row in summary_rows:
            writer.writerow([_fmt(row[c]) for c in summary_cols])

    _write_json([r.as_dict() for r in records], out / "results.json")
    for row in summary_rows:
        acc = "" if row["accuracy_mean"] is None else f" acc={row['accuracy_mean']:.2f}%"
        print(f"{row['solver']}: F={row['objective_mean']:.6f}{acc} "
              f"time={row['time_mean']:.2f}s")
    return 0


def _summarize(records):
    """Aggregate per-solver rows; the relative objective difference column
    compares each solver's final objective to GIST's on matching seeds, in
    percent (negative means the solver's objective is larger)."""
    gist_by_seed = {r.seed: r.objective for r in records if r.solver == "gist"
                    and np.isfinite(r.objective)}
    rows = []
    for solver in sorted({r.solver for r in records}):
        group = [r for r in records if r.solver == solver and np.isfinite(r.objective)]
        if not group:
            rows.append({c: (solver if c == "solver" else None)
                         for c in ["solver", "n_seeds", "objective_mean",
                                   "objective_std", "accuracy_mean", "accuracy_std",
                                   "time_mean", "time_std", "iterations_mean",
                                   "rel_obj_diff_vs_gist_pct"]})
            continue
        objs = np.array([r.objective for r in group])
        times = np.array([r.time_s for r in group])
        iters = np.array([r.iterations for r in group])
        accs = [r.accuracy_pct for r in group if r.accuracy_pct is not None]
        diffs = [100.0 * (gist_by_seed[r.seed] - r.objective) / abs(gist_by_seed[r.seed])
                 for r in group
                 if r.seed in gist_by_seed and solver != "gist" and gist_by_seed[r.seed] != 0]
        rows.append({
            "solver": solver, "n_seeds": len(group),
            "objective_mean": float(objs.mean()), "objective_std": float(objs.std()),
            "accuracy_mean": float(np.mean(accs)) if accs else None,
            "accuracy_std": float(np.std(accs)) if accs else None,
            "time_mean": float(times.mean()), "time_std": float(times.std()),
            "iterations_mean": float(iters.mean()),
            "rel_obj_diff_vs_gist_pct": float(np.mean(diffs)) if diffs else None,
        })
    return rows


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="dcprox",
        description="Sparse (transductive) logistic regression via DC proximal Newton "
                    "and baseline solvers.")
    parser.add_argument("--config", help="INI file whose [dcprox] section supplies "
                                         "defaults for any long flag")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = {}

    toygen = subparsers["toygen"] = sub.add_parser(
        "toygen", help="generate a synthetic dataset triple")
    toygen.add_argument("--dim", dest="toy_dim", type=int, required=True)
    toygen.add_argument("--relevant", dest="toy_relevant", type=int, required=True)
    toygen.add_argument("--n-train", dest="toy_n_train", type=int, required=True)
    toygen.add_argument("--n-test", dest="toy_n_test", type=int, default=0)
    toygen.add_argument("--n-unlabeled", dest="toy_n_unlabeled", type=int, default=0)
    toygen.add_argument("--seed", type=int, default=0)
    toygen.add_argument("--out-dir", default=".")

    def add_common(p, transductive=False, benchmark=False):
        p.add_argument("--train", dest="train_path")
        p.add_argument("--test", dest="test_path")
        p.add_argument("--penalty", choices=PENALTIES, default="capped_l1")
        p.add_argument("--lam", type=float)
        p.add_argument("--theta", type=float)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--standardize", choices=("full", "scale", "none"), default="full")
        p.add_argument("--intercept", action="store_true")
        p.add_argument("--rel-tol", type=float, default=1e-6)
        p.add_argument("--max-iters", type=int)
        p.add_argument("--alpha", type=float, default=0.1)
        p.add_argument("--lbfgs-memory", type=int, default=5)
        p.add_argument("--inner-max-iters", type=int, default=500)
        p.add_argument("--monotone-gist", action="store_true")
        p.add_argument("--zero-times", action="store_true",
                       help="report 0.0 for all timings (byte-identical reruns)")
        p.add_argument("--out-dir", default=".")
        if transductive:
            p.add_argument("--unlabeled", dest="unlabeled_path")
            p.add_argument("--gamma", type=float)
            p.add_argument("--tau", type=float, default=1.0)
            p.add_argument("--solver", choices=("dcpn", "gist"), default="dcpn")
            for flag, default in (("--toy-dim", None), ("--toy-relevant", None),
                                  ("--toy-n-train", None), ("--toy-n-test", 0),
                                  ("--toy-n-unlabeled", 0)):
                p.add_argument(flag, type=int, default=default)
        elif benchmark:
            p.add_argument("--solvers", default="dcpn,gist,dca",
                           help="comma-separated subset of " + ",".join(SOLVERS))
            p.add_argument("--seeds", default="0",
                           help="comma-separated seed list")
            for flag, default in (("--toy-dim", None), ("--toy-relevant", None),
                                  ("--toy-n-train", None), ("--toy-n-test", 0)):
                p.add_argument(flag, type=int, default=default)
        else:
            p.add_argument("--solver", choices=SOLVERS, default="dcpn")

    subparsers["train"] = sub.add_parser("train", help="train one model")
    add_common(subparsers["train"])
    subparsers["transductive"] = sub.add_parser(
        "transductive", help="train transductive + supervised models")
    add_common(subparsers["transductive"], transductive=True)
    subparsers["benchmark"] = sub.add_parser(
        "benchmark", help="compare solvers over seeds")
    add_common(subparsers["benchmark"], benchmark=True)
    return parser, subparsers


def _apply_config_file(subparsers, argv):
    """INI [dcprox] section becomes subparser defaults; explicit flags win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    ini = configparser.ConfigParser()
    read = ini.read(known.config)
    if not read:
        raise SystemExit2(f"config file not found: {known.config}")
    if not ini.has_section("dcprox"):
        raise SystemExit2(f"{known.config}: missing [dcprox] section")
    defaults = {key.replace("-", "_"): value for key, value in ini.items("dcprox")}
    for subparser in subparsers.values():
        usable = {}
        for act in subparser._actions:
            if act.dest not in defaults:
                continue
            raw = defaults[act.dest]
            if act.type is not None:
                usable[act.dest] = act.type(raw)
            elif act.const is True:   # store_true flags
                usable[act.dest] = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                usable[act.dest] = raw
        subparser.set_defaults(**usable)


def _namespace_to_config(ns) -> RunConfig:
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    payload = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    if "solvers" in payload:
        payload["solvers"] = tuple(s.strip() for s in payload["solvers"].split(",") if s.strip())
        unknown = set(payload["solvers"]) - set(SOLVERS)
        if unknown:
            raise SystemExit2(f"unknown solvers: {sorted(unknown)}")
    if "seeds" in payload:
        payload["seeds"] = tuple(int(s) for s in payload["seeds"].split(","))
    if getattr(ns, "monotone_gist", False):
        payload["monotone_gist"] = True
    return RunConfig(**payload)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, subparsers = _build_parser()
    try:
        _apply_config_file(subparsers, argv)
        ns = parser.parse_args(argv)
        cfg = _namespace_to_config(ns)
        handler = {"toygen": cmd_toygen, "train": cmd_train,
                   "transductive": cmd_transductive, "benchmark": cmd_benchmark}[cfg.command]
        return handler(cfg)
    except SystemExit2 as exc:
        print(f"dcprox: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"dcprox: error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        print(f"dcprox: solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
