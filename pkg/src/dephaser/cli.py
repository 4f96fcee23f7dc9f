"""Batch front-end: run experiment configs, emit JSON/CSV reports.

Exit codes: 0 success, 2 config/validation error, 3 numerical-cap error,
4 analysis-level failure.  Errors are emitted as one JSON object on stderr.
Given a fixed config and seed, output files are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import tempfile

import numpy as np

from . import classicality as cl
from . import statistics as st
from .config import ConfigError, ExperimentConfig, load_config
from .errors import DephaserError, SizeCapError, ValidationError
from .models import markovianity_deficit_detail, semigroup_deficit, triviality_check
from .presets import preset_listing

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_ANALYSIS = 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: str, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(c) if isinstance(c, float) else str(c) for c in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_distribution(outdir: str, dist: st.JointDistribution) -> str:
    n = dist.n
    path = os.path.join(outdir, f"distribution_{n}.csv")
    header = [f"x_{k + 1}" for k in range(n)] + ["probability"]
    clipped = dist.clipped().reshape((dist.n_outcomes,) * n)
    rows = [list(xs) + [float(clipped[xs])] for xs in np.ndindex(*clipped.shape)]
    _write_csv(path, header, rows)
    return path


def _run_classicality(cfg: ExperimentConfig, outdir: str) -> dict:
    a = cfg.analysis
    report = cl.classicality_report(
        cfg.provider,
        cfg.preparation,
        cfg.measurement,
        cfg.grid.times,
        int(a["max_order"]),
        float(a["tolerance"]),
        t0=cfg.grid.t0,
    )
    rows = [
        [r.order, r.position] + [float(t) for t in r.times] + [r.deficit]
        for r in report.records
    ]
    width = max(len(r.times) for r in report.records)
    header = ["order", "position"] + [f"t_{k + 1}" for k in range(width)] + ["deficit"]
    # pad shorter time tuples so the CSV stays rectangular
    rows = [r[:2] + [float(t) for t in r[2:-1]] + [float("nan")] * (width - (len(r) - 3)) + [r[-1]] for r in rows]
    _write_csv(os.path.join(outdir, "deficits.csv"), header, rows)
    return {"analysis": "classicality", **report.to_dict()}


def _run_markovianity(cfg: ExperimentConfig, outdir: str) -> dict:
    a = cfg.analysis
    deficit, detail = markovianity_deficit_detail(
        cfg.exact_model, cfg.grid.times, int(a["max_order"]), seed=int(a["seed"])
    )
    times = sorted(cfg.grid.times)
    semigroup = 0.0
    if len(times) >= 3:
        semigroup = max(
            semigroup_deficit(cfg.provider, *triple) for triple in itertools.combinations(times, 3)
        )
    return {
        "analysis": "markovianity",
        "factorization_deficit": deficit,
        "semigroup_deficit": semigroup,
        "trivial_dephasing": triviality_check(cfg.provider, times),
        **detail,
    }


def _run_ncgd(cfg: ExperimentConfig, outdir: str) -> dict:
    times = sorted(cfg.grid.times)
    if len(times) < 3:
        raise ValidationError("ncgd analysis needs at least 3 grid times")
    triples = list(itertools.combinations(times, 3))
    deficits = []
    sandwich = []
    for t1, t2, t3 in triples:
        deficits.append(st.ncgd_deficit(cfg.provider, cfg.measurement, t1, t2, t3))
        sandwich.append(st.sandwich_identity_deficit(cfg.provider, cfg.measurement, t3, t1))
    rows = [[*map(float, tr), d, s] for tr, d, s in zip(triples, deficits, sandwich)]
    _write_csv(os.path.join(outdir, "deficits.csv"), ["t_1", "t_2", "t_3", "ncgd_deficit", "sandwich_deficit"], rows)
    return {
        "analysis": "ncgd",
        "norm": "entrywise max on superoperator matrices",
        "max_ncgd_deficit": max(deficits),
        "max_sandwich_deficit": max(sandwich),
        "triples": len(triples),
    }


def _run_theta_sweep(cfg: ExperimentConfig, outdir: str) -> dict:
    a = cfg.analysis
    if cfg.d != 2:
        raise ValidationError(f"theta-sweep requires d = 2, model has d = {cfg.d}")
    if cfg.preparation.tag != "diagonal" and cfg.preparation.tag != "maximally-mixed":
        raise ValidationError("theta-sweep requires a diagonal (or maximally mixed) preparation")
    p = float(cfg.preparation.density[0, 0].real)
    times = sorted(cfg.grid.times)
    if len(times) < 2:
        raise ValidationError("theta-sweep needs at least 2 grid times")
    n_points = int(a.get("theta_points", 181))
    thetas = np.linspace(0.0, np.pi / 2, n_points)
    thetas, deficits, argmax_theta = cl.theta_sweep(
        cfg.provider, p, thetas, times[1], times[0], t0=cfg.grid.t0
    )
    _write_csv(
        os.path.join(outdir, "deficits.csv"),
        ["theta", "deficit"],
        [[float(th), float(df)] for th, df in zip(thetas, deficits)],
    )
    return {
        "analysis": "theta-sweep",
        "p": p,
        "t1": times[0],
        "t2": times[1],
        "argmax_theta": argmax_theta,
        "max_abs_deficit": float(np.max(np.abs(deficits))),
    }


def _run_oracle_check(cfg: ExperimentConfig, outdir: str) -> dict:
    fast = st.joint_distribution(cfg.provider, cfg.preparation, cfg.measurement, cfg.grid)
    oracle = st.oracle_distribution(cfg.exact_model, cfg.preparation, cfg.measurement, cfg.grid)
    _write_distribution(outdir, fast)
    return {
        "analysis": "oracle-check",
        "n": cfg.grid.n,
        "max_abs_difference": float(np.max(np.abs(fast.table - oracle.table))),
    }


_RUNNERS = {
    "classicality": _run_classicality,
    "markovianity": _run_markovianity,
    "ncgd": _run_ncgd,
    "theta-sweep": _run_theta_sweep,
    "oracle-check": _run_oracle_check,
}


def _error_json(code: int, exc: Exception) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.analysis["seed"] = args.seed
    except ConfigError as exc:
        return _error_json(EXIT_VALIDATION, exc)
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    try:
        payload = _RUNNERS[cfg.analysis["kind"]](cfg, outdir)
    except SizeCapError as exc:
        return _error_json(EXIT_CAP, exc)
    except ValidationError as exc:
        return _error_json(EXIT_VALIDATION, exc)
    except DephaserError as exc:
        return _error_json(EXIT_ANALYSIS, exc)
    payload["seed"] = int(cfg.analysis["seed"])
    _write_json(os.path.join(outdir, "report.json"), payload)
    print(f"wrote {os.path.join(outdir, 'report.json')}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        load_config(args.config)
    except ConfigError as exc:
        return _error_json(EXIT_VALIDATION, exc)
    print("ok")
    return EXIT_OK


def cmd_presets(args) -> int:
    for name, desc in preset_listing():
        print(f"{name:20s} {desc}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="dephaser", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory (default: cwd)")
    p_run.add_argument("--threads", type=int, default=1, help="worker threads (analyses are currently single-threaded)")
    p_run.add_argument("--seed", type=int, default=None, help="override the config's analysis seed")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="validate a config without running it")
    p_val.add_argument("config")
    p_val.set_defaults(func=cmd_validate)

    p_pre = sub.add_parser("presets", help="list named model presets")
    p_pre.set_defaults(func=cmd_presets)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
