"""Command-line front end.

Commands::

    homred list [--json]
    homred check EXAMPLE [name=value ...] [--points N] [--seed S] [--tol T] [--json]
    homred classify EXAMPLE [name=value ...] [--at POINT ...]
    homred reduce EXAMPLE [name=value ...] [--at POINT ...]
    homred verify-all [--criteria 1,2,...] [--seed S] [--points N] [--json]

Parameters are ``lambda``, ``lambda0``, ``lambda1`` (``λ``, ``λ₀``, ``λ₁``
are accepted too) and ``n`` for ``rhn-solvable``.  A point is either a
comma-separated coordinate list or ``name=value`` meaning every coordinate
equals ``value`` (``--at t=0``).

Defaults for ``points``, ``seed`` and ``tol`` may come from an INI file
given with ``--config``::

    [homred]
    points = 20
    seed = 0
    tol = 1e-8

When ``HOMRED_REPORT_DIR`` is set, every report is also written there as
``<command>[-<example>].json``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
errors (unknown command, flag, example or parameter).
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bundle import reduce_tensor, reduced_structure
from .catalog import UnknownExampleError, get_example, list_examples
from .catalog.examples import to_table_coordinates
from .homstruct import classify, classify_tensor, lower_first, wedge_terms
from .report import Report
from .suite import (
    CRITERIA,
    DEFAULT_POINTS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    CheckResult,
    RunConfig,
    acceptance_suite,
    check_example,
)

REPORT_DIR_ENV = "HOMRED_REPORT_DIR"

PARAM_ALIASES = {"λ": "lambda", "λ₀": "lambda0", "λ₁": "lambda1", "λ0": "lambda0", "λ1": "lambda1"}


class UsageError(ValueError):
    """Bad command-line input; maps to exit code 2."""


def parse_params(items: Sequence[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"parameter {item!r} is not of the form name=value")
        name = PARAM_ALIASES.get(name.strip(), name.strip())
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"parameter {name}: {value!r} is not a number") from exc
    return out


def parse_point(text: str, dim: int) -> np.ndarray:
    name, sep, value = text.partition("=")
    try:
        if sep:
            return np.full(dim, float(value))
        coords = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot read point {text!r}") from exc
    if coords.shape != (dim,):
        raise UsageError(f"point {text!r} has {coords.size} coordinates, expected {dim}")
    return coords


def load_config(path: Optional[str]) -> dict:
    """``points``, ``seed`` and ``tol`` from the ``[homred]`` section of an INI file."""
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise UsageError(f"cannot read config file {path}")
    if not parser.has_section("homred"):
        return {}
    sec = parser["homred"]
    out = {}
    try:
        if "points" in sec:
            out["points"] = sec.getint("points")
        if "seed" in sec:
            out["seed"] = sec.getint("seed")
        if "tol" in sec:
            out["tol"] = sec.getfloat("tol")
    except ValueError as exc:
        raise UsageError(f"config file {path}: {exc}") from exc
    unknown = sorted(set(sec) - {"points", "seed", "tol"})
    if unknown:
        raise UsageError(f"config file {path}: unknown keys {', '.join(unknown)}")
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with default points, seed and tol")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--points", type=int, help=f"samples per check (default {DEFAULT_POINTS})")
    sampling.add_argument("--seed", type=int, help=f"sampling seed (default {DEFAULT_SEED})")
    sampling.add_argument("--tol", type=float, help=f"residual tolerance (default {DEFAULT_TOL:g})")

    parser = _Parser(prog="homred", description="Homogeneous structure tensors and their reductions.")
    parser.add_argument("--version", action="version", version=f"homred {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", parents=[common], help="list catalog examples")
    for name, text in (("check", "run all checks of an example"), ("classify", "class of the structure tensor"), ("reduce", "reduced tensor on the base")):
        p = sub.add_parser(name, parents=[common, sampling], help=text)
        p.add_argument("example")
        p.add_argument("params", nargs="*", metavar="name=value")
        if name != "check":
            p.add_argument("--at", action="append", default=[], metavar="POINT", help="evaluation point (repeatable)")
    v = sub.add_parser("verify-all", parents=[common, sampling], help="run the acceptance matrix")
    v.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    return parser


def _settings(args) -> RunConfig:
    conf = load_config(args.config)
    points = args.points if args.points is not None else conf.get("points", DEFAULT_POINTS)
    seed = args.seed if args.seed is not None else conf.get("seed", DEFAULT_SEED)
    tol = args.tol if args.tol is not None else conf.get("tol")
    if points < 1:
        raise UsageError("--points must be at least 1")
    if tol is not None and not tol > 0:
        raise UsageError("--tol must be positive")
    return RunConfig(points=points, seed=seed, tol=tol)


def _example(args):
    given = parse_params(args.params)
    try:
        spec = get_example(args.example, given)
    except UnknownExampleError as exc:
        raise UsageError(exc.args[0]) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        params = spec.params(given)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return spec, params


def _points(args, chart, default) -> list[np.ndarray]:
    pts = [parse_point(a, chart.dim) for a in args.at] or [np.asarray(default, float)]
    for p in pts:
        try:
            chart.check_point(p)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return pts


def _terms(t: np.ndarray, one_based: bool) -> list[list[float]]:
    return [[c, a, b, d] for c, a, b, d in wedge_terms(np.round(t, 14), 1e-12, one_based)]


def cmd_list(args) -> Report:
    return Report("list", __version__, {}, results={"examples": list_examples()})


def cmd_check(args) -> Report:
    spec, params = _example(args)
    cfg = _settings(args)
    checks = check_example(spec, params, cfg)
    settings = {"points": cfg.points, "seed": cfg.seed, "tol": cfg.tol if cfg.tol is not None else DEFAULT_TOL}
    return Report("check", __version__, settings, checks, spec.name, params)


def cmd_classify(args) -> Report:
    spec, params = _example(args)
    cfg = _settings(args)
    s = spec.structure(params)
    rows = []
    checks = []
    for p in _points(args, spec.chart, spec.base_point):
        try:
            c = classify_tensor(s.lowered(spec.chart, p), spec.chart.metric_jet(p, 0).v)
            rows.append({"point": p, "class": c.label, "norms": list(c.norms), "total_norm": c.total_norm})
        except Exception as exc:
            checks.append(CheckResult(f"classify at {p.tolist()}", False, "derived", detail=f"{type(exc).__name__}: {exc}"))
    try:
        overall = classify(spec.chart, s, cfg.samples(spec.chart, 0, count=min(cfg.points, 5))).label
    except Exception as exc:
        overall = None
        checks.append(CheckResult("class on samples", False, "derived", detail=f"{type(exc).__name__}: {exc}"))
    if "class" in spec.expected and overall is not None:
        e = spec.expected["class"]
        want = e.resolve(params)
        checks.append(CheckResult("class", overall == want, e.origin, expected=want, observed=overall))
    return Report("classify", __version__, {"points": cfg.points, "seed": cfg.seed}, checks, spec.name, params, {"class": overall, "points": rows})


def cmd_reduce(args) -> Report:
    spec, params = _example(args)
    if spec.bundle is None:
        raise UsageError(f"{spec.name} has no bundle to reduce along")
    cfg = _settings(args)
    b = spec.bundle
    s = spec.structure(params)
    default = spec.reduced_point if spec.reduced_point is not None else b.base.base_point
    one_based = spec.reduced_index_base == 1
    rows, checks = [], []
    for x in _points(args, b.base, default):
        try:
            g = b.base.metric_jet(x, 0).v
            chart_low = lower_first(reduce_tensor(b, s, x), g)
            low = to_table_coordinates(b.base, chart_low, x)
            rows.append({"point": x, "terms": _terms(low, one_based), "class": classify_tensor(chart_low, g).label})
            if spec.reduced_table is not None and np.allclose(x, spec.reduced_point):
                err = float(np.max(np.abs(low - spec.reduced_table.tensor(params))))
                tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL
                checks.append(CheckResult("reduced_table", err <= tol, spec.reduced_table.origin, residual=err, tolerance=tol))
        except Exception as exc:
            checks.append(CheckResult(f"reduce at {x.tolist()}", False, "derived", detail=f"{type(exc).__name__}: {exc}"))
    try:
        red = reduced_structure(b, s)
        overall = classify(b.base, red, cfg.samples(b.base, 1, count=min(cfg.points, 5))).label
    except Exception as exc:
        overall = None
        checks.append(CheckResult("reduced class on samples", False, "derived", detail=f"{type(exc).__name__}: {exc}"))
    if "reduced_class" in spec.expected and overall is not None:
        e = spec.expected["reduced_class"]
        want = e.resolve(params)
        checks.append(CheckResult("reduced_class", overall == want, e.origin, expected=want, observed=overall))
    results = {"base": b.base.name, "class": overall, "points": rows, "index_base": 1 if one_based else 0}
    return Report("reduce", __version__, {"points": cfg.points, "seed": cfg.seed}, checks, spec.name, params, results)


def cmd_verify_all(args) -> Report:
    cfg = _settings(args)
    if args.criteria:
        try:
            chosen = [int(c) for c in args.criteria.split(",")]
        except ValueError as exc:
            raise UsageError(f"cannot read criteria {args.criteria!r}") from exc
        bad = [c for c in chosen if c not in CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}; known: {sorted(CRITERIA)}")
    else:
        chosen = list(CRITERIA)
    checks = acceptance_suite(cfg, chosen)
    by = {}
    for c in checks:
        by.setdefault(str(c.criterion), True)
        by[str(c.criterion)] &= c.passed
    settings = {"points": cfg.points, "seed": cfg.seed, "tol": cfg.tol, "criteria": chosen}
    return Report("verify-all", __version__, settings, checks, results={"criteria": by})


COMMANDS = {"list": cmd_list, "check": cmd_check, "classify": cmd_classify, "reduce": cmd_reduce, "verify-all": cmd_verify_all}


def _render(report: Report, args) -> str:
    if args.json:
        if report.command == "list":
            return json.dumps(report.results["examples"]) + "\n"
        return report.to_json(args.timing)
    if report.command == "list":
        return "".join(f"{n}\n" for n in report.results["examples"])
    text = report.to_text()
    if report.command == "classify":
        text = f"class: {report.results['class']}\n" + "".join(
            f"  at {np.asarray(r['point']).tolist()}: {r['class']} norms {['%.3e' % v for v in r['norms']]}\n" for r in report.results["points"]
        ) + text
    if report.command == "reduce":
        lines = [f"reduced tensor on {report.results['base']} (class {report.results['class']})"]
        for r in report.results["points"]:
            lines.append(f"  at {np.asarray(r['point']).tolist()}:")
            lines += [f"    {c:+.12g} d{a} ⊗ d{b} ∧ d{d}" for c, a, b, d in r["terms"]] or ["    0"]
        text = "\n".join(lines) + "\n" + text
    return text


def _save(report: Report, args) -> None:
    target = os.environ.get(REPORT_DIR_ENV)
    if not target:
        return
    d = Path(target)
    d.mkdir(parents=True, exist_ok=True)
    stem = report.command + (f"-{report.example}" if report.example else "")
    (d / f"{stem}.json").write_text(report.to_json(args.timing), encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        start = time.perf_counter()
        report = COMMANDS[args.command](args)
        report.wall_seconds = round(time.perf_counter() - start, 3)
    except UsageError as exc:
        print(f"homred: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_render(report, args))
    _save(report, args)
    if report.command != "list" and not args.json:
        print(f"wall time {report.wall_seconds:.2f}s", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
