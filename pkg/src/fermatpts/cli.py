"""Command-line front end: enumerate, count, verify, bench."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Callable, TextIO

from . import curve, surface, verify
from .gfcore import TABLE_LIMIT, PrimePower, build_tower, prime_powers
from .points import BudgetExceeded, PointSet, default_budget, representative_count


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    q: int = 2
    ext: int = 1
    object: str = "curve"
    method: str = "parametric"
    q_max: int = 9
    output: str | None = None
    budget: int = 0
    workers: int = 1
    large_q: int | None = None

    def __post_init__(self):
        if self.budget <= 0:
            raise ConfigError("budget must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.subcommand == "verify":
            if self.ext not in (1, 4):
                raise ConfigError("verify takes --ext 4 (remark search) or no --ext")
        else:
            if self.object == "surface" and self.ext != 2:
                raise ConfigError("the surface is only handled over GF(q^2): use --ext 2")
            if not 1 <= self.ext <= 3:
                raise ConfigError("--ext must be 1, 2 or 3 (4 is only allowed under verify)")
        try:
            pp = PrimePower.from_int(self.q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.subcommand != "verify" and pp.q**self.ext > TABLE_LIMIT:
            raise ConfigError(f"GF({self.q}^{self.ext}) is larger than the supported table size {TABLE_LIMIT}")


def _parametric(q: int, ext: int, obj: str) -> PointSet:
    t = build_tower(q, ext)
    return surface.enumerate_surface(t) if obj == "surface" else curve.enumerate_parametric(t)


def _brute(q: int, ext: int, obj: str, budget: int, workers: int) -> PointSet:
    t = build_tower(q, ext)
    if obj == "surface":
        return surface.enumerate_surface_brute(t, budget=budget, workers=workers)
    return curve.enumerate_brute(t.top, q - 1, budget=budget, workers=workers)


def _formula(q: int, ext: int, obj: str) -> curve.CurveCount:
    return surface.surface_count_formula(q) if obj == "surface" else curve.count_formula(q, ext)


def _tally(pts: PointSet) -> dict:
    return {"total": len(pts), "by_zero_pattern": pts.zero_pattern_counts(), "by_provenance": pts.provenance_counts()}


def _matches(formula: curve.CurveCount, tally: dict) -> bool:
    zp = {k: formula.by_zero_pattern.get(k, 0) for k in tally["by_zero_pattern"]}
    return formula.total == tally["total"] and zp == tally["by_zero_pattern"]


def count_report(cfg: RunConfig) -> dict:
    f = _formula(cfg.q, cfg.ext, cfg.object)
    report = {
        "q": cfg.q,
        "ext": cfg.ext,
        "object": cfg.object,
        "method": cfg.method,
        "formula": {"total": f.total, "by_zero_pattern": f.by_zero_pattern, "source": f.source},
        "parametric": None,
        "brute": None,
        "brute_refused": None,
    }
    checks = []
    if cfg.method == "parametric":
        report["parametric"] = _tally(_parametric(cfg.q, cfg.ext, cfg.object))
        checks.append(_matches(f, report["parametric"]))
        try:
            report["brute"] = _tally(_brute(cfg.q, cfg.ext, cfg.object, cfg.budget, cfg.workers))
        except BudgetExceeded as exc:
            report["brute_refused"] = str(exc)
    else:
        report["brute"] = _tally(_brute(cfg.q, cfg.ext, cfg.object, cfg.budget, cfg.workers))
    if report["brute"] is not None:
        checks.append(_matches(f, report["brute"]))
    report["formula_match"] = all(checks)
    return report


def _micros(fn: Callable[[], object]) -> tuple[int, object]:
    t0 = time.perf_counter_ns()
    out = fn()
    return (time.perf_counter_ns() - t0) // 1000, out


def bench_report(cfg: RunConfig) -> dict:
    ncoords = 4 if cfg.object == "surface" else 3
    in_budget = [
        q for q in prime_powers(4096)
        if q**cfg.ext <= TABLE_LIMIT and representative_count(q**cfg.ext, ncoords) <= cfg.budget
    ]
    q_small = max(in_budget)
    t_param, p_pts = _micros(lambda: _parametric(q_small, cfg.ext, cfg.object))
    t_brute, b_pts = _micros(lambda: _brute(q_small, cfg.ext, cfg.object, cfg.budget, cfg.workers))
    large = cfg.large_q or (32 if cfg.object == "surface" else 101)
    t_large, l_pts = _micros(lambda: _parametric(large, cfg.ext, cfg.object))
    return {
        "object": cfg.object,
        "ext": cfg.ext,
        "compare": {
            "q": q_small,
            "representatives": representative_count(q_small**cfg.ext, ncoords),
            "points": len(p_pts),
            "parametric_us": t_param,
            "brute_us": t_brute,
            "agree": p_pts == b_pts,
        },
        "large": {
            "q": large,
            "representatives": representative_count(large**cfg.ext, ncoords),
            "points": len(l_pts),
            "formula": _formula(large, cfg.ext, cfg.object).total,
            "parametric_us": t_large,
        },
    }


def run(cfg: RunConfig, out: TextIO) -> int:
    if cfg.subcommand == "enumerate":
        if cfg.method == "parametric":
            pts = _parametric(cfg.q, cfg.ext, cfg.object)
        else:
            pts = _brute(cfg.q, cfg.ext, cfg.object, cfg.budget, cfg.workers)
        for line in pts.json_lines():
            out.write(line + "\n")
        return 0

    if cfg.subcommand == "count":
        report = count_report(cfg)
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return 0 if report["formula_match"] else 1

    if cfg.subcommand == "verify":
        if cfg.ext == 4:
            return _verify_degree4(cfg, out)
        reports = verify.full_report(cfg.q_max, budget=cfg.budget, workers=cfg.workers)
        for r in reports:
            out.write(r.to_json() + "\n")
        failed = sum(r.verdict != "pass" for r in reports)
        print(f"{len(reports)} checks, {failed} failed", file=sys.stderr)
        return 0 if failed == 0 else 1

    if cfg.subcommand == "bench":
        out.write(json.dumps(bench_report(cfg), sort_keys=True) + "\n")
        return 0

    raise ConfigError(f"unknown subcommand {cfg.subcommand!r}")


def _verify_degree4(cfg: RunConfig, out: TextIO) -> int:
    if cfg.q == 2:
        rep = verify.check_remark()
        out.write(rep.to_json() + "\n")
        status = 0 if rep.verdict == "pass" else 1
    else:
        status = 0
    bad = verify.noncube_points(cfg.q, 4, budget=cfg.budget)
    scan = {"q": cfg.q, "i": 4, "check": "noncube-scan", "noncube_points": len(bad), "examples": [list(b) for b in bad[:4]]}
    out.write(json.dumps(scan, sort_keys=True) + "\n")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermatpts", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, ext_default=1):
        p.add_argument("--q", type=int, default=2, help="field size q = p^r")
        p.add_argument("--ext", type=int, default=ext_default, help="extension degree i")
        p.add_argument("--budget", type=int, default=None, help="max brute-force representatives")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    for name in ("enumerate", "count"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--object", choices=("curve", "surface"), default="curve")
        p.add_argument("--method", choices=("parametric", "brute"), default="parametric")

    p = sub.add_parser("verify")
    common(p)
    p.add_argument("--q-max", type=int, default=9)

    p = sub.add_parser("bench")
    common(p, ext_default=3)
    p.add_argument("--object", choices=("curve", "surface"), default="curve")
    p.add_argument("--large-q", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        budget = args.budget if args.budget is not None else default_budget()
        cfg = RunConfig(
            subcommand=args.subcommand,
            q=args.q,
            ext=args.ext,
            object=getattr(args, "object", "curve"),
            method=getattr(args, "method", "parametric"),
            q_max=getattr(args, "q_max", 9),
            output=args.output,
            budget=budget,
            workers=args.workers,
            large_q=getattr(args, "large_q", None),
        )
        if cfg.output:
            with open(cfg.output, "w") as fh:
                return run(cfg, fh)
        return run(cfg, sys.stdout)
    except (ConfigError, BudgetExceeded, ValueError) as exc:
        print(f"fermatpts: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
