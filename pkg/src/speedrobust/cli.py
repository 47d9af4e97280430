"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a checked claim failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import adversary, fluid, unit01
from .core import BagProfile, Instance, SpeedConfig
from .discrete import combined18, lpt_bags
from .estimators import ALGOS, FLUID_ALGOS, build_profile
from .validation import format_number

EXIT_OK, EXIT_USAGE, EXIT_CLAIM = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    return format_number(x) if not isinstance(x, float) else f"{x:.15g}"


def _write(path, text: str) -> None:
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# bags


def _instance_from_args(args) -> Instance:
    if args.instance:
        return Instance.from_dict(json.loads(Path(args.instance).read_text()))
    if args.m is None:
        raise UsageError("--m is required")
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    if args.algo in FLUID_ALGOS:
        return Instance.fluid_volume(1 if args.algo == "sandalg" else args.m, args.m)
    if args.n is None:
        raise UsageError(f"--n is required for {args.algo}")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    return Instance.unit_jobs(args.n, args.m)


def cmd_bags(args) -> int:
    inst = _instance_from_args(args)
    try:
        prof = build_profile(args.algo, inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    prof = BagProfile(prof.sizes, prof.kind, prof.job_map, prof.volume, prof.algo,
                      {**prof.meta, "instance": inst.to_dict()})
    print(f"{args.algo}: {prof.m} bags ({prof.kind})")
    for b, a in enumerate(prof.sizes, start=1):
        print(f"  bag {b:3d}  {_fmt(a)}")
    if args.out:
        _write(args.out, prof.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# evaluate


def _load_profile(path) -> BagProfile:
    return BagProfile.from_json(Path(path).read_text())


def _family(name: str, prof: BagProfile, inst: Instance, args):
    m = inst.m
    if name == "sk":
        plan = fluid.sandalg_general(m)
        return [c.normalized(inst.total) for c in fluid.adversary_configs_Sk(plan)]
    if name == "file":
        if not args.configs:
            raise UsageError("--family file needs --configs")
        data = json.loads(Path(args.configs).read_text())
        items = data["configs"] if isinstance(data, dict) else data
        return [SpeedConfig.from_dict(c if isinstance(c, dict) else {"speeds": c}) for c in items]
    raise UsageError(f"unknown family {name!r}")


def cmd_evaluate(args) -> int:
    prof = _load_profile(args.profile)
    if args.instance:
        inst = Instance.from_dict(json.loads(Path(args.instance).read_text()))
    elif "instance" in prof.meta:
        inst = Instance.from_dict(prof.meta["instance"])
    else:
        raise UsageError("no instance given and none recorded in the profile")
    if inst.m != prof.m:
        raise UsageError(f"dimension mismatch: profile has {prof.m} bags, instance has m={inst.m}")
    try:
        prof.check_against(inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.family == "s01":
        rep = adversary.evaluate_01(prof, inst, method=args.method)
    elif args.family == "grid":
        rep = adversary.search_speeds(prof, inst, D=args.grid_resolution, workers=args.jobs,
                                      method=args.method)
    else:
        rep = adversary.evaluate_family(prof, inst, _family(args.family, prof, inst, args),
                                        method=args.method, workers=args.jobs, name=args.family)
    s = rep.summary()
    print(f"family {s['family']}: {s['configs']} configurations, {s['label']}")
    print(f"max ratio {s['max_ratio']} ({s['max_ratio_float']:.12g}) at speeds "
          f"{' '.join(s['argmax_speeds'])}")
    if args.out:
        _write(f"{args.out}.csv", rep.to_csv())
        _write(f"{args.out}.json", rep.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce


def _rho_limits(args):
    limit = math.e / (math.e - 1)
    rows, ok = [], True
    prev = 0.0
    for m in range(1, 101):
        r = fluid.rho_general(m)
        r01, t = fluid.rho01(m)
        rf = float(r)
        ok &= prev <= rf < limit + 1e-12 and float(r01) <= fluid.RHO01_LIMIT + 1e-12
        prev = rf
        rows.append([m, str(r) if m <= 12 else "", f"{rf:.12f}", str(r01), t, f"{float(r01):.12f}"])
    print(f"{'m':>4} {'rho(m)':>16} {'rho01(m)':>16} t*")
    for row in rows:
        if row[0] <= 12 or row[0] % 10 == 0:
            print(f"{row[0]:>4} {row[2]:>16} {row[5]:>16} {row[4]}")
    print(f"limits: e/(e-1) = {limit:.12f}, (1+sqrt 2)/2 = {fluid.RHO01_LIMIT:.12f}")
    header = ["m", "rho_exact", "rho", "rho01_exact", "t_star", "rho01"]
    return ok, header, rows


def _certificate(args):
    cert = adversary.certify_m6()
    print(cert.describe())
    ok = cert.phi == Fraction(589, 391) and cert.covering_sum == 755
    ok &= cert.phi > fluid.rho_general(6)
    rows = [[r.index, r.min_bag, r.tail_sum or "", r.s1, r.s6, str(r.phi), str(r.opt)] for r in cert.rows]
    return ok, ["row", "min_bag", "tail_sum", "s1", "s6", "phi", "opt"], rows


def _examples(args):
    ok, rows = True, []
    for m in range(4, 9):
        ex1, ex2 = adversary.example_games(m)
        for g, want in ((ex1, (Fraction(4, 3), Fraction(3, 2))), (ex2, (Fraction(3, 2), Fraction(4, 3)))):
            ok &= g.forced == want
            for branch, cells in g.table.items():
                for adv, (alg, opt, r) in cells.items():
                    rows.append([g.name, m, branch, adv, str(alg), str(opt), str(r)])
            print(f"{g.name:8s} m={m}: uniform bags -> {g.forced[0]}, other bags -> {g.forced[1]}")
    return ok, ["game", "m", "bags", "adversary", "alg", "opt", "ratio"], rows


def _grid43(args):
    ok, rows = True, []
    for m in range(1, 13):
        for k in range(1, 11):
            for ell in range(min(m, k)):
                n = m * k - ell
                if m > 1 and unit01.opt_m_unit(n, m) == unit01.opt_m_unit(n, m - 1):
                    continue
                plan = unit01.build_43(n, m)
                rep = adversary.evaluate_01(plan.profile(), Instance.unit_jobs(n, m), method="exact")
                good = rep.max_ratio <= Fraction(4, 3)
                ok &= good
                rows.append([n, m, k, ell, plan.branch, " ".join(map(str, plan.bags)),
                             str(rep.max_ratio), "ok" if good else "VIOLATION"])
    bad = [r for r in rows if r[-1] != "ok"]
    print(f"grid43: {len(rows)} cells (m <= 12, k_bar <= 10), {len(bad)} violations")
    for r in bad:
        print("  violation", r)
    return ok, ["n", "m", "k_bar", "ell", "branch", "bags", "max_ratio", "status"], rows


def _table1(args):
    rng = random.Random(args.seed)
    m = 3
    ok, rows = True, []

    def cell(jobs, speeds, lower, upper, measured, note):
        rows.append([jobs, speeds, lower, upper, measured, note])

    # general jobs, general speeds: LPT on random instances
    worst = Fraction(0)
    for _ in range(5):
        inst = Instance(tuple(rng.randint(1, 8) for _ in range(rng.randint(2, 7))), m)
        rep = adversary.search_speeds(lpt_bags(inst), inst, D=12, workers=args.jobs)
        worst = max(worst, rep.max_ratio / (2 - Fraction(1, m)))
    ok &= worst <= 1
    cell("discrete", "general", f"rho(m)={float(fluid.rho_general(m)):.4f}", f"2-1/m={2 - 1 / m:.4f}",
         f"LPT worst/bound={float(worst):.4f}", "sampled instances")
    cell("discrete", "{0,1}", "4/3", "5/3", "-", "cited bounds, not recomputed")
    # unit jobs
    worst18 = 0.0
    for n in (5, 9, 14, 25):
        rep = adversary.search_speeds(combined18(n, m), Instance.unit_jobs(n, m), D=12, workers=args.jobs)
        worst18 = max(worst18, float(rep.max_ratio))
    ok &= worst18 <= 1.8 + 1e-9
    cell("equal-size", "general", f"rho(m)={float(fluid.rho_general(m)):.4f}", "1.8",
         f"combined18 max={worst18:.4f}", "sampled n, grid search")
    worst43 = Fraction(0)
    for n in range(1, 31):
        worst43 = max(worst43, adversary.evaluate_01(unit01.build_43(n, 6).profile(),
                                                     Instance.unit_jobs(n, 6)).max_ratio)
    ok &= worst43 <= Fraction(4, 3)
    cell("equal-size", "{0,1}", "4/3", "4/3", f"build_43 m=6 max={float(worst43):.4f}", "n <= 30, all t")
    plan = fluid.sandalg_general(m)
    rep = adversary.evaluate_family(plan.profile(), Instance.fluid_volume(1, m),
                                    fluid.adversary_configs_Sk(plan), name="sk")
    ok &= rep.max_ratio == plan.rho
    cell("infinitesimal", "general", f"rho(m)={float(plan.rho):.4f}", f"<= e/(e-1)={math.e / (math.e - 1):.4f}",
         f"S_k max={float(rep.max_ratio):.4f}", "exact on S_k")
    r01, _ = fluid.rho01(m)
    rep = adversary.evaluate_01(fluid.sandalg01_exact(m).profile(), Instance.fluid_volume(m, m))
    ok &= rep.max_ratio == r01
    cell("infinitesimal", "{0,1}", f"rho01(m)={float(r01):.4f}", f"<= (1+sqrt2)/2={fluid.RHO01_LIMIT:.4f}",
         f"exact bags max={float(rep.max_ratio):.4f}", "all failure patterns")
    print(f"{'jobs':14s} {'speeds':8s} {'lower':18s} {'upper':22s} measured (m={m})")
    for r in rows:
        print(f"{r[0]:14s} {r[1]:8s} {r[2]:18s} {r[3]:22s} {r[4]}")
    return ok, ["jobs", "speeds", "lower", "upper", "measured", "note"], rows


TARGETS = {
    "table1": _table1,
    "rho-limits": _rho_limits,
    "m6-certificate": _certificate,
    "examples": _examples,
    "grid43": _grid43,
}


def cmd_reproduce(args) -> int:
    ok, header, rows = TARGETS[args.target](args)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_CLAIM


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="speedrobust", description="Speed-robust scheduling toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bags", help="build first-stage bags")
    b.add_argument("--algo", required=True, choices=ALGOS)
    b.add_argument("--n", type=int, help="number of unit jobs")
    b.add_argument("--m", type=int, help="number of machines")
    b.add_argument("--instance", help="instance JSON instead of --n/--m")
    b.add_argument("--out", help="write the profile JSON here")
    b.set_defaults(func=cmd_bags)

    e = sub.add_parser("evaluate", help="robustness of a bag profile")
    e.add_argument("--profile", required=True)
    e.add_argument("--instance")
    e.add_argument("--family", choices=("s01", "sk", "grid", "file"), default="s01")
    e.add_argument("--configs", help="speed configurations JSON for --family file")
    e.add_argument("--grid-resolution", type=int, default=24)
    e.add_argument("--method", choices=adversary.METHODS, default="auto")
    e.add_argument("--jobs", type=int, default=1, help="worker processes")
    e.add_argument("--out", help="output prefix for .csv and .json")
    e.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("reproduce", help="rerun a bundled check")
    r.add_argument("--target", required=True, choices=sorted(TARGETS))
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--out", help="CSV output")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
