"""Robustness evaluation against speed configurations, plus lower-bound certificates.

A ratio is ``ALG / OPT`` where ALG is the best second-stage makespan for the
fixed bags and OPT the full-information optimum for the jobs. Speeds are
rescaled so that they sum to the job volume before reporting.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .assign import assign_exact, assign_fold01, assign_lpt_capacity, exact_limit
from .core import BagProfile, Instance, SpeedConfig, opt_full_info, opt_m_unit, _unit_opt
from .validation import format_number

METHODS = ("auto", "exact", "fold", "lpt")


@dataclass(frozen=True)
class ReportRow:
    speeds: tuple
    alg: object
    opt: object
    ratio: object
    method: str


@dataclass
class RobustnessReport:
    """Per-configuration ratios and their maximum.

    ``exact_alg`` is false when some ALG value came from a heuristic
    assignment (then the ratio is an upper bound for that configuration).
    ``scope`` is ``"family"`` when the configurations are a fixed finite family
    and ``"heuristic"`` when they came out of a search.
    """

    family: str
    rows: list = field(default_factory=list)
    scope: str = "family"

    @property
    def exact_alg(self) -> bool:
        return all(r.method == "exact" for r in self.rows)

    @property
    def argmax(self) -> int:
        best = 0
        for i, r in enumerate(self.rows):
            if r.ratio > self.rows[best].ratio:
                best = i
        return best

    @property
    def max_ratio(self):
        return self.rows[self.argmax].ratio if self.rows else None

    @property
    def label(self) -> str:
        if self.scope == "heuristic":
            return "heuristic lower bound"
        if self.exact_alg:
            return f"certified over family {self.family}"
        return f"upper bound over family {self.family}"

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf)
        w.writerow(["speeds", "alg", "opt", "ratio", "ratio_float", "method"])
        for r in self.rows:
            w.writerow([";".join(format_number(s) for s in r.speeds), format_number(r.alg),
                        format_number(r.opt), format_number(r.ratio), f"{float(r.ratio):.15g}",
                        r.method])
        return buf.getvalue() if fh is None else ""

    def summary(self) -> dict:
        best = self.rows[self.argmax] if self.rows else None
        return {
            "family": self.family,
            "label": self.label,
            "configs": len(self.rows),
            "max_ratio": format_number(best.ratio) if best else None,
            "max_ratio_float": float(best.ratio) if best else None,
            "argmax_speeds": [format_number(s) for s in best.speeds] if best else None,
            "exact_alg": self.exact_alg,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


# ---------------------------------------------------------------------------
# evaluation of single configurations


def _alg_value(sizes, speeds, method: str):
    m = len(sizes)
    if method == "auto":
        method = "exact" if m <= exact_limit() else "lpt"
    if method == "exact":
        return assign_exact(sizes, SpeedConfig(tuple(speeds))).makespan, "exact"
    if method == "lpt":
        return assign_lpt_capacity(sizes, SpeedConfig(tuple(speeds))).makespan, "lpt"
    raise ValueError(f"method {method!r} needs {{0,1}} speeds")


def _opt_value(inst: Instance, speeds):
    return opt_full_info(inst, SpeedConfig(tuple(speeds)))


def _normalize(inst: Instance, speeds) -> tuple:
    cfg = SpeedConfig(tuple(speeds))
    return cfg.normalized(inst.total).speeds if inst.total > 0 else cfg.speeds


def _evaluate_one(args) -> ReportRow:
    sizes, inst, speeds, method = args
    speeds = _normalize(inst, speeds)
    alg, used = _alg_value(sizes, speeds, method)
    opt = _opt_value(inst, speeds)
    ratio = alg / opt if opt else (Fraction(1) if alg == 0 else float("inf"))
    return ReportRow(tuple(speeds), alg, opt, ratio, used)


def _map(fn, tasks: list, workers: int) -> list:
    # ordered results whatever the pool does, so reductions stay deterministic
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def _sizes_for(bags: BagProfile, inst: Instance) -> list:
    bags.check_against(inst)
    return list(bags.sizes)


def evaluate_family(bags: BagProfile, inst: Instance, family: Iterable[SpeedConfig],
                    method: str = "auto", workers: int = 1, name: str = "file") -> RobustnessReport:
    """Ratio for each configuration in ``family``; the max is a lower bound on robustness."""
    sizes = _sizes_for(bags, inst)
    tasks = []
    for cfg in family:
        if cfg.m != inst.m:
            raise ValueError(f"speed config has {cfg.m} machines, instance has m={inst.m}")
        tasks.append((sizes, inst, cfg.speeds, method))
    return RobustnessReport(name, _map(_evaluate_one, tasks, workers))


def evaluate_01(bags: BagProfile, inst: Instance, method: str = "auto") -> RobustnessReport:
    """All failure patterns ``t = 0..m-1`` (failed machines first).

    ``auto`` uses the exact assignment up to the exact limit and otherwise the
    better of folding and LPT, which upper-bounds the exact second stage.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    sizes = _sizes_for(bags, inst)
    m = inst.m
    rows = []
    for t in range(m):
        mp = m - t
        raw = (0,) * t + (1,) * mp
        scale = inst.total / mp if inst.total > 0 else Fraction(1)
        if inst.fluid:
            opt_raw = inst.total / mp
        elif inst.unit:
            opt_raw = Fraction(opt_m_unit(inst.n, mp))
        else:
            opt_raw = opt_full_info(inst, SpeedConfig(raw))
        use = method
        if use == "auto":
            use = "exact" if m <= exact_limit() else "heuristic"
        if use == "exact":
            alg_raw = assign_exact(sizes, SpeedConfig(raw)).makespan
        elif use == "fold":
            alg_raw = assign_fold01(sizes, mp).makespan
        elif use == "lpt":
            alg_raw = assign_lpt_capacity(sizes, SpeedConfig(raw)).makespan
        else:
            alg_raw = min(assign_fold01(sizes, mp).makespan,
                          assign_lpt_capacity(sizes, SpeedConfig(raw)).makespan)
        ratio = alg_raw / opt_raw if opt_raw else (Fraction(1) if alg_raw == 0 else float("inf"))
        speeds = tuple(s * scale for s in raw)
        rows.append(ReportRow(speeds, alg_raw / scale, opt_raw / scale, ratio, use))
    return RobustnessReport("s01", rows)


# ---------------------------------------------------------------------------
# heuristic search


def partitions(total: int, parts: int) -> list[tuple]:
    """Nondecreasing ``parts``-tuples of nonnegative integers summing to ``total``."""
    out = []

    def rec(prefix: list, left: int, slots: int, lo: int):
        if slots == 1:
            if left >= lo:
                out.append(tuple(prefix + [left]))
            return
        for v in range(lo, left // slots + 1):
            rec(prefix + [v], left - v, slots - 1, v)

    rec([], total, parts, 0)
    return out


def targeted_configs(sizes: Sequence, total, D: int) -> list[tuple]:
    """``m-1`` equal slow machines at ``a_k / r`` plus one residual fast machine."""
    m = len(sizes)
    out = []
    if m < 2:
        return out
    bag_total = sum(sizes)
    if bag_total == 0:
        return out
    scale = Fraction(total) / Fraction(bag_total)
    for a in sorted(set(sizes)):
        if a == 0:
            continue
        for j in range(0, D + 1):
            r = 1 + Fraction(j, D)
            slow = Fraction(a) * scale / r
            fast = Fraction(total) - (m - 1) * slow
            if fast >= 0:
                out.append(tuple(sorted((slow,) * (m - 1) + (fast,))))
    return out


def search_speeds(bags: BagProfile, inst: Instance, D: int = 24, refine_rounds: int = 1,
                  refine_step=None, workers: int = 1, method: str = "auto") -> RobustnessReport:
    """Grid over the speed simplex, S_k-like targeted configurations and local refinement.

    The result is a heuristic lower bound: it only reports what was found.
    """
    m = inst.m
    if m > 6:
        raise ValueError(f"search_speeds is meant for m <= 6, got m={m}")
    sizes = [Fraction(a) if not isinstance(a, float) else a for a in _sizes_for(bags, inst)]
    total = inst.total if inst.total > 0 else Fraction(1)
    total = Fraction(total)
    seen: dict = {}

    def key(speeds):
        return tuple(sorted(speeds))

    def run(configs):
        fresh = []
        for c in configs:
            k = key(c)
            if k not in seen and any(s > 0 for s in k):
                seen[k] = None
                fresh.append(k)
        rows = _map(_evaluate_one, [(sizes, inst, c, method) for c in fresh], workers)
        for c, r in zip(fresh, rows):
            seen[c] = r
        return rows

    grid = [tuple(Fraction(p) * total / D for p in part) for part in partitions(D, m)]
    run(grid)
    run(targeted_configs(sizes, total, D))
    step = Fraction(refine_step) * total if refine_step is not None else total / (4 * D)

    def best_key():
        best = None
        for k, r in seen.items():
            if r is not None and (best is None or r.ratio > seen[best].ratio):
                best = k
        return best

    for _ in range(refine_rounds):
        cur = best_key()
        neigh = []
        for i, j in itertools.permutations(range(m), 2):
            if cur[i] >= step:
                s = list(cur)
                s[i] -= step
                s[j] += step
                neigh.append(tuple(s))
        before = seen[cur].ratio
        run(neigh)
        if seen[best_key()].ratio <= before:
            break
    rows = [r for r in seen.values() if r is not None]
    return RobustnessReport("grid", rows, scope="heuristic")


# ---------------------------------------------------------------------------
# exhaustive integer speeds for small m


def integer_speed_sweep(counts: Sequence[int], n: Optional[int] = None):
    """Worst ratio over all integer speed vectors (zeros allowed) summing to ``n``.

    For unit jobs the optimum is exactly 1 here: machine ``i`` runs ``s_i``
    jobs, and ``n / sum(s)`` is a lower bound. So the ratio is the best
    second-stage makespan. Returns ``(max_ratio, speeds)``, exact.
    """
    counts = [int(c) for c in counts]
    m = len(counts)
    n = sum(counts) if n is None else n
    parts = np.array(partitions(n, m), dtype=np.int64)
    maps = list(itertools.product(range(m), repeat=m))
    loads = np.zeros((len(maps), m), dtype=np.int64)
    for r, mp in enumerate(maps):
        for b, i in enumerate(mp):
            loads[r, i] += counts[b]
    # permuting the speeds changes nothing because every map is tried
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = loads[None, :, :] / parts[:, None, :]
    ratio = np.where(loads[None, :, :] == 0, 0.0, ratio)
    ratio = np.where(np.isnan(ratio), np.inf, ratio)
    alg = ratio.max(axis=2).min(axis=1)
    worst = int(np.argmax(alg))
    speeds = tuple(int(s) for s in parts[worst])
    exact = _best_makespan_int(counts, speeds)
    return exact, speeds


def _best_makespan_int(counts, speeds) -> Fraction:
    best = None
    for mp in itertools.product(range(len(speeds)), repeat=len(counts)):
        loads = [0] * len(speeds)
        for b, i in enumerate(mp):
            loads[i] += counts[b]
        if any(l > 0 and s == 0 for l, s in zip(loads, speeds)):
            continue
        v = max(Fraction(l, s) for l, s in zip(loads, speeds) if s > 0)
        if best is None or v < best:
            best = v
    return best


# ---------------------------------------------------------------------------
# lower-bound certificates and demo instances


def _m6_row_data():
    # (condition a_i >=, tail sum >=, s1, s6); the first and last rows have no tail condition
    return [
        (77, 756, 51, 501),
        (92, 680, 61, 451),
        (110, 589, 73, 391),
        (133, 480, 88, 318),
        (159, 348, 105, 231),
        (190, None, 126, 226),
    ]


@dataclass(frozen=True)
class CertificateRow:
    index: int
    min_bag: int
    tail_sum: Optional[int]
    head_max: Optional[int]
    s1: int
    s6: int
    phi: Fraction
    opt: Fraction


@dataclass(frozen=True)
class LowerBoundCertificate:
    n: int
    m: int
    rows: tuple
    phi: Fraction
    covering_sum: int
    # rows whose listed phi is larger than what their own conditions imply
    unsupported: tuple = ()

    def describe(self) -> str:
        lines = [f"n={self.n} unit jobs, m={self.m}: five machines at s1, one at s6"]
        for r in self.rows:
            tail = f"sum_(j>={r.index}) a_j >= {r.tail_sum}" if r.tail_sum else "-"
            lines.append(f"  a_{r.index} >= {r.min_bag:3d}  {tail:24s} s1={r.s1:3d} s6={r.s6:3d} "
                         f"phi={r.phi} ({float(r.phi):.6f})")
        lines.append(f"  covering sum {self.covering_sum} < {self.n}; phi = {self.phi}")
        for i in self.unsupported:
            lines.append(f"  row {i}: listed phi does not follow from its conditions")
        return "\n".join(lines)


def certify_m6() -> LowerBoundCertificate:
    """Rebuild the six-row table for 756 unit jobs on six machines and check its arithmetic.

    The last row lists ``190/126`` although a single large bag may sit alone on
    the fast machine; such rows are reported in ``unsupported``.
    """
    n, m = 756, 6
    rows = []
    for idx, (c, tail, s1, s6) in enumerate(_m6_row_data(), start=1):
        if 5 * s1 + s6 < n:
            raise AssertionError(f"row {idx}: speeds cannot hold {n} jobs")
        opt, _ = _unit_opt(n, (s1,) * 5 + (s6,))
        if opt > 1:
            raise AssertionError(f"row {idx}: optimum {opt} exceeds 1")
        if tail is None:
            phi = Fraction(c, s1)
        else:
            phi = min(Fraction(c, s1), Fraction(tail, s6))
        head = n - tail if tail is not None and idx > 1 else None
        rows.append(CertificateRow(idx, c, tail, head, s1, s6, phi, opt))
    # a row's head condition is the negation of all earlier first conditions
    prefix = 0
    for r in rows[1:]:
        prefix += rows[r.index - 2].min_bag - 1
        if r.head_max is not None and prefix > r.head_max:
            raise AssertionError(f"row {r.index}: earlier rows do not imply its tail condition")
    covering = sum(r.min_bag - 1 for r in rows)
    if covering >= n:
        raise AssertionError(f"covering sum {covering} is not below n={n}")
    phi = min(r.phi for r in rows)
    unsupported = []
    for r in rows:
        # without a tail condition the bags from a_i up weigh at least a_i (all n in row 1)
        tail = r.tail_sum if r.tail_sum is not None else (n if r.index == 1 else r.min_bag)
        if min(Fraction(r.min_bag, r.s1), Fraction(tail, r.s6)) < phi:
            unsupported.append(r.index)
    return LowerBoundCertificate(n, m, tuple(rows), phi, covering, tuple(unsupported))


def m6_bound_for(bags: Sequence[int]) -> Fraction:
    """Best lower bound the six configurations give for one concrete bagging.

    For each configuration it takes the minimum over the set ``F`` of bags on
    the fast machine of ``max(sum F / s6, max bag outside F / s1)``.
    """
    a = sorted(int(x) for x in bags)
    best = Fraction(0)
    for _, _, s1, s6 in _m6_row_data():
        lo = None
        for mask in range(1 << len(a)):
            inside = sum(a[j] for j in range(len(a)) if mask >> j & 1)
            outside = max((a[j] for j in range(len(a)) if not mask >> j & 1), default=0)
            v = max(Fraction(inside, s6), Fraction(outside, s1))
            if lo is None or v < lo:
                lo = v
        best = max(best, lo)
    return best


@dataclass(frozen=True)
class GameResult:
    name: str
    n: int
    m: int
    # algorithm branch -> adversary branch -> (alg, opt, ratio)
    table: dict
    forced: tuple


def _game(name: str, m: int, per_bag: int, other: list[int]) -> GameResult:
    n = per_bag * m
    inst = Instance.unit_jobs(n, m)
    profiles = {"uniform": [per_bag] * m, "other": other}
    table = {}
    forced = []
    for branch, counts in profiles.items():
        rep = evaluate_01(BagProfile.from_counts(counts), inst)
        cells = {}
        for label, t in (("none fails", 0), ("one fails", 1)):
            r = rep.rows[t]
            cells[label] = (r.alg * r.speeds[-1], r.opt * r.speeds[-1], r.ratio)
        table[branch] = cells
        forced.append(max(c[2] for c in cells.values()))
    return GameResult(name, n, m, table, tuple(forced))


def example_games(m: int) -> tuple[GameResult, Optional[GameResult]]:
    """The two-strategy adversaries for ``2m`` (needs m > 2) and ``3m`` (needs m > 3) unit jobs.

    The non-uniform branch is represented by the bagging that is best for the
    algorithm among those with a bag above the uniform size. The second game
    is ``None`` for ``m = 3``.
    """
    if m <= 2:
        raise ValueError(f"the games need m > 2, got m={m}")
    ex1 = _game("2m jobs", m, 2, [3, 1] + [2] * (m - 2))
    ex2 = _game("3m jobs", m, 3, [4, 2] + [3] * (m - 2)) if m > 3 else None
    return ex1, ex2


def demo_opt_not_robust(k: int) -> RobustnessReport:
    """One job of size ``k`` and ``k^2`` unit jobs packed into ``k+1`` bags of size ``k``."""
    m = k * k + 1
    inst = Instance((k,) + (1,) * (k * k), m)
    job_map = [0] + [1 + j // k for j in range(k * k)]
    bags = BagProfile.from_job_map(inst.jobs, job_map, m, algo="min-max-bag")
    cfg = SpeedConfig((1,) * (k * k) + (k,))
    return evaluate_family(bags, inst, [cfg], method="exact", name="optnotrobust")


def demo_balanced(m: int) -> RobustnessReport:
    """``(2m-1) m`` unit jobs in ``m`` equal bags against speeds ``m, 2m, ..., 2m``."""
    n = (2 * m - 1) * m
    inst = Instance.unit_jobs(n, m)
    bags = BagProfile.from_counts([2 * m - 1] * m, algo="balanced")
    cfg = SpeedConfig((m,) + (2 * m,) * (m - 1))
    return evaluate_family(bags, inst, [cfg], method="exact", name="balanced")
