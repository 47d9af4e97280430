"""Domain types and the full-information optimum.

Values are exact :class:`~fractions.Fraction` wherever the quantity is
rational. Only bag profiles derived from ``sqrt(2)`` carry floats.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import _search
from .validation import (
    NoWorkingMachineError,
    as_number,
    as_rational,
    check_jobs,
    check_m,
    check_n,
    check_speeds,
    format_number,
)

#: default cap on the number of jobs for the general branch-and-bound optimum
MAX_BB_JOBS = 20


@dataclass(frozen=True)
class Instance:
    """Jobs with processing times plus a machine count.

    ``fluid=True`` marks infinitely many infinitesimal jobs; ``jobs`` then only
    carries the total volume (one or more chunks that are never indivisible).
    """

    jobs: tuple
    m: int
    fluid: bool = False

    def __post_init__(self):
        object.__setattr__(self, "jobs", check_jobs(self.jobs))
        object.__setattr__(self, "m", check_m(self.m))

    @classmethod
    def unit_jobs(cls, n: int, m: int) -> "Instance":
        return cls((1,) * check_n(n), m)

    @classmethod
    def fluid_volume(cls, volume, m: int) -> "Instance":
        return cls((as_rational(volume),), m, fluid=True)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total(self) -> Fraction:
        return sum(self.jobs, Fraction(0))

    @property
    def unit(self) -> bool:
        return not self.fluid and all(p == 1 for p in self.jobs)

    def to_dict(self) -> dict:
        d = {"jobs": [format_number(p) for p in self.jobs], "m": self.m}
        if self.fluid:
            d["fluid"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        return cls(tuple(d["jobs"]), int(d["m"]), bool(d.get("fluid", False)))


@dataclass(frozen=True)
class SpeedConfig:
    speeds: tuple

    def __post_init__(self):
        object.__setattr__(self, "speeds", check_speeds(self.speeds))

    @classmethod
    def zero_one(cls, m: int, failures: int) -> "SpeedConfig":
        """``failures`` machines of speed 0 followed by ``m - failures`` of speed 1."""
        if not 0 <= failures < m:
            raise ValueError(f"need 0 <= failures < m, got {failures} for m={m}")
        return cls((0,) * failures + (1,) * (m - failures))

    @property
    def m(self) -> int:
        return len(self.speeds)

    @property
    def failures(self) -> int:
        return sum(1 for s in self.speeds if s == 0)

    @property
    def working(self) -> int:
        return self.m - self.failures

    @property
    def total(self):
        return sum(self.speeds, Fraction(0))

    def canonical(self) -> "SpeedConfig":
        return SpeedConfig(tuple(sorted(self.speeds)))

    def normalized(self, total) -> "SpeedConfig":
        """Rescale so the speeds sum to ``total`` (usually the job volume)."""
        factor = as_number(total) / self.total
        return SpeedConfig(tuple(s * factor for s in self.speeds))

    def with_extra_failed(self) -> "SpeedConfig":
        return SpeedConfig((0,) + self.speeds)

    def to_dict(self) -> dict:
        return {"speeds": [format_number(s) for s in self.speeds]}

    @classmethod
    def from_dict(cls, d: dict) -> "SpeedConfig":
        return cls(tuple(d["speeds"]))


@dataclass(frozen=True)
class BagProfile:
    """First-stage output: ``m`` bag sizes, plus the job->bag map when discrete.

    Fluid profiles may contain more room than the job volume (``volume``);
    the excess is simply left unused.
    """

    sizes: tuple
    kind: str = "discrete"
    job_map: Optional[tuple] = None
    volume: Optional[Fraction] = None
    algo: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("fluid", "discrete"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        sizes = tuple(as_number(a) for a in self.sizes)
        if not sizes:
            raise ValueError("a profile needs at least one bag")
        if any(a < 0 for a in sizes):
            raise ValueError("bag sizes must be nonnegative")
        object.__setattr__(self, "sizes", sizes)
        if self.job_map is not None:
            jm = tuple(int(b) for b in self.job_map)
            if any(not 0 <= b < len(sizes) for b in jm):
                raise ValueError("job_map refers to a bag outside the profile")
            object.__setattr__(self, "job_map", jm)
        if self.volume is not None:
            object.__setattr__(self, "volume", as_number(self.volume))
        if self.kind == "fluid" and self.volume is not None:
            if sum(sizes) < self.volume - _tol(sizes):
                raise ValueError("fluid bags cannot hold the job volume")

    @classmethod
    def from_job_map(cls, jobs: Sequence, job_map: Sequence[int], m: int, algo: str = "",
                     **meta) -> "BagProfile":
        sizes = [Fraction(0)] * check_m(m)
        for p, b in zip(check_jobs(jobs), job_map):
            sizes[b] += p
        return cls(tuple(sizes), "discrete", tuple(job_map), algo=algo, meta=meta)

    @classmethod
    def from_counts(cls, counts: Sequence[int], algo: str = "", **meta) -> "BagProfile":
        """Unit jobs: bag ``b`` holds ``counts[b]`` jobs, numbered consecutively."""
        job_map = [b for b, c in enumerate(counts) for _ in range(int(c))]
        return cls(tuple(Fraction(int(c)) for c in counts), "discrete", tuple(job_map),
                   algo=algo, meta=meta)

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def total(self):
        return sum(self.sizes)

    def sorted_sizes(self) -> tuple:
        return tuple(sorted(self.sizes))

    def padded(self, extra: int) -> "BagProfile":
        """Append ``extra`` empty bags."""
        return BagProfile(self.sizes + (Fraction(0),) * extra, self.kind, self.job_map,
                          self.volume, self.algo, dict(self.meta))

    def check_against(self, inst: Instance) -> None:
        if self.m != inst.m:
            raise ValueError(f"profile has {self.m} bags but instance has m={inst.m}")
        if self.kind == "discrete":
            if inst.fluid:
                raise ValueError("discrete profile used with a fluid instance")
            if self.job_map is None or len(self.job_map) != inst.n:
                raise ValueError("discrete profile needs a job_map covering every job")
            sizes = [Fraction(0)] * self.m
            for p, b in zip(inst.jobs, self.job_map):
                sizes[b] += p
            if tuple(sizes) != tuple(as_rational(a) for a in self.sizes):
                raise ValueError("bag sizes do not match the jobs mapped into them")
        elif self.total < inst.total - _tol(self.sizes):
            raise ValueError("fluid bags cannot hold the instance volume")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "algo": self.algo,
             "sizes": [format_number(a) for a in self.sizes]}
        if self.job_map is not None:
            d["job_map"] = list(self.job_map)
        if self.volume is not None:
            d["volume"] = format_number(self.volume)
        if self.meta:
            d["meta"] = _jsonable(self.meta)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BagProfile":
        sizes = tuple(_parse_serialized(a) for a in d["sizes"])
        volume = d.get("volume")
        return cls(sizes, d.get("kind", "discrete"),
                   tuple(d["job_map"]) if d.get("job_map") is not None else None,
                   _parse_serialized(volume) if volume is not None else None,
                   d.get("algo", ""), dict(d.get("meta", {})))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "BagProfile":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AssignmentResult:
    bag_to_machine: tuple
    loads: tuple
    makespan: object
    speeds: tuple

    def __post_init__(self):
        for b, i in enumerate(self.bag_to_machine):
            if self.speeds[i] == 0 and self.loads[i] > 0:
                raise ValueError(f"bag {b} placed on failed machine {i}")
        recomputed = max(l / s for l, s in zip(self.loads, self.speeds) if s > 0)
        if abs(recomputed - self.makespan) > _tol(self.loads):
            raise ValueError("makespan does not match the loads")

    @classmethod
    def build(cls, sizes: Sequence, speeds: Sequence, bag_to_machine: Sequence[int]):
        value, loads = _search.makespan_of(list(sizes), list(speeds), list(bag_to_machine))
        return cls(tuple(bag_to_machine), tuple(loads), value, tuple(speeds))


def _tol(values) -> float:
    return 1e-9 if any(isinstance(v, float) for v in values) else 0


def _parse_serialized(x):
    if isinstance(x, str) and any(c in x for c in ".eE") and "/" not in x:
        return float(x)
    return as_number(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_number(obj)
    return obj


# ---------------------------------------------------------------------------
# full-information optimum


def opt_m_unit(n: int, m: int) -> int:
    """Unit jobs on ``m`` unit-speed machines: ``ceil(n/m)``."""
    check_n(n)
    check_m(m)
    return -(-n // m)


def _unit_opt(n: int, speeds: Sequence) -> tuple[Fraction, list[int]]:
    # Parametric search: the optimum is a candidate c/s_i; start from the
    # volume bound n/sum(s) and walk the candidate list upward until
    # sum floor(s_i T) >= n. At most m steps are needed after the start.
    sp = [as_rational(s) for s in speeds]
    idx = [i for i, s in enumerate(sp) if s > 0]
    counts = [0] * len(sp)
    if n == 0:
        return Fraction(0), counts
    t0 = Fraction(n) / sum(sp[i] for i in idx)
    for i in idx:
        counts[i] = math.floor(sp[i] * t0)
    placed = sum(counts)  # <= n since each floor rounds down
    heap = [(Fraction(counts[i] + 1) / sp[i], i) for i in idx]
    heapq.heapify(heap)
    while placed < n:
        _, i = heapq.heappop(heap)
        counts[i] += 1
        placed += 1
        heapq.heappush(heap, (Fraction(counts[i] + 1) / sp[i], i))
    value = max(Fraction(counts[i]) / sp[i] for i in idx if counts[i])
    return value, counts


def opt_schedule(inst: Instance, cfg: SpeedConfig, max_jobs: int = MAX_BB_JOBS):
    """Optimal full-information schedule: ``(makespan, job -> machine)``.

    Fluid instances return ``None`` for the map (volume splits freely).
    """
    if cfg.m != inst.m:
        raise ValueError(f"speed config has {cfg.m} machines, instance has m={inst.m}")
    if not any(s > 0 for s in cfg.speeds):
        raise NoWorkingMachineError("no working machine")
    if inst.fluid:
        return inst.total / cfg.total, None
    positive = [p for p in inst.jobs if p > 0]
    if not positive:
        return Fraction(0), [0] * inst.n
    if len(set(positive)) == 1 and not any(isinstance(s, float) for s in cfg.speeds):
        p = positive[0]
        value, counts = _unit_opt(len(positive), cfg.speeds)
        slots = [i for i, c in enumerate(counts) for _ in range(c)]
        fast = max(range(cfg.m), key=lambda i: cfg.speeds[i])
        it = iter(slots)
        schedule = [next(it) if q > 0 else fast for q in inst.jobs]
        return value * p, schedule
    if len(positive) > max_jobs:
        raise ValueError(f"exact optimum limited to {max_jobs} jobs, got {len(positive)}")
    assign = _search.solve(list(inst.jobs), list(cfg.speeds))
    value, _ = _search.makespan_of(list(inst.jobs), list(cfg.speeds), assign)
    return value, assign


def opt_full_info(inst: Instance, cfg: SpeedConfig, max_jobs: int = MAX_BB_JOBS):
    """Minimum makespan when the speeds are known and jobs are scheduled freely."""
    return opt_schedule(inst, cfg, max_jobs)[0]
