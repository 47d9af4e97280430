"""Second stage: put bags on machines once the speeds are known."""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Optional, Sequence

from . import _search
from .core import AssignmentResult, BagProfile, NoWorkingMachineError, SpeedConfig
from .validation import as_number

DEFAULT_EXACT_LIMIT = 14


class ExactLimitError(ValueError):
    pass


class BagDoesNotFit(RuntimeError):
    """Capacity LPT could not place a bag; ``bag`` is its index in the profile."""

    def __init__(self, bag: int, size, partial: tuple):
        super().__init__(f"bag {bag} (size {size}) does not fit")
        self.bag = bag
        self.size = size
        self.partial = partial


def exact_limit() -> int:
    raw = os.environ.get("SPEEDROBUST_EXACT_LIMIT")
    return int(raw) if raw else DEFAULT_EXACT_LIMIT


def _sizes(bags) -> list:
    if isinstance(bags, BagProfile):
        return list(bags.sizes)
    return [as_number(a) for a in bags]


def assign_exact(bags, cfg: SpeedConfig, limit: Optional[int] = None) -> AssignmentResult:
    """Minimum-makespan bag->machine map by exhaustive search with pruning."""
    sizes = _sizes(bags)
    limit = exact_limit() if limit is None else limit
    if len(sizes) > limit:
        raise ExactLimitError(
            f"instance too large for exact assignment ({len(sizes)} bags > {limit})")
    if not any(s > 0 for s in cfg.speeds):
        raise NoWorkingMachineError("no working machine")
    mapping = _search.solve(sizes, list(cfg.speeds))
    return AssignmentResult.build(sizes, cfg.speeds, mapping)


def assign_lpt_capacity(bags, cfg: SpeedConfig, rho=None, opt_schedule: Optional[Sequence[int]] = None
                        ) -> AssignmentResult:
    """LPT with per-machine capacity ``rho * s_i``.

    Bags go in nonincreasing size (lowest index first on ties) to the machine
    with the smallest ``load / speed`` among those that can still take them.
    ``rho=None`` drops the capacity, which is plain LPT list scheduling.

    If ``opt_schedule`` (job -> machine of an optimal job schedule) is given,
    single-job bags larger than every multi-job bag are first put where that
    schedule runs their job. Raises :class:`BagDoesNotFit` on failure.
    """
    sizes = _sizes(bags)
    speeds = list(cfg.speeds)
    working = [i for i, s in enumerate(speeds) if s > 0]
    if not working:
        raise NoWorkingMachineError("no working machine")
    cap = None if rho is None else [as_number(rho) * s for s in speeds]
    zero = 0.0 if any(isinstance(a, float) for a in sizes) else Fraction(0)
    loads = [zero] * len(speeds)
    mapping: list = [None] * len(sizes)

    if opt_schedule is not None:
        if not isinstance(bags, BagProfile) or bags.job_map is None:
            raise ValueError("pre-placement needs a discrete profile with a job_map")
        members: dict[int, list[int]] = {}
        for j, b in enumerate(bags.job_map):
            members.setdefault(b, []).append(j)
        multi = [sizes[b] for b, js in members.items() if len(js) >= 2]
        b_max = max(multi) if multi else 0
        for b, js in members.items():
            if len(js) == 1 and sizes[b] > b_max:
                i = opt_schedule[js[0]]
                mapping[b] = i
                loads[i] += sizes[b]

    order = sorted((b for b in range(len(sizes)) if mapping[b] is None), key=lambda b: (-sizes[b], b))
    for b in order:
        a = sizes[b]
        fits = [i for i in working if cap is None or loads[i] + a <= cap[i]]
        if not fits:
            raise BagDoesNotFit(b, a, tuple(mapping))
        i = min(fits, key=lambda i: (loads[i] / speeds[i], i))
        mapping[b] = i
        loads[i] += a
    if any(mapping[b] is None for b in range(len(sizes))):
        raise AssertionError("unplaced bag")
    return AssignmentResult.build(sizes, speeds, mapping)


def _fold_map(m: int, working: int) -> list[int]:
    # sorted bag index -> machine index; machines 0..m-working-1 have failed
    t = m - working
    if 2 * t <= m:
        return [j if j >= t else 2 * t - 1 - j for j in range(m)]
    inner = _fold_map(m, 2 * working)
    base_inner = m - 2 * working
    base = m - working
    return [base + (i - base_inner) // 2 for i in inner]


def assign_fold01(bags, m_prime: int) -> AssignmentResult:
    """Folding on ``m_prime`` unit-speed machines out of ``m`` (the rest failed).

    With ``t = m - m_prime <= m/2`` failures the ``t`` smallest bags are folded
    onto the next ``t``; beyond that the map for ``2 m_prime`` machines is
    computed and machine pairs are merged.
    """
    sizes = _sizes(bags)
    m = len(sizes)
    if m_prime <= 0:
        raise NoWorkingMachineError("no working machine")
    if m_prime > m:
        raise ValueError(f"m_prime={m_prime} exceeds the number of bags {m}")
    order = sorted(range(m), key=lambda b: (sizes[b], b))
    fmap = _fold_map(m, m_prime)
    mapping = [0] * m
    for pos, b in enumerate(order):
        mapping[b] = fmap[pos]
    speeds = (0,) * (m - m_prime) + (1,) * m_prime
    return AssignmentResult.build(sizes, speeds, mapping)
