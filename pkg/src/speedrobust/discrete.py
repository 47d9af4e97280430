"""Bag constructions for discrete jobs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .core import BagProfile, Instance
from .fluid import sandalg_general
from .validation import check_m, check_n


def lpt_bags(inst: Instance) -> BagProfile:
    """Longest job first into the currently smallest bag (lowest index on ties)."""
    if inst.fluid:
        raise ValueError("LPT bagging needs discrete jobs")
    m = inst.m
    sizes = [Fraction(0)] * m
    job_map = [0] * inst.n
    for j in sorted(range(inst.n), key=lambda j: (-inst.jobs[j], j)):
        b = min(range(m), key=lambda b: (sizes[b], b))
        sizes[b] += inst.jobs[j]
        job_map[j] = b
    return BagProfile(tuple(sizes), "discrete", tuple(job_map), algo="lpt")


# ---------------------------------------------------------------------------
# ODDALGO


@dataclass(frozen=True)
class OddPlan:
    n: int
    m: int
    q: int
    m_s: int  # bags of 2q - 1
    m_m: int  # bags of 2q (0 or 1)
    m_b: int  # bags of 2q + 1

    @property
    def bound(self) -> Fraction:
        return 2 - Fraction(1, self.q + 1)

    def counts(self) -> list[int]:
        q = self.q
        return [2 * q + 1] * self.m_b + [2 * q] * self.m_m + [2 * q - 1] * self.m_s


def odd_q(n: int, m: int) -> int:
    """Integer ``q`` with ``n/m`` in ``[2q-1, 2q+1]``, the smaller one at odd integers."""
    lam = Fraction(n, m)
    return max(1, math.ceil((lam - 1) / 2))


def oddalgo(n: int, m: int) -> tuple[OddPlan, BagProfile]:
    """Start from ``m`` bags of ``2q-1`` jobs, then add two jobs per bag while possible.

    A single leftover job turns one bag into a ``2q`` bag.
    """
    n, m = check_n(n), check_m(m)
    if n < m:
        raise ValueError(f"lambda below one (n={n} < m={m})")
    q = odd_q(n, m)
    rest = n - m * (2 * q - 1)
    m_b, m_m = divmod(rest, 2)
    plan = OddPlan(n, m, q, m - m_b - m_m, m_m, m_b)
    assert plan.m_s >= 0
    prof = BagProfile.from_counts(plan.counts(), algo="oddalgo", q=q, bound=plan.bound)
    return plan, prof


# ---------------------------------------------------------------------------
# SANDTOBRICKS


def _brick_capacities(n: int, m: int, base: Sequence) -> list[int]:
    # floor((1 + 1/lambda) * a_i) with base rescaled to total n
    if all(isinstance(a, (int, Fraction)) for a in base):
        fr = [Fraction(a) for a in base]
        scale = Fraction(n) / sum(fr) * (1 + Fraction(m, n))
        return [math.floor(a * scale) for a in fr]
    with localcontext() as ctx:
        ctx.prec = 50
        dec = [a if isinstance(a, Decimal) else Decimal(a) for a in base]
        scale = Decimal(n) / sum(dec) * (1 + Decimal(m) / Decimal(n))
        return [int((a * scale).to_integral_value(rounding="ROUND_FLOOR")) for a in dec]


def fill_unit(capacities: Sequence[int], n: int) -> list[int]:
    """First-fit of ``n`` unit jobs over bags in nondecreasing capacity order."""
    counts = [0] * len(capacities)
    left = n
    for b in sorted(range(len(capacities)), key=lambda b: (capacities[b], b)):
        take = min(left, max(capacities[b], 0))
        counts[b] = take
        left -= take
    if left:
        raise AssertionError(f"capacities {list(capacities)} cannot hold {n} jobs")
    return counts


def sand_to_bricks(inst: Instance, base) -> BagProfile:
    """Inflate fluid bags by ``1 + 1/lambda`` and fill them with the unit jobs."""
    if inst.fluid or not inst.unit:
        raise ValueError("SANDTOBRICKS needs unit jobs")
    sizes = base.sizes if isinstance(base, BagProfile) else tuple(base)
    if len(sizes) != inst.m:
        raise ValueError(f"base has {len(sizes)} bags, instance has m={inst.m}")
    n, m = inst.n, inst.m
    if n == 0:
        return BagProfile.from_counts([0] * m, algo="sandtobricks")
    caps = _brick_capacities(n, m, sizes)
    counts = fill_unit(caps, n)
    return BagProfile.from_counts(counts, algo="sandtobricks", capacities=caps)


def combined18(n: int, m: int) -> BagProfile:
    """ODDALGO when ``n/m < 8``, SANDTOBRICKS over SANDALG otherwise."""
    n, m = check_n(n), check_m(m)
    if n < 8 * m:
        prof = oddalgo(n, m)[1]
        branch = "oddalgo"
    else:
        prof = sand_to_bricks(Instance.unit_jobs(n, m), sandalg_general(m).bags)
        branch = "sandtobricks"
    return BagProfile(prof.sizes, "discrete", prof.job_map, algo="combined18",
                      meta={**prof.meta, "branch": branch})


# ---------------------------------------------------------------------------
# two and three machines


def m2_capacities(n: int) -> tuple[int, int]:
    n = check_n(n)
    a1 = math.floor(Fraction(4, 3) * (n // 4 + 1))
    a2 = math.floor(Fraction(4, 3) * -(-n // 2))
    return a1, a2


def optimal_m2(n: int) -> BagProfile:
    """4/3-robust bags for two machines; the larger bag is filled first."""
    a1, a2 = m2_capacities(n)
    second = min(n, a2)
    first = n - second
    assert first <= a1, (n, a1, a2)
    return BagProfile.from_counts([first, second], algo="m2-opt", capacities=[a1, a2])


def m3_sizes(n: int) -> tuple[int, int, int]:
    n = check_n(n)
    a1 = math.floor(Fraction(3, 4) * (n // 3 + 1))
    a3 = math.floor(Fraction(3, 2) * -(-n // 3))
    return a1, n - a1 - a3, a3


def optimal_m3(n: int, strict: bool = False) -> BagProfile:
    """3/2-robust bags for three machines and ``n > 3`` jobs.

    For ``n <= 3`` one job per bag is optimal; ``strict=True`` raises instead.
    """
    n = check_n(n)
    if n <= 3:
        if strict:
            raise ValueError(f"below formula domain (n={n} <= 3)")
        return BagProfile.from_counts([1] * n + [0] * (3 - n), algo="m3-opt", fallback=True)
    return BagProfile.from_counts(list(m3_sizes(n)), algo="m3-opt")
