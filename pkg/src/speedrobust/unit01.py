"""4/3-robust bags for unit jobs when every machine either works or fails.

The construction depends on ``k_bar = ceil(n/m)``:

============  ================  =============================================
branch        regime            bags
============  ================  =============================================
reduce_m      ceil(n/m) equal   solve for ``m-1`` bags, add an empty bag
              for m and m-1
scaled_sand   k_bar >= 11       SANDTOBRICKS over the sampled {0,1} profile
rounding_910  k_bar in {9,10},  floored rescaled profile, unit fill
              m >= 40
trivial_k12   k_bar <= 2        the optimal schedule on m machines
table_B       3 <= k_bar <= 8,  four sizes with mod-5 multiplicities
              m >= 50
search        everything else   feasibility search over size multisets
============  ================  =============================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from . import _binpack
from .core import BagProfile, Instance, opt_m_unit
from .discrete import fill_unit, sand_to_bricks
from .fluid import sampled_sizes
from .validation import check_m, check_n

BRANCHES = ("reduce_m", "trivial_k12", "table_B", "rounding_910", "scaled_sand_11", "search")


class NoRobustProfileError(RuntimeError):
    pass


@dataclass(frozen=True)
class Unit01Plan:
    """``ell`` and ``k_bar`` refer to ``m_core``, the bag count after reduction."""

    n: int
    m: int
    k_bar: int
    ell: int
    branch: str
    bags: tuple
    m_core: int
    inner: str = ""
    info: dict = field(default_factory=dict, compare=False)

    @property
    def p_max(self) -> int:
        return 4 * self.k_bar // 3

    def profile(self) -> BagProfile:
        return BagProfile.from_counts(self.bags, algo="unit01-43", branch=self.branch,
                                      inner=self.inner or self.branch, k_bar=self.k_bar)


def cap43(n: int, m_prime: int) -> int:
    """Per-machine budget ``floor(4/3 * ceil(n/m'))`` on ``m'`` working machines."""
    return 4 * opt_m_unit(n, m_prime) // 3


def reduced_m(n: int, m: int) -> int:
    while m > 1 and opt_m_unit(n, m) == opt_m_unit(n, m - 1):
        m -= 1
    return m


# ---------------------------------------------------------------------------
# branches


def trivial_k12(n: int, m: int) -> list[int]:
    k = opt_m_unit(n, m)
    ell = m * k - n
    return [k - 1] * ell + [k] * (m - ell)


def table_b_counts(m: int, k: int, ell: int) -> dict:
    """Sizes ``a0..a3`` and multiplicities ``x0..x3`` of the four-size packing."""
    f, r = divmod(m, 5)
    x01 = (2 * f, 2 * f, 2 * f + 1, 2 * f + 1, 2 * f + 1)[r]
    x2 = (f, f + 1, f, f + 1, f + 2)[r]
    a1 = -(-2 * k // 3)
    sizes = (a1 - 1, a1, k, 4 * k // 3)
    mult = (ell, x01 - ell, x2, x01)
    if mult[1] < 0:
        raise ValueError(f"table (B) needs ell <= {x01}, got {ell}")
    return {"sizes": sizes, "mult": mult}


def table_b(n: int, m: int) -> list[int]:
    k = opt_m_unit(n, m)
    tb = table_b_counts(m, k, m * k - n)
    bags = [a for a, x in zip(tb["sizes"], tb["mult"]) for _ in range(x)]
    assert len(bags) == m and sum(bags) == n
    return bags


def rounding_910_capacities(n: int, m: int) -> list[int]:
    plateau = Fraction(4 * n, 3 * m)
    caps = []
    with localcontext() as ctx:
        ctx.prec = 50
        rho = (1 + Decimal(2).sqrt()) / 2
        for i in range(1, m + 1):
            slope = Decimal(n) / m * (2 / (3 * rho) + Decimal(4 * (2 * i - 1)) / (6 * m))
            if slope >= Decimal(plateau.numerator) / plateau.denominator:
                caps.append(math.floor(plateau))
            else:
                caps.append(int(slope.to_integral_value(rounding="ROUND_FLOOR")))
    return caps


def rounding_910(n: int, m: int) -> list[int]:
    caps = rounding_910_capacities(n, m)
    if sum(caps) < n:
        raise NoRobustProfileError(f"rounded capacities {sum(caps)} < n={n}")
    return fill_unit(caps, n)


def scaled_sand_11(n: int, m: int) -> list[int]:
    prof = sand_to_bricks(Instance.unit_jobs(n, m), sampled_sizes(m))
    return [int(a) for a in prof.sizes]


def search_43(n: int, m: int, node_limit: Optional[int] = None) -> Unit01Plan:
    """Depth-first search for ``m`` bag sizes in ``1..p_max`` summing to ``n``.

    A multiset is accepted when for every ``m' < m`` it packs into ``m'`` bins
    of size ``cap43(n, m')``. Sizes are chosen in nonincreasing order, larger
    values first, and every prefix is checked against the same bins since
    adding bags never helps. Returns the first accepted multiset.
    """
    n, m = check_n(n, minimum=1), check_m(m)
    k = opt_m_unit(n, m)
    p_max = 4 * k // 3
    caps = [cap43(n, mp) for mp in range(1, m + 1)]
    chosen: list[int] = []
    nodes = 0

    def ok_prefix() -> bool:
        items = tuple(chosen)
        for mp in range(1, min(len(items), m)):
            if not _binpack.fits(items, mp, caps[mp - 1]):
                return False
        return True

    def rec(left_bags: int, left_jobs: int, top: int) -> bool:
        nonlocal nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise NoRobustProfileError(f"search node limit {node_limit} exceeded")
        if left_bags == 0:
            return left_jobs == 0
        hi = min(top, left_jobs - (left_bags - 1))
        lo = max(1, -(-left_jobs // left_bags))
        for p in range(hi, lo - 1, -1):
            chosen.append(p)
            if ok_prefix() and rec(left_bags - 1, left_jobs - p, p):
                return True
            chosen.pop()
        return False

    if not rec(m, n, p_max):
        raise NoRobustProfileError(f"no 4/3-robust profile found for n={n}, m={m}")
    bags = tuple(sorted(chosen))
    return Unit01Plan(n, m, k, m * k - n, "search", bags, m, info={"nodes": nodes})


def build_43(n: int, m: int) -> Unit01Plan:
    """4/3-robust bags for ``n`` unit jobs on ``m`` machines with {0,1} speeds."""
    n, m = check_n(n, minimum=1), check_m(m)
    core = reduced_m(n, m)
    k = opt_m_unit(n, core)
    ell = core * k - n
    if k >= 11:
        branch, bags = "scaled_sand_11", scaled_sand_11(n, core)
    elif k in (9, 10) and core >= 40:
        branch, bags = "rounding_910", rounding_910(n, core)
    elif k <= 2:
        branch, bags = "trivial_k12", trivial_k12(n, core)
    elif 3 <= k <= 8 and core >= 50:
        branch, bags = "table_B", table_b(n, core)
    else:
        branch, bags = "search", list(search_43(n, core).bags)
    bags = [0] * (m - core) + sorted(bags)
    if core < m:
        return Unit01Plan(n, m, k, ell, "reduce_m", tuple(bags), core, inner=branch)
    return Unit01Plan(n, m, k, ell, branch, tuple(bags), core)
