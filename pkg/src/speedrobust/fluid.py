"""Bag sizes for infinitesimal jobs.

* :func:`sandalg_general` -- optimal sizes for arbitrary speeds,
  robustness ``m^m / (m^m - (m-1)^m)``.
* :func:`sandalg01_sampled` -- the profile ``min(1/2 + r x, r)`` with
  ``r = (1 + sqrt 2)/2`` sampled at bag midpoints, for speeds in {0, 1}.
* :func:`sandalg01_exact` -- rational sizes matching the per-``m`` optimum
  for speeds in {0, 1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from .core import BagProfile, SpeedConfig
from .validation import as_rational, check_m

#: (1 + sqrt 2) / 2, the limit of the {0,1} fluid robustness
RHO01_LIMIT = (1 + math.sqrt(2)) / 2
#: 2 - sqrt 2, where the sampled profile reaches its plateau
BETA = 2 - math.sqrt(2)
#: e / (e - 1), the limit of the general fluid robustness
RHO_LIMIT = math.e / (math.e - 1)

_DIGITS = 50


@dataclass(frozen=True)
class FluidGeneralPlan:
    m: int
    U: int
    L: int
    t: tuple
    rho: Fraction
    bags: tuple

    def profile(self, volume=1) -> BagProfile:
        v = as_rational(volume)
        return BagProfile(tuple(a * v for a in self.bags), "fluid", volume=v, algo="sandalg")


def sandalg_general(m: int) -> FluidGeneralPlan:
    """Bag ``k`` gets ``t_k / L`` of the volume, ``t_k = (m-1)^(m-k) m^(k-1)``."""
    m = check_m(m)
    U = m**m
    L = U - (m - 1) ** m
    t = tuple((m - 1) ** (m - k) * m ** (k - 1) for k in range(1, m + 1))
    return FluidGeneralPlan(m, U, L, t, Fraction(U, L), tuple(Fraction(tk, L) for tk in t))


def rho_general(m: int) -> Fraction:
    m = check_m(m)
    return Fraction(m**m, m**m - (m - 1) ** m)


def rho_general_float(m: int) -> float:
    """Float ``1 / (1 - (1 - 1/m)^m)`` without building the huge powers."""
    m = check_m(m)
    if m == 1:
        return 1.0
    return -1.0 / math.expm1(m * math.log1p(-1.0 / m))


def adversary_configs_Sk(plan: FluidGeneralPlan) -> list[SpeedConfig]:
    """The ``m`` configurations targeting each bag: ``m-1`` slow machines at ``t_k/U``."""
    m, U = plan.m, plan.U
    out = []
    for tk in plan.t:
        slow = Fraction(tk, U)
        out.append(SpeedConfig((slow,) * (m - 1) + (1 - (m - 1) * slow,)))
    return out


def _rho01_term(m: int, t: int) -> Fraction:
    return Fraction(m * (m - t), m * m - 2 * m * t + 2 * t * t)


def rho01(m: int) -> tuple[Fraction, int]:
    """Best {0,1} fluid factor for ``m`` machines and its smallest maximizer ``t*``."""
    m = check_m(m)
    best_t, best = 0, _rho01_term(m, 0)
    for t in range(1, m // 2 + 1):
        v = _rho01_term(m, t)
        if v > best:
            best_t, best = t, v
    return best, best_t


# ---------------------------------------------------------------------------
# sampled profile


def profile_value(x, *, digits: int = _DIGITS) -> Decimal:
    """``min(1/2 + r x, r)`` in Decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = digits
        r = (1 + Decimal(2).sqrt()) / 2
        x = Decimal(x.numerator) / Decimal(x.denominator) if isinstance(x, Fraction) else Decimal(x)
        return min(Decimal("0.5") + r * x, r)


def sampled_sizes(m: int, *, digits: int = _DIGITS) -> list[Decimal]:
    m = check_m(m)
    return [profile_value(Fraction(2 * i - 1, 2 * m), digits=digits) for i in range(1, m + 1)]


def sandalg01_sampled(m: int) -> BagProfile:
    """Fluid bags ``f((i - 1/2)/m)`` for a job volume of ``m``; sizes are floats."""
    sizes = sampled_sizes(m)
    return BagProfile(tuple(float(a) for a in sizes), "fluid", volume=Fraction(m),
                      algo="sandalg01-sampled")


# ---------------------------------------------------------------------------
# exact {0,1} construction


@dataclass(frozen=True)
class Fluid01Plan:
    m: int
    t_star: int
    rho01: Fraction
    a_bar: Optional[Fraction]
    delta: Optional[Fraction]
    delta_prime: Optional[Fraction]
    bounds: Optional[dict]
    bags: tuple

    def profile(self) -> BagProfile:
        return BagProfile(self.bags, "fluid", volume=Fraction(self.m), algo="sandalg01-exact")

    def delta_interval(self) -> Optional[tuple]:
        """``(max(L1, L2), min(U1, U2, U3))``; ``None`` stands for an unbounded side."""
        if self.bounds is None:
            return None
        b = self.bounds
        lo = max(b["L1"], b["L2"])
        ups = [b[k] for k in ("U1", "U2", "U3") if b[k] is not None]
        return lo, (min(ups) if ups else None)


def delta_bounds(m: int, t: int, rho: Fraction) -> dict:
    """Lower/upper bounds on the increment between consecutive bag pairs.

    ``U1`` and ``U2`` divide by ``t - 1`` and are unbounded (``None``) for ``t = 1``.
    """
    out = {
        "L1": m * (rho - 1) / (t * (t + 1)),
        "L2": m * rho / ((m - t) * (m - t + 1)),
        "U1": m * (rho - 1) / (t * (t - 1)) if t > 1 else None,
        "U2": rho / (t - 1) if t > 1 else None,
        "U3": m * rho / ((m - t) * (m - t - 1)),
    }
    return out


_SMALL = {
    3: (Fraction(9, 10), Fraction(9, 10), Fraction(6, 5)),
    4: (Fraction(4, 5), Fraction(4, 5), Fraction(6, 5), Fraction(6, 5)),
    5: (Fraction(25, 34), Fraction(25, 34), Fraction(40, 34), Fraction(40, 34), Fraction(40, 34)),
}


class EmptyDeltaIntervalError(AssertionError):
    pass


def sandalg01_exact(m: int) -> Fluid01Plan:
    """Bag sizes (total ``m``) whose folding makespan is exactly ``rho01(m)`` times OPT at ``t*``.

    Bags come in equal pairs rising by ``delta``; everything past the first
    ``2 t*`` bags equals ``rho01(m)``. ``delta`` is the midpoint of its
    feasible interval.
    """
    m = check_m(m)
    rho, t = rho01(m)
    if m <= 2:
        return Fluid01Plan(m, t, rho, None, None, None, None, (Fraction(1),) * m)

    a_bar = (m - rho * (m - 2 * t)) / (2 * t)
    bounds = delta_bounds(m, t, rho)
    lo = max(bounds["L1"], bounds["L2"])
    ups = [bounds[k] for k in ("U1", "U2", "U3") if bounds[k] is not None]
    hi = min(ups)
    if lo > hi:
        raise EmptyDeltaIntervalError(f"empty delta interval for m={m}: [{lo}, {hi}]")

    if m in _SMALL:
        bags = _SMALL[m]
        return Fluid01Plan(m, t, rho, a_bar, None, rho - bags[2 * t - 1], bounds, bags)

    delta = (lo + hi) / 2
    a1 = a_bar - (t - 1) * delta / 2
    bags = []
    for i in range(t):
        bags += [a1 + i * delta] * 2
    bags += [rho] * (m - 2 * t)
    delta_prime = rho - bags[2 * t - 1]
    return Fluid01Plan(m, t, rho, a_bar, delta, delta_prime, bounds, tuple(bags))
