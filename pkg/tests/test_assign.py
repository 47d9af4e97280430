import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speedrobust.assign import (
    BagDoesNotFit,
    ExactLimitError,
    assign_exact,
    assign_fold01,
    assign_lpt_capacity,
)
from speedrobust.core import Instance, NoWorkingMachineError, SpeedConfig, opt_schedule
from speedrobust.discrete import lpt_bags
from speedrobust.fluid import adversary_configs_Sk, sandalg01_exact, sandalg_general

bag_lists = st.lists(st.integers(0, 9), min_size=1, max_size=6)


def brute(sizes, speeds):
    best = None
    for mp in itertools.product(range(len(speeds)), repeat=len(sizes)):
        loads = [0] * len(speeds)
        for a, i in zip(sizes, mp):
            loads[i] += a
        if any(l and not s for l, s in zip(loads, speeds)):
            continue
        v = max(F(l) / s for l, s in zip(loads, speeds) if s)
        best = v if best is None or v < best else best
    return best


def test_sk_m3_example():
    plan = sandalg_general(3)
    s2 = adversary_configs_Sk(plan)[1]
    assert assign_exact(plan.bags, s2).makespan == F(27, 19)


def test_trivial_examples():
    assert assign_exact([F(5)], SpeedConfig((F(2),))).makespan == F(5, 2)
    assert assign_exact([2, 2, 2], SpeedConfig((1, 1, 1))).makespan == 2


@settings(max_examples=80, deadline=None)
@given(bag_lists, st.lists(st.integers(0, 5), min_size=1, max_size=4).filter(any))
def test_exact_matches_brute(sizes, speeds):
    assert assign_exact(sizes, SpeedConfig(tuple(speeds))).makespan == brute(sizes, speeds)


def test_exact_guard(monkeypatch):
    bags = [1] * 15
    with pytest.raises(ExactLimitError, match="too large"):
        assign_exact(bags, SpeedConfig((1,) * 15))
    monkeypatch.setenv("SPEEDROBUST_EXACT_LIMIT", "16")
    assert assign_exact(bags, SpeedConfig((1,) * 15)).makespan == 1


def test_fold_m4():
    plan = sandalg01_exact(4)
    res = assign_fold01(plan.bags, 3)
    working = [l for l, s in zip(res.loads, res.speeds) if s]
    assert sorted(working) == [F(6, 5), F(6, 5), F(8, 5)]
    assert res.makespan == F(6, 5) * F(4, 3)


def test_fold_edge_cases():
    bags = [F(1), F(2), F(3), F(4)]
    assert assign_fold01(bags, 4).makespan == 4
    assert assign_fold01(bags, 1).makespan == 10
    with pytest.raises(NoWorkingMachineError):
        assign_fold01(bags, 0)


@settings(max_examples=60, deadline=None)
@given(bag_lists, st.data())
def test_exact_below_fold(sizes, data):
    m = len(sizes)
    mp = data.draw(st.integers(1, m))
    cfg = SpeedConfig.zero_one(m, m - mp)
    assert assign_exact(sizes, cfg).makespan <= assign_fold01(sizes, mp).makespan


@settings(max_examples=60, deadline=None)
@given(bag_lists, st.lists(st.integers(1, 5), min_size=1, max_size=6), st.integers(1, 3))
def test_exact_below_lpt(sizes, speeds, r):
    speeds = (speeds * len(sizes))[: len(sizes)]
    cfg = SpeedConfig(tuple(speeds))
    exact = assign_exact(sizes, cfg).makespan
    assert exact <= assign_lpt_capacity(sizes, cfg).makespan
    try:
        assert exact <= assign_lpt_capacity(sizes, cfg, rho=r).makespan
    except BagDoesNotFit:
        pass


def shaped_optimum(bags, t):
    """Best makespan when the 2t smallest bags must share t of the m-t machines."""
    m = len(bags)
    order = sorted(bags)
    states = {((0,) * t, (0,) * (m - 2 * t))}
    for idx, a in enumerate(order):
        nxt = set()
        for A, B in states:
            for k in range(t):
                la = list(A)
                la[k] += a
                nxt.add((tuple(sorted(la)), B))
            if idx >= 2 * t:
                for k in range(len(B)):
                    lb = list(B)
                    lb[k] += a
                    nxt.add((A, tuple(sorted(lb))))
        states = nxt
    return min(max(A + B) for A, B in states)


@pytest.mark.parametrize("m", range(2, 11))
def test_folding_shape_is_optimal(m):
    rng = random.Random(m)
    for _ in range(4):
        bags = sorted(rng.randint(1, 12) for _ in range(m))
        for t in range(1, m // 2 + 1):
            exact = assign_exact(bags, SpeedConfig.zero_one(m, t)).makespan
            assert shaped_optimum(bags, t) == exact


def test_capacity_failure_carries_index():
    with pytest.raises(BagDoesNotFit) as info:
        assign_lpt_capacity([2, 1], SpeedConfig((1, 1)), rho=1)
    assert info.value.bag == 0


def test_capacity_small_rho_diagnostic():
    cfg = SpeedConfig((2, 1))
    res = assign_lpt_capacity([2, 1], cfg, rho=1)
    assert res.makespan == 1


def test_preplacement_uses_schedule():
    inst = Instance((5, 1, 1, 1, 1), 3)
    prof = lpt_bags(inst)
    cfg = SpeedConfig((F(1), F(1), F(7)))
    _, sched = opt_schedule(inst, cfg)
    res = assign_lpt_capacity(prof, cfg, rho=2 - F(1, 3), opt_schedule=sched)
    big = prof.job_map[0]
    assert res.bag_to_machine[big] == sched[0]


def test_nothing_on_failed_machines():
    res = assign_lpt_capacity([3, 2, 1], SpeedConfig((0, 1, 2)))
    assert res.loads[0] == 0
