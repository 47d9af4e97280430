import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speedrobust.core import (
    AssignmentResult,
    BagProfile,
    Instance,
    NoWorkingMachineError,
    SpeedConfig,
    opt_full_info,
    opt_m_unit,
    opt_schedule,
)
from speedrobust.validation import as_rational, check_speeds, format_number


def brute_opt(jobs, speeds):
    """Every job->machine map; the reference optimum."""
    best = None
    for mp in itertools.product(range(len(speeds)), repeat=len(jobs)):
        loads = [F(0)] * len(speeds)
        for p, i in zip(jobs, mp):
            loads[i] += F(p)
        if any(l > 0 and s == 0 for l, s in zip(loads, speeds)):
            continue
        v = max((l / F(s) for l, s in zip(loads, speeds) if s > 0), default=F(0))
        best = v if best is None or v < best else best
    return best


def test_unit_jobs_two_machines():
    assert opt_full_info(Instance.unit_jobs(7, 2), SpeedConfig((1, 1))) == 4


def test_fluid_volume_one():
    inst = Instance.fluid_volume(1, 3)
    assert opt_full_info(inst, SpeedConfig((F(1, 5), F(3, 10), F(1, 2)))) == 1


def test_big_job_and_squares():
    inst = Instance((3,) + (1,) * 9, 10)
    assert opt_full_info(inst, SpeedConfig((1,) * 9 + (3,))) == 1


def test_opt_m_unit_values():
    assert opt_m_unit(756, 6) == 126
    assert opt_m_unit(0, 5) == 0
    assert opt_m_unit(20, 10) == 2


def test_no_working_machine():
    with pytest.raises(NoWorkingMachineError, match="no working machine"):
        SpeedConfig((0, 0))
    with pytest.raises(ValueError, match="failed machine"):
        AssignmentResult.build([1, 1], [0, 1], [0, 1])


def test_single_machine():
    inst = Instance((F(3, 2), 2), 1)
    assert opt_full_info(inst, SpeedConfig((F(1, 2),))) == 7


def test_job_limit():
    inst = Instance(tuple(range(1, 23)), 2)
    with pytest.raises(ValueError, match="limited"):
        opt_full_info(inst, SpeedConfig((1, 2)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=7),
       st.lists(st.integers(0, 4), min_size=1, max_size=3).filter(any))
def test_matches_brute_force(jobs, speeds):
    inst = Instance(tuple(jobs), len(speeds))
    assert opt_full_info(inst, SpeedConfig(tuple(speeds))) == brute_opt(jobs, speeds)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.lists(st.integers(0, 5), min_size=1, max_size=4).filter(any))
def test_unit_fast_path_matches_brute_force(n, speeds):
    inst = Instance.unit_jobs(n, len(speeds))
    value, sched = opt_schedule(inst, SpeedConfig(tuple(speeds)))
    assert value == brute_opt([1] * n, speeds)
    assert AssignmentResult.build([1] * n, speeds, sched).makespan == value


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 8), min_size=1, max_size=8),
       st.lists(st.integers(1, 6), min_size=2, max_size=4),
       st.fractions(min_value=F(1, 7), max_value=7), st.randoms(use_true_random=False))
def test_scaling_and_permutation_invariance(jobs, speeds, c, rnd):
    inst = Instance(tuple(jobs), len(speeds))
    base = opt_full_info(inst, SpeedConfig(tuple(speeds)))
    scaled = opt_full_info(inst, SpeedConfig(tuple(s * c for s in speeds)))
    assert scaled == base / c
    perm = list(speeds)
    rnd.shuffle(perm)
    assert opt_full_info(inst, SpeedConfig(tuple(perm))) == base


@given(st.integers(0, 60), st.integers(1, 8), st.data())
def test_zero_one_unit_is_ceiling(n, m, data):
    t = data.draw(st.integers(0, m - 1))
    value = opt_full_info(Instance.unit_jobs(n, m), SpeedConfig.zero_one(m, t))
    assert value == -(-n // (m - t))


def test_speed_config_helpers():
    cfg = SpeedConfig((2, 0, 1))
    assert cfg.canonical().speeds == (0, 1, 2)
    assert cfg.failures == 1 and cfg.working == 2
    assert sum(cfg.normalized(6).speeds) == 6
    assert SpeedConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_instance_json_roundtrip():
    inst = Instance((F(1, 3), 2, F(5, 2)), 2)
    d = inst.to_dict()
    assert d["jobs"] == ["1/3", "2", "5/2"]
    assert Instance.from_dict(json.loads(json.dumps(d))) == inst
    assert Instance.unit_jobs(3, 2).unit and not inst.unit


def test_profile_roundtrip_and_checks():
    inst = Instance((3, 1, 1, 1), 2)
    prof = BagProfile.from_job_map(inst.jobs, [0, 1, 1, 1], 2)
    assert BagProfile.from_json(prof.to_json()) == prof
    prof.check_against(inst)
    with pytest.raises(ValueError):
        BagProfile((F(3), F(2)), "discrete", (0, 1, 1, 1)).check_against(inst)
    with pytest.raises(ValueError):
        BagProfile((F(1, 2),), "fluid", volume=1)


def test_float_profile_roundtrip():
    prof = BagProfile((0.5301776695296637, 1.2071067811865475), "fluid", volume=F(1))
    back = BagProfile.from_json(prof.to_json())
    assert all(abs(a - b) < 1e-12 for a, b in zip(prof.sizes, back.sizes))


def test_assignment_result_recomputes():
    res = AssignmentResult.build([2, 1, 1], [2, 1], [0, 0, 1])
    assert res.makespan == F(3, 2) and res.loads == (3, 1)
    with pytest.raises(ValueError):
        AssignmentResult((0,), (F(1), F(0)), F(5), (1, 1))


def test_validation_helpers():
    assert as_rational("3/4") == F(3, 4)
    assert as_rational("0.25") == F(1, 4)
    assert as_rational(0.5) == F(1, 2)
    with pytest.raises(TypeError):
        as_rational(True)
    with pytest.raises(ValueError):
        check_speeds([1, -1])
    assert format_number(F(2, 6)) == "1/3"
    with pytest.raises(ValueError):
        Instance((-1,), 1)
