from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from speedrobust.core import Instance
from speedrobust.discrete import (
    combined18,
    lpt_bags,
    m2_capacities,
    m3_sizes,
    odd_q,
    oddalgo,
    optimal_m2,
    optimal_m3,
    sand_to_bricks,
)
from speedrobust.fluid import sandalg_general


def test_lpt_examples():
    prof = lpt_bags(Instance((3, 1, 1, 1), 2))
    assert prof.sizes == (3, 3)
    assert prof.job_map == (0, 1, 1, 1)
    demo = lpt_bags(Instance((3,) + (1,) * 9, 10))
    assert max(demo.sizes) == 3


def test_lpt_tie_breaking():
    prof = lpt_bags(Instance((2, 2, 2), 2))
    assert prof.job_map == (0, 1, 0)


@given(st.integers(0, 80), st.integers(1, 12))
def test_lpt_unit_balanced(n, m):
    sizes = lpt_bags(Instance.unit_jobs(n, m)).sizes
    assert max(sizes) - min(sizes) <= 1 and sum(sizes) == n


def test_oddalgo_examples():
    plan, prof = oddalgo(14, 4)
    assert plan.q == 2 and sorted(prof.sizes, reverse=True) == [5, 3, 3, 3]
    plan, prof = oddalgo(9, 3)
    assert plan.q == 1 and prof.sizes == (3, 3, 3)
    assert plan.bound == F(3, 2)


def test_oddalgo_even_lambda():
    for m in range(1, 9):
        for q in range(1, 5):
            plan, prof = oddalgo(2 * q * m, m)
            assert plan.m_m in (0, 1) and sum(prof.sizes) == 2 * q * m


def test_oddalgo_identity_grid():
    for m in range(1, 51):
        for n in range(m, 50 * m + 1, max(1, m // 7)):
            p = oddalgo(n, m)[0]
            q = p.q
            assert 2 * q - 1 <= F(n, m) <= 2 * q + 1
            assert p.m_m in (0, 1) and p.m_s >= 0 and p.m_b >= 0
            assert p.m_s + p.m_m + p.m_b == m
            assert (2 * q + 1) * p.m_b + 2 * q * p.m_m + (2 * q - 1) * p.m_s == n


def test_odd_q_tie_rule():
    assert odd_q(3, 1) == 1 and odd_q(5, 1) == 2 and odd_q(1, 1) == 1


def test_oddalgo_lambda_below_one():
    with pytest.raises(ValueError, match="lambda below one"):
        oddalgo(2, 3)


def test_sand_to_bricks_examples():
    prof = sand_to_bricks(Instance.unit_jobs(8, 2), (F(8, 3), F(16, 3)))
    assert prof.meta["capacities"] == [3, 6]
    assert prof.sizes == (3, 5)
    prof = sand_to_bricks(Instance.unit_jobs(5, 5), sandalg_general(5).bags)
    assert sum(prof.sizes) == 5


def test_sand_to_bricks_always_places():
    for m in range(1, 21):
        bags = sandalg_general(m).bags
        for n in range(1, 501, 7):
            prof = sand_to_bricks(Instance.unit_jobs(n, m), bags)
            assert sum(prof.sizes) == n
            assert all(a <= c for a, c in zip(prof.sizes, prof.meta["capacities"]))


def test_combined_dispatch():
    m = 5
    assert combined18(7 * m, m).meta["branch"] == "oddalgo"
    # lambda = 7 sits on the boundary of two ranges; the smaller q wins
    assert oddalgo(7 * m, m)[0].q == 3
    assert max(oddalgo(n, m)[0].bound for n in range(m, 8 * m)) == F(9, 5)
    assert combined18(9 * m, m).meta["branch"] == "sandtobricks"
    assert combined18(8 * m, m).meta["branch"] == "sandtobricks"


def test_m2_examples():
    assert m2_capacities(7) == (2, 5)
    assert optimal_m2(7).sizes == (2, 5)
    assert m2_capacities(4) == (2, 2)
    assert optimal_m2(4).sizes == (2, 2)


def test_m2_capacity_covers_n():
    for n in range(0, 10_001):
        a1, a2 = m2_capacities(n)
        assert a1 + a2 >= n


def test_m3_examples():
    assert m3_sizes(9) == (3, 2, 4)
    assert optimal_m3(9).sizes == (3, 2, 4)
    for n in range(4, 2000):
        assert min(m3_sizes(n)) >= 0


def test_m3_domain():
    with pytest.raises(ValueError, match="below formula domain"):
        optimal_m3(3, strict=True)
    assert optimal_m3(2).sizes == (1, 1, 0)
