"""Exact makespan minimization on related machines (items -> machines).

Shared by the full-information optimum (items are jobs) and the exact
second stage (items are bags). Rational inputs are scaled to integers and
searched in floating point: with integer data of moderate magnitude two
distinct completion times ``L1/s1 != L2/s2`` differ by at least
``1/(s1*s2)``, far above float resolution, so the float search picks an
exactly optimal assignment. The caller recomputes the value exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

# above this magnitude the float argument above stops being safe
_FLOAT_SAFE = 2**40


class SearchLimitError(RuntimeError):
    pass


def _scaled_floats(values: Sequence) -> list[float] | None:
    if any(isinstance(v, float) for v in values):
        return [float(v) for v in values]
    fr = [Fraction(v) for v in values]
    den = 1
    for v in fr:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in fr]
    if ints and max(ints) > _FLOAT_SAFE:
        return None
    return [float(v) for v in ints]


def greedy_assignment(sizes: Sequence, speeds: Sequence) -> list[int]:
    """Largest item first onto the machine finishing it earliest (lowest index on ties)."""
    working = [i for i, s in enumerate(speeds) if s > 0]
    loads = {i: 0 for i in working}
    out = [working[0]] * len(sizes)
    for j in sorted(range(len(sizes)), key=lambda j: -sizes[j]):
        best = min(working, key=lambda i: ((loads[i] + sizes[j]) / speeds[i], i))
        loads[best] += sizes[j]
        out[j] = best
    return out


def makespan_of(sizes: Sequence, speeds: Sequence, assignment: Sequence[int]):
    """Exact makespan and per-machine loads of a given item->machine map."""
    loads = [0] * len(speeds)
    for j, i in enumerate(assignment):
        loads[i] += sizes[j]
    vals = []
    for i, s in enumerate(speeds):
        if s > 0:
            if isinstance(loads[i], float) or isinstance(s, float):
                vals.append(loads[i] / s)
            else:
                vals.append(Fraction(loads[i]) / Fraction(s))
        elif loads[i] > 0:
            raise ValueError(f"load placed on failed machine {i}")
    return max(vals), loads


def solve(sizes: Sequence, speeds: Sequence, node_limit: int | None = None) -> list[int]:
    """Return an item->machine map minimizing the makespan.

    Depth-first over items in nonincreasing size. At every node, machines with
    the same (speed, load) pair are interchangeable and only one is tried.
    Pruning uses the incumbent, the volume bound and the remaining capacity
    below the incumbent.
    """
    if not any(s > 0 for s in speeds):
        raise ValueError("no working machine")
    fs = _scaled_floats(sizes)
    fw = _scaled_floats(speeds)
    if fs is None or fw is None:
        fs = [Fraction(v) for v in sizes]
        fw = [Fraction(v) for v in speeds]
        tol = 0
    else:
        tol = 1e-9 * (sum(fs) + 1.0)

    working = [i for i, s in enumerate(fw) if s > 0]
    w = [fw[i] for i in working]
    k = len(w)
    fastest = max(range(k), key=lambda i: (w[i], -i))

    order = sorted((j for j in range(len(fs)) if fs[j] > 0), key=lambda j: -fs[j])
    items = [fs[j] for j in order]
    suffix = [0] * (len(items) + 1)
    for idx in range(len(items) - 1, -1, -1):
        suffix[idx] = suffix[idx + 1] + items[idx]

    result = [working[fastest]] * len(fs)
    if not items:
        return result

    init = greedy_assignment(items, w)
    loads0 = [0] * k
    for idx, i in enumerate(init):
        loads0[i] += items[idx]
    best_val = max(loads0[i] / w[i] for i in range(k))
    best_assign = list(init)

    total_w = sum(w)
    lower = max(suffix[0] / total_w, items[0] / w[fastest])
    if best_val <= lower:
        for idx, j in enumerate(order):
            result[j] = working[best_assign[idx]]
        return result

    loads = [0] * k
    current = [0] * len(items)
    nodes = 0
    n_items = len(items)

    def dfs(idx: int, cur_max) -> bool:
        nonlocal best_val, best_assign, nodes
        if idx == n_items:
            best_val = cur_max
            best_assign = list(current)
            return best_val <= lower
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise SearchLimitError(f"node limit {node_limit} exceeded")
        rem = suffix[idx]
        room = 0
        for i in range(k):
            r = best_val * w[i] - loads[i]
            if r > 0:
                room += r
        if room < rem - tol:
            return False
        p = items[idx]
        cand = []
        seen = set()
        for i in range(k):
            key = (w[i], loads[i])
            if key in seen:
                continue
            seen.add(key)
            val = (loads[i] + p) / w[i]
            if val >= best_val:
                continue
            cand.append((val, i))
        cand.sort()
        for val, i in cand:
            new_max = val if val > cur_max else cur_max
            if new_max >= best_val:
                continue
            loads[i] += p
            current[idx] = i
            done = dfs(idx + 1, new_max)
            loads[i] -= p
            if done:
                return True
        return False

    dfs(0, 0)
    for idx, j in enumerate(order):
        result[j] = working[best_assign[idx]]
    return result
