"""Bin-packing feasibility for integer item sizes (identical bins)."""

from __future__ import annotations

from functools import lru_cache


def ffd_fits(items: tuple, bins: int, cap: int) -> bool:
    """First-fit decreasing; ``True`` proves feasibility, ``False`` proves nothing."""
    loads: list[int] = []
    for p in sorted(items, reverse=True):
        for k, l in enumerate(loads):
            if l + p <= cap:
                loads[k] = l + p
                break
        else:
            if len(loads) == bins:
                return False
            loads.append(p)
    return True


@lru_cache(maxsize=200_000)
def fits(items: tuple, bins: int, cap: int) -> bool:
    """Can ``items`` (sorted nonincreasing) be packed into ``bins`` bins of size ``cap``?"""
    if not items:
        return True
    if items[0] > cap or sum(items) > bins * cap:
        return False
    if sum(1 for p in items if 2 * p > cap) > bins:
        return False
    if ffd_fits(items, bins, cap):
        return True
    return _exact(items, bins, cap)


def _exact(items: tuple, bins: int, cap: int) -> bool:
    n = len(items)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i]
    loads = [0] * bins
    seen: set = set()

    def rec(i: int) -> bool:
        if i == n:
            return True
        key = (i, tuple(sorted(loads)))
        if key in seen:
            return False
        free = sum(cap - l for l in loads)
        if free < suffix[i]:
            seen.add(key)
            return False
        p = items[i]
        tried = set()
        for k in range(bins):
            l = loads[k]
            if l + p > cap or l in tried:
                continue
            tried.add(l)
            loads[k] = l + p
            ok = rec(i + 1)
            loads[k] = l
            if ok:
                return True
        seen.add(key)
        return False

    return rec(0)
