"""scikit-learn style wrapper around the first-stage builders."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import adversary, assign, discrete, fluid, unit01
from .core import BagProfile, Instance, SpeedConfig
from .validation import as_rational, check_m

FLUID_ALGOS = ("sandalg", "sandalg01-sampled", "sandalg01-exact")
UNIT_ALGOS = ("oddalgo", "sandtobricks", "combined18", "m2-opt", "m3-opt", "unit01-43")
ALGOS = FLUID_ALGOS + ("lpt",) + UNIT_ALGOS


def build_profile(algo: str, inst: Instance) -> BagProfile:
    """Dispatch a builder by its CLI name."""
    m = inst.m
    if algo == "sandalg":
        return fluid.sandalg_general(m).profile(inst.total)
    if algo == "sandalg01-sampled":
        prof = fluid.sandalg01_sampled(m)
        scale = float(inst.total) / m
        return BagProfile(tuple(a * scale for a in prof.sizes), "fluid", volume=inst.total,
                          algo=prof.algo)
    if algo == "sandalg01-exact":
        prof = fluid.sandalg01_exact(m).profile()
        scale = inst.total / m
        return BagProfile(tuple(a * scale for a in prof.sizes), "fluid", volume=inst.total,
                          algo=prof.algo)
    if algo == "lpt":
        return discrete.lpt_bags(inst)
    if algo not in UNIT_ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if not inst.unit:
        raise ValueError(f"{algo} needs unit jobs")
    n = inst.n
    if algo == "oddalgo":
        return discrete.oddalgo(n, m)[1]
    if algo == "sandtobricks":
        return discrete.sand_to_bricks(inst, fluid.sandalg_general(m).bags)
    if algo == "combined18":
        return discrete.combined18(n, m)
    if algo == "m2-opt":
        if m != 2:
            raise ValueError("m2-opt needs m=2")
        return discrete.optimal_m2(n)
    if algo == "m3-opt":
        if m != 3:
            raise ValueError("m3-opt needs m=3")
        return discrete.optimal_m3(n)
    return unit01.build_43(n, m).profile()


class BagBuilder(ClusterMixin, BaseEstimator):
    """Group jobs into ``m`` bags before the speeds are known.

    ``fit`` takes a vector of processing times. Discrete builders expose the
    job-to-bag map as ``labels_``; fluid builders only use the total volume.

    Parameters
    ----------
    algo : str
        One of :data:`ALGOS`.
    m : int
        Number of machines (and bags).
    """

    def __init__(self, algo: str = "lpt", m: int = 2):
        self.algo = algo
        self.m = m

    def fit(self, X, y=None):
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algorithm {self.algo!r}")
        m = check_m(self.m)
        arr = check_array(X, ensure_2d=False, dtype=None, ensure_min_samples=1)
        if arr.ndim == 2:
            if arr.shape[1] != 1:
                raise ValueError("expected one processing time per row")
            arr = arr[:, 0]
        if self.algo in FLUID_ALGOS:
            inst = Instance.fluid_volume(sum(as_rational(v.item()) for v in arr), m)
        else:
            inst = Instance(tuple(as_rational(v.item()) for v in arr), m)
        self.instance_ = inst
        self.profile_ = build_profile(self.algo, inst)
        self.bag_sizes_ = np.array([float(a) for a in self.profile_.sizes])
        if self.profile_.job_map is not None:
            self.labels_ = np.array(self.profile_.job_map, dtype=int)
        self.n_features_in_ = 1
        return self

    def fit_predict(self, X, y=None):
        self.fit(X)
        if not hasattr(self, "labels_"):
            raise ValueError(f"{self.algo} builds fluid bags and has no job labels")
        return self.labels_

    def assign(self, speeds, method: str = "exact"):
        """Second stage for the revealed ``speeds``."""
        check_is_fitted(self, "profile_")
        cfg = SpeedConfig(tuple(speeds))
        if method == "exact":
            return assign.assign_exact(self.profile_, cfg)
        if method == "lpt":
            return assign.assign_lpt_capacity(self.profile_, cfg)
        raise ValueError(f"unknown method {method!r}")

    def robustness(self, speeds=None, method: str = "auto"):
        """Ratio report against one configuration, or all {0,1} patterns if ``speeds`` is None."""
        check_is_fitted(self, "profile_")
        if speeds is None:
            return adversary.evaluate_01(self.profile_, self.instance_, method=method)
        return adversary.evaluate_family(self.profile_, self.instance_,
                                         [SpeedConfig(tuple(speeds))], method=method, name="given")

    def score(self, X=None, y=None) -> float:
        """Negated worst {0,1} ratio (higher is better, as sklearn expects)."""
        return -float(self.robustness().max_ratio)

