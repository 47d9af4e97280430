"""Speed-robust scheduling: bag jobs before machine speeds are known, then assign."""

from .adversary import (
    LowerBoundCertificate,
    RobustnessReport,
    certify_m6,
    evaluate_01,
    evaluate_family,
    example_games,
    integer_speed_sweep,
    search_speeds,
)
from .assign import BagDoesNotFit, assign_exact, assign_fold01, assign_lpt_capacity
from .core import (
    AssignmentResult,
    BagProfile,
    Instance,
    NoWorkingMachineError,
    SpeedConfig,
    opt_full_info,
    opt_m_unit,
)
from .discrete import OddPlan, combined18, lpt_bags, oddalgo, optimal_m2, optimal_m3, sand_to_bricks
from .estimators import BagBuilder
from .fluid import (
    Fluid01Plan,
    FluidGeneralPlan,
    adversary_configs_Sk,
    rho01,
    rho_general,
    rho_general_float,
    sandalg01_exact,
    sandalg01_sampled,
    sandalg_general,
)
from .unit01 import Unit01Plan, build_43, search_43

__version__ = "0.1.0"

__all__ = [
    "adversary_configs_Sk",
    "assign_exact",
    "assign_fold01",
    "assign_lpt_capacity",
    "AssignmentResult",
    "BagBuilder",
    "BagDoesNotFit",
    "BagProfile",
    "build_43",
    "certify_m6",
    "combined18",
    "evaluate_01",
    "evaluate_family",
    "example_games",
    "Fluid01Plan",
    "FluidGeneralPlan",
    "Instance",
    "integer_speed_sweep",
    "LowerBoundCertificate",
    "lpt_bags",
    "NoWorkingMachineError",
    "oddalgo",
    "OddPlan",
    "opt_full_info",
    "opt_m_unit",
    "optimal_m2",
    "optimal_m3",
    "rho01",
    "rho_general",
    "rho_general_float",
    "RobustnessReport",
    "sand_to_bricks",
    "sandalg01_exact",
    "sandalg01_sampled",
    "sandalg_general",
    "search_43",
    "search_speeds",
    "SpeedConfig",
    "Unit01Plan",
]
