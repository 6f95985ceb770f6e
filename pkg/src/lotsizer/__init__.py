"""Multi-item uncapacitated lot sizing with lead times, safety stock and
time-varying purchase prices."""

from .cost_report import render_part_report, render_total_report
from .data_io import RunConfig, load_case_study, load_instance, read_plan, write_plan
from .instance_model import (
    DemandMatrix,
    PartSpec,
    PlanningInstance,
    PriceSchedule,
    UnitOfMeasure,
    ValidationError,
    ValidationReport,
    big_m,
    net_demand,
    validate,
)
from .mip_builder import MipModel, build, evaluate_objective, export_lp, read_lp
from .plan import Assignment, CostBreakdown, CostSemantics, OrderPlan, PartCost
from .safety_stock import ServicePolicy, safety_stock, z_from_service_level
from .solvers import (
    InfeasibleError,
    SizeLimitError,
    check_plan,
    plan_cost,
    solve,
    solve_bruteforce,
    solve_consolidated,
    solve_pairwise,
)

__version__ = "0.1.0"
