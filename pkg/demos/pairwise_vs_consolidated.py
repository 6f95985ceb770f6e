"""Two readings of the ordering charge on a three-week toy instance.

Pairwise pays the fixed cost once per (need week, order week) pair, so
buying two weeks' demand in the same week costs two setups.  Consolidated
pays once per order week.  The cheaper setup count can change the plan."""

import numpy as np

from lotsizer import CostSemantics, PartSpec, PlanningInstance, plan_cost, solve

part = PartSpec(part_id=1, lead_time=1, ordering_cost=40.0, holding_cost=1.0)
instance = PlanningInstance.from_arrays(
    [part],
    demand=np.array([[0.0, 10.0, 10.0, 10.0]]),
    prices=np.array([[5.0, 5.0, 5.0, 5.0]]),
)

for sem in CostSemantics:
    plan = solve(instance, sem)
    cost = plan_cost(instance, plan, sem)
    orders = sorted({(a.order_period, a.need_period) for a in plan})
    print(f"{sem.value:12s} total {cost.total:7.2f}  ordering {cost.ordering:6.2f}  (order, need) {orders}")
