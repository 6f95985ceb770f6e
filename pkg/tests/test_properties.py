import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lotsizer import (
    CostSemantics,
    PartSpec,
    PlanningInstance,
    big_m,
    check_plan,
    net_demand,
    plan_cost,
    render_part_report,
    safety_stock,
    solve_bruteforce,
    solve_consolidated,
    solve_pairwise,
    validate,
)

PW, CONS = CostSemantics.PAIRWISE, CostSemantics.CONSOLIDATED
small = st.integers(0, 20)


@st.composite
def instances(draw, max_horizon=6):
    T = draw(st.integers(1, max_horizon))
    P = draw(st.integers(1, 2))
    parts, demand, prices, ss = [], [], [], []
    for i in range(P):
        # one part with T = 6 and no lead time already has 21 pairs
        L = draw(st.integers(1 if T == 6 else 0, min(T - 1, 2)))
        parts.append(PartSpec(i + 1, L, draw(small), draw(small)))
        s = draw(st.integers(0, 5))
        row = [-s] * L + draw(st.lists(st.integers(-5, 20), min_size=T - L, max_size=T - L))
        demand.append(row)
        prices.append(draw(st.lists(st.integers(1, 100), min_size=T, max_size=T)))
        ss.append(s)
    pairs = sum((T - p.lead_time) * (T - p.lead_time + 1) // 2 for p in parts)
    if pairs > 20:
        # keep the pairwise oracle within its enumeration limit
        parts, demand, prices, ss = parts[:1], demand[:1], prices[:1], ss[:1]
    return PlanningInstance.from_arrays(parts, demand, prices, ss)


@given(st.floats(-100, 100), st.floats(0, 100))
def test_net_demand_invariants(raw, ss):
    net = net_demand(raw, ss)
    assert net >= 0
    if raw > 0:
        assert net >= raw
    if raw <= -ss:
        assert net == 0


positive = st.floats(0, 50, allow_nan=False)


@given(st.floats(0, 4), st.floats(0, 4), positive, positive, st.integers(0, 10), st.integers(0, 10))
def test_safety_stock_monotone(z1, z2, s1, s2, l1, l2):
    z1, z2 = sorted((z1, z2))
    s1, s2 = sorted((s1, s2))
    l1, l2 = sorted((l1, l2))
    assert safety_stock(z1, s1, l1) <= safety_stock(z2, s1, l1) + 1e-12
    assert safety_stock(z1, s1, l1) <= safety_stock(z1, s2, l1) + 1e-12
    assert safety_stock(z1, s1, l1) <= safety_stock(z1, s1, l2) + 1e-12
    # rounded variants stay ordered within half a step
    a = safety_stock(z1, s1, l1, "nearest-integer")
    b = safety_stock(z2, s2, l2, "nearest-integer")
    assert a <= b + 0.5


@given(st.floats(0, 4), positive, st.integers(0, 10), st.floats(0, 20))
def test_safety_stock_scaling(z, sigma, lt, k):
    assert math.isclose(safety_stock(z, k * sigma, lt), k * safety_stock(z, sigma, lt), rel_tol=1e-12, abs_tol=1e-9)


@settings(max_examples=200, deadline=None)
@given(instances())
def test_solvers_feasible_and_optimal(inst):
    assert validate(inst).ok
    for sem, fast in ((PW, solve_pairwise), (CONS, solve_consolidated)):
        plan = fast(inst)
        report = check_plan(inst, plan, sem)
        assert report.ok, str(report)
        assert report.cost.total == plan_cost(inst, solve_bruteforce(inst, sem), sem).total


@settings(max_examples=200, deadline=None)
@given(instances())
def test_consolidation_never_costs_more(inst):
    cons = plan_cost(inst, solve_consolidated(inst), CONS).total
    assert cons <= plan_cost(inst, solve_pairwise(inst), CONS).total


@settings(max_examples=200, deadline=None)
@given(instances(), st.sampled_from([0.25, 0.5, 2.0, 3.0, 10.0]), st.data())
def test_pairwise_argmin_invariant_under_scaling(inst, k, data):
    pid = data.draw(st.sampled_from([p.part_id for p in inst.parts]))
    i = inst.index_of[pid]
    parts = [p if p.part_id != pid else PartSpec(p.part_id, p.lead_time, p.ordering_cost, p.holding_cost * k)
             for p in inst.parts]
    prices = np.array(inst.prices.price)
    prices[i] *= k
    scaled = PlanningInstance(tuple(parts), inst.horizon, inst.demand, type(inst.prices)(prices), inst.safety_stock)

    before, after = solve_pairwise(inst), solve_pairwise(scaled)
    assert [(a.part_id, a.need_period, a.order_period) for a in before] == [
        (a.part_id, a.need_period, a.order_period) for a in after
    ]
    c0, c1 = plan_cost(inst, before).part(pid), plan_cost(scaled, after).part(pid)
    assert math.isclose(c1.purchasing + c1.holding, k * (c0.purchasing + c0.holding), rel_tol=1e-12, abs_tol=1e-9)
    assert c1.ordering == c0.ordering


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_more_demand_stays_feasible(inst, data):
    net = np.array(inst.net)
    for k, p in enumerate(inst.parts):
        for t in range(p.lead_time + 1, inst.horizon + 1):
            net[k, t - 1] += data.draw(st.integers(0, 10))
    bigger = inst.with_net_demand(net)
    assert validate(bigger).ok
    assert check_plan(bigger, solve_pairwise(bigger)).ok


@settings(max_examples=200, deadline=None)
@given(instances())
def test_report_conservation(inst):
    for sem, fast in ((PW, solve_pairwise), (CONS, solve_consolidated)):
        plan = fast(inst)
        for p in inst.parts:
            rep = render_part_report(inst, plan, p.part_id, sem)
            assert math.isclose(sum(r.order_quantity for r in rep.rows), sum(r.amount_ordered for r in rep.rows))


@settings(max_examples=100, deadline=None)
@given(instances())
def test_big_m_bounds_every_solver_quantity(inst):
    m = big_m(inst)
    for plan in (solve_pairwise(inst), solve_consolidated(inst)):
        assert all(q <= m for q in plan.pair_quantities().values())
