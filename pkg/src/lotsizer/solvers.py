"""Exact solvers for the lot-sizing model and a brute-force oracle.

Parts never interact (no shared capacity), so every solver works part by
part and merges the results in part-id order.

For one part the cost of serving need period ``t`` from order period ``t'``
is ``C[t'] + h (t - t')`` per unit.  Under pairwise costing each need
period is an independent choice, so the cheapest legal ``t'`` wins.  Under
consolidated costing the fixed cost is shared by everything ordered in the
same period and a Wagner-Whitin style recursion over order periods is used.
Ties always go to the earliest order period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .instance_model import PlanningInstance, ValidationError, ValidationReport, Violation, big_m, validate
from .plan import Assignment, CostBreakdown, CostSemantics, OrderPlan, PartCost

__all__ = [
    "InfeasibleError",
    "SizeLimitError",
    "FeasibilityReport",
    "solve",
    "solve_pairwise",
    "solve_consolidated",
    "solve_bruteforce",
    "plan_cost",
    "check_plan",
    "PAIRWISE_ENUM_LIMIT",
    "CONSOLIDATED_ENUM_LIMIT",
]

PAIRWISE_ENUM_LIMIT = 20  # total (t, t') pairs over all parts
CONSOLIDATED_ENUM_LIMIT = 8  # horizon length


class InfeasibleError(ValidationError):
    """Positive net demand that no legal order period can reach."""


class SizeLimitError(ValueError):
    pass


def _checked(instance: PlanningInstance) -> None:
    report = validate(instance)
    if report.ok:
        return
    unserviceable = [v for v in report.violations if v.rule == "unserviceable demand"]
    if unserviceable and len(unserviceable) == len(report.violations):
        raise InfeasibleError(report)
    raise ValidationError(report)


def _unit_costs(instance: PlanningInstance, k: int) -> np.ndarray:
    """``U[t-1, t'-1]`` = unit cost of need period t ordered in t' (inf if illegal)."""
    T = instance.horizon
    p = instance.parts[k]
    t = np.arange(1, T + 1)[:, None]
    tp = np.arange(1, T + 1)[None, :]
    unit = instance.prices.price[k][None, :] + p.holding_cost * (t - tp)
    return np.where(tp <= t - p.lead_time, unit, np.inf)


def _pairwise_part(instance: PlanningInstance, k: int) -> list[Assignment]:
    p = instance.parts[k]
    net = instance.net[k]
    unit = _unit_costs(instance, k)
    out = []
    for t in range(p.lead_time + 1, instance.horizon + 1):
        if net[t - 1] > 0:
            tp = int(np.argmin(unit[t - 1, : t - p.lead_time])) + 1
            out.append(Assignment(p.part_id, int(t), int(tp), float(net[t - 1])))
    return out


def solve_pairwise(instance: PlanningInstance) -> OrderPlan:
    """Optimal plan when the ordering cost is charged per (t, t') pair.

    Every need period is served in full from its cheapest legal order
    period, which pays the fixed cost exactly once.
    """
    _checked(instance)
    items: list[Assignment] = []
    for k in _part_order(instance):
        items += _pairwise_part(instance, k)
    return OrderPlan.from_assignments(items)


def _consolidated_part(instance: PlanningInstance, k: int) -> list[Assignment]:
    p = instance.parts[k]
    L, T, A, h = p.lead_time, instance.horizon, p.ordering_cost, p.holding_cost
    U = T - L  # order periods that can still reach the horizon
    if U <= 0:
        return []
    # demand indexed by the latest order period able to serve it: u = t - L
    d = np.concatenate([[0.0], instance.net[k, L:]])
    price = np.concatenate([[0.0], instance.prices.price[k, :U]])
    u = np.arange(U + 1)
    cum_d = np.cumsum(d)
    cum_ud = np.cumsum(u * d)

    def block_cost(s: int, e: int) -> float:
        # order at s covering u = s..e, unit cost C_s + h (u + L - s)
        dem = cum_d[e] - cum_d[s - 1]
        return A + (price[s] + h * (L - s)) * dem + h * (cum_ud[e] - cum_ud[s - 1])

    best = np.full(U + 1, np.inf)
    choice = np.zeros(U + 1, dtype=int)  # 0 = nothing ordered for u, else block start
    best[0] = 0.0
    for e in range(1, U + 1):
        if d[e] <= 0:
            best[e], choice[e] = best[e - 1], 0
        for s in range(1, e + 1):
            if cum_d[e] - cum_d[s - 1] <= 0:
                continue
            c = best[s - 1] + block_cost(s, e)
            if c < best[e]:
                best[e], choice[e] = c, s

    out = []
    e = U
    while e > 0:
        s = choice[e]
        if s == 0:
            e -= 1
            continue
        for uu in range(s, e + 1):
            if d[uu] > 0:
                out.append(Assignment(p.part_id, int(uu + L), int(s), float(d[uu])))
        e = s - 1
    return out


def solve_consolidated(instance: PlanningInstance) -> OrderPlan:
    """Optimal plan when the ordering cost is charged once per order period.

    Per part, an optimal plan never needs an order period to serve a need
    period after a cheaper order has become available, so each order covers
    a consecutive run of need periods.  ``best[e]`` is the cheapest way to
    cover the demand whose latest order period is ``<= e``; transitions
    either skip a zero-demand period or close a block ``s..e`` served by an
    order in ``s``.
    """
    _checked(instance)
    items: list[Assignment] = []
    for k in _part_order(instance):
        items += _consolidated_part(instance, k)
    return OrderPlan.from_assignments(items)


def solve(instance: PlanningInstance, semantics: CostSemantics | str = CostSemantics.PAIRWISE) -> OrderPlan:
    semantics = CostSemantics(semantics)
    if semantics is CostSemantics.PAIRWISE:
        return solve_pairwise(instance)
    return solve_consolidated(instance)


def _part_order(instance: PlanningInstance) -> list[int]:
    return sorted(range(instance.n_parts), key=lambda k: instance.parts[k].part_id)


# ---------------------------------------------------------------- oracle

def _bits(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _bruteforce_pairwise(instance: PlanningInstance) -> list[Assignment]:
    pairs = []  # (part index, t, t')
    for k in range(instance.n_parts):
        L = instance.parts[k].lead_time
        for t in range(L + 1, instance.horizon + 1):
            for tp in range(1, t - L + 1):
                pairs.append((k, t, tp))
    n = len(pairs)
    if n > PAIRWISE_ENUM_LIMIT:
        raise SizeLimitError(f"{n} order pairs exceed the enumeration limit of {PAIRWISE_ENUM_LIMIT}")

    masks = _bits(n)
    total = np.zeros(masks.size)
    for j, (k, _, _) in enumerate(pairs):
        total += instance.parts[k].ordering_cost * ((masks >> j) & 1)

    groups: dict[tuple[int, int], list[int]] = {}
    for j, (k, t, _) in enumerate(pairs):
        groups.setdefault((k, t), []).append(j)
    units = {}
    for k in range(instance.n_parts):
        units[k] = _unit_costs(instance, k)
    for (k, t), js in groups.items():
        q = instance.net[k, t - 1]
        if q <= 0:
            continue
        cheapest = np.full(masks.size, np.inf)
        for j in js:  # ascending t'
            c = units[k][t - 1, pairs[j][2] - 1]
            on = ((masks >> j) & 1).astype(bool)
            cheapest = np.where(on & (c < cheapest), c, cheapest)
        total += q * cheapest

    best_mask = int(masks[np.argmin(total)])
    if not math.isfinite(total[best_mask]):
        raise InfeasibleError(ValidationReport((Violation("unserviceable demand", "no feasible configuration"),)))
    out = []
    for (k, t), js in groups.items():
        q = instance.net[k, t - 1]
        if q <= 0:
            continue
        active = [j for j in js if (best_mask >> j) & 1]
        j = min(active, key=lambda j: (units[k][t - 1, pairs[j][2] - 1], pairs[j][2]))
        out.append(Assignment(instance.parts[k].part_id, int(t), int(pairs[j][2]), float(q)))
    return out


def _bruteforce_consolidated(instance: PlanningInstance) -> list[Assignment]:
    if instance.horizon > CONSOLIDATED_ENUM_LIMIT:
        raise SizeLimitError(
            f"horizon {instance.horizon} exceeds the consolidated enumeration limit of {CONSOLIDATED_ENUM_LIMIT}"
        )
    T = instance.horizon
    out = []
    for k in range(instance.n_parts):
        p = instance.parts[k]
        unit = _unit_costs(instance, k)
        masks = _bits(T)  # bit s-1 set: an order is placed in period s
        on = [((masks >> (s - 1)) & 1).astype(bool) for s in range(1, T + 1)]
        total = p.ordering_cost * np.sum(on, axis=0, dtype=float)
        for t in range(1, T + 1):
            q = instance.net[k, t - 1]
            if q <= 0:
                continue
            cheapest = np.full(masks.size, np.inf)
            for s in range(1, T + 1):
                c = unit[t - 1, s - 1]
                cheapest = np.where(on[s - 1] & (c < cheapest), c, cheapest)
            total = total + q * cheapest
        best = int(np.argmin(total))
        if not math.isfinite(total[best]):
            raise InfeasibleError(
                ValidationReport((Violation("unserviceable demand", "no feasible order set", p.part_id),))
            )
        for t in range(1, T + 1):
            q = instance.net[k, t - 1]
            if q <= 0:
                continue
            used = [s for s in range(1, T + 1) if (best >> (s - 1)) & 1 and math.isfinite(unit[t - 1, s - 1])]
            s = min(used, key=lambda s: (unit[t - 1, s - 1], s))
            out.append(Assignment(p.part_id, int(t), int(s), float(q)))
    return out


def solve_bruteforce(
    instance: PlanningInstance, semantics: CostSemantics | str = CostSemantics.PAIRWISE
) -> OrderPlan:
    """Exhaustive reference solver for small instances.

    Pairwise: every 0/1 assignment of all Y indicators (at most
    ``PAIRWISE_ENUM_LIMIT`` of them).  Consolidated: every subset of order
    periods per part (horizon at most ``CONSOLIDATED_ENUM_LIMIT``).  Given
    the indicators, each need period is filled from its cheapest open
    order period.  Raises :class:`SizeLimitError` rather than truncating.
    """
    _checked(instance)
    semantics = CostSemantics(semantics)
    if semantics is CostSemantics.PAIRWISE:
        items = _bruteforce_pairwise(instance)
    else:
        items = _bruteforce_consolidated(instance)
    return OrderPlan.from_assignments(items)


# ---------------------------------------------------------------- checking

def plan_cost(
    instance: PlanningInstance, plan: OrderPlan, semantics: CostSemantics | str = CostSemantics.PAIRWISE
) -> CostBreakdown:
    """Cost of ``plan`` computed straight from the instance data."""
    semantics = CostSemantics(semantics)
    purchasing: dict[int, list[float]] = {p.part_id: [] for p in instance.parts}
    holding: dict[int, list[float]] = {p.part_id: [] for p in instance.parts}
    for a in plan:
        k = instance.index_of.get(a.part_id)
        if k is None or not 1 <= a.order_period <= instance.horizon:
            continue
        p = instance.parts[k]
        purchasing[a.part_id].append(a.quantity * instance.prices.price[k, a.order_period - 1])
        holding[a.part_id].append(a.quantity * p.holding_cost * (a.need_period - a.order_period))

    if semantics is CostSemantics.PAIRWISE:
        keys = [(pid, (t, tp)) for (pid, t, tp), q in plan.pair_quantities().items() if q > 0]
    else:
        keys = [(pid, tp) for (pid, tp), q in plan.order_totals().items() if q > 0]
    n_charges: dict[int, int] = {}
    for pid, _ in keys:
        n_charges[pid] = n_charges.get(pid, 0) + 1

    parts = []
    for p in sorted(instance.parts, key=lambda p: p.part_id):
        parts.append(
            PartCost(
                p.part_id,
                purchasing=math.fsum(purchasing[p.part_id]),
                ordering=p.ordering_cost * n_charges.get(p.part_id, 0),
                holding=math.fsum(holding[p.part_id]),
            )
        )
    return CostBreakdown(tuple(parts))


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)
    cost: CostBreakdown = field(default_factory=CostBreakdown)
    semantics: CostSemantics = CostSemantics.PAIRWISE

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __str__(self) -> str:
        head = f"{'feasible' if self.ok else 'INFEASIBLE'}; {self.semantics.value} cost {self.cost.total:.2f}"
        return "\n".join([head] + [str(v) for v in self.violations])


def check_plan(
    instance: PlanningInstance,
    plan: OrderPlan,
    semantics: CostSemantics | str = CostSemantics.PAIRWISE,
    tol: float = 1e-9,
) -> FeasibilityReport:
    """Verify coverage, order windows, sign and big-M bound of ``plan``.

    Split assignments (one need period served from several order periods)
    are accepted.  Coverage is met within ``tol`` relative to the demand.
    """
    semantics = CostSemantics(semantics)
    out: list[Violation] = []
    T = instance.horizon
    m = big_m(instance)
    for a in plan:
        k = instance.index_of.get(a.part_id)
        if k is None:
            out.append(Violation("unknown part", "plan references a part not in the instance", a.part_id))
            continue
        L = instance.parts[k].lead_time
        if not math.isfinite(a.quantity):
            out.append(Violation("non-negativity", f"quantity {a.quantity} is not finite", a.part_id, a.need_period))
        elif a.quantity < 0:
            out.append(Violation("non-negativity", f"quantity {a.quantity:g} < 0", a.part_id, a.need_period))
        if not (L + 1 <= a.need_period <= T and 1 <= a.order_period <= a.need_period - L):
            out.append(
                Violation(
                    "order window",
                    f"order period {a.order_period} outside 1..{a.need_period - L} (lead time {L}, horizon {T})",
                    a.part_id,
                    a.need_period,
                )
            )
    for (pid, t, tp), q in sorted(plan.pair_quantities().items()):
        if pid in instance.index_of and q > m * (1 + tol):
            out.append(Violation("big-M", f"quantity {q:g} from period {tp} exceeds M = {m:g}", pid, t))

    covered = plan.coverage()
    for k, p in enumerate(instance.parts):
        for t in range(1, T + 1):
            need = instance.net[k, t - 1]
            if need <= 0:
                continue
            got = covered.get((p.part_id, t), 0.0)
            if got < need - tol * max(1.0, need):
                out.append(Violation("coverage", f"ordered {got:g} < required {need:g}", p.part_id, t))

    return FeasibilityReport(tuple(out), plan_cost(instance, plan, semantics), semantics)
