"""Schedule and cost reports for solved plans (CSV and aligned text)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .instance_model import PlanningInstance
from .plan import CostBreakdown, CostSemantics, OrderPlan
from .solvers import plan_cost

__all__ = ["PartRow", "PartReport", "TotalRow", "TotalReport", "render_part_report", "render_total_report"]


def _qty(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".") if x != int(x) else str(int(x))


def _money(x: float) -> str:
    return f"{x:.2f}"


@dataclass(frozen=True)
class PartRow:
    period: int
    raw_demand: float
    net_demand: float
    amounts: tuple[tuple[int, float], ...]  # (order period, quantity) serving this period
    order_quantity: float  # placed in this period
    n_orders: int  # orders placed in this period

    @property
    def amount_ordered(self) -> float:
        return math.fsum(q for _, q in self.amounts)


@dataclass(frozen=True)
class PartReport:
    part_id: int
    rows: tuple[PartRow, ...]
    cost: CostBreakdown
    semantics: CostSemantics

    @property
    def total_cost(self) -> float:
        return self.cost.total

    @property
    def n_order_events(self) -> int:
        return sum(1 for r in self.rows if r.order_quantity > 0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["part_id", "period", "demand", "net_demand", "amount_ordered", "ordering_periods",
                    "order_quantity", "number_of_ordering"])
        for r in self.rows:
            w.writerow([
                self.part_id,
                r.period,
                _qty(r.raw_demand),
                _qty(r.net_demand),
                ";".join(_qty(q) for _, q in r.amounts),
                ";".join(str(tp) for tp, _ in r.amounts),
                _qty(r.order_quantity),
                r.n_orders,
            ])
        w.writerow([self.part_id, "total", "", "", "", "", "", _money(self.total_cost)])
        return buf.getvalue()

    def to_text(self) -> str:
        head = ["Period", "Demand", "Net", "Amount ordered", "Order periods", "Order qty", "Orders"]
        body = [
            [
                str(r.period),
                _qty(r.raw_demand),
                _qty(r.net_demand),
                ",".join(_qty(q) for _, q in r.amounts) or "0",
                ",".join(str(tp) for tp, _ in r.amounts) or "-",
                _qty(r.order_quantity),
                str(r.n_orders),
            ]
            for r in self.rows
        ]
        lines = [f"Part {self.part_id} ({self.semantics.value} ordering cost)"]
        lines += _table(head, body)
        c = self.cost
        lines.append(
            f"Purchasing {_money(c.purchasing)}  Ordering {_money(c.ordering)}  "
            f"Holding {_money(c.holding)}  Total {_money(c.total)}"
        )
        return "\n".join(lines) + "\n"


def _table(head: list[str], body: list[list[str]]) -> list[str]:
    widths = [max(len(h), *(len(row[j]) for row in body)) if body else len(h) for j, h in enumerate(head)]
    fmt = lambda cells: "  ".join(c.rjust(w) for c, w in zip(cells, widths))  # noqa: E731
    return [fmt(head), "  ".join("-" * w for w in widths)] + [fmt(row) for row in body]


def _merge(plans: OrderPlan | Iterable[OrderPlan]) -> OrderPlan:
    if isinstance(plans, OrderPlan):
        return plans
    return OrderPlan.from_assignments(a for p in plans for a in p)


def render_part_report(
    instance: PlanningInstance,
    plan: OrderPlan,
    part_id: int,
    semantics: CostSemantics | str = CostSemantics.PAIRWISE,
) -> PartReport:
    """Per-period view of one part's schedule.

    ``order_quantity`` of a period is everything placed in it, for any need
    period.  ``n_orders`` counts the need periods served from it under
    pairwise costing and is 0/1 under consolidated costing.
    """
    semantics = CostSemantics(semantics)
    k = instance.index_of[part_id]
    sub = plan.for_part(part_id)
    served: dict[int, list[tuple[int, float]]] = {}
    placed: dict[int, list[float]] = {}
    sources: dict[int, set[int]] = {}
    for a in sub:
        if a.quantity <= 0:
            continue
        served.setdefault(a.need_period, []).append((a.order_period, a.quantity))
        placed.setdefault(a.order_period, []).append(a.quantity)
        sources.setdefault(a.order_period, set()).add(a.need_period)

    rows = []
    for t in range(1, instance.horizon + 1):
        amounts = tuple(sorted(served.get(t, [])))
        qty = math.fsum(placed.get(t, []))
        n = len(sources.get(t, ()))
        if semantics is CostSemantics.CONSOLIDATED:
            n = min(n, 1)
        rows.append(
            PartRow(t, float(instance.demand.raw[k, t - 1]), float(instance.net[k, t - 1]), amounts, qty, n)
        )
    cost = plan_cost(instance, sub, semantics)
    return PartReport(part_id, tuple(rows), CostBreakdown((cost.part(part_id),)), semantics)


@dataclass(frozen=True)
class TotalRow:
    part_id: int
    purchasing: float
    ordering: float
    holding: float
    total: float
    reference: float | None = None

    @property
    def delta(self) -> float | None:
        return None if self.reference is None else self.total - self.reference


@dataclass(frozen=True)
class TotalReport:
    rows: tuple[TotalRow, ...]
    semantics: CostSemantics
    reference_total: float | None = None

    @property
    def grand_total(self) -> float:
        return math.fsum(r.total for r in self.rows)

    @property
    def grand_delta(self) -> float | None:
        return None if self.reference_total is None else self.grand_total - self.reference_total

    @property
    def has_reference(self) -> bool:
        return self.reference_total is not None or any(r.reference is not None for r in self.rows)

    def _cells(self):
        ref = self.has_reference
        head = ["part_id", "purchasing", "ordering", "holding", "total"] + (["reference", "delta"] if ref else [])
        body = []
        for r in self.rows:
            row = [str(r.part_id), _money(r.purchasing), _money(r.ordering), _money(r.holding), _money(r.total)]
            if ref:
                row += ["" if r.reference is None else _money(r.reference),
                        "" if r.delta is None else f"{r.delta:+.2f}"]
            body.append(row)
        foot = [
            "all",
            _money(math.fsum(r.purchasing for r in self.rows)),
            _money(math.fsum(r.ordering for r in self.rows)),
            _money(math.fsum(r.holding for r in self.rows)),
            _money(self.grand_total),
        ]
        if ref:
            foot += ["" if self.reference_total is None else _money(self.reference_total),
                     "" if self.grand_delta is None else f"{self.grand_delta:+.2f}"]
        return head, body, foot

    def to_csv(self) -> str:
        head, body, foot = self._cells()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(body)
        w.writerow(foot)
        return buf.getvalue()

    def to_text(self) -> str:
        head, body, foot = self._cells()
        lines = [f"Total cost per part ({self.semantics.value} ordering cost)"]
        lines += _table(head, body + [foot])
        return "\n".join(lines) + "\n"


def render_total_report(
    instance: PlanningInstance,
    plans: OrderPlan | Iterable[OrderPlan],
    semantics: CostSemantics | str = CostSemantics.PAIRWISE,
    reference: Mapping[int, float] | None = None,
    reference_total: float | None = None,
) -> TotalReport:
    """Per-part cost totals plus the grand total.

    ``reference`` / ``reference_total`` attach externally known totals and
    add signed ``delta = computed - reference`` columns.
    """
    semantics = CostSemantics(semantics)
    cost = plan_cost(instance, _merge(plans), semantics)
    reference = reference or {}
    rows = tuple(
        TotalRow(pc.part_id, pc.purchasing, pc.ordering, pc.holding, pc.total, reference.get(pc.part_id))
        for pc in cost.parts
    )
    return TotalReport(rows, semantics, reference_total)
