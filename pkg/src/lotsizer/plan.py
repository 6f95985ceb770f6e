"""Order plans and their cost breakdowns."""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

__all__ = ["CostSemantics", "Assignment", "OrderPlan", "PartCost", "CostBreakdown"]


class CostSemantics(str, enum.Enum):
    """How the fixed ordering cost is charged.

    ``PAIRWISE`` charges it once for every (need period, order period) pair
    that carries a positive quantity, exactly as the MIP objective does.
    ``CONSOLIDATED`` charges it once per distinct order period of a part.
    """

    PAIRWISE = "pairwise"
    CONSOLIDATED = "consolidated"


@dataclass(frozen=True, order=True)
class Assignment:
    part_id: int
    need_period: int
    order_period: int
    quantity: float


@dataclass(frozen=True)
class OrderPlan:
    assignments: tuple[Assignment, ...] = ()

    @classmethod
    def from_assignments(cls, items: Iterable[Assignment]) -> "OrderPlan":
        return cls(tuple(sorted(items)))

    def __len__(self) -> int:
        return len(self.assignments)

    def __iter__(self):
        return iter(self.assignments)

    def part_ids(self) -> list[int]:
        return sorted({a.part_id for a in self.assignments})

    def for_part(self, part_id: int) -> "OrderPlan":
        return OrderPlan(tuple(a for a in self.assignments if a.part_id == part_id))

    def pair_quantities(self) -> dict[tuple[int, int, int], float]:
        """Quantity per (part, need period, order period), duplicates merged."""
        out: dict[tuple[int, int, int], float] = defaultdict(float)
        for a in self.assignments:
            out[a.part_id, a.need_period, a.order_period] += a.quantity
        return dict(out)

    def coverage(self) -> dict[tuple[int, int], float]:
        out: dict[tuple[int, int], float] = defaultdict(float)
        for a in self.assignments:
            out[a.part_id, a.need_period] += a.quantity
        return dict(out)

    def order_totals(self) -> dict[tuple[int, int], float]:
        """Total quantity placed per (part, order period)."""
        out: dict[tuple[int, int], float] = defaultdict(float)
        for a in self.assignments:
            out[a.part_id, a.order_period] += a.quantity
        return dict(out)

    def order_events(self) -> dict[int, int]:
        """Number of distinct order periods with a positive total, per part."""
        out: dict[int, int] = defaultdict(int)
        for (pid, _), q in sorted(self.order_totals().items()):
            if q > 0:
                out[pid] += 1
        return dict(out)


@dataclass(frozen=True)
class PartCost:
    part_id: int
    purchasing: float = 0.0
    ordering: float = 0.0
    holding: float = 0.0

    @property
    def total(self) -> float:
        return math.fsum((self.purchasing, self.ordering, self.holding))


@dataclass(frozen=True)
class CostBreakdown:
    parts: tuple[PartCost, ...] = field(default_factory=tuple)

    @property
    def purchasing(self) -> float:
        return math.fsum(p.purchasing for p in self.parts)

    @property
    def ordering(self) -> float:
        return math.fsum(p.ordering for p in self.parts)

    @property
    def holding(self) -> float:
        return math.fsum(p.holding for p in self.parts)

    @property
    def total(self) -> float:
        return math.fsum(x for p in self.parts for x in (p.purchasing, p.ordering, p.holding))

    def part(self, part_id: int) -> PartCost:
        for p in self.parts:
            if p.part_id == part_id:
                return p
        return PartCost(part_id)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.purchasing, self.ordering, self.holding, self.total)
