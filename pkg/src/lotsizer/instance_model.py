"""Problem data for multi-item uncapacitated lot sizing.

A :class:`PlanningInstance` bundles the static part data, the signed demand
grid, the purchase price grid and the safety stock grid.  All grids are
``P x T`` numpy arrays indexed ``[part_index, period - 1]``; periods are
1-based everywhere in the public API.  Arrays are frozen on construction so
an instance can be shared freely between solver runs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "UnitOfMeasure",
    "PartSpec",
    "DemandMatrix",
    "PriceSchedule",
    "PlanningInstance",
    "Violation",
    "ValidationReport",
    "ValidationError",
    "validate",
    "net_demand",
    "big_m",
    "part_big_m",
]

# Surplus that cancels safety stock to within this fraction of it leaves
# only float residue (e.g. -0.3 + (0.1 + 0.2)), which is not demand.
NET_RTOL = 1e-12


class UnitOfMeasure(str, enum.Enum):
    UNIT = "unit"
    KG = "kg"

    @classmethod
    def parse(cls, text: str) -> "UnitOfMeasure":
        key = text.strip().lower()
        aliases = {
            "unit": cls.UNIT,
            "units": cls.UNIT,
            "discrete-unit": cls.UNIT,
            "kg": cls.KG,
            "continuous-kg": cls.KG,
        }
        if key not in aliases:
            raise ValueError(f"unknown unit of measure {text!r}")
        return aliases[key]


@dataclass(frozen=True)
class PartSpec:
    part_id: int
    lead_time: int
    ordering_cost: float
    holding_cost: float
    demand_sigma: float = 0.0
    uom: UnitOfMeasure = UnitOfMeasure.UNIT


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def net_demand(raw, ss):
    """Order requirement for one period (scalar or array).

    Stock surplus (negative raw demand) first absorbs the safety stock;
    only the remainder has to be ordered, so the result is
    ``max(raw + ss, 0)``.  For positive raw demand this is ``raw + ss``.
    """
    ss_arr = np.asarray(ss, dtype=float)
    if np.any(ss_arr < 0):
        raise ValueError("safety stock must be non-negative")
    raw_arr = np.asarray(raw, dtype=float)
    net = raw_arr + ss_arr
    residue = (raw_arr <= 0) & (net <= NET_RTOL * ss_arr)
    net = np.where(residue | (net < 0), 0.0, net)
    if net.ndim == 0:
        return float(net)
    return net


@dataclass(frozen=True)
class DemandMatrix:
    """Signed demand and the derived non-negative order requirement."""

    raw: np.ndarray
    net: np.ndarray

    @classmethod
    def from_raw(cls, raw, safety_stock) -> "DemandMatrix":
        raw = _frozen(raw)
        return cls(raw=raw, net=_frozen(net_demand(raw, safety_stock)))


@dataclass(frozen=True)
class PriceSchedule:
    price: np.ndarray

    @classmethod
    def from_sparse(cls, grid, fill: bool = True) -> "PriceSchedule":
        """Build from a grid where NaN marks a missing quote.

        With ``fill`` each part row is forward-filled along the horizon and
        any leading gap is back-filled from the first quote.
        """
        grid = np.array(grid, dtype=float, copy=True)
        if fill:
            for row in grid:
                known = np.flatnonzero(~np.isnan(row))
                if known.size == 0:
                    continue
                # index of last known quote at or before each period
                idx = np.maximum.accumulate(np.where(~np.isnan(row), np.arange(row.size), -1))
                idx[idx < 0] = known[0]
                row[:] = row[idx]
        return cls(price=_frozen(grid))

    def missing_cells(self) -> list[tuple[int, int]]:
        """(row, period) pairs without a price, periods 1-based."""
        rows, cols = np.nonzero(np.isnan(self.price))
        return [(int(r), int(c) + 1) for r, c in zip(rows, cols)]


@dataclass(frozen=True)
class PlanningInstance:
    parts: tuple[PartSpec, ...]
    horizon: int
    demand: DemandMatrix
    prices: PriceSchedule
    safety_stock: np.ndarray

    @classmethod
    def from_arrays(cls, parts, demand, prices, safety_stock=None, fill_prices=True):
        """Convenience constructor from plain nested lists / arrays.

        ``safety_stock`` may be ``None`` (all zero), a per-part vector applied
        to every period, or a full ``P x T`` grid.
        """
        parts = tuple(parts)
        raw = np.array(demand, dtype=float)
        if raw.ndim != 2:
            raw = raw.reshape(len(parts), -1)
        horizon = raw.shape[1]
        if safety_stock is None:
            ss = np.zeros_like(raw)
        else:
            ss = np.array(safety_stock, dtype=float)
            if ss.ndim == 1:
                ss = np.repeat(ss[:, None], horizon, axis=1)
            if ss.shape != raw.shape:
                raise ValueError(f"safety stock shape {ss.shape} does not match demand {raw.shape}")
        ps = PriceSchedule.from_sparse(np.array(prices, dtype=float).reshape(raw.shape), fill=fill_prices)
        return cls(
            parts=parts,
            horizon=horizon,
            demand=DemandMatrix.from_raw(raw, ss),
            prices=ps,
            safety_stock=_frozen(ss),
        )

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    @property
    def net(self) -> np.ndarray:
        return self.demand.net

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {p.part_id: k for k, p in enumerate(self.parts)}

    def part(self, part_id: int) -> PartSpec:
        return self.parts[self.index_of[part_id]]

    def with_net_demand(self, net) -> "PlanningInstance":
        """Copy whose raw demand equals ``net`` and safety stock is zero."""
        net = np.asarray(net, dtype=float)
        return PlanningInstance(
            parts=self.parts,
            horizon=self.horizon,
            demand=DemandMatrix.from_raw(net, np.zeros_like(net)),
            prices=self.prices,
            safety_stock=_frozen(np.zeros_like(net)),
        )


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    part_id: int | None = None
    period: int | None = None

    def __str__(self) -> str:
        where = []
        if self.part_id is not None:
            where.append(f"part {self.part_id}")
        if self.period is not None:
            where.append(f"period {self.period}")
        prefix = f"[{', '.join(where)}] " if where else ""
        return f"{prefix}{self.rule}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(str(v) for v in self.violations)


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"invalid planning instance:\n{report}")


def _finite_nonneg(x) -> bool:
    return isinstance(x, (int, float, np.integer, np.floating)) and math.isfinite(x) and x >= 0


def validate(instance: PlanningInstance) -> ValidationReport:
    """Check every structural and serviceability invariant of ``instance``.

    Never raises; problems come back as :class:`Violation` records.
    """
    out: list[Violation] = []
    P, T = instance.n_parts, instance.horizon
    if T < 1:
        out.append(Violation("horizon", f"horizon must be >= 1, got {T}"))
        return ValidationReport(tuple(out))

    shape = (P, T)
    grids = {
        "demand": instance.demand.raw,
        "net demand": instance.demand.net,
        "prices": instance.prices.price,
        "safety stock": instance.safety_stock,
    }
    bad_shape = False
    for name, g in grids.items():
        if g.shape != shape:
            out.append(Violation("shape", f"{name} grid has shape {g.shape}, expected {shape}"))
            bad_shape = True
    if bad_shape:
        return ValidationReport(tuple(out))

    seen: set[int] = set()
    for k, p in enumerate(instance.parts):
        pid = p.part_id
        if pid in seen:
            out.append(Violation("duplicate part", "part id appears more than once", pid))
        seen.add(pid)
        if not isinstance(p.lead_time, (int, np.integer)) or p.lead_time < 0:
            out.append(Violation("lead time", f"lead time must be a non-negative integer, got {p.lead_time!r}", pid))
            continue
        if p.lead_time >= T:
            out.append(Violation("lead time", f"lead time {p.lead_time} leaves no serviceable period in horizon {T}", pid))
        for attr in ("ordering_cost", "holding_cost", "demand_sigma"):
            if not _finite_nonneg(getattr(p, attr)):
                out.append(Violation(attr.replace("_", " "), f"must be finite and >= 0, got {getattr(p, attr)!r}", pid))

        raw = instance.demand.raw[k]
        ss = instance.safety_stock[k]
        net = instance.demand.net[k]
        price = instance.prices.price[k]
        for t in range(1, T + 1):
            if not math.isfinite(raw[t - 1]):
                out.append(Violation("demand", "demand must be finite", pid, t))
            if not (math.isfinite(ss[t - 1]) and ss[t - 1] >= 0):
                out.append(Violation("safety stock", f"must be finite and >= 0, got {ss[t - 1]}", pid, t))
            if net[t - 1] > 0 and t <= p.lead_time:
                out.append(
                    Violation(
                        "unserviceable demand",
                        f"net demand {net[t - 1]:g} cannot arrive in time with lead time {p.lead_time}",
                        pid,
                        t,
                    )
                )
        # any period some demand period can order from must carry a price
        last_order = T - p.lead_time
        for tp in range(1, last_order + 1):
            c = price[tp - 1]
            if math.isnan(c):
                out.append(Violation("missing price", "no price for a usable ordering period", pid, tp))
            elif not (math.isfinite(c) and c >= 0):
                out.append(Violation("price", f"price must be finite and >= 0, got {c}", pid, tp))
    return ValidationReport(tuple(out))


def part_big_m(instance: PlanningInstance) -> np.ndarray:
    """Per-part big-M: total net demand over the horizon, floored at 1."""
    totals = instance.net.sum(axis=1)
    return np.where(totals > 0, totals, 1.0)


def big_m(instance: PlanningInstance) -> float:
    """Single big-M shared by all linking rows.

    Largest full-horizon net demand over all parts; no single order can
    exceed it in a cost-minimal plan.  Returns 1 when there is no demand.
    """
    if instance.n_parts == 0:
        return 1.0
    m = float(instance.net.sum(axis=1).max())
    return m if m > 0 else 1.0
