"""CSV ingestion and export.

File schemas (UTF-8, header row required, ``#`` lines are comments):

* ``parts.csv``         part_id,lead_time,ordering_cost,holding_cost,sigma,uom
* ``demand.csv``        part_id,period,demand
* ``prices.csv``        part_id,period,price      (may be sparse)
* ``safety_stock.csv``  part_id,period,ss         (optional)
* ``plan.csv``          part_id,need_period,order_period,quantity
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .instance_model import (
    PartSpec,
    PlanningInstance,
    DemandMatrix,
    PriceSchedule,
    UnitOfMeasure,
    ValidationError,
    validate,
)
from .plan import Assignment, CostSemantics, OrderPlan
from .safety_stock import ServicePolicy, safety_stock_grid

__all__ = [
    "CsvFormatError",
    "PriceGapError",
    "RunConfig",
    "load_instance",
    "read_parts",
    "read_plan",
    "write_plan",
    "write_instance",
    "write_safety_stock",
    "case_study_dir",
    "case_study_config",
    "load_case_study",
    "case_study_reference",
]

PARTS_HEADER = ["part_id", "lead_time", "ordering_cost", "holding_cost", "sigma", "uom"]
PLAN_HEADER = ["part_id", "need_period", "order_period", "quantity"]


class CsvFormatError(ValueError):
    def __init__(self, path, line: int | None, column: str | None, message: str):
        self.path, self.line, self.column = str(path), line, column
        where = self.path
        if line is not None:
            where += f":{line}"
        if column is not None:
            where += f" [{column}]"
        super().__init__(f"{where}: {message}")


class PriceGapError(ValueError):
    def __init__(self, cells: list[tuple[int, int]]):
        self.cells = cells
        shown = ", ".join(f"part {p} period {t}" for p, t in cells[:10])
        more = f" (+{len(cells) - 10} more)" if len(cells) > 10 else ""
        super().__init__(f"{len(cells)} missing price cells: {shown}{more}")


@dataclass
class RunConfig:
    parts: Path
    demand: Path
    prices: Path
    safety_stock: Path | None = None
    service_level: float = 0.95
    z: float | None = None
    semantics: CostSemantics = CostSemantics.PAIRWISE
    out_dir: Path = field(default_factory=lambda: Path("."))
    price_fill: str = "fill"  # or "strict"

    @classmethod
    def from_dir(cls, directory, **kw) -> "RunConfig":
        d = Path(directory)
        ss = d / "safety_stock.csv"
        kw.setdefault("safety_stock", ss if ss.exists() else None)
        return cls(parts=d / "parts.csv", demand=d / "demand.csv", prices=d / "prices.csv", **kw)

    @property
    def policy(self) -> ServicePolicy:
        return ServicePolicy(service_level=self.service_level, z_value=self.z)


def _rows(path, header: list[str]):
    """Yield (line number, row dict) after checking the header."""
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise CsvFormatError(path, None, None, f"cannot open: {exc.strerror}") from exc
    with fh:
        lines = ((n, line) for n, line in enumerate(fh, 1) if line.strip() and not line.lstrip().startswith("#"))
        numbered = list(lines)
    if not numbered:
        raise CsvFormatError(path, None, None, "file is empty (header row required)")
    reader = csv.reader([line for _, line in numbered])
    got = [h.strip() for h in next(reader)]
    missing = [h for h in header if h not in got]
    if missing:
        raise CsvFormatError(path, numbered[0][0], None, f"header lacks column(s) {', '.join(missing)}; got {got}")
    for (lineno, _), row in zip(numbered[1:], reader):
        if len(row) != len(got):
            raise CsvFormatError(path, lineno, None, f"expected {len(got)} fields, found {len(row)}")
        yield lineno, dict(zip(got, (c.strip() for c in row)))


def _parse(path, lineno, column, text, kind):
    try:
        if kind is int:
            value = int(text)
        else:
            value = float(text)
            if not math.isfinite(value):
                raise ValueError
    except ValueError:
        raise CsvFormatError(path, lineno, column, f"cannot parse {text!r} as {kind.__name__}") from None
    return value


def read_parts(path) -> list[PartSpec]:
    parts, seen = [], set()
    for lineno, row in _rows(path, PARTS_HEADER):
        pid = _parse(path, lineno, "part_id", row["part_id"], int)
        if pid in seen:
            raise CsvFormatError(path, lineno, "part_id", f"duplicate part {pid}")
        seen.add(pid)
        try:
            uom = UnitOfMeasure.parse(row["uom"])
        except ValueError as exc:
            raise CsvFormatError(path, lineno, "uom", str(exc)) from None
        parts.append(
            PartSpec(
                part_id=pid,
                lead_time=_parse(path, lineno, "lead_time", row["lead_time"], int),
                ordering_cost=_parse(path, lineno, "ordering_cost", row["ordering_cost"], float),
                holding_cost=_parse(path, lineno, "holding_cost", row["holding_cost"], float),
                demand_sigma=_parse(path, lineno, "sigma", row["sigma"], float),
                uom=uom,
            )
        )
    return parts


def _read_cells(path, value_col: str) -> dict[tuple[int, int], tuple[float, int]]:
    cells: dict[tuple[int, int], tuple[float, int]] = {}
    for lineno, row in _rows(path, ["part_id", "period", value_col]):
        pid = _parse(path, lineno, "part_id", row["part_id"], int)
        t = _parse(path, lineno, "period", row["period"], int)
        if t < 1:
            raise CsvFormatError(path, lineno, "period", f"periods start at 1, got {t}")
        if (pid, t) in cells:
            raise CsvFormatError(
                path, lineno, None, f"duplicate row for part {pid} period {t} (first on line {cells[pid, t][1]})"
            )
        cells[pid, t] = (_parse(path, lineno, value_col, row[value_col], float), lineno)
    return cells


def _grid(path, cells, parts, horizon, dense: bool) -> np.ndarray:
    index = {p.part_id: k for k, p in enumerate(parts)}
    grid = np.full((len(parts), horizon), np.nan)
    for (pid, t), (v, lineno) in cells.items():
        if pid not in index:
            raise CsvFormatError(path, lineno, "part_id", f"part {pid} is not listed in parts.csv")
        if t > horizon:
            raise CsvFormatError(path, lineno, "period", f"period {t} is beyond the horizon {horizon}")
        grid[index[pid], t - 1] = v
    if dense:
        gaps = np.argwhere(np.isnan(grid))
        if gaps.size:
            k, t = gaps[0]
            raise CsvFormatError(path, None, None, f"no value for part {parts[k].part_id} period {t + 1}")
    return grid


def load_instance(config: RunConfig, check: bool = True) -> PlanningInstance:
    """Read, assemble and (by default) validate an instance.

    Safety stock comes from ``config.safety_stock`` when given, otherwise it
    is computed per part from the service policy.  Raises
    :class:`CsvFormatError`, :class:`PriceGapError` (strict price mode) or
    :class:`ValidationError`.
    """
    if config.price_fill not in ("fill", "strict"):
        raise ValueError(f"price_fill must be 'fill' or 'strict', got {config.price_fill!r}")
    parts = read_parts(config.parts)
    demand_cells = _read_cells(config.demand, "demand")
    horizon = max((t for _, t in demand_cells), default=0)
    raw = _grid(config.demand, demand_cells, parts, horizon, dense=True)

    sparse_prices = _grid(config.prices, _read_cells(config.prices, "price"), parts, horizon, dense=False)
    if config.price_fill == "strict":
        gaps = PriceSchedule(sparse_prices).missing_cells()
        if gaps:
            raise PriceGapError([(parts[k].part_id, t) for k, t in gaps])
        prices = PriceSchedule.from_sparse(sparse_prices, fill=False)
    else:
        prices = PriceSchedule.from_sparse(sparse_prices, fill=True)

    if config.safety_stock is not None:
        ss = _grid(config.safety_stock, _read_cells(config.safety_stock, "ss"), parts, horizon, dense=True)
        if np.any(ss < 0):
            k, t = np.argwhere(ss < 0)[0]
            raise CsvFormatError(config.safety_stock, None, "ss", f"negative safety stock for part {parts[k].part_id} period {t + 1}")
    else:
        ss = safety_stock_grid(parts, horizon, config.policy)

    ss.setflags(write=False)
    instance = PlanningInstance(
        parts=tuple(parts),
        horizon=horizon,
        demand=DemandMatrix.from_raw(raw, ss),
        prices=prices,
        safety_stock=ss,
    )
    if check:
        report = validate(instance)
        if not report.ok:
            raise ValidationError(report)
    return instance


def _fmt(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _write(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_safety_stock(instance_or_grid, parts, path) -> None:
    grid = np.asarray(instance_or_grid)
    _write(
        path,
        ["part_id", "period", "ss"],
        [[p.part_id, t + 1, _fmt(grid[k, t])] for k, p in enumerate(parts) for t in range(grid.shape[1])],
    )


def write_instance(instance: PlanningInstance, directory) -> RunConfig:
    """Write dense canonical CSVs for ``instance``; returns a config for them."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    _write(
        d / "parts.csv",
        PARTS_HEADER,
        [
            [p.part_id, p.lead_time, _fmt(p.ordering_cost), _fmt(p.holding_cost), _fmt(p.demand_sigma), p.uom.value]
            for p in instance.parts
        ],
    )
    cells = [(k, p, t) for k, p in enumerate(instance.parts) for t in range(instance.horizon)]
    _write(d / "demand.csv", ["part_id", "period", "demand"],
           [[p.part_id, t + 1, _fmt(instance.demand.raw[k, t])] for k, p, t in cells])
    _write(d / "prices.csv", ["part_id", "period", "price"],
           [[p.part_id, t + 1, _fmt(instance.prices.price[k, t])] for k, p, t in cells
            if not math.isnan(instance.prices.price[k, t])])
    write_safety_stock(instance.safety_stock, instance.parts, d / "safety_stock.csv")
    return RunConfig.from_dir(d)


def write_plan(plan: OrderPlan, path) -> None:
    _write(path, PLAN_HEADER, [[a.part_id, a.need_period, a.order_period, _fmt(a.quantity)] for a in plan])


def read_plan(path) -> OrderPlan:
    items = []
    for lineno, row in _rows(path, PLAN_HEADER):
        items.append(
            Assignment(
                _parse(path, lineno, "part_id", row["part_id"], int),
                _parse(path, lineno, "need_period", row["need_period"], int),
                _parse(path, lineno, "order_period", row["order_period"], int),
                _parse(path, lineno, "quantity", row["quantity"], float),
            )
        )
    return OrderPlan.from_assignments(items)


def case_study_dir() -> Path:
    """Directory of the bundled 22-part, 12-week trailer case study."""
    return Path(str(resources.files("lotsizer") / "data" / "case_study"))


def case_study_config(**kw) -> RunConfig:
    return RunConfig.from_dir(case_study_dir(), **kw)


def load_case_study(**kw) -> PlanningInstance:
    return load_instance(case_study_config(**kw))


def case_study_reference() -> tuple[dict[int, float], float]:
    """Published per-part optimal totals and grand total for the case study."""
    per_part: dict[int, float] = {}
    grand = math.nan
    path = case_study_dir() / "reference_totals.csv"
    for lineno, row in _rows(path, ["part_id", "total_cost"]):
        value = _parse(path, lineno, "total_cost", row["total_cost"], float)
        if row["part_id"] == "total":
            grand = value
        else:
            per_part[_parse(path, lineno, "part_id", row["part_id"], int)] = value
    return per_part, grand
