"""Explicit sparse MIP for the lot-sizing model, with LP-file export.

Variables come in pairs over the index set ``L_i + 1 <= t <= T``,
``1 <= t' <= t - L_i``:

* ``Q_i_t_tp`` (continuous, >= 0): quantity of part ``i`` needed in ``t``
  and ordered in ``t'``;
* ``Y_i_t_tp`` (binary): 1 when that pair is used.

Objective coefficients are ``C[i, t'] + h_i * (t - t')`` on ``Q`` and
``A_i`` on ``Y``.  Rows are one coverage row per ``(i, t)``
(``sum_t' Q >= net``) and one linking row per pair (``Q - M Y <= 0``).
All ``Q`` columns come first, then the ``Y`` columns in the same order.
"""

from __future__ import annotations

import io
import math
import os
import re
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np
from scipy import sparse

from .instance_model import PlanningInstance, ValidationError, big_m, part_big_m, validate
from .plan import CostBreakdown, OrderPlan, PartCost

__all__ = [
    "VarRef",
    "MipModel",
    "PlanMismatchError",
    "build",
    "export_lp",
    "lp_text",
    "plan_vector",
    "objective_value",
    "evaluate_objective",
    "LpProblem",
    "read_lp",
]

GE, LE, EQ = ">=", "<=", "="


@dataclass(frozen=True)
class VarRef:
    kind: str  # "Q" or "Y"
    part_id: int
    need_period: int
    order_period: int

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.part_id}_{self.need_period}_{self.order_period}"

    @property
    def is_binary(self) -> bool:
        return self.kind == "Y"


@dataclass(frozen=True, eq=False)
class MipModel:
    variables: tuple[VarRef, ...]
    objective: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    matrix: sparse.csr_matrix
    senses: tuple[str, ...]
    rhs: np.ndarray
    row_names: tuple[str, ...]
    big_m: float
    # objective split, aligned with ``variables``
    purchase_coef: np.ndarray
    holding_coef: np.ndarray
    ordering_coef: np.ndarray
    part_ids: tuple[int, ...] = ()
    per_part_big_m: bool = False
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_pairs(self) -> int:
        return len(self.variables) // 2

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_coverage_rows(self) -> int:
        return sum(1 for n in self.row_names if n.startswith("cov_"))

    @property
    def n_linking_rows(self) -> int:
        return sum(1 for n in self.row_names if n.startswith("link_"))

    def q_index(self, part_id: int, need_period: int, order_period: int) -> int:
        return self._index[part_id, need_period, order_period]

    def y_index(self, part_id: int, need_period: int, order_period: int) -> int:
        return self._index[part_id, need_period, order_period] + self.n_pairs


class PlanMismatchError(ValueError):
    """Plan references a (part, need, order) triple the model does not have."""


def build(instance: PlanningInstance, per_part_big_m: bool = False) -> MipModel:
    report = validate(instance)
    if not report.ok:
        raise ValidationError(report)

    m_global = big_m(instance)
    m_part = part_big_m(instance)
    T = instance.horizon

    pairs: list[tuple[int, int, int, int]] = []  # (part index, part id, t, t')
    for k, p in enumerate(instance.parts):
        for t in range(p.lead_time + 1, T + 1):
            for tp in range(1, t - p.lead_time + 1):
                pairs.append((k, p.part_id, t, tp))
    n = len(pairs)

    q_vars = [VarRef("Q", pid, t, tp) for _, pid, t, tp in pairs]
    y_vars = [VarRef("Y", pid, t, tp) for _, pid, t, tp in pairs]

    purchase = np.zeros(2 * n)
    holding = np.zeros(2 * n)
    ordering = np.zeros(2 * n)
    for j, (k, _, t, tp) in enumerate(pairs):
        p = instance.parts[k]
        purchase[j] = instance.prices.price[k, tp - 1]
        holding[j] = p.holding_cost * (t - tp)
        ordering[n + j] = p.ordering_cost
    objective = purchase + holding + ordering

    rows, cols, vals = [], [], []
    senses: list[str] = []
    rhs: list[float] = []
    names: list[str] = []

    r = 0
    j = 0
    while j < n:
        k, pid, t, _ = pairs[j]
        start = j
        while j < n and pairs[j][0] == k and pairs[j][2] == t:
            j += 1
        for col in range(start, j):
            rows.append(r)
            cols.append(col)
            vals.append(1.0)
        senses.append(GE)
        rhs.append(float(instance.net[k, t - 1]))
        names.append(f"cov_{pid}_{t}")
        r += 1

    for j, (k, pid, t, tp) in enumerate(pairs):
        m = float(m_part[k]) if per_part_big_m else m_global
        rows += [r, r]
        cols += [j, n + j]
        vals += [1.0, -m]
        senses.append(LE)
        rhs.append(0.0)
        names.append(f"link_{pid}_{t}_{tp}")
        r += 1

    matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(r, 2 * n))
    upper = np.concatenate([np.full(n, np.inf), np.ones(n)])

    def frozen(a):
        a = np.asarray(a, dtype=float)
        a.setflags(write=False)
        return a

    return MipModel(
        variables=tuple(q_vars + y_vars),
        objective=frozen(objective),
        lower=frozen(np.zeros(2 * n)),
        upper=frozen(upper),
        matrix=matrix,
        senses=tuple(senses),
        rhs=frozen(rhs),
        row_names=tuple(names),
        big_m=m_global,
        purchase_coef=frozen(purchase),
        holding_coef=frozen(holding),
        ordering_coef=frozen(ordering),
        part_ids=tuple(p.part_id for p in instance.parts),
        per_part_big_m=per_part_big_m,
        _index={(pid, t, tp): j for j, (_, pid, t, tp) in enumerate(pairs)},
    )


def _num(x: float) -> str:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _terms(coefs: list[tuple[float, str]], indent: str = "   ", per_line: int = 6) -> list[str]:
    chunks = []
    for c, name in coefs:
        sign = "-" if c < 0 else "+"
        chunks.append(f"{sign} {_num(abs(c))} {name}")
    lines = []
    for i in range(0, len(chunks), per_line):
        lines.append(indent + " ".join(chunks[i : i + per_line]))
    return lines


def export_lp(model: MipModel, destination: TextIO | str | os.PathLike) -> None:
    """Write ``model`` in CPLEX LP text format.

    ``destination`` is an open text stream or a path.  Output is a pure
    function of the model, so repeated exports are byte-identical.
    """
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            _write_lp(model, fh)
    else:
        _write_lp(model, destination)


def lp_text(model: MipModel) -> str:
    buf = io.StringIO()
    _write_lp(model, buf)
    return buf.getvalue()


def _write_lp(model: MipModel, out: TextIO) -> None:
    names = [v.name for v in model.variables]
    w = out.write
    w(f"\\ lot-sizing model: {model.n_pairs} order pairs, {model.n_rows} rows, big-M {_num(model.big_m)}\n")
    w("Minimize\n")
    obj = [(c, names[j]) for j, c in enumerate(model.objective) if c != 0]
    if obj:
        w(" obj:\n")
        for line in _terms(obj):
            w(line + "\n")
    else:
        w(" obj: 0\n")

    w("Subject To\n")
    A = model.matrix
    for r in range(model.n_rows):
        lo, hi = A.indptr[r], A.indptr[r + 1]
        row = [(A.data[k], names[A.indices[k]]) for k in range(lo, hi)]
        w(f" {model.row_names[r]}:\n")
        lines = _terms(row)
        lines[-1] += f" {model.senses[r]} {_num(model.rhs[r])}"
        for line in lines:
            w(line + "\n")

    w("Bounds\n")
    for j, v in enumerate(model.variables):
        if not v.is_binary:
            if math.isinf(model.upper[j]):
                w(f" {names[j]} >= {_num(model.lower[j])}\n")
            else:
                w(f" {_num(model.lower[j])} <= {names[j]} <= {_num(model.upper[j])}\n")

    w("Binary\n")
    for j, v in enumerate(model.variables):
        if v.is_binary:
            w(f" {names[j]}\n")
    w("End\n")


def plan_vector(model: MipModel, plan: OrderPlan) -> np.ndarray:
    """Column vector for ``plan``: Q from the assignments, Y = [Q > 0]."""
    x = np.zeros(model.n_vars)
    for key, q in plan.pair_quantities().items():
        try:
            j = model._index[key]
        except KeyError:
            pid, t, tp = key
            raise PlanMismatchError(f"plan uses Q_{pid}_{t}_{tp}, which is not a model variable") from None
        x[j] = q
        if q > 0:
            x[model.n_pairs + j] = 1.0
    return x


def objective_value(model: MipModel, x) -> float:
    return math.fsum(np.asarray(model.objective) * np.asarray(x, dtype=float))


def evaluate_objective(model: MipModel, plan: OrderPlan) -> CostBreakdown:
    """Purchasing, ordering and holding cost of ``plan`` under the model objective."""
    x = plan_vector(model, plan)
    n = model.n_pairs
    per_part = {}
    for pid in model.part_ids:
        per_part[pid] = ([], [], [])
    for j in np.flatnonzero(x):
        v = model.variables[j]
        buckets = per_part.setdefault(v.part_id, ([], [], []))
        if j < n:
            buckets[0].append(model.purchase_coef[j] * x[j])
            buckets[2].append(model.holding_coef[j] * x[j])
        else:
            buckets[1].append(model.ordering_coef[j] * x[j])
    return CostBreakdown(
        tuple(
            PartCost(pid, math.fsum(b[0]), math.fsum(b[1]), math.fsum(b[2]))
            for pid, b in sorted(per_part.items())
        )
    )


# --------------------------------------------------------------------------
# LP reader (the subset of the CPLEX LP format emitted above plus the usual
# spelling variants).  Used to check that exported files round-trip.
# --------------------------------------------------------------------------

@dataclass
class LpProblem:
    objective: dict[str, float] = field(default_factory=dict)
    maximize: bool = False
    constraints: list[tuple[str, dict[str, float], str, float]] = field(default_factory=list)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    binaries: list[str] = field(default_factory=list)
    generals: list[str] = field(default_factory=list)

    @property
    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for name in self.objective:
            seen.setdefault(name)
        for _, row, _, _ in self.constraints:
            for name in row:
                seen.setdefault(name)
        for name in list(self.bounds) + self.binaries + self.generals:
            seen.setdefault(name)
        return list(seen)

    def evaluate(self, values: dict[str, float]) -> float:
        return math.fsum(c * values.get(name, 0.0) for name, c in self.objective.items())

    def violations(self, values: dict[str, float], tol: float = 1e-9) -> list[str]:
        bad = []
        for name, row, sense, rhs in self.constraints:
            lhs = math.fsum(c * values.get(v, 0.0) for v, c in row.items())
            slack = tol * max(1.0, abs(rhs))
            if (sense == GE and lhs < rhs - slack) or (sense == LE and lhs > rhs + slack) or (
                sense == EQ and abs(lhs - rhs) > slack
            ):
                bad.append(f"{name}: {lhs} {sense} {rhs}")
        for v in self.binaries:
            if values.get(v, 0.0) not in (0.0, 1.0):
                bad.append(f"{v} not binary")
        for v, (lo, hi) in self.bounds.items():
            x = values.get(v, 0.0)
            if x < lo - tol or x > hi + tol:
                bad.append(f"{v} outside [{lo}, {hi}]")
        return bad


_SECTIONS = {
    "minimize": "min", "minimise": "min", "minimum": "min", "min": "min",
    "maximize": "max", "maximise": "max", "maximum": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st", "st.": "st",
    "bounds": "bounds", "bound": "bounds",
    "binary": "bin", "binaries": "bin", "bin": "bin",
    "general": "gen", "generals": "gen", "gen": "gen",
    "end": "end",
}
_TOKEN = re.compile(
    r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"  # number
    r"|<=|>=|=<|=>|[<>=]|[+-]"
    r"|[^\s<>=:+\-]+:?"  # name, optionally a row label
)
_SENSE = {"<=": LE, "=<": LE, "<": LE, ">=": GE, "=>": GE, ">": GE, "=": EQ}


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize LP text near {text[pos:pos + 30]!r}")
        out.append(m.group(0))
        pos = m.end()
    return out


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return tok.lower() in ("inf", "infinity")


def _linear(tokens: list[str], i: int, stop) -> tuple[dict[str, float], int, float]:
    """Parse ``[+-] [coef] var ...`` from ``tokens[i]`` until ``stop(tok)``.

    Returns (coefficients, next index, constant term).
    """
    coefs: dict[str, float] = {}
    const = 0.0
    while i < len(tokens) and not stop(tokens[i]):
        sign = 1.0
        while tokens[i] in ("+", "-"):
            if tokens[i] == "-":
                sign = -sign
            i += 1
        coef = 1.0
        if _is_number(tokens[i]):
            coef = float(tokens[i])
            i += 1
            if i >= len(tokens) or stop(tokens[i]) or tokens[i] in ("+", "-"):
                const += sign * coef
                continue
        name = tokens[i]
        i += 1
        coefs[name] = coefs.get(name, 0.0) + sign * coef
    return coefs, i, const


def read_lp(source: str | TextIO) -> LpProblem:
    """Parse CPLEX LP text into an :class:`LpProblem`."""
    text = source if isinstance(source, str) else source.read()
    lines = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if line:
            lines.append(line)

    blocks: dict[str, list[str]] = {}
    current = None
    for line in lines:
        key = _SECTIONS.get(" ".join(line.lower().split()))
        if key == "end":
            break
        if key is not None:
            current = key
            blocks.setdefault(key, [])
            continue
        if current is None:
            raise ValueError(f"LP text outside any section: {line!r}")
        blocks[current].append(line)

    lp = LpProblem()
    obj_key = "max" if "max" in blocks else "min"
    lp.maximize = obj_key == "max"
    toks = _tokenize(" ".join(blocks.get(obj_key, [])))
    if toks and toks[0].endswith(":"):
        toks = toks[1:]
    lp.objective, _, _ = _linear(toks, 0, lambda t: False)

    toks = _tokenize(" ".join(blocks.get("st", [])))
    i, k = 0, 0
    while i < len(toks):
        name = None
        if toks[i].endswith(":"):
            name = toks[i][:-1]
            i += 1
        row, i, const = _linear(toks, i, lambda t: t in _SENSE)
        sense = _SENSE[toks[i]]
        i += 1
        sign = 1.0
        if toks[i] in ("+", "-"):
            sign = -1.0 if toks[i] == "-" else 1.0
            i += 1
        rhs = sign * float(toks[i]) - const
        i += 1
        k += 1
        lp.constraints.append((name or f"R{k}", row, sense, rhs))

    for line in blocks.get("bounds", []):
        lp.bounds.update([_bound(line, lp.bounds)])

    for key, target in (("bin", lp.binaries), ("gen", lp.generals)):
        for line in blocks.get(key, []):
            target.extend(line.split())
    return lp


def _bound(line: str, known: dict[str, tuple[float, float]]) -> tuple[str, tuple[float, float]]:
    toks = line.split()
    if len(toks) == 2 and toks[1].lower() == "free":
        return toks[0], (-math.inf, math.inf)

    def num(tok: str) -> float:
        return float(tok.lower().replace("infinity", "inf"))

    if len(toks) == 5:
        return toks[2], (num(toks[0]), num(toks[4]))
    if len(toks) != 3:
        raise ValueError(f"unsupported bound line {line!r}")
    if _is_number(toks[0]):
        # v op x  ==  x (reversed op) v
        value, sense, var = num(toks[0]), _SENSE[toks[1]], toks[2]
        sense = {LE: GE, GE: LE, EQ: EQ}[sense]
    else:
        var, sense, value = toks[0], _SENSE[toks[1]], num(toks[2])
    lo, hi = known.get(var, (0.0, math.inf))
    if sense == GE:
        return var, (value, hi)
    if sense == LE:
        return var, (lo, value)
    return var, (value, value)
