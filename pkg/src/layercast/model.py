"""Network codes over a DAG: heights, performance, demands, feasibility.

Includes small exhaustive search oracles used to cross-check the
constructive planners on tiny instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional, Sequence

from . import gf
from .dag import Dag, lambda_value
from .errors import BudgetExceeded
from .gf import Field, Subspace, Vector


@dataclass(frozen=True)
class NetworkCode:
    """Arc-indexed coefficient vectors over F_q^k."""

    field: Field
    k: int
    assignment: dict[int, Vector] = dc_field(default_factory=dict)

    def vector(self, arc_id: int) -> Vector:
        return self.assignment[arc_id]


class Demand:
    """Disjoint receiver tiers; members of tier i request layers 1..i."""

    def __init__(self, tiers: Sequence[Iterable[int]]):
        self.tiers: tuple[frozenset[int], ...] = tuple(frozenset(t) for t in tiers)
        seen: set[int] = set()
        for t in self.tiers:
            if t & seen:
                raise ValueError("demand tiers are not disjoint")
            seen |= t
        self._level = {v: i + 1 for i, t in enumerate(self.tiers) for v in t}

    @property
    def k(self) -> int:
        return len(self.tiers)

    @property
    def receivers(self) -> frozenset[int]:
        return frozenset(self._level)

    def tier(self, i: int) -> frozenset[int]:
        return self.tiers[i - 1]

    def __repr__(self) -> str:
        return f"Demand({[sorted(t) for t in self.tiers]})"


def demand_of(demand: Demand, v: int) -> int:
    return demand._level.get(v, 0)


def incoming_span(dag: Dag, code: NetworkCode, v: int) -> Subspace:
    return gf.span([code.assignment[a] for a in dag.in_arcs[v]], code.field)


def performance(dag: Dag, code: NetworkCode, v: int) -> int:
    """Highest i such that layers 1..i are all decodable at v.

    The source generates every message, so its performance is k.
    """
    if v == dag.source:
        return code.k
    sub = incoming_span(dag, code, v)
    p = 0
    for i in range(1, code.k + 1):
        if sub.contains(gf.unit_vector(i, code.k)):
            p = i
        else:
            break
    return p


def performance_map(dag: Dag, code: NetworkCode) -> dict[int, int]:
    return {v: performance(dag, code, v) for v in range(dag.node_count)}


def height_function_of(code: NetworkCode) -> dict[int, int]:
    return {a: gf.height(vec) for a, vec in code.assignment.items()}


def is_valid_code(dag: Dag, code: NetworkCode) -> bool:
    """Linear combination property: every arc out of u != s carries a
    combination of the vectors entering u."""
    for v in range(dag.node_count):
        if v == dag.source or not dag.out_arcs[v]:
            continue
        sub = incoming_span(dag, code, v)
        for a in dag.out_arcs[v]:
            if not sub.contains(code.assignment[a]):
                return False
    return True


def is_feasible(dag: Dag, code: NetworkCode, demand: Demand) -> bool:
    return all(
        performance(dag, code, v) >= demand_of(demand, v) for v in demand.receivers
    )


def is_proper(dag: Dag, demand: Demand) -> bool:
    """Every tier-i receiver has at least i arc-disjoint paths from the source."""
    for i in range(1, demand.k + 1):
        for t in demand.tier(i):
            if lambda_value(dag, t, i) < i:
                return False
    return True


# ---------------------------------------------------------------------------
# exhaustive search oracles


def _directions(basis: Sequence[Vector], field: Field, k: int) -> list[Vector]:
    """One representative per direction of the span (first non-zero coord 1)."""
    q = field.q
    d = len(basis)
    if d == 0:
        return []
    out = []
    coeffs = [0] * d
    def rec(i: int, started: bool, acc: Vector):
        if i == d:
            if started:
                out.append(acc)
            return
        # leading coefficient normalised to 1 for canonical representatives
        choices = [0, 1] if not started else range(q)
        for c in choices:
            rec(
                i + 1,
                started or c != 0,
                gf.vec_addmul(acc, c, basis[i], field) if c else acc,
            )
    rec(0, False, gf.vec_zero(k))
    return out


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"oracle exceeded {self.limit} candidate evaluations")


def _oracle_order(dag: Dag) -> list[int]:
    return sorted(dag.arc_ids, key=lambda a: (dag.topo_position(dag.tail(a)), a))


def _full_space_basis(field: Field, k: int) -> list[Vector]:
    return [gf.unit_vector(i, k) for i in range(1, k + 1)]


def brute_force_feasible(
    dag: Dag,
    demand: Demand,
    field: Field,
    budget: int = 10**8,
    max_arcs: int = 8,
) -> Optional[NetworkCode]:
    """Exhaustively search for a feasible code over the given field.

    Enumerates, arc by arc in topological order of tails, one representative
    per direction of the tail's incoming span (scaling changes nothing).
    Returns a feasible code or None.  Raises BudgetExceeded when the search
    visits more candidates than allowed.
    """
    if dag.arc_count() > max_arcs:
        raise BudgetExceeded(f"instance has more than {max_arcs} arcs")
    k = demand.k
    order = _oracle_order(dag)
    budget_box = _Budget(budget)
    found = _search_codes(dag, order, field, k, demand, budget_box, height=None)
    return found


def brute_force_feasible_with_height(
    dag: Dag,
    f: dict[int, int],
    demand: Demand,
    field: Field,
    budget: int = 10**8,
    max_arcs: int = 10,
) -> Optional[NetworkCode]:
    """Like brute_force_feasible but every arc's height must equal f exactly."""
    if dag.arc_count() > max_arcs:
        raise BudgetExceeded(f"instance has more than {max_arcs} arcs")
    k = demand.k
    order = _oracle_order(dag)
    budget_box = _Budget(budget)
    return _search_codes(dag, order, field, k, demand, budget_box, height=f)


def _search_codes(
    dag: Dag,
    order: list[int],
    field: Field,
    k: int,
    demand: Demand,
    budget: _Budget,
    height: Optional[dict[int, int]],
) -> Optional[NetworkCode]:
    pending = [len(dag.in_arcs[v]) for v in range(dag.node_count)]
    assign: dict[int, Vector] = {}

    def candidates(a: int) -> list[Vector]:
        u = dag.tail(a)
        if u == dag.source:
            basis = _full_space_basis(field, k)
        else:
            basis = list(gf.rref([assign[b] for b in dag.in_arcs[u]], field))
        dirs = _directions(basis, field, k)
        if height is not None:
            want = height[a]
            if want == 0:
                return [gf.vec_zero(k)]
            return [v for v in dirs if gf.height(v) == want]
        if not dirs:
            return [gf.vec_zero(k)]
        return dirs

    def rec(idx: int) -> Optional[NetworkCode]:
        if idx == len(order):
            return NetworkCode(field, k, dict(assign))
        a = order[idx]
        head = dag.head(a)
        for vec in candidates(a):
            budget.spend()
            assign[a] = vec
            pending[head] -= 1
            ok = True
            if pending[head] == 0:
                need = demand_of(demand, head)
                if need:
                    sub = gf.span([assign[b] for b in dag.in_arcs[head]], field)
                    ok = all(
                        sub.contains(gf.unit_vector(i, k))
                        for i in range(1, need + 1)
                    )
            if ok:
                res = rec(idx + 1)
                if res is not None:
                    return res
            pending[head] += 1
            del assign[a]
        return None

    return rec(0)


def brute_force_best_two_layer(
    dag: Dag,
    t1: Iterable[int],
    t2: Iterable[int],
    field: Field,
    budget: int = 10**8,
    max_arcs: int = 8,
) -> tuple[frozenset[int], bool]:
    """Sweep all two-layer codes delivering the base layer to every receiver.

    Returns (union of upgradable tier-2 subsets, whether one single code
    achieves the whole union).  The union is the largest tier-2 set that can
    get both layers while every receiver still decodes layer 1.
    """
    if dag.arc_count() > max_arcs:
        raise BudgetExceeded(f"instance has more than {max_arcs} arcs")
    t1 = frozenset(t1)
    t2 = frozenset(t2)
    receivers = t1 | t2
    k = 2
    order = _oracle_order(dag)
    budget_box = _Budget(budget)
    pending = [len(dag.in_arcs[v]) for v in range(dag.node_count)]
    assign: dict[int, Vector] = {}
    e1 = gf.unit_vector(1, k)
    e2 = gf.unit_vector(2, k)
    best: set[frozenset[int]] = set()

    def candidates(a: int) -> list[Vector]:
        u = dag.tail(a)
        if u == dag.source:
            basis = _full_space_basis(field, k)
        else:
            basis = list(gf.rref([assign[b] for b in dag.in_arcs[u]], field))
        dirs = _directions(basis, field, k)
        return dirs if dirs else [gf.vec_zero(k)]

    def rec(idx: int) -> None:
        if idx == len(order):
            got = frozenset(
                t
                for t in t2
                if gf.span([assign[b] for b in dag.in_arcs[t]], field).contains(e2)
            )
            best.add(got)
            return
        a = order[idx]
        head = dag.head(a)
        for vec in candidates(a):
            budget_box.spend()
            assign[a] = vec
            pending[head] -= 1
            ok = True
            if pending[head] == 0 and head in receivers:
                sub = gf.span([assign[b] for b in dag.in_arcs[head]], field)
                ok = sub.contains(e1)
            if ok:
                rec(idx + 1)
            pending[head] += 1
            del assign[a]

    rec(0)
    union: frozenset[int] = frozenset().union(*best) if best else frozenset()
    return union, union in best


# ---------------------------------------------------------------------------
# serialization


def code_to_text(code: NetworkCode) -> str:
    lines = [f"field {code.field.q}", f"layers {code.k}"]
    for a in sorted(code.assignment):
        vec = " ".join(str(x) for x in code.assignment[a])
        lines.append(f"code {a} {vec}")
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> NetworkCode:
    q = None
    k = None
    assignment: dict[int, Vector] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "field":
            q = int(parts[1])
        elif parts[0] == "layers":
            k = int(parts[1])
        elif parts[0] == "code":
            arc_id = int(parts[1])
            vec = tuple(int(x) for x in parts[2:])
            assignment[arc_id] = vec
        else:
            raise ValueError(f"unrecognized line: {raw!r}")
    if q is None or k is None:
        raise ValueError("missing field/layers header")
    for a, vec in assignment.items():
        if len(vec) != k:
            raise ValueError(f"arc {a} vector has wrong length")
    return NetworkCode(Field(q), k, assignment)
