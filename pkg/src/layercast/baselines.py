"""Baseline coder and structured hard-instance generators.

The randomized baseline caps every arc's height at min(k, lambda(s, head))
and draws random in-span combinations under that cap, keeping the best of
a few seeded attempts.  The generators build the satisfiability and
vertex-cover families together with their known-good explicit codes, which
make handy fixtures: the codes certify feasibility constructively.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import gf
from .dag import Dag, lambda_value, topological_order
from .errors import AssignmentNotSatisfying, FieldTooSmall, NotACover
from .gf import Field, Vector
from .model import Demand, NetworkCode, demand_of, performance_map


def _height_capped_members(
    vectors: list[Vector], cap: int, k: int, field: Field
) -> list[Vector]:
    """Basis of the span's subspace whose entries above `cap` vanish."""
    basis = list(gf.rref(vectors, field))
    if not basis or cap >= k:
        return basis
    # combination coefficients x with sum x_i * basis_i zero above cap
    coords = [[b[j] for b in basis] for j in range(cap, k)]
    combos = gf.nullspace(coords, len(basis), field)
    out = []
    for combo in combos:
        acc = gf.vec_zero(k)
        for c, b in zip(combo, basis):
            acc = gf.vec_addmul(acc, c, b, field)
        if any(acc):
            out.append(acc)
    return list(gf.rref(out, field))


def _draw_key(demand: Demand, perf: dict[int, int]) -> tuple[float, int]:
    """Retry objective: the experiment score for three-tier demands, a
    plain satisfied-upgrade count otherwise; base delivery breaks ties."""
    base = sum(1 for t in demand.receivers if perf[t] >= 1)
    if demand.k >= 3:
        from .bench import score as score_report

        upgrade = score_report(demand, perf).score
    else:
        upgrade = float(
            sum(
                min(perf[t], demand_of(demand, t)) - 1
                for t in demand.receivers
                if perf[t] >= 1
            )
        )
    return (upgrade, base)


def min_cut_baseline_code(
    dag: Dag,
    demand: Demand,
    field: Field,
    seed: int,
    retries: int = 5,
) -> NetworkCode:
    """Randomized code with per-node height caps min(k, lambda(s, v)).

    Each retry redraws every coefficient; the attempt with the best score
    (ties broken by how many receivers decode the base layer) wins.  Every
    draw satisfies the combination property by construction.
    """
    if retries < 1:
        raise ValueError("retries must be >= 1")
    k = demand.k
    q = field.q
    caps = {
        v: min(k, lambda_value(dag, v, k))
        for v in range(dag.node_count)
        if v != dag.source
    }
    order = sorted(
        dag.arc_ids, key=lambda a: (dag.topo_position(dag.tail(a)), a)
    )
    best: Optional[NetworkCode] = None
    best_key: Optional[tuple[float, int]] = None
    for attempt in range(retries):
        rng = random.Random(seed * 1_000_003 + attempt)
        assign: dict[int, Vector] = {}
        for a in order:
            u, v = dag.arc_map[a]
            cap = caps[v]
            if u == dag.source:
                vec = gf.vec_zero(k)
                while cap and not any(vec):
                    vec = tuple(
                        rng.randrange(q) if i < cap else 0 for i in range(k)
                    )
                assign[a] = vec
            else:
                basis = _height_capped_members(
                    [assign[b] for b in dag.in_arcs[u]], cap, k, field
                )
                if not basis:
                    assign[a] = gf.vec_zero(k)
                    continue
                vec = gf.vec_zero(k)
                while not any(vec):
                    vec = gf.vec_zero(k)
                    for b in basis:
                        vec = gf.vec_addmul(vec, rng.randrange(q), b, field)
                assign[a] = vec
        code = NetworkCode(field, k, assign)
        perf = performance_map(dag, code)
        report = score_report(demand, perf)
        base = sum(1 for t in demand.receivers if perf[t] >= 1)
        key = (report.score, base)
        if best_key is None or key > best_key:
            best, best_key = code, key
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# satisfiability reduction instances


@dataclass(frozen=True)
class SatFormula:
    """3-CNF with 1-based variable indices; negative literal = negated."""

    variable_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 3:
                raise ValueError("every clause needs exactly 3 literals")
            for lit in cl:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} out of range")

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(
            any(
                assignment[abs(lit) - 1] == (lit > 0)
                for lit in cl
            )
            for cl in self.clauses
        )


def parse_dimacs(text: str) -> SatFormula:
    nvars = None
    clauses = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {raw!r}")
            nvars = int(parts[2])
            continue
        lits = [int(x) for x in line.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if lits:
            if len(lits) != 3:
                raise ValueError("only 3-literal clauses are supported")
            clauses.append(tuple(lits))
    if nvars is None:
        raise ValueError("missing 'p cnf' line")
    return SatFormula(nvars, tuple(clauses))


class _SatLayout:
    """Node/arc numbering of the satisfiability instance graph."""

    def __init__(self, formula: SatFormula):
        self.formula = formula
        n = formula.variable_count
        self.s = 0
        self.t = 1
        self.a = [2 + 6 * i for i in range(n)]
        self.b = [3 + 6 * i for i in range(n)]
        self.c = [4 + 6 * i for i in range(n)]
        self.d = [5 + 6 * i for i in range(n)]
        self.pos = [6 + 6 * i for i in range(n)]
        self.neg = [7 + 6 * i for i in range(n)]
        self.clause = [2 + 6 * n + j for j in range(len(formula.clauses))]
        self.node_count = 2 + 6 * n + len(formula.clauses)

    def literal_node(self, lit: int) -> int:
        return self.pos[abs(lit) - 1] if lit > 0 else self.neg[abs(lit) - 1]

    def arcs(self) -> list[tuple[int, int, int]]:
        out = [(0, self.s, self.t)]
        nxt = 1
        def add(u, v):
            nonlocal nxt
            out.append((nxt, u, v))
            nxt += 1
        for i in range(self.formula.variable_count):
            add(self.s, self.a[i])
            add(self.s, self.pos[i])
            add(self.s, self.neg[i])
            add(self.s, self.c[i])
            add(self.pos[i], self.a[i])
            add(self.pos[i], self.b[i])
            add(self.neg[i], self.b[i])
            add(self.neg[i], self.c[i])
            add(self.a[i], self.d[i])
            add(self.b[i], self.d[i])
            add(self.c[i], self.d[i])
        for j, cl in enumerate(self.formula.clauses):
            add(self.s, self.clause[j])
            add(self.t, self.clause[j])
            for lit in cl:
                add(self.literal_node(lit), self.clause[j])
        return out


def gen_3sat_instance(formula: SatFormula) -> tuple[Dag, Demand]:
    """Graph whose three-tier demand is satisfiable iff the formula is.

    Per variable: six nodes and eleven arcs wiring both literals to helper
    receivers and a three-layer receiver; per clause: a three-layer
    receiver fed by the source, the base relay and its literal nodes.
    """
    layout = _SatLayout(formula)
    dag = Dag(layout.node_count, layout.arcs(), source=layout.s)
    t1 = {layout.t}
    t3 = set()
    for i in range(formula.variable_count):
        t1 |= {layout.a[i], layout.b[i], layout.c[i]}
        t3.add(layout.d[i])
    t3 |= set(layout.clause)
    return dag, Demand([t1, set(), t3])


def assignment_to_code(
    formula: SatFormula,
    assignment: Sequence[bool],
    field: Optional[Field] = None,
) -> NetworkCode:
    """Explicit feasible code read off a satisfying assignment.

    Works over any field since all coefficients are 0/1.
    """
    if not formula.satisfied_by(assignment):
        raise AssignmentNotSatisfying("assignment leaves a clause unsatisfied")
    if field is None:
        field = Field(2)
    layout = _SatLayout(formula)
    dag, _ = gen_3sat_instance(formula)
    vec: dict[int, Vector] = {}
    arcs_by_pair: dict[tuple[int, int], list[int]] = {}
    for a, (u, v) in dag.arc_map.items():
        arcs_by_pair.setdefault((u, v), []).append(a)

    def put(u, v, value):
        for a in arcs_by_pair[(u, v)]:
            vec[a] = value

    put(layout.s, layout.t, (1, 0, 0))
    for i, true in enumerate(assignment[: formula.variable_count]):
        pos, neg = layout.pos[i], layout.neg[i]
        a_i, b_i, c_i, d_i = layout.a[i], layout.b[i], layout.c[i], layout.d[i]
        if true:
            put(layout.s, a_i, (0, 1, 0))
            put(layout.s, pos, (1, 1, 0))
            put(layout.s, neg, (1, 0, 0))
            put(layout.s, c_i, (1, 1, 1))
            put(a_i, d_i, (0, 1, 0))
            put(b_i, d_i, (1, 0, 0))
            put(c_i, d_i, (1, 1, 1))
        else:
            put(layout.s, c_i, (0, 1, 0))
            put(layout.s, neg, (1, 1, 0))
            put(layout.s, pos, (1, 0, 0))
            put(layout.s, a_i, (1, 1, 1))
            put(c_i, d_i, (0, 1, 0))
            put(b_i, d_i, (1, 0, 0))
            put(a_i, d_i, (1, 1, 1))
        # literal nodes have a single entering arc and forward it
        put(pos, a_i, vec[arcs_by_pair[(layout.s, pos)][0]])
        put(pos, b_i, vec[arcs_by_pair[(layout.s, pos)][0]])
        put(neg, b_i, vec[arcs_by_pair[(layout.s, neg)][0]])
        put(neg, c_i, vec[arcs_by_pair[(layout.s, neg)][0]])
    for j, cl in enumerate(formula.clauses):
        cj = layout.clause[j]
        put(layout.s, cj, (1, 1, 1))
        put(layout.t, cj, (1, 0, 0))
        for lit in cl:
            node = layout.literal_node(lit)
            source_arc = arcs_by_pair[(layout.s, node)][0]
            for a in arcs_by_pair[(node, cj)]:
                vec[a] = vec[source_arc]
    return NetworkCode(field, 3, vec)


# ---------------------------------------------------------------------------
# vertex-cover reduction instances


@dataclass(frozen=True)
class CoverGraph:
    """Simple undirected graph."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        for u, v in self.edges:
            if u == v or u not in vs or v not in vs:
                raise ValueError(f"bad edge ({u}, {v})")

    def is_cover(self, subset: Iterable[int]) -> bool:
        chosen = set(subset)
        return all(u in chosen or v in chosen for u, v in self.edges)


class _CoverLayout:
    def __init__(self, graph: CoverGraph):
        self.graph = graph
        self.s = 0
        verts = sorted(graph.vertices)
        self.vertex_node = {w: 1 + i for i, w in enumerate(verts)}
        edges = sorted(tuple(sorted(e)) for e in graph.edges)
        self.edge_node = {e: 1 + len(verts) + j for j, e in enumerate(edges)}
        self.node_count = 1 + len(verts) + len(edges)
        self.edges = edges
        self.verts = verts


def gen_vertex_cover_instance(graph: CoverGraph) -> tuple[Dag, Demand]:
    """One tier-1 receiver per vertex fed by the source, one tier-2
    receiver per edge fed by its two endpoint receivers."""
    layout = _CoverLayout(graph)
    arcs = []
    nxt = 0
    for w in layout.verts:
        arcs.append((nxt, layout.s, layout.vertex_node[w]))
        nxt += 1
    for e in layout.edges:
        u, v = e
        arcs.append((nxt, layout.vertex_node[u], layout.edge_node[e]))
        nxt += 1
        arcs.append((nxt, layout.vertex_node[v], layout.edge_node[e]))
        nxt += 1
    dag = Dag(layout.node_count, arcs, source=layout.s)
    t1 = set(layout.vertex_node.values())
    t2 = set(layout.edge_node.values())
    return dag, Demand([t1, t2])


def cover_to_code(
    graph: CoverGraph, cover: Iterable[int], field: Field
) -> NetworkCode:
    """Height-two vectors, pairwise independent, on the cover's source
    arcs; plain base vectors elsewhere; all relays forward their input.

    Feasible for the demand with the cover's own receivers dropped from
    tier 1.  Needs q >= |vertices| to keep the cover vectors independent.
    """
    cover = set(cover)
    if not graph.is_cover(cover):
        raise NotACover(f"{sorted(cover)} leaves an edge uncovered")
    if field.q < len(graph.vertices):
        raise FieldTooSmall(
            f"need q >= {len(graph.vertices)} for pairwise independent vectors"
        )
    layout = _CoverLayout(graph)
    dag, _ = gen_vertex_cover_instance(graph)
    vec: dict[int, Vector] = {}
    slot = {w: i for i, w in enumerate(sorted(cover))}
    by_pair = {(dag.tail(a), dag.head(a)): a for a in dag.arc_ids}
    for w in layout.verts:
        node = layout.vertex_node[w]
        vec[by_pair[(layout.s, node)]] = (
            (slot[w] % field.q, 1) if w in cover else (1, 0)
        )
    for e in layout.edges:
        for w in e:
            arc = by_pair[(layout.vertex_node[w], layout.edge_node[e])]
            vec[arc] = vec[by_pair[(layout.s, layout.vertex_node[w])]]
    return NetworkCode(field, 2, vec)
