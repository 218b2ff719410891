"""Single-source acyclic multigraph model and connectivity operations.

Node ids are 0..node_count-1.  Arc ids are arbitrary distinct integers and
parallel arcs are allowed.  A ``Dag`` is immutable after construction and
every operation here is a pure function, so values can be shared freely
across threads.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Callable, Iterable, Mapping, Optional

from .errors import CycleDetected, NodeIsSource
from .flow import MinCostFlow, UnitFlow

CostFunction = Mapping[int, int]


class Dag:
    """Directed acyclic multigraph with a single source and unit-capacity arcs."""

    def __init__(
        self,
        node_count: int,
        arcs: Iterable[tuple[int, int, int]],
        source: int = 0,
        require_reachable: bool = True,
    ):
        self.node_count = node_count
        self.source = source
        self.arc_map: dict[int, tuple[int, int]] = {}
        self.out_arcs: list[list[int]] = [[] for _ in range(node_count)]
        self.in_arcs: list[list[int]] = [[] for _ in range(node_count)]
        if not 0 <= source < node_count:
            raise ValueError(f"source {source} out of range")
        for arc_id, tail, head in arcs:
            if arc_id in self.arc_map:
                raise ValueError(f"duplicate arc id {arc_id}")
            if not (0 <= tail < node_count and 0 <= head < node_count):
                raise ValueError(f"arc {arc_id} endpoint out of range")
            self.arc_map[arc_id] = (tail, head)
            self.out_arcs[tail].append(arc_id)
            self.in_arcs[head].append(arc_id)
        for lst in self.out_arcs:
            lst.sort()
        for lst in self.in_arcs:
            lst.sort()
        if self.in_arcs[source]:
            raise ValueError("source has incoming arcs")
        self._topo = self._compute_topo()
        self._topo_pos = {v: i for i, v in enumerate(self._topo)}
        if require_reachable:
            missing = set(range(node_count)) - reachable(self, {source}, lambda a: True)
            if missing:
                raise ValueError(f"nodes not reachable from source: {sorted(missing)}")

    def _compute_topo(self) -> list[int]:
        indeg = [len(self.in_arcs[v]) for v in range(self.node_count)]
        heap = [v for v in range(self.node_count) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for a in self.out_arcs[v]:
                w = self.arc_map[a][1]
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != self.node_count:
            raise CycleDetected("graph contains a cycle")
        return order

    def tail(self, arc_id: int) -> int:
        return self.arc_map[arc_id][0]

    def head(self, arc_id: int) -> int:
        return self.arc_map[arc_id][1]

    @property
    def arc_ids(self) -> list[int]:
        return sorted(self.arc_map)

    def arc_count(self) -> int:
        return len(self.arc_map)

    def topo_position(self, v: int) -> int:
        return self._topo_pos[v]

    def __repr__(self) -> str:
        return (
            f"Dag(nodes={self.node_count}, arcs={len(self.arc_map)}, "
            f"source={self.source})"
        )


def topological_order(dag: Dag) -> list[int]:
    """Topological order with ties broken by ascending node id; source first."""
    return list(dag._topo)


def rho(dag: Dag, members: Iterable[int]) -> int:
    """Number of arcs entering the node set."""
    inside = set(members)
    return sum(
        1
        for v in inside
        for a in dag.in_arcs[v]
        if dag.arc_map[a][0] not in inside
    )


def _unit_flow(dag: Dag, allowed: Optional[Callable[[int], bool]] = None):
    ids = dag.arc_ids if allowed is None else [a for a in dag.arc_ids if allowed(a)]
    arcs = [dag.arc_map[a] for a in ids]
    return UnitFlow(dag.node_count, arcs), ids


def lambda_value(dag: Dag, v: int, cap: int) -> int:
    """min(cap, number of arc-disjoint source-to-v paths)."""
    if v == dag.source:
        raise NodeIsSource("lambda is undefined at the source")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    uf, _ = _unit_flow(dag)
    return uf.max_flow(dag.source, v, cap)


def maximal_iset(dag: Dag, v: int) -> set[int]:
    """Largest node set containing v, avoiding the source, with exactly
    lambda(source, v) entering arcs.

    Computed as the complement of the residual-reachable side of a maximum
    source-to-v flow, which is the sink side of the source-minimal min cut.
    """
    if v == dag.source:
        raise NodeIsSource("no i-set around the source")
    uf, _ = _unit_flow(dag)
    uf.max_flow(dag.source, v)
    reach = uf.residual_reachable(dag.source)
    return set(range(dag.node_count)) - reach


def reachable(
    dag: Dag, roots: Iterable[int], allowed_arcs: Callable[[int], bool]
) -> set[int]:
    """Closure of the roots over arcs accepted by the predicate."""
    seen = set(roots)
    dq = deque(seen)
    while dq:
        u = dq.popleft()
        for a in dag.out_arcs[u]:
            if allowed_arcs(a):
                w = dag.arc_map[a][1]
                if w not in seen:
                    seen.add(w)
                    dq.append(w)
    return seen


def arborescence(dag: Dag, allowed_arcs: Callable[[int], bool]) -> set[int]:
    """Arcs of a source-rooted tree spanning the nodes reachable via
    allowed arcs; every spanned node gets its lowest-id usable in-arc."""
    reach = reachable(dag, {dag.source}, allowed_arcs)
    tree: set[int] = set()
    for v in dag._topo:
        if v == dag.source or v not in reach:
            continue
        pick = None
        for a in dag.in_arcs[v]:
            if allowed_arcs(a) and dag.arc_map[a][0] in reach:
                pick = a
                break
        if pick is not None:
            tree.add(pick)
    return tree


def unit_cut_regions(dag: Dag, nodes: Iterable[int]) -> list[frozenset[int]]:
    """Maximal unit-entry node sets around the singly-connected members of
    ``nodes``, deduplicated by their single entering arc."""
    by_entry: dict[int, frozenset[int]] = {}
    for t in sorted(set(nodes)):
        if t == dag.source or lambda_value(dag, t, 2) != 1:
            continue
        region = frozenset(maximal_iset(dag, t))
        entry = next(
            a
            for v in region
            for a in dag.in_arcs[v]
            if dag.arc_map[a][0] not in region
        )
        by_entry[entry] = region
    return [by_entry[a] for a in sorted(by_entry)]


def node_cut_closure(dag: Dag, removed: Iterable[int]) -> frozenset[int]:
    """Nodes unreachable from the source once ``removed`` nodes are deleted
    (the removed nodes themselves included)."""
    removed = set(removed)
    seen = {dag.source}
    dq = deque([dag.source])
    while dq:
        u = dq.popleft()
        for a in dag.out_arcs[u]:
            w = dag.arc_map[a][1]
            if w not in removed and w not in seen:
                seen.add(w)
                dq.append(w)
    return frozenset(range(dag.node_count)) - frozenset(seen)


def min_cost_disjoint_pair(
    dag: Dag,
    cost: CostFunction,
    sources: Iterable[int],
    target: int,
    forbidden_starts: Iterable[int] = (),
    forbidden_interior: Iterable[int] = (),
) -> Optional[tuple[list[int], list[int]]]:
    """Cheapest pair of arc-disjoint paths from the source set to the target.

    The second returned path never starts in ``forbidden_starts`` (at most
    one path may), and no path crosses a ``forbidden_interior`` node other
    than as its first or last node.  Built as a 2-unit min-cost flow on a
    node-split graph with a super source; returns None when no pair exists.
    """
    sources = set(sources)
    forbidden_starts = set(forbidden_starts) & sources
    forbidden_interior = set(forbidden_interior)
    if target in sources:
        raise ValueError("target cannot be a source")
    n = dag.node_count
    mc = MinCostFlow(2 * n + 2)
    n_in = lambda x: 2 * x
    n_out = lambda x: 2 * x + 1
    super_s = 2 * n
    gate = 2 * n + 1
    for x in range(n):
        if x not in forbidden_interior:
            mc.add_arc(n_in(x), n_out(x), 2, 0)
    for a in dag.arc_ids:
        u, v = dag.arc_map[a]
        mc.add_arc(n_out(u), n_in(v), 1, cost.get(a, 0), tag=a)
    for x in sorted(sources - forbidden_starts):
        mc.add_arc(super_s, n_out(x), 2, 0)
    if forbidden_starts:
        mc.add_arc(super_s, gate, 1, 0)
        for x in sorted(forbidden_starts):
            mc.add_arc(gate, n_out(x), 1, 0)
    res = mc.solve(super_s, n_in(target), 2)
    if res is None:
        return None
    _, flow = res
    raw = mc.decompose_paths(flow, super_s, n_in(target))
    paths = [[mc.tags[a] for a in p if mc.tags[a] is not None] for p in raw]
    paths = [p for p in paths if p]
    if len(paths) != 2:
        return None
    def starts_forbidden(p):
        return dag.arc_map[p[0]][0] in forbidden_starts
    paths.sort(key=lambda p: (not starts_forbidden(p), p[0]))
    return paths[0], paths[1]
