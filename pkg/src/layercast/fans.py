"""Fans, fan-extensions, and the auxiliary-graph feasibility test.

A height function assigns every arc a layer level.  A node decodes up to
level i when it has an i-fan: i arc-disjoint monotone paths P_1..P_i into
it with j <= min(P_j) <= max(P_j) <= i, each starting at a node already
certified for the path's entry value.  A fan-extension couples a height
function f with a node function g such that every g(v) > 0 is certified by
a fan and every arc is either "free" (f(vw) <= g(v)) or echoes the level of
some arc entering its tail.  Fan-extensions are exactly what the code
builder can realize.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .dag import Dag, topological_order
from .errors import NotAPath
from .flow import UnitFlow

HeightFn = dict[int, int]


def is_monotone(dag: Dag, path: list[int], f: HeightFn) -> bool:
    """True when f never decreases along the path; path must be connected."""
    if not path:
        raise NotAPath("empty path")
    for a, b in zip(path, path[1:]):
        if dag.head(a) != dag.tail(b):
            raise NotAPath(f"arcs {a} and {b} do not share head/tail")
    return all(f[a] <= f[b] for a, b in zip(path, path[1:]))


def path_value(f: HeightFn, path: list[int]) -> int:
    return f[path[0]]


@dataclass
class AuxGraph:
    """Layered search graph for monotone paths with one free arc.

    Level nodes t_1..t_i act as entry points for free arcs of each value;
    every retained original arc becomes a two-node chain so that paths in
    here are arc-disjoint exactly when their originals are.
    """

    node_count: int
    arcs: list[tuple[int, int]]
    arc_tags: list[Optional[int]]  # original arc id for chain arcs
    roles: dict[int, tuple]  # aux node -> ("original"|"t"|"zin"|"zout", key)
    source_image: int
    target_image: int

    def to_dag(self) -> Dag:
        return Dag(
            self.node_count,
            [(i, u, v) for i, (u, v) in enumerate(self.arcs)],
            source=self.source_image,
            require_reachable=False,
        )

    def dump_text(self) -> str:
        lines = [f"nodes {self.node_count}", f"source {self.source_image}"]
        for i, (u, v) in enumerate(self.arcs):
            lines.append(f"arc {i} {u} {v}")
        return "\n".join(lines) + "\n"


def build_aux_graph(
    dag: Dag,
    f: HeightFn,
    g_prefix: dict[int, int],
    v: int,
    i: int,
) -> AuxGraph:
    """Search graph for value-sorted monotone paths ending at v.

    Arcs above level i are dropped.  An arc uw whose tail u precedes v in
    the fixed topological order and satisfies g(u) >= f(uw) >= 1 is a
    possible free (first) arc: its tail is rerouted to the level node
    t_{f(uw)}.  All other arcs chain onto arcs entering their tail with a
    level no higher than their own.  Extra arcs s->t_j and i-1 parallel
    copies of each t_j -> t_{j+1} meter how many paths may enter per level.
    """
    n = dag.node_count
    pos_v = dag.topo_position(v)
    kept = [a for a in dag.arc_ids if f[a] <= i]
    t_node = {j: n + j - 1 for j in range(1, i + 1)}
    base = n + i
    zin: dict[int, int] = {}
    zout: dict[int, int] = {}
    for idx, a in enumerate(kept):
        zin[a] = base + 2 * idx
        zout[a] = base + 2 * idx + 1
    roles: dict[int, tuple] = {x: ("original", x) for x in range(n)}
    for j, t in t_node.items():
        roles[t] = ("t", j)
    for a in kept:
        roles[zin[a]] = ("zin", a)
        roles[zout[a]] = ("zout", a)

    arcs: list[tuple[int, int]] = []
    tags: list[Optional[int]] = []

    def add(u: int, w: int, tag: Optional[int] = None) -> None:
        arcs.append((u, w))
        tags.append(tag)

    s = dag.source
    for j in range(1, i + 1):
        add(s, t_node[j])
    for j in range(1, i):
        for _ in range(i - 1):
            add(t_node[j], t_node[j + 1])

    in_kept: list[list[int]] = [[] for _ in range(n)]
    for a in kept:
        in_kept[dag.head(a)].append(a)

    for a in kept:
        u, x = dag.arc_map[a]
        add(zin[a], zout[a], tag=a)
        add(zout[a], x)
        redirect = (
            f[a] >= 1
            and dag.topo_position(u) < pos_v
            and g_prefix.get(u, 0) >= f[a]
        )
        if redirect:
            add(t_node[f[a]], zin[a])
        else:
            for b in in_kept[u]:
                if f[b] <= f[a]:
                    add(zout[b], zin[a])

    return AuxGraph(
        node_count=base + 2 * len(kept),
        arcs=arcs,
        arc_tags=tags,
        roles=roles,
        source_image=s,
        target_image=v,
    )


def _fan_via_aux(
    dag: Dag, f: HeightFn, g_prefix: dict[int, int], v: int, i: int
) -> Optional[list[list[int]]]:
    aux = build_aux_graph(dag, f, g_prefix, v, i)
    uf = UnitFlow(aux.node_count, aux.arcs)
    if uf.max_flow(aux.source_image, aux.target_image, i) < i:
        return None
    raw = uf.decompose_paths(aux.source_image, aux.target_image)
    paths = []
    for p in raw:
        orig = [aux.arc_tags[a] for a in p if aux.arc_tags[a] is not None]
        if orig:
            paths.append(orig)
    if len(paths) != i:
        return None
    return sort_fan(f, paths)


def _fan_via_in_arcs(
    dag: Dag, f: HeightFn, g_prefix: dict[int, int], v: int, i: int
) -> Optional[list[list[int]]]:
    """Cheap sufficient test: a fan of i single-arc paths into v."""
    usable = [
        a
        for a in dag.in_arcs[v]
        if 1 <= f[a] <= i and f[a] <= g_prefix.get(dag.tail(a), 0)
    ]
    if len(usable) < i:
        return None
    usable.sort(key=lambda a: (-f[a], a))
    chosen = sorted(usable[:i], key=lambda a: (f[a], a))
    if all(f[a] >= j + 1 for j, a in enumerate(chosen)):
        return [[a] for a in chosen]
    return None


def find_i_fan(
    dag: Dag, f: HeightFn, g_prefix: dict[int, int], v: int, i: int
) -> Optional[list[list[int]]]:
    """An i-fan of v as value-sorted monotone paths, or None.

    Exactness comes from the auxiliary graph: an i-fan exists iff it admits
    i arc-disjoint source-to-v paths.
    """
    if i < 1:
        raise ValueError("fan level must be >= 1")
    quick = _fan_via_in_arcs(dag, f, g_prefix, v, i)
    if quick is not None:
        return quick
    return _fan_via_aux(dag, f, g_prefix, v, i)


def has_i_fan(
    dag: Dag, f: HeightFn, g_prefix: dict[int, int], v: int, i: int
) -> bool:
    return find_i_fan(dag, f, g_prefix, v, i) is not None


def sort_fan(f: HeightFn, paths: list[list[int]]) -> list[list[int]]:
    return sorted(paths, key=lambda p: (f[p[0]], p[0]))


def trim_fan(
    dag: Dag, f: HeightFn, g: dict[int, int], paths: list[list[int]]
) -> list[list[int]]:
    """Shorten each path to start at its last free arc (one free arc each)."""
    trimmed = []
    for p in paths:
        cut = 0
        for idx, a in enumerate(p):
            if f[a] <= g.get(dag.tail(a), 0):
                cut = idx
        trimmed.append(p[cut:])
    return sort_fan(f, trimmed)


def validate_fan(
    dag: Dag,
    f: HeightFn,
    g: dict[int, int],
    v: int,
    paths: list[list[int]],
    i: int,
) -> bool:
    """Check the fan definition exactly: i pairwise arc-disjoint non-trivial
    monotone paths into v, value-sorted with j <= min(P_j) <= max(P_j) <= i,
    each starting at a node with g at least the path value."""
    if len(paths) != i:
        return False
    seen: set[int] = set()
    for p in paths:
        if not p or dag.head(p[-1]) != v:
            return False
        if not is_monotone(dag, p, f):
            return False
        if seen & set(p):
            return False
        seen |= set(p)
        if g.get(dag.tail(p[0]), 0) < f[p[0]]:
            return False
    ordered = sort_fan(f, paths)
    for j, p in enumerate(ordered, start=1):
        if not (j <= f[p[0]] <= f[p[-1]] <= i):
            return False
    return True


@dataclass
class FanExtension:
    """A certified node function g over a height function, with one witness
    fan per positive node."""

    k: int
    g: dict[int, int]
    witness_fans: dict[int, list[list[int]]]


def property_ii_violation(
    dag: Dag, f: HeightFn, g: dict[int, int]
) -> Optional[int]:
    """First arc (by id) that is neither free nor echoed by an equal-level
    arc entering its tail; None when the pairing is a fan-extension."""
    for e in dag.arc_ids:
        x = dag.tail(e)
        if f[e] <= g.get(x, 0):
            continue
        if any(f[b] == f[e] for b in dag.in_arcs[x]):
            continue
        return e
    return None


def compute_extension(
    dag: Dag, f: HeightFn, k: int, repair: bool = False
) -> tuple[HeightFn, dict[int, int], dict[int, list[list[int]]]]:
    """Maximal per-node fan levels in one topological sweep.

    With ``repair`` the height function is lowered in place wherever an arc
    would violate the local echo condition: the arc drops to the largest
    level that is free at its tail or echoed by an entering arc (0 as a
    last resort).  Without repair the inputs are left untouched and the
    caller checks the echo condition afterwards.
    """
    f_work = dict(f)
    g: dict[int, int] = {dag.source: k}
    fans: dict[int, list[list[int]]] = {}
    for v in topological_order(dag):
        if v != dag.source:
            level = 0
            witness: Optional[list[list[int]]] = None
            for i in range(k, 0, -1):
                witness = find_i_fan(dag, f_work, g, v, i)
                if witness is not None:
                    level = i
                    break
            g[v] = level
            if witness:
                fans[v] = witness
        if repair:
            gv = g[v]
            in_levels = {f_work[b] for b in dag.in_arcs[v]}
            for e in dag.out_arcs[v]:
                fe = f_work[e]
                if fe <= gv or fe in in_levels:
                    continue
                lowered = max(
                    [lvl for lvl in in_levels if lvl < fe] + [min(gv, fe)]
                )
                f_work[e] = max(lowered, 0)
    return f_work, g, fans


def maximal_fan_extension(
    dag: Dag, f: HeightFn, k: Optional[int] = None
) -> Optional[FanExtension]:
    """The unique maximal fan-extension of f, or None if f has none.

    Nodes are processed in the fixed topological order, each receiving the
    largest level certified by a fan; afterwards the echo condition is
    checked arc by arc.
    """
    if k is None:
        k = max(f.values(), default=0)
    _, g, fans = compute_extension(dag, f, k, repair=False)
    if property_ii_violation(dag, f, g) is not None:
        return None
    return FanExtension(k=k, g=g, witness_fans=fans)


def validate_fan_extension(dag: Dag, f: HeightFn, ext: FanExtension) -> bool:
    for v, gv in ext.g.items():
        if v == dag.source or gv <= 0:
            continue
        paths = ext.witness_fans.get(v)
        if paths is None or not validate_fan(dag, f, ext.g, v, paths, gv):
            return False
    return property_ii_violation(dag, f, ext.g) is None


def is_feasible_height_function(dag: Dag, f: HeightFn, demand) -> bool:
    """Whether f admits a fan-extension dominating the demand levels."""
    from .model import demand_of

    ext = maximal_fan_extension(dag, f, k=demand.k)
    if ext is None:
        return False
    return all(ext.g.get(t, 0) >= demand_of(demand, t) for t in demand.receivers)
