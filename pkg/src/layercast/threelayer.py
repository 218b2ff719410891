"""Three-layer planning heuristic.

Guarantees the base layer to every receiver and, within that constraint,
two layers to the provably maximal receiver set; the third layer is placed
opportunistically.  The plan carves out the unit-cut regions that limit
receivers to one layer, repeats the carving at level two, then lowers a
cheap pair of arc-disjoint paths per remaining receiver (and per pseudo
receiver feeding a cut region) so that a two-path certificate survives,
and finally realizes the resulting height function through the fan
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .builder import realize_fan_extension
from .dag import (
    Dag,
    arborescence,
    lambda_value,
    maximal_iset,
    node_cut_closure,
    reachable,
    topological_order,
    unit_cut_regions,
)
from .errors import NotThreeLayer
from .fans import FanExtension, HeightFn, compute_extension, property_ii_violation
from .flow import MinCostFlow, UnitFlow
from .gf import Field, next_prime
from .model import Demand, NetworkCode, demand_of, performance_map


@dataclass
class ThreeLayerPlan:
    """Outcome of the three-layer planner."""

    w1_closure: frozenset[int]
    pseudo: frozenset[int]
    w2_closure: frozenset[int]
    t1: frozenset[int]
    t2: frozenset[int]
    f: HeightFn
    g: dict[int, int]
    code: NetworkCode
    field: Field


@dataclass
class GuaranteeReport:
    """Per-clause audit of the planner's delivery guarantee."""

    base_ok: bool
    upgrade_ok: bool
    cut_ok: bool
    base_failures: list[int]
    upgrade_failures: list[int]

    @property
    def passed(self) -> bool:
        return self.base_ok and self.upgrade_ok and self.cut_ok


def _three_level_triple(dag: Dag, f: HeightFn, v: int) -> bool:
    """Whether v still has three arc-disjoint all-level-3 paths from s."""
    ids = [a for a in dag.arc_ids if f[a] == 3]
    uf = UnitFlow(dag.node_count, [dag.arc_map[a] for a in ids])
    return uf.max_flow(dag.source, v, 3) == 3


def _protected_tree(dag: Dag, f: HeightFn, receivers: frozenset[int]) -> set[int]:
    """Arcs of a level-3 arborescence pruned to the branches that reach a
    receiver currently served on level-3 arcs."""
    allowed = lambda a: f[a] == 3
    tree = arborescence(dag, allowed)
    reach3 = reachable(dag, {dag.source}, allowed)
    targets = receivers & reach3
    in_tree: dict[int, int] = {dag.head(a): a for a in tree}
    keep: set[int] = set()
    for x in targets:
        node = x
        while node in in_tree:
            a = in_tree[node]
            if a in keep:
                break
            keep.add(a)
            node = dag.tail(a)
    return keep


def _pair_decrease(
    dag: Dag,
    f: HeightFn,
    v: int,
    tstar: frozenset[int],
    t1: frozenset[int],
    receivers: frozenset[int],
) -> bool:
    """Lower a cheapest admissible pair of arc-disjoint paths into v from
    3 to 2, preferring paths that spare arcs still carrying level 3 to
    receivers.  Tries first with no tier-1 start, and falls back to
    allowing one.  Returns False when no pair exists at all."""
    big = dag.arc_count()
    protected = _protected_tree(dag, f, receivers)
    cost = {
        a: (big if a in protected else 1) if f[a] == 3 else 0 for a in dag.arc_ids
    }
    starts_strict = (tstar - t1 - {v}) | {dag.source}
    starts_loose = (tstar - {v}) | {dag.source}
    pair = _monotone_pair(dag, f, cost, starts_strict, tstar, v)
    if pair is None:
        pair = _monotone_pair(dag, f, cost, starts_loose, tstar, v)
    if pair is None:
        return False
    for path in pair:
        for a in path:
            if f[a] == 3:
                f[a] = 2
    return True


def _monotone_pair(
    dag: Dag,
    f: HeightFn,
    cost: dict[int, int],
    starts: set[int],
    tstar: frozenset[int],
    v: int,
) -> Optional[tuple[list[int], list[int]]]:
    """Min-cost pair of arc-disjoint paths ending at v that stay usable as
    a two-path certificate after their level-3 arcs drop to 2.

    Each path may cross level-1 arcs only as a prefix, and at most one of
    the two may start with such a prefix; no path crosses a receiver or
    pseudo receiver other than at its start, and the pair as a whole is
    arc-disjoint.  Modeled as a 2-unit min-cost flow with per-arc gadgets,
    low/high state nodes and a capacity-1 gate on low entries.
    """
    n = dag.node_count
    ids = dag.arc_ids
    idx = {a: i for i, a in enumerate(ids)}
    m = len(ids)
    lo = lambda x: 2 * x
    hi = lambda x: 2 * x + 1
    a_in = lambda i: 2 * n + 2 * i
    a_out = lambda i: 2 * n + 2 * i + 1
    super_s = 2 * n + 2 * m
    low_gate = super_s + 1
    sink = super_s + 2
    mc = MinCostFlow(super_s + 3)
    mc.add_arc(super_s, low_gate, 1, 0)
    passthrough = [
        x not in tstar and x != dag.source and x != v for x in range(n)
    ]
    for i, a in enumerate(ids):
        u, x = dag.arc_map[a]
        mc.add_arc(a_in(i), a_out(i), 1, cost[a], tag=a)
        if x == v:
            mc.add_arc(a_out(i), sink, 1, 0)
        elif passthrough[x]:
            mc.add_arc(a_out(i), lo(x) if f[a] <= 1 else hi(x), 1, 0)
        if passthrough[u]:
            if f[a] <= 1:
                mc.add_arc(lo(u), a_in(i), 1, 0)
            else:
                mc.add_arc(lo(u), a_in(i), 1, 0)
                mc.add_arc(hi(u), a_in(i), 1, 0)
        if u in starts:
            if f[a] <= 1:
                mc.add_arc(low_gate, a_in(i), 1, 0)
            else:
                mc.add_arc(super_s, a_in(i), 1, 0)
    res = mc.solve(super_s, sink, 2)
    if res is None:
        return None
    _, flow = res
    raw = mc.decompose_paths(flow, super_s, sink)
    paths = [[mc.tags[a] for a in p if mc.tags[a] is not None] for p in raw]
    paths = [p for p in paths if p]
    if len(paths) != 2:
        return None
    return paths[0], paths[1]


def plan_three_layers(
    dag: Dag, demand: Demand, field: Optional[Field] = None
) -> ThreeLayerPlan:
    """Run the full three-layer heuristic and realize its code."""
    if demand.k != 3:
        raise NotThreeLayer(f"demand has {demand.k} tiers")
    receivers = demand.receivers

    # level-1 carving: regions that cap their receivers at one layer
    one_regions = unit_cut_regions(dag, receivers)
    w1_union = set().union(*one_regions) if one_regions else set()
    w1_closure = node_cut_closure(dag, w1_union) if w1_union else frozenset()
    t1 = frozenset(receivers & w1_closure)
    pseudo = frozenset(
        u
        for u in range(dag.node_count)
        if u != dag.source
        and u not in w1_closure
        and any(dag.head(a) in w1_closure for a in dag.out_arcs[u])
    )

    # level-2 carving around surviving receivers and pseudo receivers
    two_regions: dict[tuple, frozenset[int]] = {}
    for x in sorted((receivers | pseudo) - w1_closure):
        if lambda_value(dag, x, 3) >= 3:
            continue
        region = frozenset(maximal_iset(dag, x))
        entries = tuple(
            sorted(
                a
                for w in region
                for a in dag.in_arcs[w]
                if dag.tail(a) not in region
            )
        )
        two_regions[entries] = region
    w2_union = set().union(*two_regions.values()) if two_regions else set()
    blocked = set(w1_closure) | w2_union
    w2_closure = (
        frozenset(node_cut_closure(dag, blocked) - w1_closure)
        if blocked
        else frozenset()
    )
    t2 = frozenset((receivers | pseudo) & w2_closure)

    f: HeightFn = {}
    for a in dag.arc_ids:
        u, w = dag.arc_map[a]
        if u in w1_closure or w in w1_closure:
            f[a] = 1
        elif u in w2_closure or w in w2_closure:
            f[a] = 2
        else:
            f[a] = 3

    tstar = frozenset(receivers | pseudo)
    process = [
        v for v in topological_order(dag) if v in tstar and v not in t1
    ]
    served: set[int] = set()
    for v in process:
        if _three_level_triple(dag, f, v):
            continue
        _pair_decrease(dag, f, v, tstar, t1, receivers)
        served.add(v)

    # settle: drop level-3 arcs without a level-3 predecessor, then re-serve
    # any node whose all-level-3 certificate got broken by later lowering
    while True:
        for u in topological_order(dag):
            if u == dag.source:
                continue
            if not any(f[b] == 3 for b in dag.in_arcs[u]):
                for a in dag.out_arcs[u]:
                    if f[a] == 3:
                        f[a] = 2
        changed = False
        for v in process:
            if v in served or _three_level_triple(dag, f, v):
                continue
            _pair_decrease(dag, f, v, tstar, t1, receivers)
            served.add(v)
            changed = True
        if not changed:
            break

    f, g, witnesses = compute_extension(dag, f, 3, repair=True)
    assert property_ii_violation(dag, f, g) is None
    ext = FanExtension(k=3, g=g, witness_fans=witnesses)
    if field is None:
        field = Field(next_prime(dag.node_count))
    code = realize_fan_extension(dag, f, ext, field)

    return ThreeLayerPlan(
        w1_closure=w1_closure,
        pseudo=pseudo,
        w2_closure=w2_closure,
        t1=t1,
        t2=t2,
        f=f,
        g=g,
        code=code,
        field=field,
    )


def guarantee_audit(
    dag: Dag, demand: Demand, plan: ThreeLayerPlan
) -> GuaranteeReport:
    """Check the delivery guarantee on the realized code: every receiver
    decodes the base layer; every receiver not cut off by the level-1
    regions decodes at least two; and the cut-off set matches an
    independent flow-based recomputation."""
    perf = performance_map(dag, plan.code)
    receivers = demand.receivers
    base_failures = sorted(t for t in receivers if perf[t] < 1)
    upgrade_failures = sorted(t for t in receivers - plan.t1 if perf[t] < 2)
    regions = unit_cut_regions(dag, receivers)
    union = set().union(*regions) if regions else set()
    closure = node_cut_closure(dag, union) if union else frozenset()
    cut_ok = plan.t1 == frozenset(receivers & closure)
    return GuaranteeReport(
        base_ok=not base_failures,
        upgrade_ok=not upgrade_failures,
        cut_ok=cut_ok,
        base_failures=base_failures,
        upgrade_failures=upgrade_failures,
    )
