"""Optimal two-layer planning.

For a proper demand (T_1, T_2) there is a unique maximal T_2' subset of T_2
such that some code delivers both layers to T_2' while every receiver still
decodes the base layer.  The planner finds it by carving out the maximal
unit-cut regions around singly-connected receivers, demoting everything
they cut off, and realizing the induced {1,2} height function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .builder import build_two_layer_code
from .dag import Dag, lambda_value, reachable, unit_cut_regions
from .errors import ImproperDemand, NotTwoLayer
from .fans import HeightFn
from .gf import Field, next_prime
from .model import Demand, NetworkCode, is_proper


@dataclass(frozen=True)
class Violation:
    """First failed local condition, with the arc or node witnessing it."""

    clause: int
    kind: str  # "arc" | "node"
    subject: int

    def __str__(self) -> str:
        return f"clause {self.clause} fails at {self.kind} {self.subject}"


def check_two_layer_conditions(
    dag: Dag, f: HeightFn, demand: Demand
) -> Optional[Violation]:
    """Exact local test for {1,2}-valued height functions.

    A function f is a height function feasible for a proper two-tier demand
    iff: 2-valued arcs (tail != s) have a 2-valued arc entering the tail;
    1-valued arcs (tail != s) have a 1-valued arc entering the tail or a
    doubly-connected tail; singly-connected tier-1 receivers see a 1-valued
    arc; tier-2 receivers see a 2-valued arc.  Returns the first violation,
    or None when all four hold.
    """
    if demand.k != 2:
        raise NotTwoLayer(f"demand has {demand.k} tiers")
    bad = [a for a in dag.arc_ids if f.get(a) not in (1, 2)]
    if bad:
        raise ValueError(f"height function must map into {{1,2}}, arc {bad[0]}")
    for a in dag.arc_ids:
        u = dag.tail(a)
        if u == dag.source:
            continue
        if f[a] == 2:
            if not any(f[b] == 2 for b in dag.in_arcs[u]):
                return Violation(1, "arc", a)
        else:
            if not any(f[b] == 1 for b in dag.in_arcs[u]):
                if lambda_value(dag, u, 2) < 2:
                    return Violation(2, "arc", a)
    for t in sorted(demand.tier(1)):
        if lambda_value(dag, t, 2) == 1:
            if not any(f[b] == 1 for b in dag.in_arcs[t]):
                return Violation(3, "node", t)
    for t in sorted(demand.tier(2)):
        if not any(f[b] == 2 for b in dag.in_arcs[t]):
            return Violation(4, "node", t)
    return None


@dataclass
class TwoLayerPlan:
    """Outcome of the two-layer planner."""

    z_sets: list[frozenset[int]]
    z_closure: frozenset[int]
    t2_kept: frozenset[int]
    f: HeightFn
    code: NetworkCode
    field: Field


def solve_two_layer(dag: Dag, demand: Demand) -> TwoLayerPlan:
    """Plan base-layer delivery to every receiver and both layers to the
    unique maximal upgradable subset of the second tier.

    The field is the smallest prime above the receiver count.
    """
    if demand.k != 2:
        raise NotTwoLayer(f"demand has {demand.k} tiers")
    if not is_proper(dag, demand):
        raise ImproperDemand("every tier-i receiver needs i disjoint paths")
    receivers = demand.receivers
    z_sets = unit_cut_regions(dag, receivers)
    blocked_nodes = set().union(*z_sets) if z_sets else set()
    blocked_arcs = {
        a
        for a in dag.arc_ids
        if dag.tail(a) in blocked_nodes or dag.head(a) in blocked_nodes
    }
    alive = reachable(dag, {dag.source}, lambda a: a not in blocked_arcs)
    z_closure = frozenset(range(dag.node_count)) - alive
    t2_kept = frozenset(demand.tier(2)) - z_closure
    f: HeightFn = {
        a: 1
        if dag.tail(a) in z_closure or dag.head(a) in z_closure
        else 2
        for a in dag.arc_ids
    }
    field = Field(next_prime(max(len(receivers), 1)))
    t1_all = receivers - t2_kept
    code = build_two_layer_code(dag, f, t2_kept, t1_all, field)
    return TwoLayerPlan(
        z_sets=z_sets,
        z_closure=z_closure,
        t2_kept=t2_kept,
        f=f,
        code=code,
        field=field,
    )
