"""Constructing explicit codes from fan certificates.

The realization follows a Jaggi-style sweep.  Free arcs (first arcs of the
trimmed witness fans) are assigned first in increasing level order so every
fan's first arcs stay independent; the remaining arcs follow in topological
order of their tails, combining the fan frontiers through control vectors
so each frontier keeps spanning its full layer prefix, with one extra pair
pinning the arc's height to exactly its prescribed level.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Optional

from . import gf
from .dag import Dag, lambda_value
from .errors import ConditionsViolated, FieldTooSmall, ImproperDemand, InvalidFanExtension
from .fans import FanExtension, HeightFn, trim_fan, validate_fan_extension
from .flow import UnitFlow
from .gf import Field, Vector
from .model import Demand, NetworkCode, height_function_of, is_feasible, is_valid_code, performance


def _annihilator(vectors: list[Vector], width: int, k: int, field: Field) -> Vector:
    """Canonical non-zero y on the first `width` coords with y . v = 0 for
    all the given vectors (which must also live on those coords)."""
    basis = gf.nullspace(vectors, width, field)
    if not basis:
        raise InvalidFanExtension("fan first arcs exceed their layer budget")
    y = basis[0]
    return y + (0,) * (k - width)


def realize_fan_extension(
    dag: Dag, f: HeightFn, fans: FanExtension, field: Field
) -> NetworkCode:
    """Code whose height equals f on every arc and whose performance reaches
    the fan level at every node.

    Requires the field to be larger than the maximum number of fans any one
    arc participates in.
    """
    k = fans.k
    if not validate_fan_extension(dag, f, fans):
        raise InvalidFanExtension("witnesses do not certify the claimed levels")
    trimmed = {
        v: trim_fan(dag, f, fans.g, paths)
        for v, paths in sorted(fans.witness_fans.items())
        if fans.g.get(v, 0) > 0
    }
    cover: dict[int, list[tuple[int, int]]] = defaultdict(list)
    first_of: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for v, paths in trimmed.items():
        for j, p in enumerate(paths):
            first_of[p[0]].append((v, j))
            for a in p:
                cover[a].append((v, j))
    load = max((len(lst) for lst in cover.values()), default=0)
    if field.q <= load:
        raise FieldTooSmall(
            f"field size {field.q} not above max fan load {load}"
        )

    assigned: dict[int, Vector] = {}
    first_vectors: dict[int, list[Vector]] = defaultdict(list)

    for a in sorted(first_of, key=lambda a: (f[a], a)):
        phi = f[a]
        pairs: list[tuple[Vector, Vector]] = []
        for v, _j in first_of[a]:
            y = _annihilator(first_vectors[v], phi, k, field)
            lead = next(i for i, x in enumerate(y) if x)
            pairs.append((gf.unit_vector(lead + 1, k), y))
        e_phi = gf.unit_vector(phi, k)
        pairs.append((e_phi, e_phi))
        b = gf.coding_lemma_combine(pairs, field)
        assigned[a] = b
        for v, _j in first_of[a]:
            first_vectors[v].append(b)

    frontier = {v: [assigned[p[0]] for p in paths] for v, paths in trimmed.items()}

    rest = [a for a in dag.arc_ids if a not in assigned]
    rest.sort(key=lambda a: (dag.topo_position(dag.tail(a)), a))
    for a in rest:
        u = dag.tail(a)
        if a in cover:
            pairs = []
            for v, j in cover[a]:
                basis = frontier[v]
                controls = gf.control_vectors(basis, field)
                pairs.append((basis[j], controls[j]))
            forcing = min(b for b in dag.in_arcs[u] if f[b] == f[a])
            pairs.append((assigned[forcing], gf.unit_vector(f[a], k)))
            b = gf.coding_lemma_combine(pairs, field)
            assigned[a] = b
            for v, j in cover[a]:
                frontier[v][j] = b
        else:
            fa = f[a]
            if fa == 0:
                assigned[a] = gf.vec_zero(k)
                continue
            same = [b for b in dag.in_arcs[u] if gf.height(assigned[b]) == fa]
            if same:
                assigned[a] = assigned[min(same)]
            elif fa <= fans.g.get(u, 0):
                assigned[a] = gf.unit_vector(fa, k)
            else:
                raise InvalidFanExtension(
                    f"arc {a} has no admissible assignment (echo condition broken)"
                )

    code = NetworkCode(field, k, assigned)
    if height_function_of(code) != {a: f[a] for a in dag.arc_ids}:
        raise InvalidFanExtension("constructed code does not match the height function")
    if not is_valid_code(dag, code):
        raise InvalidFanExtension("constructed code violates the combination property")
    for v, gv in fans.g.items():
        if v != dag.source and performance(dag, code, v) < gv:
            raise InvalidFanExtension(f"node {v} decodes below its fan level")
    return code


def special_nodes(dag: Dag, f: HeightFn, receivers: Iterable[int]) -> set[int]:
    """Non-receivers whose entering arcs are all level 2 but which have a
    level-1 outgoing arc."""
    receivers = set(receivers)
    out = set()
    for u in range(dag.node_count):
        if u == dag.source or u in receivers or not dag.in_arcs[u]:
            continue
        if all(f[a] == 2 for a in dag.in_arcs[u]) and any(
            f[a] == 1 for a in dag.out_arcs[u]
        ):
            out.add(u)
    return out


def build_two_layer_code(
    dag: Dag,
    f: HeightFn,
    t2prime: Iterable[int],
    t1all: Iterable[int],
    field: Field,
) -> NetworkCode:
    """Two-layer code matching a {1,2}-valued height function.

    First realizes a code of height two on every arc that delivers both
    layers to every doubly-connected receiver and every special node, then
    rewrites each 1-valued arc to carry the plain base-layer vector (1, 0).
    """
    from .twolayer import check_two_layer_conditions

    t2prime = set(t2prime)
    t1all = set(t1all)
    demand = Demand([t1all, t2prime])
    violation = check_two_layer_conditions(dag, f, demand)
    if violation is not None:
        raise ConditionsViolated(str(violation))
    receivers = t1all | t2prime
    for t in t2prime:
        if lambda_value(dag, t, 2) < 2:
            raise ImproperDemand(f"tier-2 receiver {t} lacks two disjoint paths")

    specials = special_nodes(dag, f, receivers)
    singly = {t for t in receivers if lambda_value(dag, t, 2) == 1}
    doubly = specials | (receivers - singly)

    f2 = {a: 2 for a in dag.arc_ids}
    g2 = {dag.source: 2}
    witnesses: dict[int, list[list[int]]] = {}
    arcs = [dag.arc_map[a] for a in dag.arc_ids]
    ids = dag.arc_ids
    for x in sorted(doubly):
        uf = UnitFlow(dag.node_count, arcs)
        if uf.max_flow(dag.source, x, 2) < 2:
            raise ConditionsViolated(
                f"node {x} needs two disjoint paths but has fewer"
            )
        paths = uf.decompose_paths(dag.source, x)
        witnesses[x] = sorted([[ids[a] for a in p] for p in paths], key=lambda p: p[0])
        g2[x] = 2
    inner = realize_fan_extension(
        dag, f2, FanExtension(k=2, g=g2, witness_fans=witnesses), field
    )

    assign = dict(inner.assignment)
    base = (1, 0)
    for a in dag.arc_ids:
        if f[a] == 1:
            assign[a] = base
    code = NetworkCode(field, 2, assign)
    if not is_valid_code(dag, code):
        raise ConditionsViolated("rewritten code lost the combination property")
    if not is_feasible(dag, code, demand):
        raise ConditionsViolated("rewritten code does not meet the demand")
    return code
