import itertools
import random

import pytest

from layercast import (
    Dag,
    arborescence,
    lambda_value,
    maximal_iset,
    min_cost_disjoint_pair,
    reachable,
    rho,
    topological_order,
)
from layercast.errors import CycleDetected, NodeIsSource


def path_dag():
    # s -> a -> b
    return Dag(3, [(0, 0, 1), (1, 1, 2)])


def diamond():
    # s -> a -> c, s -> b -> c
    return Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3)])


def fig_graph():
    # s=0, u=1, v=2, x=3, z=4, w=5
    return Dag(6, [(0, 0, 3), (1, 0, 1), (2, 0, 2), (3, 1, 2), (4, 3, 1), (5, 2, 4), (6, 2, 5)])


def random_dag(seed, max_nodes=8, max_arcs=12):
    rng = random.Random(seed)
    n = rng.randint(2, max_nodes)
    m = rng.randint(n - 1, max_arcs)
    arcs = []
    for p in range(1, n):
        arcs.append((len(arcs), rng.randrange(p), p))
    while len(arcs) < m:
        h = rng.randrange(1, n)
        arcs.append((len(arcs), rng.randrange(h), h))
    return Dag(n, arcs)


class TestConstruction:
    def test_duplicate_arc_id_rejected(self):
        with pytest.raises(ValueError):
            Dag(3, [(0, 0, 1), (0, 1, 2)])

    def test_source_with_in_arc_rejected(self):
        with pytest.raises(ValueError):
            Dag(2, [(0, 1, 0)], source=0, require_reachable=False)

    def test_cycle_rejected(self):
        with pytest.raises(CycleDetected):
            Dag(3, [(0, 0, 1), (1, 1, 2), (2, 2, 1)])

    def test_unreachable_rejected(self):
        with pytest.raises(ValueError):
            Dag(3, [(0, 0, 1)])

    def test_parallel_arcs_ok(self):
        d = Dag(2, [(0, 0, 1), (1, 0, 1)])
        assert d.arc_count() == 2


class TestTopologicalOrder:
    def test_single_node(self):
        assert topological_order(Dag(1, [])) == [0]

    def test_path(self):
        assert topological_order(path_dag()) == [0, 1, 2]

    def test_example_graph_order(self):
        order = topological_order(fig_graph())
        pos = {v: i for i, v in enumerate(order)}
        assert order[0] == 0
        assert pos[3] < pos[2] and pos[1] < pos[2]  # x, u before v
        assert pos[2] < pos[4] and pos[2] < pos[5]  # v before z, w

    def test_deterministic(self):
        for seed in range(10):
            d = random_dag(seed)
            assert topological_order(d) == topological_order(d)

    def test_arcs_go_forward(self):
        for seed in range(20):
            d = random_dag(seed)
            pos = {v: i for i, v in enumerate(topological_order(d))}
            for a in d.arc_ids:
                u, w = d.arc_map[a]
                assert pos[u] < pos[w]


class TestRho:
    def test_empty(self):
        assert rho(path_dag(), set()) == 0

    def test_path_singleton(self):
        assert rho(path_dag(), {2}) == 1

    def test_sat_gadget_receiver(self):
        from layercast import gen_3sat_instance, SatFormula

        d, _ = gen_3sat_instance(SatFormula(1, ()))
        d_node = 5  # the three-layer receiver of variable 0
        assert rho(d, {d_node}) == 3


class TestLambda:
    def test_path(self):
        assert lambda_value(path_dag(), 2, 3) == 1

    def test_parallel(self):
        d = Dag(2, [(0, 0, 1), (1, 0, 1)])
        assert lambda_value(d, 1, 3) == 2

    def test_sat_gadget(self):
        from layercast import gen_3sat_instance, SatFormula

        d, _ = gen_3sat_instance(SatFormula(1, ()))
        assert lambda_value(d, 5, 3) == 3

    def test_source_rejected(self):
        with pytest.raises(NodeIsSource):
            lambda_value(path_dag(), 0, 1)

    def test_cap(self):
        d = Dag(2, [(0, 0, 1), (1, 0, 1), (2, 0, 1)])
        assert lambda_value(d, 1, 2) == 2


def iset_oracle(d, v):
    """All subsets X with v in X, s not in X, rho(X) == lambda(s, v)."""
    lam = lambda_value(d, v, d.arc_count() + 1)
    others = [w for w in range(d.node_count) if w not in (d.source, v)]
    best = []
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            x = set(extra) | {v}
            if rho(d, x) == lam:
                best.append(x)
    return best


class TestMaximalIset:
    def test_path_tail_set(self):
        assert maximal_iset(path_dag(), 2) == {1, 2}

    def test_parallel_then_single(self):
        d = Dag(3, [(0, 0, 1), (1, 0, 1), (2, 1, 2)])
        assert maximal_iset(d, 2) == {2}

    def test_diamond(self):
        assert maximal_iset(diamond(), 3) == {1, 2, 3}

    def test_contains_every_iset(self):
        for seed in range(25):
            d = random_dag(seed, max_nodes=7, max_arcs=10)
            for v in range(1, d.node_count):
                big = maximal_iset(d, v)
                for x in iset_oracle(d, v):
                    assert x <= big, (seed, v, x, big)

    def test_menger_weak_direction(self):
        for seed in range(15):
            d = random_dag(seed, max_nodes=6, max_arcs=9)
            for v in range(1, d.node_count):
                lam = lambda_value(d, v, d.arc_count() + 1)
                others = [w for w in range(d.node_count) if w not in (d.source, v)]
                for r in range(len(others) + 1):
                    for extra in itertools.combinations(others, r):
                        assert lam <= rho(d, set(extra) | {v})
                assert rho(d, maximal_iset(d, v)) == lam


class TestReachable:
    def test_all_arcs(self):
        d = fig_graph()
        assert reachable(d, {0}, lambda a: True) == set(range(6))

    def test_no_arcs(self):
        d = fig_graph()
        assert reachable(d, {0}, lambda a: False) == {0}

    def test_blocked_region(self):
        # removing everything incident to {1, 2} strands b
        d = Dag(6, [(0, 0, 1), (1, 1, 2), (2, 0, 3), (3, 3, 5), (4, 0, 4), (5, 4, 5)])
        blocked = {0, 1}
        alive = reachable(
            d, {0}, lambda a: d.tail(a) not in {1, 2} and d.head(a) not in {1, 2}
        )
        assert alive == {0, 3, 4, 5}


class TestArborescence:
    def test_path(self):
        assert arborescence(path_dag(), lambda a: True) == {0, 1}

    def test_diamond_single_in_arc(self):
        tree = arborescence(diamond(), lambda a: True)
        into_c = [a for a in tree if diamond().head(a) == 3]
        assert len(into_c) == 1

    def test_nothing_allowed(self):
        assert arborescence(fig_graph(), lambda a: False) == set()

    def test_in_degree_one_everywhere(self):
        for seed in range(15):
            d = random_dag(seed)
            tree = arborescence(d, lambda a: True)
            heads = [d.head(a) for a in tree]
            assert len(heads) == len(set(heads)) == d.node_count - 1

    def test_deterministic(self):
        for seed in range(10):
            d = random_dag(seed)
            assert arborescence(d, lambda a: True) == arborescence(d, lambda a: True)


def all_paths(d, starts, target, forbidden_interior):
    """Every simple path (arc list) from a start to the target."""
    out = []

    def rec(v, acc):
        if v == target:
            if acc:
                out.append(list(acc))
            return
        if acc and v in forbidden_interior:
            return
        for a in d.out_arcs[v]:
            acc.append(a)
            rec(d.head(a), acc)
            acc.pop()

    for s in starts:
        rec(s, [])
    return out


def pair_oracle(d, cost, sources, target, forbidden_starts=(), forbidden_interior=()):
    paths = all_paths(d, sorted(sources), target, set(forbidden_interior))
    best = None
    for p1 in paths:
        for p2 in paths:
            if set(p1) & set(p2):
                continue
            if d.tail(p2[0]) in forbidden_starts and d.tail(p1[0]) in forbidden_starts:
                continue
            c = sum(cost.get(a, 0) for a in p1 + p2)
            if best is None or c < best:
                best = c
    return best


class TestMinCostDisjointPair:
    def test_diamond_only_pair(self):
        d = diamond()
        res = min_cost_disjoint_pair(d, {}, {0}, 3)
        assert res is not None
        p1, p2 = res
        assert {tuple(p1), tuple(p2)} == {(0, 2), (1, 3)}

    def test_path_has_no_pair(self):
        assert min_cost_disjoint_pair(path_dag(), {}, {0}, 2) is None

    def test_costs_steer_choice(self):
        # diamond plus a direct arc; cost 1 on a->c forces the pair around it
        d = Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3), (4, 0, 3)])
        res = min_cost_disjoint_pair(d, {2: 1}, {0}, 3)
        assert res is not None
        used = set(res[0]) | set(res[1])
        assert 2 not in used
        assert used == {1, 3, 4}

    def test_matches_bruteforce(self):
        for seed in range(30):
            d = random_dag(seed, max_nodes=6, max_arcs=10)
            rng = random.Random(seed + 999)
            cost = {a: rng.randint(0, 3) for a in d.arc_ids}
            target = d.node_count - 1
            if target == d.source:
                continue
            res = min_cost_disjoint_pair(d, cost, {d.source}, target)
            want = pair_oracle(d, cost, {d.source}, target)
            if want is None:
                assert res is None
            else:
                assert res is not None
                got = sum(cost.get(a, 0) for a in res[0] + res[1])
                assert got == want, (seed, got, want)

    def test_forbidden_interior_respected(self):
        # three routes to t; forbidding the middle of one leaves a pair
        d = Dag(
            5,
            [(0, 0, 1), (1, 1, 4), (2, 0, 2), (3, 2, 3), (4, 3, 4), (5, 0, 4)],
        )
        res = min_cost_disjoint_pair(d, {}, {0}, 4, forbidden_interior={3})
        assert res is not None
        used_nodes = {
            w for p in res for a in p for w in d.arc_map[a]
        }
        assert 3 not in used_nodes
        # forbidding both middles leaves only the direct arc: no pair
        res2 = min_cost_disjoint_pair(d, {}, {0}, 4, forbidden_interior={1, 3})
        assert res2 is None

    def test_forbidden_start_allows_one(self):
        # both routes start at distinct forbidden nodes: at most one allowed
        d = Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3)])
        assert (
            min_cost_disjoint_pair(d, {}, {1, 2}, 3, forbidden_starts={1, 2})
            is None
        )
        res = min_cost_disjoint_pair(d, {}, {1, 2}, 3, forbidden_starts={1})
        assert res is not None
        p1, p2 = res
        assert d.tail(p2[0]) != 1
