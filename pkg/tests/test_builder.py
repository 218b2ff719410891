import random

import pytest

from layercast import (
    Dag,
    Demand,
    build_two_layer_code,
    height_function_of,
    is_feasible,
    is_valid_code,
    maximal_fan_extension,
    performance,
    realize_fan_extension,
    special_nodes,
)
from layercast.errors import ConditionsViolated, FieldTooSmall, InvalidFanExtension
from layercast.fans import FanExtension, compute_extension, property_ii_violation
from layercast.gf import Field, next_prime


def random_dag_f(seed, max_nodes=12, kmax=3):
    rng = random.Random(seed)
    n = rng.randint(3, max_nodes)
    m = rng.randint(n - 1, 2 * n)
    arcs = []
    for p in range(1, n):
        arcs.append((len(arcs), rng.randrange(p), p))
    while len(arcs) < m:
        h = rng.randrange(1, n)
        arcs.append((len(arcs), rng.randrange(h), h))
    d = Dag(n, arcs)
    f = {a: rng.randint(1, kmax) for a in d.arc_ids}
    return d, f


class TestRealize:
    def test_star_base_layer(self):
        d = Dag(5, [(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 4)])
        f = {a: 1 for a in d.arc_ids}
        ext = maximal_fan_extension(d, f, k=1)
        code = realize_fan_extension(d, f, ext, Field(7))
        for leaf in range(1, 5):
            assert performance(d, code, leaf) == 1

    def test_diamond_two_layers(self):
        d = Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3)])
        f = {a: 2 for a in d.arc_ids}
        ext = maximal_fan_extension(d, f, k=2)
        assert ext.g[3] == 2
        code = realize_fan_extension(d, f, ext, Field(5))
        assert performance(d, code, 3) == 2
        assert is_valid_code(d, code)

    def test_rejects_bogus_extension(self):
        d = Dag(3, [(0, 0, 1), (1, 1, 2)])
        f = {0: 1, 1: 1}
        fake = FanExtension(k=2, g={0: 2, 1: 2, 2: 1}, witness_fans={1: [[0], [0]]})
        with pytest.raises(InvalidFanExtension):
            realize_fan_extension(d, f, fake, Field(5))

    def test_small_field_rejected(self):
        # two 2-fans share the bottleneck arc s->a: load 2 exceeds F_2
        d = Dag(4, [(0, 0, 1), (1, 1, 2), (2, 1, 3), (3, 0, 2), (4, 0, 3)])
        f = {a: 2 for a in d.arc_ids}
        ext = maximal_fan_extension(d, f, k=2)
        assert ext.g[2] == 2 and ext.g[3] == 2
        load = max(
            sum(1 for paths in ext.witness_fans.values() for p in paths if a in p)
            for a in d.arc_ids
        )
        assert load >= 2
        with pytest.raises(FieldTooSmall):
            realize_fan_extension(d, f, ext, Field(2))
        code = realize_fan_extension(d, f, ext, Field(3))
        assert performance(d, code, 2) == 2 and performance(d, code, 3) == 2

    def test_random_extensions_realize_exactly(self):
        done = 0
        seed = 0
        while done < 30 and seed < 500:
            seed += 1
            d, f = random_dag_f(seed)
            ext = maximal_fan_extension(d, f)
            if ext is None:
                continue
            done += 1
            q = next_prime(d.node_count)
            code = realize_fan_extension(d, f, ext, Field(q))
            assert height_function_of(code) == f
            assert is_valid_code(d, code)
            for v in range(d.node_count):
                assert performance(d, code, v) >= ext.g.get(v, 0)
        assert done == 30

    def test_repaired_functions_realize(self):
        for seed in range(30):
            d, f = random_dag_f(seed, kmax=3)
            f2, g, fans = compute_extension(d, f, 3, repair=True)
            assert property_ii_violation(d, f2, g) is None
            ext = FanExtension(k=3, g=g, witness_fans=fans)
            code = realize_fan_extension(d, f2, ext, Field(next_prime(d.node_count)))
            assert height_function_of(code) == f2


class TestTwoLayerCode:
    def test_tree_all_base(self):
        d = Dag(4, [(0, 0, 1), (1, 1, 2), (2, 1, 3)])
        f = {a: 1 for a in d.arc_ids}
        code = build_two_layer_code(d, f, set(), {2, 3}, Field(3))
        assert all(v == (1, 0) for v in code.assignment.values())

    def test_two_disjoint_paths_full_rate(self):
        d = Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3)])
        f = {a: 2 for a in d.arc_ids}
        code = build_two_layer_code(d, f, {3}, set(), Field(3))
        assert performance(d, code, 3) == 2
        assert height_function_of(code) == f

    def test_special_node_keeps_combination_property(self):
        # u has two level-2 entering arcs and one level-1 exit to a receiver
        d = Dag(4, [(0, 0, 1), (1, 0, 1), (2, 1, 2), (3, 0, 3), (4, 3, 2)])
        f = {0: 2, 1: 2, 2: 1, 3: 1, 4: 1}
        t1 = {2, 3}
        assert special_nodes(d, f, t1) == {1}
        code = build_two_layer_code(d, f, set(), t1, Field(5))
        assert is_valid_code(d, code)
        assert performance(d, code, 2) >= 1

    def test_violating_function_rejected(self):
        d = Dag(3, [(0, 0, 1), (1, 1, 2)])
        f = {0: 1, 1: 2}
        with pytest.raises(ConditionsViolated):
            build_two_layer_code(d, f, set(), {2}, Field(3))

    def test_demand_levels_met(self):
        rng = random.Random(99)
        from layercast import check_two_layer_conditions
        from layercast.dag import lambda_value

        built = 0
        for seed in range(200):
            d, f = random_dag_f(seed, max_nodes=8, kmax=2)
            rng.seed(seed)
            t1, t2 = set(), set()
            for v in range(1, d.node_count):
                r = rng.random()
                if r < 0.3:
                    t1.add(v)
                elif r < 0.5 and lambda_value(d, v, 2) >= 2:
                    t2.add(v)
            dem = Demand([t1, t2])
            if check_two_layer_conditions(d, f, dem) is not None:
                continue
            q = next_prime(max(len(t1 | t2), 1))
            code = build_two_layer_code(d, f, t2, t1, Field(q))
            built += 1
            assert is_feasible(d, code, dem)
            assert height_function_of(code) == f
        assert built >= 20
