import random

import pytest

from layercast import (
    Dag,
    Demand,
    guarantee_audit,
    performance_map,
    plan_three_layers,
)
from layercast.bench import ExperimentConfig, gen_random_dag, sample_demand
from layercast.errors import NotThreeLayer
from layercast.dag import lambda_value


def triple_star(receivers=2):
    arcs = []
    for t in range(1, receivers + 1):
        for _ in range(3):
            arcs.append((len(arcs), 0, t))
    d = Dag(receivers + 1, arcs)
    dem = Demand([set(), set(), set(range(1, receivers + 1))])
    return d, dem


class TestPlan:
    def test_wrong_tier_count(self):
        d = Dag(2, [(0, 0, 1)])
        with pytest.raises(NotThreeLayer):
            plan_three_layers(d, Demand([{1}]))

    def test_disjoint_triples_keep_full_rate(self):
        d, dem = triple_star()
        plan = plan_three_layers(d, dem)
        assert all(v == 3 for v in plan.f.values())
        perf = performance_map(d, plan.code)
        assert all(perf[t] == 3 for t in dem.receivers)
        assert guarantee_audit(d, dem, plan).passed

    def test_receiver_behind_unit_region(self):
        # b sits behind s->a->b; the other receiver keeps its triple
        arcs = [(0, 0, 1), (1, 1, 2)]
        for _ in range(3):
            arcs.append((len(arcs), 0, 3))
        d = Dag(4, arcs)
        dem = Demand([{2}, set(), {3}])
        plan = plan_three_layers(d, dem)
        assert plan.t1 == {2}
        assert plan.w1_closure == {1, 2}
        perf = performance_map(d, plan.code)
        assert perf[2] == 1
        assert perf[3] == 3
        assert guarantee_audit(d, dem, plan).passed

    def test_doubly_connected_receiver_gets_two(self):
        # v has exactly two disjoint routes: capped at 2, never below
        d = Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3)])
        dem = Demand([set(), {3}, set()])
        plan = plan_three_layers(d, dem)
        perf = performance_map(d, plan.code)
        assert perf[3] >= 2
        assert 3 not in plan.t1
        assert guarantee_audit(d, dem, plan).passed

    def test_pseudo_receiver_feeds_region(self):
        # u relays into the unit region around t and must stay upgradable
        arcs = [
            (0, 0, 1),   # s -> u (one of two routes)
            (1, 0, 2),   # s -> m
            (2, 2, 1),   # m -> u
            (3, 1, 3),   # u -> t  (single entry of t's region)
            (4, 0, 4),
            (5, 4, 5),
            (6, 0, 5),
        ]
        d = Dag(6, arcs)
        dem = Demand([{3}, set(), {5}])
        plan = plan_three_layers(d, dem)
        assert 1 in plan.pseudo
        assert plan.t1 == {3}
        assert guarantee_audit(d, dem, plan).passed

    def test_level_one_arcs_stay_low(self):
        arcs = [(0, 0, 1), (1, 1, 2)]
        for _ in range(3):
            arcs.append((len(arcs), 0, 3))
        d = Dag(4, arcs)
        dem = Demand([{2}, set(), {3}])
        plan = plan_three_layers(d, dem)
        for a in d.arc_ids:
            u, w = d.arc_map[a]
            if u in plan.w1_closure or w in plan.w1_closure:
                assert plan.f[a] == 1

    def test_f_values_in_range(self):
        for seed in range(15):
            cfg = ExperimentConfig(
                node_count=40, arc_density=2.0, receiver_prob=0.3, trials=1, seed=seed
            )
            d = gen_random_dag(cfg)
            dem = sample_demand(d, 0.3, seed + 1)
            if not dem.receivers:
                continue
            plan = plan_three_layers(d, dem)
            assert all(0 <= v <= 3 for v in plan.f.values())
            perf = performance_map(d, plan.code)
            for t in dem.receivers:
                assert 1 <= perf[t] <= 3
                assert perf[t] >= plan.g.get(t, 0) >= min(
                    1, perf[t]
                )


class TestGuaranteeAudit:
    def test_clauses_pass_on_random_instances(self):
        for seed in range(25):
            cfg = ExperimentConfig(
                node_count=50,
                arc_density=2.2,
                receiver_prob=0.25,
                trials=1,
                seed=seed,
            )
            d = gen_random_dag(cfg)
            dem = sample_demand(d, 0.25, seed + 1)
            if not dem.receivers:
                continue
            plan = plan_three_layers(d, dem)
            report = guarantee_audit(d, dem, plan)
            assert report.passed, (seed, report)

    def test_cut_clause_matches_recomputation(self):
        # nested unit regions: two receivers chained behind one bottleneck,
        # plus a triply-connected tier-3 receiver that stays free
        arcs = [(0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 0, 4), (4, 0, 4), (5, 0, 4)]
        d = Dag(5, arcs)
        dem = Demand([{2, 3}, set(), {4}])
        plan = plan_three_layers(d, dem)
        assert plan.t1 == {2, 3}
        report = guarantee_audit(d, dem, plan)
        assert report.cut_ok and report.passed

    def test_capped_tier3_member(self):
        # tier-3 receiver with connectivity two ends at exactly two layers
        d = Dag(4, [(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 2, 3)])
        dem = Demand([set(), set(), {3}])
        plan = plan_three_layers(d, dem)
        perf = performance_map(d, plan.code)
        assert perf[3] == 2
        report = guarantee_audit(d, dem, plan)
        assert report.passed
