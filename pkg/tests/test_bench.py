import pytest

from layercast import Dag, Demand, lambda_value
from layercast.bench import (
    CSV_COLUMNS,
    ExperimentConfig,
    ScoreReport,
    compare,
    compare_csv,
    gen_random_dag,
    sample_demand,
    score,
)
from layercast.errors import MissingPerformance


class TestGenRandomDag:
    def test_two_nodes(self):
        d = gen_random_dag(ExperimentConfig(node_count=2, arc_density=0.5, seed=1))
        assert d.node_count == 2
        assert d.arc_count() == 1

    def test_paper_scale_counts(self):
        d = gen_random_dag(ExperimentConfig(node_count=551, arc_density=4.0, seed=0))
        assert d.node_count == 551
        assert d.arc_count() == 2204

    def test_deterministic(self):
        cfg = ExperimentConfig(node_count=30, arc_density=2.0, seed=9)
        d1 = gen_random_dag(cfg)
        d2 = gen_random_dag(cfg)
        assert d1.arc_map == d2.arc_map and d1.source == d2.source

    def test_every_node_reachable(self):
        for seed in range(10):
            d = gen_random_dag(
                ExperimentConfig(node_count=25, arc_density=1.5, seed=seed)
            )
            assert all(len(d.in_arcs[v]) >= 1 for v in range(25) if v != d.source)

    def test_density_too_low_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig(node_count=10, arc_density=0.5)


class TestSampleDemand:
    def test_zero_probability(self):
        d = gen_random_dag(ExperimentConfig(node_count=20, arc_density=2.0, seed=1))
        dem = sample_demand(d, 0.0, 5)
        assert not dem.receivers

    def test_tier_capped_by_connectivity(self):
        for seed in range(8):
            d = gen_random_dag(
                ExperimentConfig(node_count=30, arc_density=1.5, seed=seed)
            )
            dem = sample_demand(d, 0.5, seed + 1)
            for i in (1, 2, 3):
                for t in dem.tier(i):
                    assert lambda_value(d, t, 3) >= i

    def test_deterministic(self):
        d = gen_random_dag(ExperimentConfig(node_count=30, arc_density=2.0, seed=2))
        assert sample_demand(d, 0.3, 7).tiers == sample_demand(d, 0.3, 7).tiers

    def test_expected_receiver_count(self):
        d = gen_random_dag(ExperimentConfig(node_count=551, arc_density=4.0, seed=3))
        dem = sample_demand(d, 0.1, 4)
        assert 30 <= len(dem.receivers) <= 85


class TestScore:
    def test_all_base_scores_zero(self):
        dem = Demand([{1}, {2}, {3}])
        rep = score(dem, {1: 1, 2: 1, 3: 1})
        assert rep.score == 0.0

    def test_formula_arithmetic(self):
        dem = Demand(
            [set(), set(range(10, 25)), set(range(30, 40))]
        )
        perf = {}
        for t in range(10, 25):
            perf[t] = 2 if t < 20 else 1  # 10 upgraded tier-2
        for t in range(30, 39):
            perf[t] = 2 if t < 35 else 3  # 5 at two layers, 4 at three
        perf[39] = 1
        rep = score(dem, perf)
        assert rep.r2_2 == 10 and rep.r2_3 == 5 and rep.r3_3 == 4
        assert rep.score == pytest.approx(2 * 10 + 1.8 * 5 + 2.7 * 4)

    def test_single_full_rate_receiver(self):
        dem = Demand([set(), set(), {5}])
        rep = score(dem, {5: 3})
        assert rep.score == pytest.approx(2.7)

    def test_missing_performance(self):
        dem = Demand([{1}, set(), set()])
        with pytest.raises(MissingPerformance):
            score(dem, {})

    def test_monotone_in_counts(self):
        dem = Demand([set(), {1, 2}, {3}])
        low = score(dem, {1: 1, 2: 1, 3: 1}).score
        mid = score(dem, {1: 2, 2: 1, 3: 1}).score
        high = score(dem, {1: 2, 2: 2, 3: 3}).score
        assert low <= mid <= high


class TestCompare:
    def test_single_trial_structure(self):
        cfg = ExperimentConfig(
            node_count=25, arc_density=2.0, receiver_prob=0.25, trials=1, seed=4
        )
        rows = compare(cfg)
        assert rows[0] == ",".join(CSV_COLUMNS)
        assert len(rows) == 3  # header, one trial, averages
        trial = rows[1].split(",")
        avg = rows[2].split(",")
        assert avg[0] == "avg"
        # averages of one row equal the row itself
        for i in (5, 6):
            assert float(avg[i]) == pytest.approx(float(trial[i]))

    def test_byte_identical_reruns(self):
        cfg = ExperimentConfig(
            node_count=30, arc_density=2.5, receiver_prob=0.2, trials=2, seed=11
        )
        assert compare_csv(cfg) == compare_csv(cfg)

    def test_planner_never_behind_on_upgrades(self):
        cfg = ExperimentConfig(
            node_count=40, arc_density=2.0, receiver_prob=0.25, trials=3, seed=21
        )
        rows = compare(cfg)
        for row in rows[1:-1]:
            cells = row.split(",")
            assert int(cells[7]) >= int(cells[8])  # plan3_ge2 >= mincut_ge2
