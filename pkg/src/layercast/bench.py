"""Random instances, scoring, and the planner-versus-baseline harness.

Scores reward only upgrades past the base layer: 2 points per tier-2
receiver getting both layers, 1.8 per tier-3 receiver stopping at two, and
2.7 per tier-3 receiver getting all three.  Comparison output is CSV and
byte-stable for a fixed configuration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .baselines import min_cut_baseline_code
from .dag import Dag, lambda_value
from .errors import MissingPerformance
from .gf import Field, next_prime
from .model import Demand, demand_of, performance_map
from .threelayer import guarantee_audit, plan_three_layers


@dataclass(frozen=True)
class ExperimentConfig:
    node_count: int
    arc_density: float = 4.0
    receiver_prob: float = 0.1
    trials: int = 10
    seed: int = 0
    field: Optional[int] = None
    retries: int = 5

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError("need at least two nodes")
        if not 0 <= self.receiver_prob <= 1:
            raise ValueError("receiver probability out of range")
        if round(self.arc_density * self.node_count) < self.node_count - 1:
            raise ValueError("density too low to reach every node")


@dataclass
class ScoreReport:
    r2_2: int
    r2_3: int
    r3_3: int
    score: float
    per_receiver: list[tuple[int, int, int]]  # (node, demand, layers)


def gen_random_dag(config: ExperimentConfig) -> Dag:
    """Random single-source DAG with exactly round(density * nodes) arcs.

    Draws a uniformly random topological order, gives every non-first node
    one incoming arc from a random earlier node (so the source reaches
    everything), then fills up with uniform earlier-to-later arc samples.
    """
    n = config.node_count
    m = round(config.arc_density * n)
    rng = random.Random(config.seed)
    order = list(range(n))
    rng.shuffle(order)
    arcs: list[tuple[int, int, int]] = []
    for p in range(1, n):
        tp = rng.randrange(p)
        arcs.append((len(arcs), order[tp], order[p]))
    while len(arcs) < m:
        p2 = rng.randrange(1, n)
        p1 = rng.randrange(p2)
        arcs.append((len(arcs), order[p1], order[p2]))
    return Dag(n, arcs, source=order[0])


def sample_demand(dag: Dag, receiver_prob: float, seed: int) -> Demand:
    """Each non-source node becomes a receiver with the given probability
    and lands uniformly in a tier up to min(3, lambda(s, v))."""
    rng = random.Random(seed)
    tiers: list[set[int]] = [set(), set(), set()]
    for v in range(dag.node_count):
        if v == dag.source:
            continue
        if rng.random() < receiver_prob:
            lam = lambda_value(dag, v, 3)
            tiers[rng.randint(1, lam) - 1].add(v)
    return Demand(tiers)


def score(demand: Demand, performances: dict[int, int]) -> ScoreReport:
    """Apply the upgrade-weighted objective to realized layer counts."""
    for t in demand.receivers:
        if t not in performances:
            raise MissingPerformance(f"no performance recorded for node {t}")
    if demand.k < 3:
        raise ValueError("scoring expects a three-tier demand")
    t2 = demand.tier(2)
    t3 = demand.tier(3)
    r2_2 = sum(1 for t in t2 if performances[t] >= 2)
    r2_3 = sum(1 for t in t3 if performances[t] == 2)
    r3_3 = sum(1 for t in t3 if performances[t] >= 3)
    value = 2.0 * r2_2 + 1.8 * r2_3 + 2.7 * r3_3
    per_receiver = sorted(
        (t, demand_of(demand, t), performances[t]) for t in demand.receivers
    )
    return ScoreReport(r2_2, r2_3, r3_3, value, per_receiver)


CSV_COLUMNS = [
    "trial",
    "seed",
    "nodes",
    "arcs",
    "receivers",
    "score_plan3",
    "score_mincut",
    "plan3_ge2",
    "mincut_ge2",
    "plan3_t3_1",
    "plan3_t3_2",
    "plan3_t3_3",
    "mincut_t3_1",
    "mincut_t3_2",
    "mincut_t3_3",
    "retries",
]


def _t3_histogram(demand: Demand, perf: dict[int, int]) -> tuple[int, int, int]:
    t3 = demand.tier(3)
    return (
        sum(1 for t in t3 if perf[t] <= 1),
        sum(1 for t in t3 if perf[t] == 2),
        sum(1 for t in t3 if perf[t] >= 3),
    )


def compare(config: ExperimentConfig) -> list[str]:
    """Head-to-head rows for the planner and the baseline, one per trial,
    closed by an averages row.  The planner's guarantee is re-audited per
    trial and any failure raises."""
    rows = [",".join(CSV_COLUMNS)]
    acc = {c: 0.0 for c in CSV_COLUMNS[5:15]}
    for trial in range(config.trials):
        trial_seed = config.seed + 7919 * trial
        cfg = ExperimentConfig(
            node_count=config.node_count,
            arc_density=config.arc_density,
            receiver_prob=config.receiver_prob,
            trials=1,
            seed=trial_seed,
            field=config.field,
            retries=config.retries,
        )
        dag = gen_random_dag(cfg)
        demand = sample_demand(dag, config.receiver_prob, trial_seed + 1)
        field = Field(config.field) if config.field else Field(
            next_prime(dag.node_count)
        )
        plan = plan_three_layers(dag, demand, field=field)
        audit = guarantee_audit(dag, demand, plan)
        if not audit.passed:
            raise AssertionError(
                f"guarantee audit failed on trial {trial}: {audit}"
            )
        perf_plan = performance_map(dag, plan.code)
        base = min_cut_baseline_code(
            dag, demand, field, seed=trial_seed + 2, retries=config.retries
        )
        perf_base = performance_map(dag, base)
        s_plan = score(demand, perf_plan)
        s_base = score(demand, perf_base)
        ge2_plan = sum(1 for t in demand.receivers if perf_plan[t] >= 2)
        ge2_base = sum(1 for t in demand.receivers if perf_base[t] >= 2)
        h_plan = _t3_histogram(demand, perf_plan)
        h_base = _t3_histogram(demand, perf_base)
        values = [
            str(trial),
            str(trial_seed),
            str(dag.node_count),
            str(dag.arc_count()),
            str(len(demand.receivers)),
            f"{s_plan.score:.1f}",
            f"{s_base.score:.1f}",
            str(ge2_plan),
            str(ge2_base),
            str(h_plan[0]),
            str(h_plan[1]),
            str(h_plan[2]),
            str(h_base[0]),
            str(h_base[1]),
            str(h_base[2]),
            str(config.retries),
        ]
        rows.append(",".join(values))
        for col, val in zip(CSV_COLUMNS[5:15], values[5:15]):
            acc[col] += float(val)
    n = max(config.trials, 1)
    avg = ["avg", "", str(config.node_count), "", ""]
    avg += [f"{acc[c] / n:.2f}" for c in CSV_COLUMNS[5:15]]
    avg.append(str(config.retries))
    rows.append(",".join(avg))
    return rows


def compare_csv(config: ExperimentConfig) -> str:
    return "\n".join(compare(config)) + "\n"
