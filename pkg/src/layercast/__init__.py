"""Linear network code planning for multi-layered multicast on DAGs."""

from .dag import (
    Dag,
    arborescence,
    lambda_value,
    maximal_iset,
    min_cost_disjoint_pair,
    node_cut_closure,
    reachable,
    rho,
    topological_order,
    unit_cut_regions,
)
from .gf import Field, Subspace, coding_lemma_combine, control_vectors, height, next_prime, span
from .model import (
    Demand,
    NetworkCode,
    brute_force_feasible,
    demand_of,
    height_function_of,
    is_feasible,
    is_proper,
    is_valid_code,
    performance,
    performance_map,
)
from .fans import (
    FanExtension,
    build_aux_graph,
    find_i_fan,
    has_i_fan,
    is_feasible_height_function,
    is_monotone,
    maximal_fan_extension,
)
from .builder import build_two_layer_code, realize_fan_extension, special_nodes
from .twolayer import TwoLayerPlan, check_two_layer_conditions, solve_two_layer
from .threelayer import GuaranteeReport, ThreeLayerPlan, guarantee_audit, plan_three_layers
from .protocol import Message, NodeVerdict, node_step, run_protocol
from .baselines import (
    CoverGraph,
    SatFormula,
    assignment_to_code,
    cover_to_code,
    gen_3sat_instance,
    gen_vertex_cover_instance,
    min_cut_baseline_code,
    parse_dimacs,
)
from .bench import ExperimentConfig, ScoreReport, compare, compare_csv, gen_random_dag, sample_demand, score

__version__ = "0.1.0"
