"""Command line front end.

Subcommands: ``gen`` (random instance), ``plan2`` (two-layer planner),
``plan3`` (three-layer planner), ``cuts`` (distributed connectivity
verdicts), ``compare`` (planner vs. baseline CSV).
"""

from __future__ import annotations

import argparse
import sys

from . import io as lio
from .bench import ExperimentConfig, compare_csv, gen_random_dag, sample_demand
from .gf import Field
from .model import code_to_text, demand_of, performance_map
from .protocol import run_protocol
from .threelayer import guarantee_audit, plan_three_layers
from .twolayer import solve_two_layer


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    cfg = ExperimentConfig(
        node_count=args.nodes,
        arc_density=args.density,
        receiver_prob=args.receiver_prob,
        trials=1,
        seed=args.seed,
    )
    dag = gen_random_dag(cfg)
    demand = sample_demand(dag, args.receiver_prob, args.seed + 1)
    _emit(lio.instance_to_text(dag, demand), args.out)
    return 0


def _f_lines(f: dict[int, int]) -> list[str]:
    return [f"f {a} {f[a]}" for a in sorted(f)]


def _cmd_plan2(args) -> int:
    dag, demand = lio.read_instance(args.instance, k=2)
    plan = solve_two_layer(dag, demand)
    lines = [
        "t2-kept " + " ".join(str(v) for v in sorted(plan.t2_kept)),
        "t2-demoted "
        + " ".join(str(v) for v in sorted(demand.tier(2) - plan.t2_kept)),
        f"field {plan.field.q}",
    ]
    lines += _f_lines(plan.f)
    report = "\n".join(lines) + "\n"
    code_text = code_to_text(plan.code)
    if args.out:
        _emit(report + f"code-file {args.out}.code\n", args.out)
        _emit(code_text, args.out + ".code")
    else:
        sys.stdout.write(report)
        sys.stdout.write(code_text)
    return 0


def _cmd_plan3(args) -> int:
    dag, demand = lio.read_instance(args.instance, k=3)
    field = Field(args.field) if args.field else None
    plan = plan_three_layers(dag, demand, field=field)
    audit = guarantee_audit(dag, demand, plan)
    perf = performance_map(dag, plan.code)
    lines = [f"audit {'pass' if audit.passed else 'FAIL'}"]
    for t in sorted(demand.receivers):
        lines.append(f"receiver {t} {demand_of(demand, t)} {perf[t]}")
    lines.append(f"field {plan.field.q}")
    lines += _f_lines(plan.f)
    report = "\n".join(lines) + "\n"
    code_text = code_to_text(plan.code)
    if args.out:
        _emit(report + f"code-file {args.out}.code\n", args.out)
        _emit(code_text, args.out + ".code")
    else:
        sys.stdout.write(report)
        sys.stdout.write(code_text)
    return 0 if audit.passed else 1


def _cmd_cuts(args) -> int:
    dag, _ = lio.read_instance(args.instance)
    verdicts = run_protocol(dag)
    lines = []
    for v in sorted(verdicts):
        vd = verdicts[v]
        entries: tuple[int, ...] = ()
        if vd.lambda_capped == 1 and vd.one_set_entry is not None:
            entries = (vd.one_set_entry,)
        elif vd.lambda_capped == 2 and vd.two_set_entries is not None:
            entries = vd.two_set_entries
        lines.append(
            "\t".join([str(v), str(vd.lambda_capped)] + [str(a) for a in entries])
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_compare(args) -> int:
    cfg = ExperimentConfig(
        node_count=args.nodes,
        arc_density=args.density,
        receiver_prob=args.receiver_prob,
        trials=args.trials,
        seed=args.seed,
        field=args.field,
    )
    _emit(compare_csv(cfg), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layercast",
        description="Plan linear network codes for layered multicast on DAGs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance with demand")
    p.add_argument("--nodes", type=int, default=551)
    p.add_argument("--density", type=float, default=4.0)
    p.add_argument("--receiver-prob", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("plan2", help="optimal two-layer plan for an instance")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_plan2)

    p = sub.add_parser("plan3", help="three-layer heuristic plan for an instance")
    p.add_argument("instance")
    p.add_argument("--field", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_plan3)

    p = sub.add_parser("cuts", help="per-node connectivity verdicts (TSV)")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cuts)

    p = sub.add_parser("compare", help="planner vs. baseline CSV benchmark")
    p.add_argument("--nodes", type=int, default=551)
    p.add_argument("--density", type=float, default=4.0)
    p.add_argument("--receiver-prob", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
