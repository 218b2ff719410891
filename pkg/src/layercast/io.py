"""Text formats for problem instances.

Instance files::

    nodes N
    source S
    arc <id> <tail> <head>
    ...
    demand <node> <level>
    ...

Arc ids must be distinct; the parser rejects duplicates.  Demand lines are
optional; the number of layers defaults to the highest level present (a
caller may force a larger k).
"""

from __future__ import annotations

from typing import Optional

from .dag import Dag
from .model import Demand


def instance_to_text(dag: Dag, demand: Optional[Demand] = None) -> str:
    lines = [f"nodes {dag.node_count}", f"source {dag.source}"]
    for a in dag.arc_ids:
        tail, head = dag.arc_map[a]
        lines.append(f"arc {a} {tail} {head}")
    if demand is not None:
        for i in range(1, demand.k + 1):
            for v in sorted(demand.tier(i)):
                lines.append(f"demand {v} {i}")
    return "\n".join(lines) + "\n"


def instance_from_text(text: str, k: Optional[int] = None) -> tuple[Dag, Demand]:
    nodes = None
    source = 0
    arcs: list[tuple[int, int, int]] = []
    seen_ids: set[int] = set()
    demands: list[tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nodes":
            nodes = int(parts[1])
        elif parts[0] == "source":
            source = int(parts[1])
        elif parts[0] == "arc":
            arc_id, tail, head = int(parts[1]), int(parts[2]), int(parts[3])
            if arc_id in seen_ids:
                raise ValueError(f"duplicate arc id {arc_id}")
            seen_ids.add(arc_id)
            arcs.append((arc_id, tail, head))
        elif parts[0] == "demand":
            demands.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"unrecognized line: {raw!r}")
    if nodes is None:
        raise ValueError("missing 'nodes' line")
    dag = Dag(nodes, arcs, source)
    levels = [lvl for _, lvl in demands]
    layer_count = k if k is not None else (max(levels) if levels else 1)
    if levels and max(levels) > layer_count:
        raise ValueError("demand level exceeds layer count")
    tiers: list[set[int]] = [set() for _ in range(layer_count)]
    for v, lvl in demands:
        if lvl < 1:
            raise ValueError(f"demand level must be >= 1, got {lvl}")
        if v == dag.source:
            raise ValueError("source cannot be a receiver")
        tiers[lvl - 1].add(v)
    return dag, Demand(tiers)


def read_instance(path: str, k: Optional[int] = None) -> tuple[Dag, Demand]:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_text(fh.read(), k=k)


def write_instance(path: str, dag: Dag, demand: Optional[Demand] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_text(dag, demand))
