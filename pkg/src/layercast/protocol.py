"""Simulated distributed computation of capped connectivity and cut arcs.

Each node waits for a three-slot message on every incoming arc, then
derives min(3, lambda(s, v)) together with the entering arc(s) of its
maximal unit- or two-entry region, and emits one message downstream.  The
special symbol * (None here) stands for "no constraining arc yet"; a node
replaces a * heard on arc a by a itself before reasoning.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .dag import Dag
from .errors import SourceHasNoStep

STAR = None


@dataclass(frozen=True)
class Message:
    m1: Optional[int]
    m2: Optional[int]
    m3: Optional[int]


SOURCE_MESSAGE = Message(STAR, STAR, STAR)


@dataclass(frozen=True)
class NodeVerdict:
    lambda_capped: int
    one_set_entry: Optional[int]
    two_set_entries: Optional[tuple[int, int]]


def node_step(incoming: list[tuple[int, Message]]) -> tuple[NodeVerdict, Message]:
    """One node's move given (arc id, message) for every incoming arc."""
    if not incoming:
        raise SourceHasNoStep("the source node does not execute a step")
    triples = []
    for arc, msg in incoming:
        triples.append(
            (
                arc if msg.m1 is STAR else msg.m1,
                arc if msg.m2 is STAR else msg.m2,
                arc if msg.m3 is STAR else msg.m3,
            )
        )
    lam: Optional[int] = None
    m1: Optional[int] = STAR
    m2: Optional[int] = STAR
    m3: Optional[int] = STAR

    set1 = sorted({t[0] for t in triples})
    if len(set1) == 1:
        lam = 1
        m1 = m2 = m3 = set1[0]

    set2 = sorted({x for t in triples for x in (t[1], t[2])})
    pair_prime: Optional[list[int]] = None
    if len(set2) == 2:
        m2, m3 = set2
        if lam is None:
            lam = 2
    elif len(set2) > 2:
        important = [
            i
            for i in range(len(triples))
            if triples[i][0]
            not in {
                x
                for j in range(len(triples))
                if j != i
                for x in (triples[j][1], triples[j][2])
            }
        ]
        imp = set(important)
        pair_prime = sorted(
            {x for i in imp for x in (triples[i][1], triples[i][2])}
            | {triples[i][0] for i in range(len(triples)) if i not in imp}
        )
        if len(pair_prime) == 2:
            m2, m3 = pair_prime
            if lam is None:
                lam = 2

    if (
        len(set2) > 2
        and pair_prime is not None
        and len(pair_prime) > 2
        and lam is None
        and len(set1) <= 2
    ):
        m2, m3 = set1[0], set1[-1]
        lam = 2

    if lam is None:
        lam = 3
        m2 = m3 = STAR

    verdict = NodeVerdict(
        lambda_capped=lam,
        one_set_entry=m1 if lam == 1 else None,
        two_set_entries=(m2, m3) if lam == 2 else None,
    )
    return verdict, Message(m1, m2, m3)


def run_protocol(
    dag: Dag, schedule_seed: Optional[int] = None
) -> dict[int, NodeVerdict]:
    """Run every node once its in-messages are complete.

    The default schedule is the deterministic ready order; a seed shuffles
    which ready node fires next, which must not change any verdict.
    """
    rng = random.Random(schedule_seed) if schedule_seed is not None else None
    arc_msg: dict[int, Message] = {}
    verdicts: dict[int, NodeVerdict] = {}
    for a in dag.out_arcs[dag.source]:
        arc_msg[a] = SOURCE_MESSAGE
    ready = [
        v
        for v in range(dag.node_count)
        if v != dag.source and all(a in arc_msg for a in dag.in_arcs[v])
    ]
    while ready:
        if rng is None:
            ready.sort()
            v = ready.pop(0)
        else:
            v = ready.pop(rng.randrange(len(ready)))
        verdict, out = node_step([(a, arc_msg[a]) for a in dag.in_arcs[v]])
        verdicts[v] = verdict
        for a in dag.out_arcs[v]:
            arc_msg[a] = out
            w = dag.head(a)
            if w != dag.source and all(b in arc_msg for b in dag.in_arcs[w]):
                if w not in verdicts and w not in ready:
                    ready.append(w)
    return verdicts
