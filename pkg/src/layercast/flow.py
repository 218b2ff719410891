"""Unit-capacity flow routines used by the graph layer.

Graphs here are throwaway index-based structures: nodes are 0..n-1 and arcs
are given as (tail, head) pairs with implicit ids.  Everything is written
for repeated small queries rather than one huge instance.
"""

from __future__ import annotations

import heapq
from collections import deque


class UnitFlow:
    """Max flow with all capacities 1, supporting parallel arcs."""

    def __init__(self, n: int, arcs: list[tuple[int, int]]):
        self.n = n
        self.arcs = arcs
        self.out = [[] for _ in range(n)]
        self.into = [[] for _ in range(n)]
        for a, (u, v) in enumerate(arcs):
            self.out[u].append(a)
            self.into[v].append(a)
        self.used = [False] * len(arcs)

    def reset(self) -> None:
        self.used = [False] * len(self.arcs)

    def _augment(self, s: int, t: int) -> bool:
        # BFS over the residual graph; parent[v] = (arc, forward?)
        parent: list[tuple[int, bool] | None] = [None] * self.n
        seen = [False] * self.n
        seen[s] = True
        dq = deque([s])
        while dq:
            u = dq.popleft()
            if u == t:
                break
            for a in self.out[u]:
                if not self.used[a]:
                    v = self.arcs[a][1]
                    if not seen[v]:
                        seen[v] = True
                        parent[v] = (a, True)
                        dq.append(v)
            for a in self.into[u]:
                if self.used[a]:
                    v = self.arcs[a][0]
                    if not seen[v]:
                        seen[v] = True
                        parent[v] = (a, False)
                        dq.append(v)
        if not seen[t]:
            return False
        v = t
        while v != s:
            a, fwd = parent[v]
            if fwd:
                self.used[a] = True
                v = self.arcs[a][0]
            else:
                self.used[a] = False
                v = self.arcs[a][1]
        return True

    def max_flow(self, s: int, t: int, cap: int | None = None) -> int:
        value = 0
        while cap is None or value < cap:
            if not self._augment(s, t):
                break
            value += 1
        return value

    def residual_reachable(self, s: int) -> set[int]:
        """Nodes reachable from s in the residual graph of the current flow."""
        seen = [False] * self.n
        seen[s] = True
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for a in self.out[u]:
                if not self.used[a]:
                    v = self.arcs[a][1]
                    if not seen[v]:
                        seen[v] = True
                        dq.append(v)
            for a in self.into[u]:
                if self.used[a]:
                    v = self.arcs[a][0]
                    if not seen[v]:
                        seen[v] = True
                        dq.append(v)
        return {v for v in range(self.n) if seen[v]}

    def decompose_paths(self, s: int, t: int) -> list[list[int]]:
        """Split the current flow into arc-id paths from s to t (DAG input)."""
        remaining = [self.used[a] for a in range(len(self.arcs))]
        out_used = [[] for _ in range(self.n)]
        for a, (u, _) in enumerate(self.arcs):
            if remaining[a]:
                out_used[u].append(a)
        for lst in out_used:
            lst.sort()
        paths = []
        while True:
            path = []
            u = s
            while u != t:
                nxt = None
                for a in out_used[u]:
                    if remaining[a]:
                        nxt = a
                        break
                if nxt is None:
                    break
                remaining[nxt] = False
                path.append(nxt)
                u = self.arcs[nxt][1]
            if u == t and path:
                paths.append(path)
            else:
                break
        return paths


class MinCostFlow:
    """Successive-shortest-path min-cost flow on unit capacities.

    Costs must be non-negative; Johnson potentials keep reduced costs
    non-negative after augmentations.
    """

    def __init__(self, n: int):
        self.n = n
        self.tails: list[int] = []
        self.heads: list[int] = []
        self.caps: list[int] = []
        self.costs: list[int] = []
        self.tags: list[object] = []
        self.out = [[] for _ in range(n)]
        self.into = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, cap: int, cost: int, tag: object = None) -> int:
        a = len(self.tails)
        self.tails.append(u)
        self.heads.append(v)
        self.caps.append(cap)
        self.costs.append(cost)
        self.tags.append(tag)
        self.out[u].append(a)
        self.into[v].append(a)
        return a

    def solve(self, s: int, t: int, units: int):
        """Send `units` of flow; returns (cost, flow list) or None if short."""
        m = len(self.tails)
        flow = [0] * m
        pot = [0] * self.n
        total = 0
        for _ in range(units):
            dist = [None] * self.n
            parent: list[tuple[int, bool] | None] = [None] * self.n
            dist[s] = 0
            pq = [(0, s)]
            while pq:
                d, u = heapq.heappop(pq)
                if dist[u] != d:
                    continue
                for a in self.out[u]:
                    if flow[a] < self.caps[a]:
                        v = self.heads[a]
                        nd = d + self.costs[a] + pot[u] - pot[v]
                        if dist[v] is None or nd < dist[v]:
                            dist[v] = nd
                            parent[v] = (a, True)
                            heapq.heappush(pq, (nd, v))
                for a in self.into[u]:
                    if flow[a] > 0:
                        v = self.tails[a]
                        nd = d - self.costs[a] + pot[u] - pot[v]
                        if dist[v] is None or nd < dist[v]:
                            dist[v] = nd
                            parent[v] = (a, False)
                            heapq.heappush(pq, (nd, v))
            if dist[t] is None:
                return None
            for v in range(self.n):
                if dist[v] is not None:
                    pot[v] += dist[v]
            v = t
            while v != s:
                a, fwd = parent[v]
                if fwd:
                    flow[a] += 1
                    total += self.costs[a]
                    v = self.tails[a]
                else:
                    flow[a] -= 1
                    total -= self.costs[a]
                    v = self.heads[a]
        return total, flow

    def decompose_paths(self, flow: list[int], s: int, t: int) -> list[list[int]]:
        """Split an integral flow into arc-id paths from s to t (DAG input)."""
        rem = list(flow)
        paths = []
        while True:
            path = []
            u = s
            while u != t:
                nxt = None
                for a in self.out[u]:
                    if rem[a] > 0:
                        nxt = a
                        break
                if nxt is None:
                    break
                rem[nxt] -= 1
                path.append(nxt)
                u = self.heads[nxt]
            if u == t and path:
                paths.append(path)
            else:
                break
        return paths
