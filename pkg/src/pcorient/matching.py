"""Maximum-cardinality matching in general graphs via blossom contraction.

The conflict-filtered line graphs this feeds on contain odd cycles, so
bipartite tricks do not apply; this is the classical Edmonds approach
with contracted blossoms tracked through a base array. A greedy pass
seeds the matching, then one alternating-tree search per remaining
exposed node either augments or proves the node hopeless.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


@dataclass(frozen=True)
class SimpleGraph:
    """Loop-free simple graph; links are stored sorted and deduplicated."""

    node_count: int
    links: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        canon = []
        for u, v in self.links:
            if u == v:
                raise ValueError(f"self-link at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"link {u, v} outside 0..{self.node_count - 1}")
            pair = (u, v) if u < v else (v, u)
            if pair not in seen:
                seen.add(pair)
                canon.append(pair)
        object.__setattr__(self, "links", tuple(sorted(canon)))


@dataclass(frozen=True)
class Matching:
    """Node-disjoint link set, stored as a mate array (-1 = uncovered)."""

    mate: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(1 for v, w in enumerate(self.mate) if w > v)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, w) for v, w in enumerate(self.mate) if w > v)

    def uncovered(self) -> tuple[int, ...]:
        return tuple(v for v, w in enumerate(self.mate) if w == -1)


class _Matcher:
    def __init__(self, g: SimpleGraph) -> None:
        self.n = g.node_count
        self.adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in g.links:
            self.adj[u].append(v)
            self.adj[v].append(u)
        self.match = [-1] * self.n
        self.parent = [-1] * self.n
        self.base = list(range(self.n))
        self.in_queue = [False] * self.n

    def run(self) -> list[int]:
        # Greedy seeding in node order; only shortens the augmentation
        # phase, the final matching is still maximum.
        for v in range(self.n):
            if self.match[v] == -1:
                for w in self.adj[v]:
                    if self.match[w] == -1:
                        self.match[v] = w
                        self.match[w] = v
                        break
        for v in range(self.n):
            if self.match[v] == -1:
                self._find_path(v)
        return self.match

    def _lca(self, a: int, b: int) -> int:
        on_path = [False] * self.n
        while True:
            a = self.base[a]
            on_path[a] = True
            if self.match[a] == -1:
                break
            a = self.parent[self.match[a]]
        while True:
            b = self.base[b]
            if on_path[b]:
                return b
            b = self.parent[self.match[b]]

    def _mark_path(self, v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while self.base[v] != b:
            in_blossom[self.base[v]] = True
            in_blossom[self.base[self.match[v]]] = True
            self.parent[v] = child
            child = self.match[v]
            v = self.parent[child]

    def _find_path(self, root: int) -> bool:
        self.parent = [-1] * self.n
        self.base = list(range(self.n))
        self.in_queue = [False] * self.n
        self.in_queue[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in self.adj[v]:
                if self.base[v] == self.base[to] or self.match[v] == to:
                    continue
                if to == root or (self.match[to] != -1 and self.parent[self.match[to]] != -1):
                    # Odd cycle: contract the blossom to its stem base.
                    curbase = self._lca(v, to)
                    in_blossom = [False] * self.n
                    self._mark_path(v, curbase, to, in_blossom)
                    self._mark_path(to, curbase, v, in_blossom)
                    for i in range(self.n):
                        if in_blossom[self.base[i]]:
                            self.base[i] = curbase
                            if not self.in_queue[i]:
                                self.in_queue[i] = True
                                queue.append(i)
                elif self.parent[to] == -1:
                    self.parent[to] = v
                    if self.match[to] == -1:
                        self._augment(to)
                        return True
                    if not self.in_queue[self.match[to]]:
                        self.in_queue[self.match[to]] = True
                        queue.append(self.match[to])
        return False

    def _augment(self, v: int) -> None:
        while v != -1:
            pv = self.parent[v]
            next_v = self.match[pv]
            self.match[v] = pv
            self.match[pv] = v
            v = next_v


def max_matching(g: SimpleGraph) -> Matching:
    """Maximum-cardinality matching; deterministic for equal inputs."""
    return Matching(tuple(_Matcher(g).run()))
