"""Shared builders, seeded generators, and brute-force baselines for the tests."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from random import Random

from pcorient import Conflict, ConflictKind, Instance, Multigraph


def inst(
    n: int,
    edges: list[tuple[int, int]],
    parity: dict[int, int] | None = None,
    conflicts: tuple[Conflict, ...] = (),
    forced: dict[int, int] | None = None,
) -> Instance:
    return Instance(Multigraph(n, tuple(edges)), parity or {}, conflicts, forced or {})


def exact(v: int, *edges: int) -> Conflict:
    return Conflict(v, frozenset(edges), ConflictKind.EXACT)


def subset(v: int, *edges: int) -> Conflict:
    return Conflict(v, frozenset(edges), ConflictKind.SUBSET)


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def even_parity(n: int) -> dict[int, int]:
    return {v: 0 for v in range(n)}


# --- seeded random families -------------------------------------------------


def rand_graph(rng: Random, nmax: int = 6, mmax: int = 12, nmin: int = 2, mmin: int = 1) -> Multigraph:
    n = rng.randint(nmin, nmax)
    edges = []
    for _ in range(rng.randint(mmin, mmax)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        edges.append((u, v))
    return Multigraph(n, tuple(edges))


def rand_parity(rng: Random, n: int, density: float = 0.7) -> dict[int, int]:
    return {v: rng.randint(0, 1) for v in range(n) if rng.random() < density}


def rand_forced(rng: Random, g: Multigraph, frac: float = 0.15) -> dict[int, int]:
    out = {}
    for e in range(g.edge_count):
        if rng.random() < frac:
            out[e] = g.edges[e][rng.randint(0, 1)]
    return out


def rand_conflicts(
    rng: Random,
    g: Multigraph,
    kind: ConflictKind,
    max_count: int = 3,
    max_size: int = 3,
) -> tuple[Conflict, ...]:
    """Up to max_count conflicts of one kind; overlaps are allowed."""
    out = []
    for _ in range(rng.randint(0, max_count)):
        v = rng.randrange(g.vertex_count)
        inc = g.incident(v)
        if not inc:
            continue
        size = rng.randint(1, min(max_size, len(inc)))
        out.append(Conflict(v, frozenset(rng.sample(inc, size)), kind))
    return tuple(out)


def rand_disjoint_pairs(rng: Random, g: Multigraph, max_count: int = 3) -> tuple[Conflict, ...]:
    """Pairwise disjoint exact conflict pairs, at most two per vertex."""
    out: list[Conflict] = []
    want = rng.randint(0, max_count)
    verts = list(range(g.vertex_count))
    rng.shuffle(verts)
    for v in verts:
        if len(out) >= want:
            break
        avail = list(g.incident(v))
        if len(avail) < 2:
            continue
        pair = rng.sample(avail, 2)
        out.append(Conflict(v, frozenset(pair), ConflictKind.EXACT))
        rest = [e for e in avail if e not in pair]
        if len(rest) >= 2 and len(out) < want and rng.random() < 0.3:
            out.append(Conflict(v, frozenset(rng.sample(rest, 2)), ConflictKind.EXACT))
    return tuple(out)


def random_regular_multigraph(rng: Random, n: int, degree: int) -> Multigraph:
    """Configuration model; parallels kept, pairings with self-loops redrawn."""
    stubs = [v for v in range(n) for _ in range(degree)]
    while True:
        rng.shuffle(stubs)
        pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        if all(u != v for u, v in pairs):
            return Multigraph(n, tuple(pairs))


def random_links(rng: Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


# --- brute-force baselines --------------------------------------------------


def brute_matching_size(node_count: int, links: list[tuple[int, int]]) -> int:
    """Maximum matching size by exhaustive search, memoized on covered nodes."""
    canon = sorted({(u, v) if u < v else (v, u) for u, v in links})
    assert node_count <= 16, "covered-node bitmask assumes a small graph"

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == len(canon):
            return 0
        u, v = canon[i]
        r = best(i + 1, used)
        if not used >> u & 1 and not used >> v & 1:
            r = max(r, 1 + best(i + 1, used | 1 << u | 1 << v))
        return r

    try:
        return best(0, 0)
    finally:
        best.cache_clear()


def is_connected(n: int, links: list[tuple[int, int]]) -> bool:
    if n == 0:
        return True
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in links:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


# --- deterministic exhaustive families --------------------------------------


def multigraphs_4v(max_total: int = 6, max_mult: int = 2):
    """Every multigraph on 4 vertices with bounded per-pair multiplicity."""
    pairs = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    for mults in product(range(max_mult + 1), repeat=len(pairs)):
        if not 1 <= sum(mults) <= max_total:
            continue
        edges = []
        for (u, v), k in zip(pairs, mults):
            edges.extend([(u, v)] * k)
        yield Multigraph(4, tuple(edges))


def conflict_menu(g: Multigraph, kind: ConflictKind, sizes: tuple[int, ...] = (2, 3, 4)):
    """Deterministic conflict configurations: prefix sets per vertex, plus
    one cross-vertex and one same-vertex disjoint double where degrees allow."""
    combos: list[tuple[Conflict, ...]] = []
    eligible = [v for v in range(g.vertex_count) if g.degree(v) >= 2]
    for v in eligible:
        inc = g.incident(v)
        for size in sizes:
            if size <= len(inc):
                combos.append((Conflict(v, frozenset(inc[:size]), kind),))
    if len(eligible) >= 2:
        u, v = eligible[0], eligible[1]
        combos.append(
            (
                Conflict(u, frozenset(g.incident(u)[:2]), kind),
                Conflict(v, frozenset(g.incident(v)[:2]), kind),
            )
        )
    for v in eligible:
        inc = g.incident(v)
        if len(inc) >= 4:
            combos.append(
                (
                    Conflict(v, frozenset(inc[:2]), kind),
                    Conflict(v, frozenset(inc[2:4]), kind),
                )
            )
            break
    return combos
