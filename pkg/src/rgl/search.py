"""Exact cycle oracles: girth, rainbow girth, rainbow triangles, and a simple baseline."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import ColoredGraph, CycleCertificate, Edge, canonical_edge, certify
from .rng import SplitMix64


def _adjacency(edges: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for a in adj:
        a.sort()
    return adj


def two_core(adj: list[list[int]]) -> list[bool]:
    """Membership mask of the 2-core; every cycle lies inside it."""
    deg = [len(a) for a in adj]
    alive = [True] * len(adj)
    stack = [v for v, d in enumerate(deg) if d < 2]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] < 2:
                    stack.append(w)
    return alive


def _tree_cycle(parent: list[int], dist: list[int], u: int, w: int) -> list[int]:
    """Simple cycle closed by the non-tree edge (u, w) through their BFS-tree LCA."""
    left, right = [u], [w]
    a, b = u, w
    while dist[a] > dist[b]:
        a = parent[a]
        left.append(a)
    while dist[b] > dist[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    right.pop()  # LCA already ends ``left``
    return left + right[::-1]


def girth_exact(edges: Iterable[Sequence[int]], n: int) -> tuple[int, CycleCertificate] | None:
    """Shortest cycle of a simple graph, or None for a forest.

    BFS from each 2-core vertex in increasing order; a processed root is deleted,
    which keeps the minimum exact because the first processed vertex of a shortest
    cycle still sees that cycle intact.
    """
    adj = _adjacency(edges, n)
    alive = two_core(adj)
    best = n + 1
    best_cycle: list[int] | None = None
    dist = [-1] * n
    parent = [-1] * n
    for r in range(n):
        if not alive[r]:
            continue
        dist[r] = 0
        parent[r] = r
        queue = [r]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            if 2 * du >= best:
                break
            pu = parent[u]
            for w in adj[u]:
                if not alive[w]:
                    continue
                dw = dist[w]
                if dw < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif w != pu and du + dw + 1 < best:
                    cyc = _tree_cycle(parent, dist, u, w)
                    if len(cyc) < best:
                        best, best_cycle = len(cyc), cyc
        for v in queue:
            dist[v] = -1
            parent[v] = -1
        alive[r] = False
    if best_cycle is None:
        return None
    return best, CycleCertificate(tuple(best_cycle))


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10**7
    max_len: int | None = None  # None: up to n

    def __post_init__(self):
        if self.max_nodes <= 0 or (self.max_len is not None and self.max_len <= 0):
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class RainbowGirthResult:
    status: str  # "found" | "none" | "unknown"
    length: int | None = None
    certificate: CycleCertificate | None = None
    lower_bound: int | None = None  # for "unknown": no rainbow cycle shorter than this
    nodes: int = 0

    def __str__(self) -> str:
        if self.status == "found":
            return f"found {self.length}"
        if self.status == "none":
            return "none"
        return f"unknown (>= {self.lower_bound})"


class _BudgetExhausted(Exception):
    pass


def rainbow_girth_exact(g: ColoredGraph, budget: SearchBudget = SearchBudget()) -> RainbowGirthResult:
    """Shortest rainbow cycle by iterative deepening over rainbow simple paths.

    A cycle of length L is searched from its smallest vertex s through vertices
    greater than s, pruning repeated colors and paths that cannot return to s in
    the remaining steps.
    """
    n = g.n
    max_len = n if budget.max_len is None else min(budget.max_len, n)
    cmap = g.color_map()
    union = girth_exact(cmap.keys(), n)
    if union is None:
        return RainbowGirthResult("none")
    cadj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for (u, v), c in sorted(cmap.items()):
        cadj[u].append((v, c))
        cadj[v].append((u, c))

    nodes = 0

    def search(s: int, L: int) -> list[int] | None:
        # hop distance back to s inside vertices >= s
        back = {s: 0}
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y, _ in cadj[x]:
                if y > s and y not in back:
                    back[y] = back[x] + 1
                    dq.append(y)
        path = [s]
        on_path = {s}

        def extend(u: int, used: int) -> bool:
            nonlocal nodes
            d = len(path) - 1  # edges so far
            for w, c in cadj[u]:
                bit = 1 << c
                if used & bit:
                    continue
                if d == L - 1:
                    if w == s:
                        return True
                    continue
                if w <= s or w in on_path or back.get(w, L) > L - d - 1:
                    continue
                nodes += 1
                if nodes > budget.max_nodes:
                    raise _BudgetExhausted
                path.append(w)
                on_path.add(w)
                if extend(w, used | bit):
                    return True
                path.pop()
                on_path.discard(w)
            return False

        return list(path) if extend(s, 0) else None

    for L in range(max(3, union[0]), max_len + 1):
        try:
            for s in range(n):
                cyc = search(s, L)
                if cyc is not None:
                    cert = certify(g, cyc, cmap)
                    return RainbowGirthResult("found", L, cert, nodes=nodes)
        except _BudgetExhausted:
            return RainbowGirthResult("unknown", lower_bound=L, nodes=nodes)
    if max_len >= n:
        return RainbowGirthResult("none", nodes=nodes)
    return RainbowGirthResult("unknown", lower_bound=max_len + 1, nodes=nodes)


def iter_triangles(g: ColoredGraph) -> Iterator[tuple[int, int, int]]:
    """Triangles u < v < w of the union graph in lexicographic order."""
    adj = [set(a) for a in g.adjacency()]
    for u in range(g.n):
        for v in sorted(x for x in adj[u] if x > u):
            for w in sorted(x for x in adj[u] & adj[v] if x > v):
                yield u, v, w


def find_rainbow_triangle(g: ColoredGraph) -> CycleCertificate | None:
    """First rainbow triangle; in matching mode every triangle qualifies."""
    cmap = g.color_map()
    for tri in iter_triangles(g):
        cert = certify(g, tri, cmap)
        if cert.rainbow:
            return cert
    return None


def baseline_one_edge_per_color(g: ColoredGraph, seed: int = 0) -> CycleCertificate:
    """Keep one random edge per color and return any cycle among them.

    With at least n colors on n vertices the selection has a cycle, and a cycle
    using one edge per color is rainbow.
    """
    if g.num_colors < g.n:
        raise ValueError(f"{g.num_colors} colors < {g.n} vertices: selection may be acyclic")
    rng = SplitMix64(seed)
    chosen: dict[Edge, int] = {}
    for i, cls in enumerate(g.classes):
        chosen[canonical_edge(*cls[rng.below(len(cls))])] = i
    adj = _adjacency(chosen.keys(), g.n)
    alive = two_core(adj)
    start = next((v for v in range(g.n) if alive[v]), None)
    if start is None:
        raise RuntimeError("peeling removed every vertex; selection was acyclic")
    order = {start: 0}
    walk = [start]
    prev, cur = -1, start
    while True:
        nxt = next(w for w in adj[cur] if alive[w] and w != prev)
        if nxt in order:
            cyc = walk[order[nxt]:]
            break
        order[nxt] = len(walk)
        walk.append(nxt)
        prev, cur = cur, nxt
    L = len(cyc)
    colors = tuple(chosen[canonical_edge(cyc[i], cyc[(i + 1) % L])] for i in range(L))
    return CycleCertificate(tuple(cyc), colors)
