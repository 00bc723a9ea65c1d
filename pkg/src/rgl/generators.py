"""Instance families: stars, random 2-matchings, hub stress instances, pair gadgets."""

from __future__ import annotations

from .analysis import PairType
from .core import ColoredGraph, Edge, canonical_edge
from .rng import SplitMix64

REJECTION_BUDGET = 10**6


class GenerationError(RuntimeError):
    pass


def gen_stars(n: int, r: int) -> ColoredGraph:
    """Class i is the star {i,i+1}, ..., {i,i+r} with indices mod n."""
    if r < 1 or n < 2 * r + 1:
        raise ValueError(f"stars need r >= 1 and n >= 2r+1, got n={n}, r={r}")
    return ColoredGraph.from_lists(n, [[(i, (i + j) % n) for j in range(1, r + 1)] for i in range(n)])


def gen_random_two_matchings(n: int, k: int, seed: int, budget: int = REJECTION_BUDGET) -> ColoredGraph:
    """k classes of two vertex-disjoint edges, globally distinct, deterministic per seed.

    Each class draws 4 distinct vertices v0..v3 and forms (v0,v1), (v2,v3); a class
    whose edges collide with earlier ones is redrawn. Raises GenerationError once
    ``budget`` rejections have been spent.
    """
    if n < 4:
        raise GenerationError(f"n = {n}: a 2-matching needs 4 vertices")
    total_edges = n * (n - 1) // 2
    if 2 * k > total_edges:
        raise GenerationError(f"{k} colors need {2 * k} edges; K_{n} has {total_edges}")
    rng = SplitMix64(seed)
    used: set[Edge] = set()
    classes: list[tuple[Edge, Edge]] = []
    rejections = 0
    while len(classes) < k:
        if total_edges - len(used) < 2:
            raise GenerationError(f"no room for color {len(classes)}: all edges of K_{n} used")
        if rejections >= budget:
            raise GenerationError(f"rejection budget {budget} exhausted after {len(classes)} colors")
        picked: list[int] = []
        while len(picked) < 4:
            v = rng.below(n)
            if v in picked:
                continue
            picked.append(v)
        a = canonical_edge(picked[0], picked[1])
        b = canonical_edge(picked[2], picked[3])
        if a in used or b in used:
            rejections += 1
            continue
        used.add(a)
        used.add(b)
        classes.append((a, b))
    return ColoredGraph(n, tuple(classes))


def gen_hub(k: int) -> ColoredGraph:
    """Every pair of classes meets in vertex 0 only: k(k-1)/2 TypeI pairs."""
    if k < 2:
        raise ValueError("hub needs k >= 2")
    return ColoredGraph.from_lists(
        3 * k + 1, [[(0, i), (k + 2 * i - 1, k + 2 * i)] for i in range(1, k + 1)]
    )


# x=0 y=1 u=2 v=3, then z, s, t as needed; class 0 is always {xy, uv}
_GADGETS = {
    PairType.DISJOINT: (8, [(4, 5), (6, 7)]),
    PairType.CONTAINED_EDGE: (6, [(0, 2), (4, 5)]),  # {xu, st}
    PairType.TYPE_I: (7, [(0, 4), (5, 6)]),  # {xz, st}
    PairType.TYPE_II: (6, [(0, 4), (2, 5)]),  # {xz, us}
    PairType.OTHER_OVERLAP: (6, [(0, 4), (1, 5)]),  # {xz, yt}
}


def gen_gadget(t: PairType) -> ColoredGraph:
    """Minimal 2-color instance whose class pair (0, 1) has shape ``t``."""
    n, second = _GADGETS[PairType(t)]
    return ColoredGraph.from_lists(n, [[(0, 1), (2, 3)], second])


def gen_k4_matchings() -> ColoredGraph:
    return ColoredGraph.from_lists(4, [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]])


def gen_two_squares() -> ColoredGraph:
    return ColoredGraph.from_lists(
        8, [[(0, 1), (4, 5)], [(1, 2), (5, 6)], [(2, 3), (6, 7)], [(0, 3), (4, 7)]]
    )


def gen_random_graph(n: int, m: int, seed: int) -> list[Edge]:
    """m distinct uniform edges on n vertices (uncolored)."""
    if m > n * (n - 1) // 2:
        raise ValueError(f"{m} edges do not fit on {n} vertices")
    rng = SplitMix64(seed)
    edges: set[Edge] = set()
    out: list[Edge] = []
    while len(out) < m:
        a, b = rng.below(n), rng.below(n)
        if a == b:
            continue
        e = canonical_edge(a, b)
        if e not in edges:
            edges.add(e)
            out.append(e)
    return out


FAMILIES = ("stars", "matchings", "hub", "gadget", "k4", "squares")
