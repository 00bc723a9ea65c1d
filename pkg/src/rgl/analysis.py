"""Closed-form quantities for random vertex subsets of 2-matching instances.

Joint probabilities are computed by exhaustive subset enumeration, which is the
ground truth here; the printed case polynomials (``poly_case*_paper``) are kept
only to be compared against it.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .core import MATCHING2, ColoredGraph, Edge, require_valid

GOLDEN_P = (math.sqrt(5.0) - 1.0) / 2.0
ALPHA0 = 3.0 * math.sqrt(6.0) / 8.0
P0 = math.sqrt(6.0) / 3.0
MAX_GADGET_VERTICES = 16
GRID_STEP = 1e-4
BISECT_TOL = 1e-10


class PairType(str, enum.Enum):
    DISJOINT = "Disjoint"
    CONTAINED_EDGE = "ContainedEdge"
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    OTHER_OVERLAP = "OtherOverlap"

    def __str__(self) -> str:
        return self.value


def _check_pair(mi: Sequence[Edge], mj: Sequence[Edge]) -> None:
    for m in (mi, mj):
        if len(m) != 2 or len({m[0].u, m[0].v, m[1].u, m[1].v}) != 4:
            raise ValueError(f"{m} is not a matching of size 2")
    if set(mi) & set(mj):
        raise ValueError("classes share an edge")


def classify_pair(mi: Sequence[Edge], mj: Sequence[Edge]) -> PairType:
    """Shape of the union of two edge-disjoint 2-matchings.

    ContainedEdge is directional: some edge of ``mj`` lies inside V(mi). The mirror
    situation, an edge of ``mi`` inside V(mj) with two shared vertices, is
    OtherOverlap (a 3-edge path whose middle edge belongs to ``mi``, plus an edge).
    """
    _check_pair(mi, mj)
    vi = {x for e in mi for x in e}
    vj = {x for e in mj for x in e}
    shared = vi & vj
    if not shared:
        return PairType.DISJOINT
    if any(e.u in vi and e.v in vi for e in mj):
        return PairType.CONTAINED_EDGE
    if len(shared) == 1:
        return PairType.TYPE_I
    # exactly 2 shared; 3 or 4 force an edge of mj inside V(mi)
    a, b = shared
    if any(a in e and b in e for e in mi):
        return PairType.OTHER_OVERLAP
    return PairType.TYPE_II


@dataclass
class PairCensus:
    counts: dict[PairType, int] = field(default_factory=lambda: {t: 0 for t in PairType})

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, t: PairType | str) -> int:
        return self.counts[PairType(t)]

    def as_dict(self) -> dict[str, int]:
        return {t.value: self.counts[t] for t in PairType}


def _overlapping_pairs(g: ColoredGraph) -> list[tuple[int, int]]:
    """All (i, j), i < j, whose classes share a vertex, in lexicographic order."""
    by_vertex: dict[int, list[int]] = defaultdict(list)
    for i, cls in enumerate(g.classes):
        for x in {x for e in cls for x in e}:
            by_vertex[x].append(i)
    pairs: set[tuple[int, int]] = set()
    for members in by_vertex.values():
        pairs.update(combinations(members, 2))
    return sorted(pairs)


def pair_census(g: ColoredGraph, method: str = "auto") -> PairCensus:
    """Count unordered class pairs (i < j) by ``classify_pair(M_i, M_j)``."""
    k = g.num_colors
    if method == "auto":
        method = "brute" if k <= 300 else "indexed"
    census = PairCensus()
    if method == "brute":
        for i, j in combinations(range(k), 2):
            census.counts[classify_pair(g.classes[i], g.classes[j])] += 1
    elif method == "indexed":
        overlapping = _overlapping_pairs(g)
        for i, j in overlapping:
            census.counts[classify_pair(g.classes[i], g.classes[j])] += 1
        census.counts[PairType.DISJOINT] = k * (k - 1) // 2 - len(overlapping)
    else:
        raise ValueError(f"unknown census method {method!r}")
    return census


# --- marginals and printed polynomials -------------------------------------

def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")


def marginal_prob(p: float) -> float:
    """P(some edge of a 2-matching lies in S) = 2p^2 - p^4."""
    _check_prob(p)
    return 2 * p * p - p**4


def poly_caseI_paper(p: float) -> float:
    """p^3 + 3p^4 - 3p^5 - 3p^6 + 3p^7, as printed."""
    return p**3 * (1 + p * (3 + p * (-3 + p * (-3 + 3 * p))))


def poly_caseII_paper(p: float) -> float:
    """2p^3 + 2p^4 - 6p^5 + 3p^6, as printed."""
    return p**3 * (2 + p * (2 + p * (-6 + 3 * p)))


def poly_g(p: float) -> float:
    """4p^4 - 4p^6 + p^8, the product of two marginals."""
    q = p * p
    return q * q * (4 + q * (-4 + q))


# --- exact joint probabilities ---------------------------------------------

def _compact(classes: Sequence[Sequence[Edge]]) -> tuple[int, list[list[tuple[int, int]]]]:
    """Relabel the vertices touched by ``classes`` to 0..V-1 in first-seen order."""
    label: dict[int, int] = {}
    out = []
    for cls in classes:
        out.append([(label.setdefault(e.u, len(label)), label.setdefault(e.v, len(label))) for e in cls])
    return len(label), out


def _designated(gadget: ColoredGraph, pair: tuple[int, int]):
    if gadget.n > MAX_GADGET_VERTICES:
        raise ValueError(f"gadget has {gadget.n} > {MAX_GADGET_VERTICES} vertices")
    return [gadget.classes[pair[0]], gadget.classes[pair[1]]]


def _weighted_sum(counts: Sequence[int], V: int, p: float) -> float:
    return math.fsum(c * p**k * (1 - p) ** (V - k) for k, c in enumerate(counts) if c)


def _joint_counts(V: int, classes: list[list[tuple[int, int]]]) -> list[int]:
    """counts[k] = number of k-subsets of V vertices containing an edge of every class."""
    masks = [[(1 << a) | (1 << b) for a, b in cls] for cls in classes]
    counts = [0] * (V + 1)
    for T in range(1 << V):
        if all(any(T & m == m for m in ms) for ms in masks):
            counts[T.bit_count()] += 1
    return counts


def joint_prob_exact(gadget: ColoredGraph, p: float, pair: tuple[int, int] = (0, 1)) -> float:
    """P(X_i = X_j = 1) by summing over every vertex subset of the pair's support."""
    _check_prob(p)
    V, classes = _compact(_designated(gadget, pair))
    return _weighted_sum(_joint_counts(V, classes), V, p)


def joint_prob_inclusion_exclusion(gadget: ColoredGraph, p: float, pair: tuple[int, int] = (0, 1)) -> float:
    """Same quantity via inclusion-exclusion over the events {e1 in S and e2 in S}."""
    _check_prob(p)
    (a, b), (c, d) = _designated(gadget, pair)
    events = [set(a) | set(c), set(a) | set(d), set(b) | set(c), set(b) | set(d)]
    terms = []
    for r in range(1, 5):
        for combo in combinations(events, r):
            terms.append((-1) ** (r + 1) * p ** len(set().union(*combo)))
    return math.fsum(terms)


def covariance_exact(gadget: ColoredGraph, p: float, pair: tuple[int, int] = (0, 1)) -> float:
    m = marginal_prob(p)
    return joint_prob_exact(gadget, p, pair) - m * m


def variance_exact(g: ColoredGraph, p: float, cap: int = 10**6) -> float:
    """Var X for X = number of colors with an edge inside the random subset."""
    _check_prob(p)
    require_valid(g, MATCHING2)
    pairs = _overlapping_pairs(g)
    if len(pairs) > cap:
        raise ValueError(f"{len(pairs)} overlapping pairs exceed cap {cap}")
    m = marginal_prob(p)
    cache: dict[tuple, float] = {}
    terms = [g.num_colors * m * (1 - m)]
    for i, j in pairs:
        V, classes = _compact([g.classes[i], g.classes[j]])
        key = (V, tuple(map(tuple, classes)))
        if key not in cache:
            cache[key] = _weighted_sum(_joint_counts(V, classes), V, p) - m * m
        terms.append(2 * cache[key])
    return math.fsum(terms)


# --- bounds ----------------------------------------------------------------

def bs_bound(n: int, k: float) -> float:
    """Girth bound for n vertices and n + k edges (base-2 logarithms)."""
    if n < 4 or k < 2:
        raise ValueError(f"need n >= 4 and k >= 2, got n={n}, k={k}")
    return 2 * (n + k) / (3 * k) * (math.log2(k) + math.log2(math.log2(k)) + 4)


def chernoff_bound(mean: float, eps: float) -> float:
    """Upper tail P(X >= (1+eps) E X) <= exp(-eps^2 E X / 3) for a binomial X."""
    if mean <= 0 or not 0 < eps < 1:
        raise ValueError(f"need mean > 0 and 0 < eps < 1, got {mean}, {eps}")
    return math.exp(-eps * eps * mean / 3)


def chebyshev_bound(var: float, mean: float, eps: float) -> float:
    if var < 0 or mean <= 0 or eps <= 0:
        raise ValueError(f"need var >= 0, mean > 0, eps > 0, got {var}, {mean}, {eps}")
    return var / (eps * mean) ** 2


# --- threshold on the number of colors -------------------------------------

def alpha_threshold() -> tuple[float, float]:
    return ALPHA0, P0


def _bisect(f, lo: float, hi: float, tol: float = BISECT_TOL) -> float:
    """Root of f in [lo, hi] given a sign change; returns the midpoint of the last bracket."""
    flo = f(lo) < 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def feasible_p_interval(alpha: float) -> tuple[float, float] | None:
    """Open interval of p in (0, 1) with p < alpha (2p^2 - p^4), or None.

    Equivalent to alpha p^3 - 2 alpha p + 1 < 0. That cubic is convex on (0, 1) with
    its minimum at sqrt(2/3), so the set is a single interval; the minimizer is added
    to the scan grid so that intervals narrower than the grid are still found.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if alpha <= ALPHA0:
        return None

    def h(p: float) -> float:
        return alpha * p**3 - 2 * alpha * p + 1

    steps = round(1 / GRID_STEP)
    grid = sorted({i * GRID_STEP for i in range(steps + 1)} | {P0})
    neg = [i for i, x in enumerate(grid) if h(x) < 0]
    if not neg:
        return None
    first, last = neg[0], neg[-1]
    lo = _bisect(h, grid[first - 1], grid[first])
    hi = 1.0 if last == len(grid) - 1 else _bisect(h, grid[last], grid[last + 1])
    return lo, hi


@dataclass(frozen=True)
class TheoremParams:
    alpha: float
    p: float
    eps: float
    delta: float

    @property
    def q(self) -> float:
        return marginal_prob(self.p)

    @property
    def c(self) -> float:
        """Relative size bound on the sampled subset, (1 + eps) p."""
        return (1 + self.eps) * self.p

    def slack(self) -> float:
        """(1-eps) alpha q - (1+eps) p - delta; nonnegative when the margin holds."""
        return (1 - self.eps) * self.alpha * self.q - (1 + self.eps) * self.p - self.delta

    def check(self) -> None:
        if not 0 < self.p < 1:
            raise ValueError(f"p = {self.p} outside (0, 1)")
        if self.eps <= 0:
            raise ValueError(f"eps = {self.eps} must be positive")
        if not self.delta > 0:
            raise ValueError(f"no separation: alpha q - p = {3 * self.delta} <= 0 at p = {self.p}")
        if self.slack() < 0:
            raise ValueError(f"margin fails: slack {self.slack():.3e} at eps = {self.eps}")


def make_params(alpha: float, p: float, eps: float | None = None) -> TheoremParams:
    """Params for a caller-chosen p; eps defaults to half its admissible maximum."""
    _check_prob(p)
    delta = (alpha * marginal_prob(p) - p) / 3
    if eps is None:
        eps = delta / (alpha * marginal_prob(p) + p)
    params = TheoremParams(alpha, p, eps, delta)
    params.check()
    return params


def select_parameters(alpha: float) -> TheoremParams:
    """Maximize the separation alpha(2p^2 - p^4) - p over the feasible interval."""
    interval = feasible_p_interval(alpha)
    if interval is None:
        raise ValueError(f"alpha = {alpha} <= {ALPHA0:.10f}: no feasible p")
    lo, hi = interval

    def slope(p: float) -> float:
        return alpha * (4 * p - 4 * p**3) - 1

    steps = max(2, math.ceil((hi - lo) / GRID_STEP))
    grid = [lo + (hi - lo) * i / steps for i in range(steps + 1)]
    p_star = None
    for a, b in zip(grid, grid[1:]):
        if slope(a) >= 0 > slope(b):
            p_star = _bisect(slope, a, b)
    if p_star is None:
        # separation is monotone on the interval; take the better end
        p_star = max(grid[1:-1] or grid, key=lambda x: alpha * marginal_prob(x) - x)
    return make_params(alpha, p_star)
