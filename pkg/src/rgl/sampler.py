"""Random vertex subsets and the short-rainbow-cycle finder.

Each attempt keeps every vertex with probability p, counts the colors with an
edge inside the subset S, and, when |S| is small and that count is large, takes
one contained edge per color. Those X edges on |S| vertices form a rainbow graph
with X - |S| excess edges, whose girth is then computed exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .analysis import TheoremParams, bs_bound
from .core import MATCHING, ColoredGraph, CycleCertificate, Edge, require_valid
from .rng import SplitMix64, trial_seed
from .search import girth_exact

N0 = 64
DEFAULT_RETRIES = 50


class FinderFailure(RuntimeError):
    def __init__(self, reason: str, attempts: list[tuple[int, int]] | None = None):
        super().__init__(reason)
        self.reason = reason
        self.attempts = attempts or []


class InstanceTooSmall(FinderFailure):
    pass


def sample_S(n: int, p: float, rng: SplitMix64) -> np.ndarray:
    """Boolean membership array; vertex v uses the (v+1)-th draw of ``rng``."""
    if not 0 < p < 1:
        raise ValueError(f"p = {p} outside (0, 1)")
    return rng.block_random(n) < p


def _sorted_class_arrays(g: ColoredGraph) -> np.ndarray:
    """(K, 2, 2) endpoints, edges of each class in lexicographic order."""
    arr = np.array([sorted(cls) for cls in g.classes], dtype=np.int64)
    if arr.ndim != 3 or arr.shape[1:] != (2, 2):
        raise ValueError("every class must have exactly two edges")
    return arr


@dataclass
class SampleOutcome:
    S: np.ndarray
    size_S: int
    X: int
    selected: dict[int, Edge] = field(repr=False)


def _contained(arr: np.ndarray, S: np.ndarray) -> np.ndarray:
    return S[arr[:, :, 0]] & S[arr[:, :, 1]]


def count_X(g: ColoredGraph, S: np.ndarray, arr: np.ndarray | None = None) -> SampleOutcome:
    """Select the lexicographically smallest contained edge of every color."""
    arr = _sorted_class_arrays(g) if arr is None else arr
    S = np.asarray(S, dtype=bool)
    inside = _contained(arr, S)
    which = np.where(inside[:, 0], 0, 1)
    hit = inside.any(axis=1)
    selected = {
        int(i): Edge(int(arr[i, w, 0]), int(arr[i, w, 1]))
        for i, w in zip(np.flatnonzero(hit), which[hit])
    }
    return SampleOutcome(S, int(S.sum()), len(selected), selected)


def build_rainbow_subgraph(outcome: SampleOutcome) -> list[tuple[Edge, int]]:
    """The selected edges with their colors, in color order."""
    return sorted(((e, c) for c, e in outcome.selected.items()), key=lambda ec: ec[1])


def _thresholds(n: int, params: TheoremParams) -> tuple[float, float]:
    size_cap = (1 + params.eps) * n * params.p
    x_floor = (1 - params.eps) * params.alpha * n * params.q
    return size_cap, x_floor


def _accepts(size_S: int, X: int, size_cap: float, x_floor: float) -> bool:
    return size_S <= size_cap and X >= x_floor and X - size_S >= 2


@dataclass
class FinderReport:
    outcome: SampleOutcome
    retries: int
    k: int
    bound: float
    cycle: CycleCertificate
    elapsed: float
    params: TheoremParams
    attempts: list[tuple[int, int]]

    @property
    def size_S(self) -> int:
        return self.outcome.size_S

    @property
    def X(self) -> int:
        return self.outcome.X

    def lines(self, timing: bool = False) -> list[str]:
        p = self.params
        out = [
            f"params alpha={p.alpha:.12g} p={p.p:.12g} eps={p.eps:.12g} delta={p.delta:.12g}",
            f"retries {self.retries}",
            f"size_S {self.size_S}",
            f"X {self.X}",
            f"k {self.k}",
            f"bound {self.bound:.12g}",
            f"cycle_len {len(self.cycle)}",
            "cycle " + " ".join(map(str, self.cycle.vertices)),
            "colors " + " ".join(map(str, self.cycle.colors)),
        ]
        if timing:
            out.append(f"elapsed_ms {self.elapsed * 1000:.3f}")
        return out


def prepare_instance(g: ColoredGraph) -> ColoredGraph:
    """Truncate classes larger than two to their two smallest edges."""
    require_valid(g, MATCHING)
    if any(len(c) < 2 for c in g.classes):
        raise ValueError("every color class needs at least two edges")
    if all(len(c) == 2 for c in g.classes):
        return g
    return ColoredGraph(g.n, tuple(tuple(sorted(c)[:2]) for c in g.classes))


def _check_hypotheses(g: ColoredGraph, params: TheoremParams, n0: int) -> None:
    if g.n < n0:
        raise InstanceTooSmall(f"instance too small (n = {g.n} < {n0}), use rainbow-girth")
    if g.num_colors < params.alpha * g.n:
        raise FinderFailure(
            f"{g.num_colors} colors < alpha*n = {params.alpha * g.n:.6g}; hypothesis not met"
        )


def find_short_rainbow_cycle(
    g: ColoredGraph,
    params: TheoremParams,
    seed: int = 0,
    max_retries: int = DEFAULT_RETRIES,
    n0: int = N0,
) -> FinderReport:
    """Las Vegas search: up to ``1 + max_retries`` sampled subsets, then exact girth."""
    start = time.perf_counter()
    params.check()
    g = prepare_instance(g)
    _check_hypotheses(g, params, n0)
    n = g.n
    arr = _sorted_class_arrays(g)
    size_cap, x_floor = _thresholds(n, params)
    rng = SplitMix64(seed)
    attempts: list[tuple[int, int]] = []
    for attempt in range(max_retries + 1):
        S = sample_S(n, params.p, rng)
        outcome = count_X(g, S, arr)
        attempts.append((outcome.size_S, outcome.X))
        if not _accepts(outcome.size_S, outcome.X, size_cap, x_floor):
            continue
        sub = build_rainbow_subgraph(outcome)
        members = np.flatnonzero(S)
        local = np.full(n, -1, dtype=np.int64)
        local[members] = np.arange(len(members))
        found = girth_exact([(local[e.u], local[e.v]) for e, _ in sub], len(members))
        if found is None:
            raise RuntimeError("rainbow subgraph with more edges than vertices is acyclic")
        _, cyc = found
        verts = tuple(int(members[v]) for v in cyc.vertices)
        color_of = {e: c for e, c in sub}
        L = len(verts)
        colors = tuple(color_of[Edge(*sorted((verts[i], verts[(i + 1) % L])))] for i in range(L))
        k = outcome.X - outcome.size_S
        return FinderReport(
            outcome=outcome,
            retries=attempt,
            k=k,
            bound=bs_bound(outcome.size_S, k),
            cycle=CycleCertificate(verts, colors),
            elapsed=time.perf_counter() - start,
            params=params,
            attempts=attempts,
        )
    raise FinderFailure(f"retries exhausted after {len(attempts)} attempts", attempts)


@dataclass(frozen=True)
class AttemptStat:
    size_S: int
    X: int
    success: bool


def attempt_stats(g: ColoredGraph, params: TheoremParams, seed: int, trials: int) -> list[AttemptStat]:
    """One sampled subset per trial, trial i seeded with ``trial_seed(seed, i)``."""
    g = prepare_instance(g)
    arr = _sorted_class_arrays(g)
    size_cap, x_floor = _thresholds(g.n, params)
    out = []
    for i in range(trials):
        S = sample_S(g.n, params.p, SplitMix64(trial_seed(seed, i)))
        size_S = int(S.sum())
        X = int(_contained(arr, S).any(axis=1).sum())
        out.append(AttemptStat(size_S, X, _accepts(size_S, X, size_cap, x_floor)))
    return out
