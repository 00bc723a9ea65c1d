"""Edge-colored graph instances, validation, cycle certificates and the RGC format."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

GENERAL = "general"
MATCHING = "matching"
MATCHING2 = "matching2"
MODES = (GENERAL, MATCHING, MATCHING2)


class Edge(NamedTuple):
    u: int
    v: int


def canonical_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return Edge(u, v) if u < v else Edge(v, u)


@dataclass(frozen=True)
class ColoredGraph:
    """``n`` vertices and an ordered tuple of color classes; color i is ``classes[i]``."""

    n: int
    classes: tuple[tuple[Edge, ...], ...]

    @classmethod
    def from_lists(cls, n: int, classes: Iterable[Iterable[Sequence[int]]]) -> "ColoredGraph":
        return cls(n, tuple(tuple(canonical_edge(a, b) for a, b in c) for c in classes))

    @property
    def num_colors(self) -> int:
        return len(self.classes)

    def edges(self) -> list[Edge]:
        return [e for c in self.classes for e in c]

    def color_map(self) -> dict[Edge, int]:
        """Edge -> color. With duplicate edges the first color wins."""
        out: dict[Edge, int] = {}
        for i, c in enumerate(self.classes):
            for e in c:
                out.setdefault(e, i)
        return out

    def adjacency(self) -> list[list[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges():
            adj[u].add(v)
            adj[v].add(u)
        return [sorted(s) for s in adj]


@dataclass
class Violation:
    kind: str
    color: int | None
    detail: str


@dataclass
class ValidationReport:
    mode: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def rainbow_digon(self) -> bool:
        """True when some edge carries two colors, i.e. the rainbow girth is 2."""
        return any(v.kind == "duplicate-edge" for v in self.violations)

    def summary(self) -> str:
        if self.ok:
            return f"valid ({self.mode})"
        lines = [f"invalid ({self.mode}): {len(self.violations)} violation(s)"]
        lines += [f"  {v.kind}: {v.detail}" for v in self.violations]
        return "\n".join(lines)


def validate(g: ColoredGraph, mode: str = GENERAL) -> ValidationReport:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    report = ValidationReport(mode)
    add = report.violations.append
    if g.n < 0:
        add(Violation("bad-vertex-count", None, f"n = {g.n}"))
    seen: dict[Edge, int] = {}
    for i, cls in enumerate(g.classes):
        if not cls:
            add(Violation("empty-class", i, f"color {i} has no edges"))
        for e in cls:
            if e.u == e.v:
                add(Violation("loop", i, f"loop {e} in color {i}"))
            if not (0 <= e.u < g.n and 0 <= e.v < g.n):
                add(Violation("endpoint-out-of-range", i, f"edge {tuple(e)} in color {i}, n = {g.n}"))
            if e in seen:
                add(Violation(
                    "duplicate-edge", i,
                    f"edge {tuple(e)} in colors {seen[e]} and {i}; "
                    "the doubled edge is a rainbow digon (rainbow girth 2)",
                ))
            else:
                seen[e] = i
        if mode in (MATCHING, MATCHING2):
            verts = [x for e in cls for x in e]
            if len(set(verts)) != len(verts):
                add(Violation("non-matching", i, f"color {i} edges share a vertex"))
        if mode == MATCHING2 and len(cls) != 2:
            add(Violation("wrong-class-size", i, f"color {i} has {len(cls)} edges, expected 2"))
    return report


class InvalidInstance(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(report.summary())
        self.report = report


def require_valid(g: ColoredGraph, mode: str) -> ColoredGraph:
    report = validate(g, mode)
    if not report.ok:
        raise InvalidInstance(report)
    return g


@dataclass(frozen=True)
class CycleCertificate:
    """Cycle v0 .. v_{L-1}; ``colors[i]`` is the color of edge {v_i, v_{i+1 mod L}}."""

    vertices: tuple[int, ...]
    colors: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def rainbow(self) -> bool:
        return len(self.colors) == len(self.vertices) and len(set(self.colors)) == len(self.colors)

    def edges(self) -> list[Edge]:
        L = len(self.vertices)
        return [canonical_edge(self.vertices[i], self.vertices[(i + 1) % L]) for i in range(L)]


def certify(g: ColoredGraph, vertices: Sequence[int], cmap: dict[Edge, int] | None = None) -> CycleCertificate:
    """Attach instance colors to a vertex cycle."""
    cmap = g.color_map() if cmap is None else cmap
    L = len(vertices)
    colors = tuple(cmap[canonical_edge(vertices[i], vertices[(i + 1) % L])] for i in range(L))
    return CycleCertificate(tuple(vertices), colors)


@dataclass(frozen=True)
class CycleCheck:
    valid: bool
    rainbow: bool = False
    reason: str | None = None

    def __str__(self) -> str:
        if not self.valid:
            return f"invalid ({self.reason})"
        return "valid rainbow" if self.rainbow else "valid non-rainbow"


def verify_cycle(g: ColoredGraph, c: CycleCertificate) -> CycleCheck:
    vs, cs = c.vertices, c.colors
    L = len(vs)
    if L < 3:
        return CycleCheck(False, reason="cycle shorter than 3")
    if len(cs) != L:
        return CycleCheck(False, reason="color count differs from length")
    if len(set(vs)) != L:
        return CycleCheck(False, reason="repeated vertex")
    if any(not (0 <= v < g.n) for v in vs):
        return CycleCheck(False, reason="vertex out of range")
    for i in range(L):
        e = canonical_edge(vs[i], vs[(i + 1) % L])
        col = cs[i]
        if not (0 <= col < g.num_colors):
            return CycleCheck(False, reason=f"unknown color {col}")
        if e not in g.classes[col]:
            if any(e in cls for cls in g.classes):
                return CycleCheck(False, reason=f"edge {tuple(e)} does not carry color {col}")
            return CycleCheck(False, reason=f"missing edge {tuple(e)}")
    return CycleCheck(True, rainbow=len(set(cs)) == L)


# --- RGC text format -------------------------------------------------------

class RGCParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise RGCParseError(lineno, f"non-integer token in {' '.join(tokens)!r}") from None
    if any(v < 0 for v in vals):
        raise RGCParseError(lineno, "negative integer")
    return vals


def parse_rgc(text: str) -> ColoredGraph:
    lines = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body.split()))
    if not lines or lines[0][1] != ["rgc", "1"]:
        raise RGCParseError(lines[0][0] if lines else 1, "expected header 'rgc 1'")
    if len(lines) < 2:
        raise RGCParseError(lines[0][0], "missing 'n <N> colors <K>' line")
    lineno, toks = lines[1]
    if len(toks) != 4 or toks[0] != "n" or toks[2] != "colors":
        raise RGCParseError(lineno, "expected 'n <N> colors <K>'")
    n, k = _ints([toks[1], toks[3]], lineno)
    body = lines[2:]
    if len(body) != k:
        where = body[k][0] if len(body) > k else (body[-1][0] if body else lineno)
        raise RGCParseError(where, f"expected {k} color lines, found {len(body)}")
    classes = []
    for lineno, toks in body:
        if toks[0] != "c":
            raise RGCParseError(lineno, f"expected color line 'c ...', got {toks[0]!r}")
        vals = _ints(toks[1:], lineno)
        if len(vals) % 2:
            raise RGCParseError(lineno, "odd number of vertex tokens")
        if not vals:
            raise RGCParseError(lineno, "empty color class")
        cls = []
        for a, b in zip(vals[::2], vals[1::2]):
            if a >= n or b >= n:
                raise RGCParseError(lineno, f"endpoint of ({a},{b}) >= n = {n}")
            if a == b:
                raise RGCParseError(lineno, f"loop at vertex {a}")
            cls.append(canonical_edge(a, b))
        classes.append(tuple(cls))
    return ColoredGraph(n, tuple(classes))


def serialize_rgc(g: ColoredGraph) -> str:
    out = ["rgc 1", f"n {g.n} colors {g.num_colors}"]
    for cls in g.classes:
        out.append("c " + " ".join(f"{min(e)} {max(e)}" for e in cls))
    return "\n".join(out) + "\n"


def read_rgc(path) -> ColoredGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_rgc(fh.read())


def write_rgc(g: ColoredGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_rgc(g))
