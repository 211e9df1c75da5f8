"""Directed graphs with edge bundles of finite or infinite multiplicity.

A graph stores at most one bundle per ordered vertex pair.  Finite bundles
name every edge; infinite bundles name a finite (possibly empty) set of
representatives and the remaining edges exist only abstractly.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import UnknownEdgeError, UnknownVertexError, ValidationError

INF = math.inf

SINK = "sink"
REGULAR = "regular"
INFINITE_EMITTER = "infinite_emitter"


@dataclass(frozen=True)
class EdgeBundle:
    source: str
    target: str
    multiplicity: int | float
    names: tuple[str, ...] = ()

    @property
    def infinite(self) -> bool:
        return self.multiplicity == INF


@dataclass(frozen=True)
class Cycle:
    """A simple closed path of named edges in canonical rotation."""

    edges: tuple[str, ...]
    base: str

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    bundles: tuple[EdgeBundle, ...]
    _out: dict = field(default=None, compare=False, repr=False, hash=False)
    _in: dict = field(default=None, compare=False, repr=False, hash=False)
    _edges: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        vertices = tuple(sorted(set(self.vertices)))
        if len(vertices) != len(self.vertices):
            raise ValidationError("duplicate_vertex", "vertex declared twice")
        for v in vertices:
            if not isinstance(v, str) or not v:
                raise ValidationError("bad_vertex", f"vertex ids must be nonempty strings, got {v!r}")
        vset = set(vertices)
        out: dict[str, list[EdgeBundle]] = {v: [] for v in vertices}
        inc: dict[str, list[EdgeBundle]] = {v: [] for v in vertices}
        edges: dict[str, tuple[str, str]] = {}
        seen_pairs = set()
        kept = []
        for b in self.bundles:
            missing = {b.source, b.target} - vset
            if missing:
                raise UnknownVertexError(missing)
            if (b.source, b.target) in seen_pairs:
                raise ValidationError(
                    "duplicate_bundle",
                    f"more than one bundle {b.source} -> {b.target}",
                    vertices=(b.source, b.target),
                )
            seen_pairs.add((b.source, b.target))
            if b.multiplicity != INF:
                if not isinstance(b.multiplicity, int) or b.multiplicity < 0:
                    raise ValidationError("bad_multiplicity", f"bad multiplicity {b.multiplicity!r}")
                if len(b.names) != b.multiplicity:
                    raise ValidationError(
                        "unnamed_finite_bundle",
                        f"bundle {b.source} -> {b.target} has multiplicity {b.multiplicity} "
                        f"but {len(b.names)} edge names",
                        vertices=(b.source, b.target),
                    )
            for name in b.names:
                if name in edges or name in vset:
                    raise ValidationError("duplicate_edge", f"edge name {name!r} is not unique", edges=(name,))
                edges[name] = (b.source, b.target)
            if b.multiplicity == 0:
                continue
            kept.append(b)
            out[b.source].append(b)
            inc[b.target].append(b)
        kept.sort(key=lambda b: (b.source, b.target))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "bundles", tuple(kept))
        object.__setattr__(self, "_out", {v: tuple(bs) for v, bs in out.items()})
        object.__setattr__(self, "_in", {v: tuple(bs) for v, bs in inc.items()})
        object.__setattr__(self, "_edges", edges)

    # -- lookups ---------------------------------------------------------

    def check_vertices(self, vs: Iterable[str]) -> frozenset[str]:
        vs = frozenset(vs)
        missing = vs - set(self.vertices)
        if missing:
            raise UnknownVertexError(missing)
        return vs

    def out_bundles(self, v: str) -> tuple[EdgeBundle, ...]:
        if v not in self._out:
            raise UnknownVertexError([v])
        return self._out[v]

    def in_bundles(self, v: str) -> tuple[EdgeBundle, ...]:
        if v not in self._in:
            raise UnknownVertexError([v])
        return self._in[v]

    def successors(self, v: str) -> frozenset[str]:
        return frozenset(b.target for b in self.out_bundles(v))

    def predecessors(self, v: str) -> frozenset[str]:
        return frozenset(b.source for b in self.in_bundles(v))

    def out_multiplicity(self, v: str) -> int | float:
        return sum((b.multiplicity for b in self.out_bundles(v)), 0)

    @property
    def edge_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._edges))

    def has_edge(self, name: str) -> bool:
        return name in self._edges

    def source(self, edge: str) -> str:
        try:
            return self._edges[edge][0]
        except KeyError:
            raise UnknownEdgeError([edge]) from None

    def target(self, edge: str) -> str:
        try:
            return self._edges[edge][1]
        except KeyError:
            raise UnknownEdgeError([edge]) from None

    def named_out_edges(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(n for b in self.out_bundles(v) for n in b.names))

    def named_in_edges(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(n for b in self.in_bundles(v) for n in b.names))

    def is_finite(self) -> bool:
        return not any(b.infinite for b in self.bundles)


def make_graph(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str, str]] = (),
    infinite: Iterable[tuple] = (),
) -> Graph:
    """Build a graph from named edges ``(name, src, tgt)`` and infinite
    bundles ``(src, tgt)`` or ``(src, tgt, names)``.

    Named edges between the same ordered pair are merged into one bundle.
    A named edge whose pair also carries an infinite bundle becomes one of
    that bundle's representatives.
    """
    mult: dict[tuple[str, str], int | float] = {}
    names: dict[tuple[str, str], list[str]] = {}
    for src, tgt, *rest in infinite:
        key = (src, tgt)
        mult[key] = INF
        names.setdefault(key, []).extend(rest[0] if rest else ())
    for name, src, tgt in edges:
        key = (src, tgt)
        names.setdefault(key, []).append(name)
        if mult.get(key) != INF:
            mult[key] = mult.get(key, 0) + 1
    bundles = [EdgeBundle(s, t, mult[(s, t)], tuple(names.get((s, t), ()))) for (s, t) in mult]
    return Graph(tuple(vertices), tuple(bundles))


def classify_vertex(g: Graph, v: str) -> str:
    bundles = g.out_bundles(v)
    if not bundles:
        return SINK
    if any(b.infinite for b in bundles):
        return INFINITE_EMITTER
    return REGULAR


def root(g: Graph, vs: Iterable[str]) -> frozenset[str]:
    """Vertices with a path (possibly of length zero) into ``vs``."""
    seen = set(g.check_vertices(vs))
    queue = deque(sorted(seen))
    while queue:
        v = queue.popleft()
        for u in g.predecessors(v):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return frozenset(seen)


def forward_reach(g: Graph, vs: Iterable[str]) -> frozenset[str]:
    seen = set(g.check_vertices(vs))
    queue = deque(sorted(seen))
    while queue:
        v = queue.popleft()
        for u in g.successors(v):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return frozenset(seen)


def _canonical_rotation(edges: tuple[str, ...]) -> tuple[str, ...]:
    return min(edges[i:] + edges[:i] for i in range(len(edges)))


def make_cycle(g: Graph, edges: Iterable[str]) -> Cycle:
    """Validate a sequence of named edges as a simple cycle and canonicalize it."""
    edges = tuple(edges)
    if not edges:
        raise ValidationError("invalid_cycle", "a cycle needs at least one edge")
    unknown = [e for e in edges if not g.has_edge(e)]
    if unknown:
        raise UnknownEdgeError(unknown)
    for a, b in zip(edges, edges[1:] + edges[:1]):
        if g.target(a) != g.source(b):
            raise ValidationError(
                "invalid_cycle", f"edges {a} and {b} do not compose", edges=edges
            )
    sources = [g.source(e) for e in edges]
    if len(set(sources)) != len(sources):
        raise ValidationError("invalid_cycle", "cycle repeats a vertex", edges=edges)
    canon = _canonical_rotation(edges)
    return Cycle(canon, g.source(canon[0]))


def cycle_vertices(g: Graph, c: Cycle) -> frozenset[str]:
    return frozenset(g.source(e) for e in c.edges)


def find_cycles(g: Graph) -> tuple[Cycle, ...]:
    """All simple cycles through named edges, canonically rotated and sorted."""
    order = {v: i for i, v in enumerate(g.vertices)}
    found: set[tuple[str, ...]] = set()

    for start in g.vertices:
        # only extend through vertices ordered after start: each cycle is found
        # exactly once, from its smallest vertex
        stack = [(start, (), frozenset([start]))]
        while stack:
            v, path, visited = stack.pop()
            for e in g.named_out_edges(v):
                t = g.target(e)
                if t == start:
                    found.add(_canonical_rotation(path + (e,)))
                elif order[t] > order[start] and t not in visited:
                    stack.append((t, path + (e,), visited | {t}))
    return tuple(Cycle(es, g.source(es[0])) for es in sorted(found))


def cycle_has_exit(g: Graph, c: Cycle) -> bool:
    if make_cycle(g, c.edges) != c:
        raise ValidationError("invalid_cycle", "not a canonical cycle of this graph", edges=c.edges)
    # a simple cycle leaves each of its vertices along exactly one edge
    return any(g.out_multiplicity(g.source(e)) > 1 for e in c.edges)


def cycle_exits(g: Graph, c: Cycle) -> list[EdgeBundle]:
    """Out-bundles of cycle vertices that carry at least one edge off the cycle."""
    on_cycle = set(c.edges)
    exits = []
    for e in c.edges:
        for b in g.out_bundles(g.source(e)):
            off = [n for n in b.names if n not in on_cycle]
            if b.infinite or off:
                exits.append(b)
    return exits


def validation_warnings(g: Graph) -> list[str]:
    """Loops hidden inside unnamed infinite bundles are invisible to find_cycles."""
    return [
        f"infinite bundle {b.source} -> {b.target} has no named representative; "
        "cycles through it are not enumerated"
        for b in g.bundles
        if b.infinite and not b.names and b.target in root(g, [b.source])
    ]
