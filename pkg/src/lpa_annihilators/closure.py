"""Hereditary and saturated closures, breaking vertices, and perps."""

from __future__ import annotations

import os
from typing import Iterable, Iterator

from .errors import CapacityError, ValidationError
from .graph import INF, REGULAR, Graph, classify_vertex, forward_reach, root

DEFAULT_MAX_VERTICES = 20


def max_vertices() -> int:
    """Enumeration cap, overridable through ``LPA_MAX_VERTICES``."""
    raw = os.environ.get("LPA_MAX_VERTICES")
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        return int(raw)
    except ValueError:
        raise ValidationError("bad_environment", f"LPA_MAX_VERTICES must be an integer, got {raw!r}") from None


def non_hereditary_vertices(g: Graph, H: Iterable[str]) -> frozenset[str]:
    """Members of ``H`` that emit an edge leaving ``H``."""
    H = g.check_vertices(H)
    return frozenset(v for v in H if not g.successors(v) <= H)


def is_hereditary(g: Graph, H: Iterable[str]) -> bool:
    return not non_hereditary_vertices(g, H)


def unsaturated_vertices(g: Graph, H: Iterable[str]) -> frozenset[str]:
    """Regular vertices outside ``H`` whose edges all land in ``H``."""
    H = g.check_vertices(H)
    return frozenset(
        v
        for v in g.vertices
        if v not in H and classify_vertex(g, v) == REGULAR and g.successors(v) <= H
    )


def is_saturated(g: Graph, H: Iterable[str]) -> bool:
    return not unsaturated_vertices(g, H)


def is_hereditary_saturated(g: Graph, H: Iterable[str]) -> bool:
    return is_hereditary(g, H) and is_saturated(g, H)


def hereditary_closure(g: Graph, vs: Iterable[str]) -> frozenset[str]:
    return forward_reach(g, vs)


def _require_hereditary(g: Graph, H: frozenset[str]) -> None:
    bad = non_hereditary_vertices(g, H)
    if bad:
        raise ValidationError(
            "not_hereditary", f"set is not hereditary at {', '.join(sorted(bad))}", vertices=bad
        )


def saturation_rounds(g: Graph, H: Iterable[str], S: Iterable[str]) -> Iterator[frozenset[str]]:
    """Yield the increasing sets Lambda_0 = H, Lambda_1, ... up to the fixpoint.

    Each round adds, all at once, every vertex outside the current set that
    is regular or lies in ``S`` and has every edge landing in the current set.
    """
    current = g.check_vertices(H)
    S = g.check_vertices(S)
    _require_hereditary(g, current)
    yield current
    while True:
        new = frozenset(
            v
            for v in g.vertices
            if v not in current
            and (v in S or classify_vertex(g, v) == REGULAR)
            and g.successors(v) <= current
        )
        if not new:
            return
        current = current | new
        yield current


def s_saturation(g: Graph, H: Iterable[str], S: Iterable[str] = ()) -> frozenset[str]:
    """Smallest hereditary saturated set containing ``H`` that also absorbs every
    vertex of ``S`` whose edges all land inside it.  ``S`` is arbitrary."""
    result = frozenset()
    for result in saturation_rounds(g, H, S):
        pass
    return result


def saturate(g: Graph, H: Iterable[str]) -> frozenset[str]:
    return s_saturation(g, hereditary_closure(g, H), ())


def breaking_vertices(g: Graph, H: Iterable[str]) -> frozenset[str]:
    H = g.check_vertices(H)
    _require_hereditary(g, H)
    out = set()
    for v in g.vertices:
        if v in H:
            continue
        bundles = g.out_bundles(v)
        if not any(b.infinite for b in bundles):
            continue
        leaving = [b.multiplicity for b in bundles if b.target not in H]
        if leaving and INF not in leaving and sum(leaving) > 0:
            out.add(v)
    return frozenset(out)


def perp(g: Graph, H: Iterable[str]) -> frozenset[str]:
    """Vertices that do not connect to ``H`` by any path."""
    return frozenset(g.vertices) - root(g, H)


def _bit_tables(g: Graph):
    index = {v: i for i, v in enumerate(g.vertices)}
    succ = [0] * len(g.vertices)
    regular = [False] * len(g.vertices)
    for v, i in index.items():
        for t in g.successors(v):
            succ[i] |= 1 << index[t]
        regular[i] = classify_vertex(g, v) == REGULAR
    return succ, regular


def _mask_is_hs(mask: int, succ: list[int], regular: list[bool]) -> bool:
    for i, s in enumerate(succ):
        inside = mask >> i & 1
        if inside and s & ~mask:
            return False
        if not inside and regular[i] and s & ~mask == 0:
            return False
    return True


def _subset_order(g: Graph, mask: int) -> tuple:
    members = tuple(v for i, v in enumerate(g.vertices) if mask >> i & 1)
    return len(members), members


def enumerate_hs(g: Graph, limit: int | None = None) -> tuple[frozenset[str], ...]:
    """Every hereditary saturated subset, ordered by size then sorted members.

    Brute force over all subsets; refuses graphs above the vertex cap.
    """
    limit = max_vertices() if limit is None else limit
    n = len(g.vertices)
    if n > limit:
        raise CapacityError(
            f"hereditary saturated enumeration is capped at {limit} vertices, graph has {n}", limit, n
        )
    succ, regular = _bit_tables(g)
    masks = [m for m in range(1 << n) if _mask_is_hs(m, succ, regular)]
    masks.sort(key=lambda m: _subset_order(g, m))
    return tuple(frozenset(v for i, v in enumerate(g.vertices) if m >> i & 1) for m in masks)
