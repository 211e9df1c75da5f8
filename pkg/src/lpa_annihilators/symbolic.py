"""Symbolic elements of the Leavitt path algebra over the rationals.

An element is a finite rational combination of monomials ``p q*`` where
``p`` and ``q`` are paths of named edges with a common range.  A monomial
is keyed by ``(p, q, v)`` with ``p``, ``q`` tuples of edge names and ``v``
their common range (needed when both paths are empty).

Products use the ghost/real contraction rule.  The normal form rewrites
``p f f* q*`` into ``p q* - sum_{e != f} p e e* q*`` where ``f`` is the
special (lexicographically smallest) edge at a regular vertex; monomials
with no such ending form a linear basis, so an element is zero exactly when
its normal form is empty.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .closure import breaking_vertices
from .errors import CapacityError, ContractViolation, GraphMismatchError, ValidationError
from .graph import REGULAR, Graph, classify_vertex
from .ideals import AdmissiblePair, IdealPresentation, annihilator, graded_envelope

Key = tuple  # (p, q, v)

DEFAULT_MAX_SPANNING = 200_000


def _key_order(k: Key) -> tuple:
    p, q, v = k
    return (len(p) - len(q), len(p), p, q, v)


def _source(g: Graph, path: tuple[str, ...], v: str) -> str:
    return g.source(path[0]) if path else v


class LpaElement:
    """Immutable formal sum of monomials, kept free of zero coefficients."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph: Graph, terms: dict | None = None) -> None:
        self.graph = graph
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c != 0}

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, g: Graph) -> "LpaElement":
        return cls(g)

    def _like(self, terms: dict) -> "LpaElement":
        return LpaElement(self.graph, terms)

    def _check(self, other: "LpaElement") -> None:
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphMismatchError()

    # -- inspection --------------------------------------------------------

    def monomials(self) -> list[tuple[Fraction, tuple, tuple, str]]:
        return [(self.terms[k], *k) for k in sorted(self.terms, key=_key_order)]

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, LpaElement):
            return NotImplemented
        return self.graph == other.graph and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def degrees(self) -> set[int]:
        return {len(p) - len(q) for p, q, _ in self.terms}

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LpaElement") -> "LpaElement":
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return self._like(terms)

    def __neg__(self) -> "LpaElement":
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LpaElement") -> "LpaElement":
        return self + (-other)

    def scale(self, c) -> "LpaElement":
        c = Fraction(c)
        return self._like({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LpaElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def star(self) -> "LpaElement":
        return self._like({(q, p, v): c for (p, q, v), c in self.terms.items()})

    def __repr__(self) -> str:
        return f"LpaElement({format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)


def format_monomial(p: tuple, q: tuple, v: str) -> str:
    if not p and not q:
        return v
    return " ".join(list(p) + [e + "*" for e in reversed(q)])


def format_element(x: LpaElement) -> str:
    if not x.terms:
        return "0"
    out = []
    for c, p, q, v in x.monomials():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = format_monomial(p, q, v)
        text = body if mag == 1 else f"{mag} {body}"
        out.append((sign, text))
    first_sign, first = out[0]
    parts = [("-" if first_sign == "-" else "") + first]
    parts += [f"{s} {t}" for s, t in out[1:]]
    return " ".join(parts)


# -- primitive elements ------------------------------------------------------


def vertex(g: Graph, v: str) -> LpaElement:
    g.check_vertices([v])
    return LpaElement(g, {((), (), v): 1})


def _check_path(g: Graph, edges: tuple[str, ...]) -> None:
    for e in edges:
        g.source(e)
    for a, b in zip(edges, edges[1:]):
        if g.target(a) != g.source(b):
            raise ValidationError("invalid_path", f"edges {a} and {b} do not compose", edges=(a, b))


def monomial(g: Graph, p: Iterable[str] = (), q: Iterable[str] = (), v: str | None = None, coeff=1) -> LpaElement:
    """``coeff * p q*``; ``v`` is required only when both paths are empty."""
    p, q = tuple(p), tuple(q)
    _check_path(g, p)
    _check_path(g, q)
    ranges = {g.target(path[-1]) for path in (p, q) if path}
    if v is not None:
        g.check_vertices([v])
        ranges.add(v)
    if len(ranges) != 1:
        raise ValidationError("range_mismatch", "p and q must share their range", edges=p + q)
    return LpaElement(g, {(p, q, ranges.pop()): coeff})


def edge(g: Graph, e: str) -> LpaElement:
    return monomial(g, (e,), ())


def ghost(g: Graph, e: str) -> LpaElement:
    return monomial(g, (), (e,))


# -- multiplication ----------------------------------------------------------


def _mul_keys(g: Graph, a: Key, b: Key) -> Key | None:
    p, q, v = a
    r, s, w = b
    if _source(g, q, v) != _source(g, r, w):
        return None
    n, m = len(q), len(r)
    if m >= n:
        if r[:n] != q:
            return None
        return (p + r[n:], s, w)
    if q[:m] != r:
        return None
    return (p, s + q[m:], v)


def multiply(a: LpaElement, b: LpaElement) -> LpaElement:
    a._check(b)
    g = a.graph
    terms: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            k = _mul_keys(g, ka, kb)
            if k is not None:
                terms[k] = terms.get(k, 0) + ca * cb
    return LpaElement(g, terms)


# -- normal form -------------------------------------------------------------


@lru_cache(maxsize=64)
def special_edges(g: Graph) -> dict[str, str]:
    """Special edge per regular vertex: its smallest edge identifier."""
    out = {}
    for v in g.vertices:
        if classify_vertex(g, v) == REGULAR:
            out[v] = g.named_out_edges(v)[0]
    return out


def _reducible(g: Graph, special: dict[str, str], k: Key) -> bool:
    p, q, _ = k
    return bool(p) and bool(q) and p[-1] == q[-1] and special.get(g.source(p[-1])) == p[-1]


def _rewrite(g: Graph, terms: dict, k: Key, c: Fraction) -> None:
    p, q, _ = k
    f = p[-1]
    u = g.source(f)
    if classify_vertex(g, u) != REGULAR:
        raise ContractViolation(f"CK2 rewrite attempted at non-regular vertex {u}")
    replacement = [((p[:-1], q[:-1], u), c)]
    replacement += [((p[:-1] + (e,), q[:-1] + (e,), g.target(e)), -c) for e in g.named_out_edges(u) if e != f]
    for key, coeff in replacement:
        total = terms.get(key, 0) + coeff
        if total:
            terms[key] = total
        else:
            terms.pop(key, None)


def normal_form(x: LpaElement, strategy: str = "leftmost", rng: random.Random | None = None) -> LpaElement:
    """Rewrite until no monomial ends in ``f f*`` for a special edge ``f``.

    ``strategy`` chooses the next redex: ``"leftmost"`` takes the smallest in
    canonical monomial order, ``"random"`` picks one using ``rng``.
    """
    if strategy not in ("leftmost", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    g = x.graph
    special = special_edges(g)
    terms = dict(x.terms)
    if strategy == "random" and rng is None:
        rng = random.Random(0)
    while True:
        redexes = [k for k in terms if _reducible(g, special, k)]
        if not redexes:
            break
        if strategy == "leftmost":
            k = min(redexes, key=_key_order)
        else:
            k = rng.choice(sorted(redexes, key=_key_order))
        _rewrite(g, terms, k, terms.pop(k))
    return LpaElement(g, terms)


def is_normal(x: LpaElement) -> bool:
    special = special_edges(x.graph)
    return not any(_reducible(x.graph, special, k) for k in x.terms)


def is_zero(x: LpaElement) -> bool:
    return not normal_form(x).terms


def homogeneous_component(x: LpaElement, n: int) -> LpaElement:
    return x._like({k: c for k, c in x.terms.items() if len(k[0]) - len(k[1]) == n})


# -- ideal generators and spanning sets ---------------------------------------


def v_H_element(g: Graph, v: str, H: Iterable[str]) -> LpaElement:
    """``v - sum e e*`` over the edges from ``v`` that leave ``H``."""
    H = g.check_vertices(H)
    g.check_vertices([v])
    if v not in breaking_vertices(g, H):
        raise ValidationError("not_breaking", f"{v} is not a breaking vertex of H", vertices=[v])
    x = vertex(g, v)
    for b in g.out_bundles(v):
        if b.target in H:
            continue
        if len(b.names) != b.multiplicity:
            raise ValidationError(
                "unnamed_edge",
                f"bundle {b.source} -> {b.target} must name all its edges",
                vertices=(b.source, b.target),
            )
        for e in b.names:
            x = x - monomial(g, (e,), (e,))
    return x


def cycle_power(g: Graph, edges: tuple[str, ...], base: str, i: int) -> LpaElement:
    return LpaElement(g, {(edges * i, (), base): 1})


def poly_of_cycle(g: Graph, poly, cycle) -> LpaElement:
    terms = {}
    for i, c in enumerate(poly.coefficients):
        if c:
            terms[(cycle.edges * i, (), cycle.base)] = c
    return LpaElement(g, terms)


def generators(pres: IdealPresentation) -> list[LpaElement]:
    """Generators H, {v^H : v in S} and {p(c) : c in C, p in P}."""
    g = pres.graph
    H, S = pres.pair.H, pres.pair.S
    gens = [vertex(g, v) for v in sorted(H)]
    gens += [v_H_element(g, v, H) for v in sorted(S)]
    for c in sorted(pres.C, key=lambda c: c.edges):
        for p in sorted(pres.P, key=lambda p: p.coefficients):
            gens.append(poly_of_cycle(g, p, c))
    return gens


def paths_into(g: Graph, v: str, max_len: int) -> list[tuple[str, ...]]:
    """Named-edge paths ending at ``v`` of length at most ``max_len`` (including the empty one)."""
    out = [()]
    frontier = [((), v)]
    for _ in range(max_len):
        nxt = []
        for path, head in frontier:
            for e in g.named_in_edges(head):
                np = (e,) + path
                out.append(np)
                nxt.append((np, g.source(e)))
        frontier = nxt
    return out


@dataclass(frozen=True)
class SpanFactor:
    """A spanning element ``p c q*`` where ``c`` is a vertex or ``v^H``."""

    p: tuple[str, ...]
    core: str
    breaking: bool
    q: tuple[str, ...]


def _core_element(g: Graph, pair: AdmissiblePair, f: SpanFactor, cache: dict) -> LpaElement:
    key = (f.core, f.breaking)
    if key not in cache:
        cache[key] = v_H_element(g, f.core, pair.H) if f.breaking else vertex(g, f.core)
    return cache[key]


def spanning_factors(pair: AdmissiblePair, len_cap: int, limit: int = DEFAULT_MAX_SPANNING) -> list[SpanFactor]:
    g = pair.graph
    cores = [(h, False) for h in sorted(pair.H)] + [(v, True) for v in sorted(pair.S)]
    out = []
    for core, brk in cores:
        paths = paths_into(g, core, len_cap)
        if len(out) + len(paths) ** 2 > limit:
            raise CapacityError(
                f"spanning set exceeds {limit} elements; lower the length cap", limit, len(out) + len(paths) ** 2
            )
        out.extend(SpanFactor(p, core, brk, q) for p in paths for q in paths)
    return out


def factor_value(pair: AdmissiblePair, f: SpanFactor, cache: dict | None = None) -> LpaElement:
    g = pair.graph
    core = _core_element(g, pair, f, {} if cache is None else cache)
    left = LpaElement(g, {(f.p, (), f.core): 1})
    right = LpaElement(g, {((), f.q, f.core): 1})
    return multiply(multiply(left, core), right)


def spanning_monomials(pair: AdmissiblePair, len_cap: int) -> list[LpaElement]:
    """Elements ``p q*`` with ``r(p) = r(q)`` in H and ``p v^H q*`` for v in S,
    over named-edge paths of length at most ``len_cap``."""
    cache: dict = {}
    return [factor_value(pair, f, cache) for f in spanning_factors(pair, len_cap)]


# -- annihilation oracle -----------------------------------------------------


@dataclass
class Violation:
    side: str
    x: str
    y: str
    product: str


@dataclass
class AnnihilationReport:
    annihilator: AdmissiblePair
    envelope: AdmissiblePair
    len_cap: int
    spanning_annihilator: int
    generators: int
    spanning_envelope: int
    products: int
    middles_evaluated: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "annihilator": self.annihilator.as_dict(),
            "envelope": self.envelope.as_dict(),
            "len_cap": self.len_cap,
            "spanning_annihilator": self.spanning_annihilator,
            "generators": self.generators,
            "spanning_envelope": self.spanning_envelope,
            "products": self.products,
            "middles_evaluated": self.middles_evaluated,
            "violations": [v.__dict__ for v in self.violations],
        }


def _path_source(g: Graph, path: tuple[str, ...], core: str) -> str:
    return g.source(path[0]) if path else core


def _prefix_index(g: Graph, groups: dict) -> dict:
    """Map every prefix ``(source, edges[:k])`` of each group's path to its group keys."""
    index: dict = {}
    for gk in groups:
        path, core = gk[0], gk[1]
        src = _path_source(g, path, core)
        for k in range(len(path) + 1):
            index.setdefault((src, path[:k]), []).append(gk)
    return index


def _comparable_groups(g: Graph, path: tuple, core: str, index: dict, exact: dict) -> list:
    src = _path_source(g, path, core)
    found = list(index.get((src, path), ()))
    for k in range(len(path)):
        found.extend(exact.get((src, path[:k]), ()))
    return found


def verify_annihilation(
    g: Graph,
    pres: IdealPresentation,
    len_cap: int = 3,
    *,
    exhaustive: bool = False,
    limit: int = DEFAULT_MAX_SPANNING,
    max_violations: int = 20,
) -> AnnihilationReport:
    """Check that the computed annihilator kills the ideal from both sides.

    Every product ``x y`` and ``y x`` with ``x`` in the annihilator's spanning
    set and ``y`` a generator of the ideal or a spanning element of its graded
    envelope is reduced to normal form.

    Products are evaluated through their shared middle factor: for
    ``x = p c q*`` and ``y = r d s*`` the product is ``p (c q* r d) s*``, so a
    zero middle settles every ``(p, s)`` at once; a nonzero middle is expanded
    and each full product is normalized.  Unless ``exhaustive`` is set, middle
    factors whose paths ``q`` and ``r`` are not prefix-comparable are skipped,
    since every monomial product between them is zero by the contraction rule.
    """
    if pres.graph != g:
        raise GraphMismatchError()
    A = annihilator(pres)
    env = graded_envelope(pres)
    xs = spanning_factors(A, len_cap, limit)
    ys = spanning_factors(env, len_cap, limit)
    gens = generators(pres)
    cache_a: dict = {}
    cache_e: dict = {}
    violations: list[Violation] = []
    middles = 0

    def core_a(core, brk):
        key = (core, brk)
        if key not in cache_a:
            cache_a[key] = v_H_element(g, core, A.H) if brk else vertex(g, core)
        return cache_a[key]

    def core_e(core, brk):
        key = (core, brk)
        if key not in cache_e:
            cache_e[key] = v_H_element(g, core, env.H) if brk else vertex(g, core)
        return cache_e[key]

    def real(path, core):
        return LpaElement(g, {(path, (), core): 1})

    def ghostp(path, core):
        return LpaElement(g, {((), path, core): 1})

    def record(side, x, y, prod):
        if len(violations) < max_violations:
            violations.append(Violation(side, str(x), str(y), str(normal_form(prod))))

    # group annihilator factors: by (q, core) for x*y and by (p, core) for y*x
    x_by_q: dict = {}
    x_by_p: dict = {}
    for f in xs:
        x_by_q.setdefault((f.q, f.core, f.breaking), []).append(f.p)
        x_by_p.setdefault((f.p, f.core, f.breaking), []).append(f.q)
    y_by_r: dict = {}
    y_by_s: dict = {}
    for f in ys:
        y_by_r.setdefault((f.p, f.core, f.breaking), []).append(f.q)
        y_by_s.setdefault((f.q, f.core, f.breaking), []).append(f.p)

    # x * generator = p (c q* gen)
    for (q, core, brk), ps in x_by_q.items():
        left = multiply(core_a(core, brk), ghostp(q, core))
        for gen in gens:
            middles += 1
            mid = multiply(left, gen)
            if is_zero(mid):
                continue
            for p in ps:
                x = multiply(real(p, core), left)
                prod = multiply(real(p, core), mid)
                if not is_zero(prod):
                    record("x*y", x, gen, prod)

    # generator * x = (gen p c) q*
    for (p, core, brk), qs in x_by_p.items():
        right = multiply(real(p, core), core_a(core, brk))
        for gen in gens:
            middles += 1
            mid = multiply(gen, right)
            if is_zero(mid):
                continue
            for q in qs:
                x = multiply(right, ghostp(q, core))
                prod = multiply(mid, ghostp(q, core))
                if not is_zero(prod):
                    record("y*x", gen, x, prod)

    def pair_groups(lefts: dict, rights: dict):
        """Yield (left_key, right_key) pairs whose paths are prefix-comparable."""
        if exhaustive:
            for lk in lefts:
                for rk in rights:
                    yield lk, rk
            return
        index = _prefix_index(g, rights)
        exact: dict = {}
        for rk in rights:
            exact.setdefault((_path_source(g, rk[0], rk[1]), rk[0]), []).append(rk)
        for lk in lefts:
            for rk in _comparable_groups(g, lk[0], lk[1], index, exact):
                yield lk, rk

    # x * y = p (c q* r d) s*
    for (q, core, brk), (r, dcore, dbrk) in pair_groups(x_by_q, y_by_r):
        middles += 1
        left = multiply(core_a(core, brk), ghostp(q, core))
        right = multiply(real(r, dcore), core_e(dcore, dbrk))
        mid = multiply(left, right)
        if is_zero(mid):
            continue
        for p in x_by_q[(q, core, brk)]:
            for s in y_by_r[(r, dcore, dbrk)]:
                x = multiply(real(p, core), left)
                y = multiply(right, ghostp(s, dcore))
                prod = multiply(x, y)
                if not is_zero(prod):
                    record("x*y", x, y, prod)

    # y * x = r (d s* p c) q*
    for (s, dcore, dbrk), (p, core, brk) in pair_groups(y_by_s, x_by_p):
        middles += 1
        left = multiply(core_e(dcore, dbrk), ghostp(s, dcore))
        right = multiply(real(p, core), core_a(core, brk))
        mid = multiply(left, right)
        if is_zero(mid):
            continue
        for r in y_by_s[(s, dcore, dbrk)]:
            for q in x_by_p[(p, core, brk)]:
                y = multiply(real(r, dcore), left)
                x = multiply(right, ghostp(q, core))
                prod = multiply(y, x)
                if not is_zero(prod):
                    record("y*x", y, x, prod)

    return AnnihilationReport(
        annihilator=A,
        envelope=env,
        len_cap=len_cap,
        spanning_annihilator=len(xs),
        generators=len(gens),
        spanning_envelope=len(ys),
        products=2 * len(xs) * (len(gens) + len(ys)),
        middles_evaluated=middles,
        violations=violations,
    )
