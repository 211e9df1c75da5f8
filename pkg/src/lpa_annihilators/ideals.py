"""Admissible pairs, ideal presentations, annihilators and ring-property verdicts.

Graded ideals are handled through their admissible pairs ``(H, S)``; an
arbitrary ideal is presented as ``((H, S), C, P)`` with ``C`` a set of cycles
and ``P`` a set of polynomials with constant term one.  The field is the
rationals with the identity involution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .closure import (
    breaking_vertices,
    enumerate_hs,
    non_hereditary_vertices,
    perp,
    s_saturation,
    unsaturated_vertices,
)
from .errors import ContractViolation, GraphMismatchError, ValidationError
from .graph import Cycle, Graph, cycle_exits, cycle_has_exit, cycle_vertices, find_cycles, make_cycle


@dataclass(frozen=True)
class AdmissiblePair:
    graph: Graph = field(repr=False)
    H: frozenset[str]
    S: frozenset[str] = frozenset()

    def as_dict(self) -> dict:
        return {"H": sorted(self.H), "S": sorted(self.S)}


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with constant term 1 and degree at least 1; index = degree."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = [Fraction(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs or coeffs[0] != 1:
            raise ValidationError("bad_polynomial", "constant coefficient must be 1")
        if len(coeffs) < 2:
            raise ValidationError("bad_polynomial", "polynomial must be nonconstant")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.coefficients)


@dataclass(frozen=True)
class IdealPresentation:
    pair: AdmissiblePair
    C: frozenset[Cycle] = frozenset()
    P: frozenset[RationalPolynomial] = frozenset()

    @property
    def graph(self) -> Graph:
        return self.pair.graph

    @property
    def is_graded(self) -> bool:
        return not self.C


def _same_graph(*pairs: AdmissiblePair) -> Graph:
    g = pairs[0].graph
    if any(p.graph is not g and p.graph != g for p in pairs[1:]):
        raise GraphMismatchError()
    return g


def validate_pair(g: Graph, H: Iterable[str], S: Iterable[str] = ()) -> AdmissiblePair:
    H = g.check_vertices(H)
    S = g.check_vertices(S)
    bad = non_hereditary_vertices(g, H)
    if bad:
        raise ValidationError(
            "not_hereditary", f"H is not hereditary: {', '.join(sorted(bad))} emit edges leaving H", vertices=bad
        )
    bad = unsaturated_vertices(g, H)
    if bad:
        raise ValidationError(
            "not_saturated", f"H is not saturated: regular vertices {', '.join(sorted(bad))} are missing", vertices=bad
        )
    bad = S - breaking_vertices(g, H)
    if bad:
        raise ValidationError(
            "not_breaking", f"S is not contained in B_H: {', '.join(sorted(bad))}", vertices=bad
        )
    return AdmissiblePair(g, H, S)


def zero_pair(g: Graph) -> AdmissiblePair:
    return AdmissiblePair(g, frozenset(), frozenset())


def whole_pair(g: Graph) -> AdmissiblePair:
    return AdmissiblePair(g, frozenset(g.vertices), frozenset())


def validate_cycle_for(pair: AdmissiblePair, c: Cycle) -> Cycle:
    """Check that ``c`` lies outside H and every exit from it lands in H."""
    g = pair.graph
    c = make_cycle(g, c.edges)
    inside = cycle_vertices(g, c) & pair.H
    if inside:
        raise ValidationError(
            "cycle_meets_H", "cycle has vertices in H", vertices=inside, edges=c.edges
        )
    bad = [b for b in cycle_exits(g, c) if b.target not in pair.H]
    if bad:
        raise ValidationError(
            "cycle_exit_outside_H",
            "cycle has an exit whose range is outside H",
            vertices=[b.target for b in bad],
            edges=c.edges,
        )
    return c


def make_presentation(
    pair: AdmissiblePair,
    cycles: Iterable = (),
    polys: Iterable = (),
) -> IdealPresentation:
    """Validate and normalize ``((H, S), C, P)``.

    Cycles may be given as ``Cycle`` objects or edge-name sequences and
    polynomials as ``RationalPolynomial`` or coefficient sequences.  If either
    C or P is empty both are dropped.
    """
    g = pair.graph
    cs = frozenset(
        validate_cycle_for(pair, c if isinstance(c, Cycle) else make_cycle(g, c)) for c in cycles
    )
    ps = frozenset(p if isinstance(p, RationalPolynomial) else RationalPolynomial(tuple(p)) for p in polys)
    if not cs or not ps:
        cs, ps = frozenset(), frozenset()
    return IdealPresentation(pair, cs, ps)


def graded_presentation(pair: AdmissiblePair) -> IdealPresentation:
    return IdealPresentation(pair)


def check_presentation(pres: IdealPresentation) -> IdealPresentation:
    validate_pair(pres.graph, pres.pair.H, pres.pair.S)
    for c in pres.C:
        validate_cycle_for(pres.pair, c)
    if bool(pres.C) != bool(pres.P):
        raise ValidationError("bad_presentation", "C and P must be both empty or both nonempty")
    return pres


def cycle_vertex_set(pres: IdealPresentation) -> frozenset[str]:
    out = frozenset()
    for c in pres.C:
        out |= cycle_vertices(pres.graph, c)
    return out


def pair_leq(p1: AdmissiblePair, p2: AdmissiblePair) -> bool:
    _same_graph(p1, p2)
    return p1.H <= p2.H and p1.S <= p2.H | p2.S


def graded_join(p1: AdmissiblePair, p2: AdmissiblePair) -> AdmissiblePair:
    """Admissible pair of the smallest graded ideal containing both."""
    g = _same_graph(p1, p2)
    S = p1.S | p2.S
    G = s_saturation(g, p1.H | p2.H, S)
    return AdmissiblePair(g, G, S - G)


def graded_envelope(pres: IdealPresentation) -> AdmissiblePair:
    g = pres.graph
    H, S = pres.pair.H, pres.pair.S
    G = s_saturation(g, H | cycle_vertex_set(pres), S)
    T = S - G
    env = AdmissiblePair(g, G, T)
    if not T <= breaking_vertices(g, G):
        raise ContractViolation(f"envelope T={sorted(T)} is not inside B_G")
    if not pair_leq(pres.pair, env):
        raise ContractViolation("envelope does not dominate the presented pair")
    return env


def largest_graded_subideal(pres: IdealPresentation) -> AdmissiblePair:
    return pres.pair


def ann_of_graded(pair: AdmissiblePair) -> AdmissiblePair:
    g = pair.graph
    Hp = perp(g, pair.H)
    return AdmissiblePair(g, Hp, breaking_vertices(g, Hp))


def annihilator(pres: IdealPresentation) -> AdmissiblePair:
    """Left, right and two-sided annihilator; the three coincide."""
    return ann_of_graded(graded_envelope(pres))


def s_perp(pair: AdmissiblePair) -> frozenset[str]:
    return breaking_vertices(pair.graph, perp(pair.graph, pair.H)) - pair.S


def is_reflexive(pair: AdmissiblePair) -> bool:
    g = pair.graph
    Hp = perp(g, pair.H)
    Hpp = perp(g, Hp)
    S_perp = breaking_vertices(g, Hp) - pair.S
    S_perp_perp = breaking_vertices(g, Hpp) - S_perp
    return pair.H == Hpp and pair.S == S_perp_perp


def is_annihilator_ideal(pair: AdmissiblePair) -> bool:
    reflexive = is_reflexive(pair)
    if reflexive and pair.S != breaking_vertices(pair.graph, pair.H):
        raise ContractViolation(f"reflexive pair with S={sorted(pair.S)} different from B_H")
    return reflexive


def _require_annihilator(*pairs: AdmissiblePair) -> None:
    for p in pairs:
        if not is_annihilator_ideal(p):
            raise ValidationError(
                "not_annihilator_ideal",
                f"pair (H={sorted(p.H)}, S={sorted(p.S)}) is not an annihilator ideal",
                vertices=p.H,
            )


def boolean_join(a: AdmissiblePair, b: AdmissiblePair) -> AdmissiblePair:
    """Join in the Boolean algebra of annihilator ideals: ann(ann(a + b))."""
    _require_annihilator(a, b)
    return ann_of_graded(ann_of_graded(graded_join(a, b)))


def boolean_meet(a: AdmissiblePair, b: AdmissiblePair) -> AdmissiblePair:
    """Meet of annihilator ideals, via the complement law ann(ann(a) + ann(b))."""
    _require_annihilator(a, b)
    return ann_of_graded(graded_join(ann_of_graded(a), ann_of_graded(b)))


@dataclass(frozen=True)
class QuasiBaerVerdict:
    holds: bool
    witness: frozenset[str] | None = None
    join: AdmissiblePair | None = None

    def __bool__(self) -> bool:
        return self.holds


def perp_join(g: Graph, H: Iterable[str]) -> AdmissiblePair:
    """The join of the annihilator of I(H) with its double annihilator."""
    first = ann_of_graded(AdmissiblePair(g, frozenset(H)))
    second = ann_of_graded(first)
    return graded_join(first, second)


def is_quasi_baer(g: Graph) -> QuasiBaerVerdict:
    """Check that the perp join is everything for every hereditary saturated set.

    The witness is the first failing set in (size, sorted members) order.
    """
    top = frozenset(g.vertices)
    for H in enumerate_hs(g):
        j = perp_join(g, H)
        if j.H != top:
            return QuasiBaerVerdict(False, H, j)
    return QuasiBaerVerdict(True)


def is_quasi_baer_star(g: Graph) -> QuasiBaerVerdict:
    # with a positive definite involution the *-version is equivalent
    return is_quasi_baer(g)


def is_baer(g: Graph) -> bool:
    return g.is_finite() and not any(cycle_has_exit(g, c) for c in find_cycles(g))


def is_rickart(g: Graph) -> bool:
    """Rickart exactly when the vertex set is finite, which every Graph is."""
    return True
