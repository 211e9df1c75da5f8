import random
from fractions import Fraction

import pytest

import lpa_annihilators.symbolic as symbolic
from lpa_annihilators.dsl import parse_element
from lpa_annihilators.errors import CapacityError, GraphMismatchError, ValidationError
from lpa_annihilators.graph import EdgeBundle, Graph, make_graph
from lpa_annihilators.ideals import (
    graded_presentation,
    make_presentation,
    validate_pair,
    whole_pair,
    zero_pair,
)
from lpa_annihilators.symbolic import (
    LpaElement,
    edge,
    generators,
    ghost,
    homogeneous_component,
    is_normal,
    is_zero,
    monomial,
    multiply,
    normal_form,
    spanning_factors,
    spanning_monomials,
    v_H_element,
    verify_annihilation,
    vertex,
)

from _corpus import (
    graph_corpus,
    infinite_emitter_graph,
    loop_with_exit,
    matrix_rep,
    not_quasi_baer_finite,
    not_quasi_baer_infinite,
    random_element,
    random_presentation,
    rose,
)


def acyclic_graph(rng, max_vertices=5):
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    bundles = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            m = rng.choices((0, 1, 2), (0.55, 0.3, 0.15))[0]
            if m:
                bundles.append(EdgeBundle(verts[i], verts[j], m, tuple(f"e{k + t}" for t in range(m))))
                k += m
    return Graph(tuple(verts), tuple(bundles))


def matmul(a, b):
    out = {}
    for (s, r, k), x in a.items():
        for (s2, k2, c), y in b.items():
            if s == s2 and k == k2:
                out[(s, r, c)] = out.get((s, r, c), 0) + x * y
    return {key: v for key, v in out.items() if v != 0}


def nf_str(g, text):
    return str(normal_form(parse_element(g, text)))


ACYCLIC = [acyclic_graph(random.Random(i)) for i in range(40)]
CORPUS = graph_corpus(40, seed=23, max_vertices=5)


# -- relations -----------------------------------------------------------------


def test_ck1_same_edge_gives_range():
    g = not_quasi_baer_finite()
    assert multiply(ghost(g, "f"), edge(g, "f")) == vertex(g, "u")


def test_ck1_distinct_edges_vanish():
    g = not_quasi_baer_finite()
    assert multiply(ghost(g, "f"), edge(g, "g")) == 0
    assert multiply(ghost(g, "c"), edge(g, "f")) == 0


def test_ghost_cancels_leading_edge():
    g = loop_with_exit()
    cg = monomial(g, ("c", "g"))
    assert multiply(ghost(g, "c"), cg) == monomial(g, ("g",))


def test_vertex_idempotents():
    g = not_quasi_baer_finite()
    assert multiply(vertex(g, "v"), vertex(g, "v")) == vertex(g, "v")
    assert multiply(vertex(g, "u"), vertex(g, "v")) == 0
    assert multiply(vertex(g, "v"), edge(g, "f")) == edge(g, "f")
    assert multiply(edge(g, "f"), vertex(g, "v")) == 0


def test_ck2_at_regular_vertex():
    g = not_quasi_baer_finite()
    assert is_zero(parse_element(g, "v - c c* - f f* - g g*"))
    assert nf_str(g, "c c*") == "v - f f* - g g*"


def test_ck2_rose():
    g = rose(2)
    assert nf_str(g, "x - e0 e0* - e1 e1*") == "0"
    assert nf_str(g, "e0 e0*") == "x - e1 e1*"


def test_no_ck2_at_infinite_emitter():
    g = not_quasi_baer_infinite()
    assert not is_zero(parse_element(g, "v"))
    g = infinite_emitter_graph()
    x = parse_element(g, "u - l l* - e e* - a a*")
    assert is_normal(x) and not is_zero(x)


def test_monomial_validation():
    g = not_quasi_baer_finite()
    with pytest.raises(ValidationError):
        monomial(g, ("f", "g"))
    with pytest.raises(ValidationError):
        monomial(g, ("f",), ("g",))
    with pytest.raises(GraphMismatchError):
        multiply(vertex(g, "v"), vertex(rose(2), "x"))


def test_star_and_format():
    g = loop_with_exit()
    x = parse_element(g, "2/3 c g - v")
    assert str(x) == "-v + 2/3 c g"
    assert str(x.star()) == "2/3 g* c* - v"
    assert x.star().star() == x


def test_normal_form_strategy_is_validated():
    g = rose(2)
    with pytest.raises(ValueError):
        normal_form(vertex(g, "x"), strategy="greedy")


# -- matrix oracle on finite acyclic graphs ------------------------------------


@pytest.mark.parametrize("seed", range(40))
def test_multiply_matches_matrix_oracle(seed):
    rng = random.Random(seed)
    g = ACYCLIC[seed]
    for _ in range(5):
        a, b = random_element(rng, g), random_element(rng, g)
        prod = multiply(a, b)
        assert matrix_rep(prod) == matmul(matrix_rep(a), matrix_rep(b))
        assert is_zero(prod) == (matrix_rep(prod) == {})
        assert matrix_rep(normal_form(prod)) == matrix_rep(prod)


@pytest.mark.parametrize("seed", range(40))
def test_sums_of_vertex_relations_are_zero_in_oracle(seed):
    g = ACYCLIC[seed]
    for v in g.vertices:
        names = g.named_out_edges(v)
        if not names:
            continue
        x = vertex(g, v)
        for e in names:
            x = x - monomial(g, (e,), (e,))
        assert matrix_rep(x) == {}
        assert is_zero(x)


# -- normal form properties ------------------------------------------------------


@pytest.mark.parametrize("g", CORPUS)
def test_normal_form_confluent_and_idempotent(g):
    rng = random.Random(len(g.bundles))
    for _ in range(6):
        x = random_element(rng, g, terms=5, max_len=3)
        nf = normal_form(x)
        assert is_normal(nf)
        assert normal_form(nf) == nf
        for seed in range(3):
            assert normal_form(x, "random", random.Random(seed)) == nf


@pytest.mark.parametrize("g", CORPUS)
def test_multiplication_associative_and_graded(g):
    rng = random.Random(sum(map(len, g.vertices)) + len(g.bundles))
    for _ in range(4):
        a, b, c = (random_element(rng, g, terms=3, max_len=2) for _ in range(3))
        left = normal_form(multiply(multiply(a, b), c))
        right = normal_form(multiply(a, multiply(b, c)))
        assert left == right
        ab = multiply(a, b)
        assert ab.degrees() <= {m + n for m in a.degrees() for n in b.degrees()}


@pytest.mark.parametrize("g", CORPUS)
def test_normal_form_respects_grading(g):
    rng = random.Random(7 * len(g.vertices))
    for _ in range(4):
        x = random_element(rng, g, terms=6)
        nf = normal_form(x)
        for n in x.degrees() | nf.degrees():
            assert normal_form(homogeneous_component(x, n)) == homogeneous_component(nf, n)


@pytest.mark.parametrize("g", CORPUS)
def test_star_is_anti_homomorphism(g):
    rng = random.Random(3 + len(g.bundles))
    for _ in range(4):
        a, b = random_element(rng, g), random_element(rng, g)
        assert multiply(a, b).star() == multiply(b.star(), a.star())
        assert normal_form(normal_form(a).star()) == normal_form(a.star())


# -- ideal elements ----------------------------------------------------------------


def test_v_H_element_example():
    g = infinite_emitter_graph()
    assert v_H_element(g, "u", ["w"]) == parse_element(g, "u - l l* - e e*")


def test_v_H_element_requires_breaking_vertex():
    g = infinite_emitter_graph()
    with pytest.raises(ValidationError) as err:
        v_H_element(g, "v", ["w"])
    assert err.value.kind == "not_breaking"


def test_v_H_is_idempotent_and_kills_edges_leaving_h():
    g = infinite_emitter_graph()
    x = v_H_element(g, "u", ["w"])
    assert normal_form(multiply(x, x)) == normal_form(x)
    assert is_zero(multiply(x, edge(g, "l")))
    assert is_zero(multiply(x, edge(g, "e")))
    assert multiply(x, edge(g, "a")) == edge(g, "a")


def test_generators_example():
    g = loop_with_exit()
    pres = make_presentation(validate_pair(g, ["w"]), [["c"]], [(1, 1)])
    assert generators(pres) == [vertex(g, "w"), parse_element(g, "v + c")]


def test_generators_of_breaking_pair():
    g = infinite_emitter_graph()
    pres = graded_presentation(validate_pair(g, ["w"], ["u"]))
    assert generators(pres) == [vertex(g, "w"), v_H_element(g, "u", ["w"])]


def test_spanning_example():
    g = loop_with_exit()
    got = spanning_monomials(validate_pair(g, ["w"]), 1)
    expected = [parse_element(g, t) for t in ("w", "g*", "g", "g g*")]
    assert sorted(map(str, got)) == sorted(map(str, expected))


def test_spanning_with_breaking_core():
    g = infinite_emitter_graph()
    pair = validate_pair(g, ["w"], ["u"])
    facts = spanning_factors(pair, 0)
    assert [(f.core, f.breaking) for f in facts] == [("w", False), ("u", True)]


def test_spanning_capacity():
    with pytest.raises(CapacityError) as err:
        spanning_factors(whole_pair(rose(2)), 6, limit=1000)
    assert err.value.limit == 1000


# -- annihilation check ---------------------------------------------------------------


@pytest.mark.parametrize(
    "g,H,S",
    [
        (infinite_emitter_graph(), ["w"], ["u"]),
        (not_quasi_baer_finite(), ["u"], []),
        (not_quasi_baer_infinite(), ["w"], []),
        (rose(2), ["x"], []),
    ],
)
def test_verify_passes_on_graded_examples(g, H, S):
    rep = verify_annihilation(g, graded_presentation(validate_pair(g, H, S)), 3)
    assert rep.passed, rep.violations


def test_verify_passes_on_cycle_ideal():
    g = loop_with_exit()
    pres = make_presentation(validate_pair(g, ["w"]), [["c"]], [(1, 1)])
    rep = verify_annihilation(g, pres, 3)
    assert rep.passed
    assert rep.annihilator == zero_pair(g)


def test_verify_detects_wrong_annihilator(monkeypatch):
    g = not_quasi_baer_finite()
    pres = graded_presentation(validate_pair(g, ["u"]))
    monkeypatch.setattr(symbolic, "annihilator", lambda p: whole_pair(p.graph))
    rep = verify_annihilation(g, pres, 2)
    assert not rep.passed
    assert rep.violations[0].product != "0"
    assert rep.as_dict()["passed"] is False


def test_verify_graph_mismatch():
    pres = graded_presentation(zero_pair(rose(2)))
    with pytest.raises(GraphMismatchError):
        verify_annihilation(rose(1), pres)


@pytest.mark.parametrize("g", CORPUS[:20])
def test_prefilter_agrees_with_exhaustive(g, monkeypatch):
    rng = random.Random(len(g.vertices) * 31 + len(g.bundles))
    pres = random_presentation(rng, g)
    full = verify_annihilation(g, pres, 2, exhaustive=True, max_violations=10**6)
    fast = verify_annihilation(g, pres, 2, max_violations=10**6)
    assert full.passed and fast.passed
    # a deliberately wrong annihilator must be caught the same way
    monkeypatch.setattr(symbolic, "annihilator", lambda p: whole_pair(p.graph))
    full = verify_annihilation(g, pres, 2, exhaustive=True, max_violations=10**6)
    fast = verify_annihilation(g, pres, 2, max_violations=10**6)
    assert full.passed == fast.passed
    assert len(full.violations) == len(fast.violations)


def test_lpa_element_coefficients_are_fractions():
    g = rose(1)
    x = LpaElement(g, {((), (), "x"): Fraction(1, 3)}).scale(3)
    assert x == vertex(g, "x")
    assert x - x == 0
