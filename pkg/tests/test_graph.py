import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpa_annihilators.errors import UnknownVertexError, ValidationError
from lpa_annihilators.graph import (
    INF,
    INFINITE_EMITTER,
    REGULAR,
    SINK,
    EdgeBundle,
    Graph,
    classify_vertex,
    cycle_has_exit,
    find_cycles,
    make_cycle,
    make_graph,
    root,
    validation_warnings,
)

from _corpus import (
    infinite_emitter_graph,
    isolated_vertex,
    loop_with_exit,
    not_quasi_baer_finite,
    oracle_root,
    random_graph,
    rose,
    single_loop,
)


@st.composite
def graphs(draw, max_vertices=6):
    seed = draw(st.integers(0, 2**32 - 1))
    import random

    return random_graph(random.Random(seed), max_vertices=max_vertices)


def test_classify_isolated_vertex_is_sink():
    assert classify_vertex(isolated_vertex(), "v") == SINK


def test_classify_vertex_with_infinite_bundle():
    assert classify_vertex(infinite_emitter_graph(), "u") == INFINITE_EMITTER


def test_classify_regular_vertex():
    assert classify_vertex(not_quasi_baer_finite(), "v") == REGULAR


def test_classify_unknown_vertex_names_it():
    with pytest.raises(UnknownVertexError) as err:
        classify_vertex(isolated_vertex(), "zz")
    assert err.value.vertices == ("zz",)


def test_root_of_empty_set():
    assert root(infinite_emitter_graph(), []) == frozenset()


def test_root_counterexample():
    assert root(not_quasi_baer_finite(), ["u"]) == {"u", "v"}


def test_root_matches_warshall_oracle():
    g = infinite_emitter_graph()
    expected = oracle_root(g, ["w"])
    assert expected == {"u", "v", "w"}
    assert root(g, ["w"]) == expected


def test_root_rejects_unknown():
    with pytest.raises(UnknownVertexError):
        root(isolated_vertex(), ["q"])


def test_find_cycles_acyclic_chain():
    g = make_graph("ab", edges=[("e", "a", "b")])
    assert find_cycles(g) == ()


def test_find_cycles_rose_has_two():
    cycles = find_cycles(rose(2))
    assert [c.edges for c in cycles] == [("e0",), ("e1",)]


def test_find_cycles_counterexample_single_loop():
    cycles = find_cycles(not_quasi_baer_finite())
    assert [c.edges for c in cycles] == [("c",)]
    assert cycles[0].base == "v"


def test_find_cycles_ignores_unnamed_infinite_edges():
    g = make_graph("ab", infinite=[("a", "b"), ("b", "a")])
    assert find_cycles(g) == ()
    assert validation_warnings(g)


def test_find_cycles_uses_named_representatives():
    g = make_graph("ab", edges=[("x", "b", "a")], infinite=[("a", "b", ["r"])])
    assert [c.edges for c in find_cycles(g)] == [("r", "x")]
    assert validation_warnings(g) == []


def test_find_cycles_parallel_edges_give_distinct_cycles():
    g = make_graph("ab", edges=[("p", "a", "b"), ("q", "a", "b"), ("r", "b", "a")])
    assert [c.edges for c in find_cycles(g)] == [("p", "r"), ("q", "r")]


def test_canonical_rotation():
    g = make_graph("abc", edges=[("z", "a", "b"), ("m", "b", "c"), ("k", "c", "a")])
    c = make_cycle(g, ["z", "m", "k"])
    assert c.edges == ("k", "z", "m")
    assert c.base == "c"


def test_make_cycle_rejects_non_simple():
    g = rose(2)
    with pytest.raises(ValidationError):
        make_cycle(g, ["e0", "e1"])


def test_make_cycle_rejects_open_path():
    g = make_graph("ab", edges=[("e", "a", "b")])
    with pytest.raises(ValidationError):
        make_cycle(g, ["e"])


def test_cycle_exit_single_loop():
    g = single_loop()
    assert not cycle_has_exit(g, find_cycles(g)[0])


def test_cycle_exit_rose_petal():
    g = rose(2)
    assert all(cycle_has_exit(g, c) for c in find_cycles(g))


def test_cycle_exit_counterexample_loop():
    g = not_quasi_baer_finite()
    assert cycle_has_exit(g, find_cycles(g)[0])


def test_cycle_exit_through_infinite_bundle():
    g = make_graph("ab", edges=[("c", "a", "a")], infinite=[("a", "b")])
    assert cycle_has_exit(g, find_cycles(g)[0])


def test_cycle_exit_rejects_foreign_cycle():
    g = loop_with_exit()
    other = find_cycles(rose(2))[0]
    with pytest.raises(ValidationError):
        cycle_has_exit(g, other)


def test_graph_invariants_enforced():
    with pytest.raises(ValidationError):
        Graph(("a", "b"), (EdgeBundle("a", "b", 2, ("x",)),))
    with pytest.raises(UnknownVertexError):
        Graph(("a",), (EdgeBundle("a", "b", 1, ("x",)),))
    with pytest.raises(ValidationError):
        Graph(("a", "b"), (EdgeBundle("a", "b", 1, ("x",)), EdgeBundle("b", "a", 1, ("x",))))
    with pytest.raises(ValidationError):
        Graph(("a", "b"), (EdgeBundle("a", "b", 1, ("x",)), EdgeBundle("a", "b", 1, ("y",))))


def test_make_graph_merges_named_edges_into_bundles():
    g = make_graph("ab", edges=[("p", "a", "b"), ("q", "a", "b")], infinite=[("b", "a", ["r"])])
    assert {(b.source, b.target): b.multiplicity for b in g.bundles} == {("a", "b"): 2, ("b", "a"): INF}
    assert g.named_out_edges("b") == ("r",)


@settings(max_examples=80, deadline=None)
@given(graphs(), st.data())
def test_root_monotone_idempotent_extensive(g, data):
    V = data.draw(st.sets(st.sampled_from(g.vertices)))
    W = V | data.draw(st.sets(st.sampled_from(g.vertices)))
    rv = root(g, V)
    assert V <= rv
    assert root(g, rv) == rv
    assert rv <= root(g, W)
    assert rv == oracle_root(g, V)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_classification_partitions_vertices(g):
    classes = {v: classify_vertex(g, v) for v in g.vertices}
    assert set(classes.values()) <= {SINK, REGULAR, INFINITE_EMITTER}
    for v, c in classes.items():
        out = g.out_multiplicity(v)
        assert (c == SINK) == (out == 0)
        assert (c == INFINITE_EMITTER) == (out == INF)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_find_cycles_canonical_and_deterministic(g):
    first = find_cycles(g)
    assert first == find_cycles(g)
    assert len(set(first)) == len(first)
    for c in first:
        assert make_cycle(g, c.edges) == c
