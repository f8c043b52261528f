"""Graph parsing, end labels, contraction, spanning trees."""

import pytest
from hypothesis import given, strategies as st

from gogz.errors import DegenerateInputError, ParseError
from gogz.graphs import (
    MINUS,
    PLUS,
    Edge,
    GraphOfGroups,
    Vertex,
    maximal_tree,
    parse_graph,
    reduce_graph,
)

BS23 = """
# one loop: t a^2 t^-1 = a^3
vertex 0 rank=1 gens=a
edge 0 0 0 minus="a^2" plus="a^3"
"""

TREFOIL = """
vertex 0 rank=1 gens=a
vertex 1 rank=1 gens=b
edge 0 0 1 minus="a^2" plus="b^3"
"""

THETA = """
vertex 0 rank=2 gens=a,b
vertex 1 rank=1 gens=x
edge 0 0 1 minus="a b" plus="x^2"
edge 1 0 1 minus="b a" plus="x^3"
"""


def test_parse_round_trip():
    g = parse_graph(THETA)
    assert sorted(g.vertices) == [0, 1]
    assert sorted(g.edges) == [0, 1]
    assert g.edges[0].minus_word == g.vertices[0].parse("a b")
    again = parse_graph(g.to_text())
    assert again.to_text() == g.to_text()


def test_parse_comments_and_blank_lines():
    g = parse_graph(BS23)
    assert len(g.edges) == 1
    assert g.edges[0].is_loop


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("vertex x rank=1 gens=a", 1, "vertex id"),
        ("vertex 0 rank=2 gens=a", 1, "generator name"),
        ("vertex 0 rank=1 gens=a\nvertex 0 rank=1 gens=b", 2, "duplicate vertex"),
        ("vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=a", 2, "already declared"),
        ("vertex 0 rank=1 gens=a\nedge 0 0 1 minus=\"a\" plus=\"a\"", 2, "unknown vertex"),
        ("vertex 0 rank=1 gens=a\nedge 0 0 0 minus=\"a\" plus=\"b\"", 2, "unknown generator"),
        ("vertex 0 rank=1 gens=a\nedge 0 0 0 minus=\"a a^-1\" plus=\"a\"", 2, "identity"),
        ("vertex 0 rank=1 gens=a\nedge 0 0 0 minus=\"a\"", 2, "missing field"),
        ("vertex 0 rank=1 gens=a\nedge 0 0 0 minus=\"a plus=\"a\"", 2, "quote"),
        ("widget 0", 1, "unknown directive"),
        ("", 1, "no vertices"),
    ],
)
def test_parse_errors_carry_positions(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_graph(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_disconnected_rejected():
    text = "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\n"
    with pytest.raises(DegenerateInputError, match="not connected"):
        parse_graph(text)


def test_end_labels():
    g = parse_graph(TREFOIL)
    e = g.edges[0]
    assert not g.is_bad_end(e, MINUS) and not g.is_bad_end(e, PLUS)
    assert g.has_arrow(e, MINUS) and g.has_arrow(e, PLUS)
    assert g.is_reduced

    h = parse_graph("vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\nedge 0 0 1 minus=\"a\" plus=\"b^2\"")
    e = h.edges[0]
    assert h.is_bad_end(e, MINUS) and not h.is_bad_end(e, PLUS)
    assert not h.has_arrow(e, MINUS) and h.has_arrow(e, PLUS)
    assert not h.is_reduced


def test_loops_never_reducible():
    g = parse_graph("vertex 0 rank=1 gens=a\nedge 0 0 0 minus=\"a\" plus=\"a\"")
    assert g.is_reduced  # a bad end on a loop does not make it reducible


# ------------------------------------------------------------- contraction


def test_contract_chain_to_single_vertex():
    # path of three rank-one vertices glued along proper powers at the middle
    text = """
    vertex 0 rank=1 gens=a
    vertex 1 rank=1 gens=b
    vertex 2 rank=1 gens=c
    edge 0 0 1 minus="a" plus="b^2"
    edge 1 1 2 minus="b^3" plus="c"
    """
    g = parse_graph(text)
    reduced, log = reduce_graph(g)
    assert reduced.is_trivial
    assert [s.edge_id for s in log] == [0, 1]
    # step 1 absorbs vertex 0 into vertex 1 (a -> b^2); edge 1 is untouched,
    # step 2 then absorbs vertex 2 into vertex 1 (c -> b^3)
    assert log.steps[0].absorbed_vertex == 0 and log.steps[0].surviving_vertex == 1
    assert log.steps[1].absorbed_vertex == 2 and log.steps[1].surviving_vertex == 1
    assert reduced.vertices[1].rank == 1


def test_contract_rehomes_words():
    # absorbing vertex 1 (x -> a b) must rewrite edge 1's word x^3 to (a b)^3
    text = """
    vertex 0 rank=2 gens=a,b
    vertex 1 rank=1 gens=x
    vertex 2 rank=1 gens=y
    edge 0 0 1 minus="a b" plus="x"
    edge 1 1 2 minus="x^3" plus="y^2"
    """
    g = parse_graph(text)
    reduced, log = reduce_graph(g)
    assert len(log) == 1
    assert log.steps[0].absorbed_vertex == 1 and log.steps[0].surviving_vertex == 0
    e = reduced.edges[1]
    assert e.minus_vertex == 0
    assert e.minus_word == reduced.vertices[0].parse("a b a b a b")
    assert reduced.is_reduced


def test_contract_inverted_bad_letter():
    # bad word a^-1: the generator maps to the inverse of the far word
    text = """
    vertex 0 rank=1 gens=a
    vertex 1 rank=1 gens=b
    edge 0 0 1 minus="a^-1" plus="b^2"
    edge 1 0 1 minus="a^5" plus="b^7"
    """
    g = parse_graph(text)
    reduced, log = reduce_graph(g)
    assert log.steps[0].absorbed_vertex == 0
    assert log.steps[0].image == reduced.vertices[1].parse("b^-2")
    e = reduced.edges[1]
    assert e.is_loop
    assert e.minus_word == reduced.vertices[1].parse("b^-10")


def test_both_ends_bad_keeps_least_vertex():
    text = """
    vertex 3 rank=1 gens=a
    vertex 7 rank=1 gens=b
    edge 0 7 3 minus="b" plus="a^-1"
    """
    g = parse_graph(text)
    reduced, log = reduce_graph(g)
    assert log.steps[0].surviving_vertex == 3
    assert log.steps[0].absorbed_vertex == 7
    assert reduced.is_trivial


def test_contraction_preserves_betti_number():
    text = """
    vertex 0 rank=1 gens=a
    vertex 1 rank=1 gens=b
    edge 0 0 1 minus="a" plus="b^2"
    edge 1 0 1 minus="a^3" plus="b"
    """
    g = parse_graph(text)
    reduced, log = reduce_graph(g)
    assert g.betti_number == reduced.betti_number == 1
    assert len(reduced.edges) == 1 and next(iter(reduced.edges.values())).is_loop


# ----------------------------------------------------------- spanning tree


def test_maximal_tree_deterministic():
    text = """
    vertex 0 rank=1 gens=a
    vertex 1 rank=1 gens=b
    vertex 2 rank=1 gens=c
    edge 0 0 1 minus="a^2" plus="b^2"
    edge 1 1 2 minus="b^3" plus="c^2"
    edge 2 2 0 minus="c^3" plus="a^3"
    edge 3 0 0 minus="a^4" plus="a^5"
    """
    g = parse_graph(text)
    tree = maximal_tree(g)
    assert tree.root == 0
    assert [(s.edge_id, s.parent, s.child) for s in tree.steps] == [(0, 0, 1), (2, 0, 2)]
    assert tree.non_tree_edge_ids == (1, 3)
    assert tree.parent_step(2).edge_id == 2


def test_maximal_tree_of_tree_has_no_extra_edges():
    g = parse_graph(TREFOIL)
    tree = maximal_tree(g)
    assert tree.non_tree_edge_ids == ()
    assert tree.tree_edge_ids == {0}


# ------------------------------------------------------------- properties


@st.composite
def random_tree_graph(draw):
    """A random tree of rank-one vertices with proper-power inclusion words."""
    n = draw(st.integers(2, 6))
    vertices = [Vertex.make(i, (f"g{i}",)) for i in range(n)]
    edges = []
    for child in range(1, n):
        parent = draw(st.integers(0, child - 1))
        km = draw(st.integers(2, 4)) * draw(st.sampled_from([1, -1]))
        kp = draw(st.integers(2, 4)) * draw(st.sampled_from([1, -1]))
        edges.append(
            Edge(
                child - 1,
                parent,
                child,
                vertices[parent].parse(f"g{parent}^{km}"),
                vertices[child].parse(f"g{child}^{kp}"),
            )
        )
    return GraphOfGroups(vertices, edges)


@given(random_tree_graph())
def test_random_proper_power_trees_are_already_reduced(g):
    reduced, log = reduce_graph(g)
    assert len(log) == 0
    assert reduced is g or reduced.to_text() == g.to_text()


@st.composite
def random_graph_with_bad_ends(draw):
    n = draw(st.integers(2, 5))
    vertices = [Vertex.make(i, (f"g{i}",)) for i in range(n)]
    edges = []
    eid = 0
    for child in range(1, n):
        parent = draw(st.integers(0, child - 1))
        km = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
        kp = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
        edges.append(
            Edge(
                eid,
                parent,
                child,
                vertices[parent].parse(f"g{parent}^{km}"),
                vertices[child].parse(f"g{child}^{kp}"),
            )
        )
        eid += 1
    for _ in range(draw(st.integers(0, 2))):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 1))
        km = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
        kp = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
        edges.append(
            Edge(eid, a, b, vertices[a].parse(f"g{a}^{km}"), vertices[b].parse(f"g{b}^{kp}"))
        )
        eid += 1
    return GraphOfGroups(vertices, edges)


@given(random_graph_with_bad_ends())
def test_reduction_terminates_and_is_reduced(g):
    reduced, log = reduce_graph(g)
    assert reduced.is_reduced or reduced.is_trivial
    assert len(log) <= len(g.vertices) - 1
    assert reduced.betti_number == g.betti_number
    # every surviving vertex existed in the input
    assert set(reduced.vertices) <= set(g.vertices)
