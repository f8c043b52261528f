"""Path enumeration against naive oracles and the normal-form engine."""

from fractions import Fraction
from itertools import product

import pytest

from gogz.engine import Engine
from gogz.errors import DegenerateInputError, PreconditionError
from gogz.graphs import OrientedEdge, parse_graph
from gogz.paths import (
    EnumerationSizeWarning,
    check_conjugacy_path,
    enumerate_complete_paths,
    enumerate_full_nonmaximal_paths,
    find_semi_nonmaximal_path_to,
    iter_conjugacy_paths,
)
from gogz.words import cyclic_meet

BS23 = parse_graph('vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a^2" plus="a^3"')
BS22 = parse_graph('vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a^2" plus="a^2"')
BS2M2 = parse_graph('vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a^2" plus="a^-2"')
TREFOIL = parse_graph(
    'vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\nedge 0 0 1 minus="a^2" plus="b^3"'
)
THETA = parse_graph(
    "vertex 0 rank=2 gens=a,b\n"
    "vertex 1 rank=1 gens=x\n"
    'edge 0 0 1 minus="a b" plus="x^2"\n'
    'edge 1 0 1 minus="b a" plus="x^3"\n'
)
CHAIN3 = parse_graph(
    "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\nvertex 2 rank=1 gens=c\n"
    'edge 0 0 1 minus="a^2" plus="b"\nedge 1 1 2 minus="b" plus="c^3"'
)
FXF = parse_graph(
    'vertex 0 rank=2 gens=a,b\nvertex 1 rank=2 gens=x,y\nedge 0 0 1 minus="a" plus="x"'
)
COMM = parse_graph(
    "vertex 0 rank=2 gens=a,b\nvertex 1 rank=1 gens=x\n"
    'edge 0 0 1 minus="a b a^-1 b^-1" plus="x^2"'
)
SEMI = parse_graph(
    'vertex 0 rank=2 gens=a,b\nvertex 1 rank=1 gens=x\nedge 0 0 1 minus="a" plus="x^2"'
)
MIXED = parse_graph(
    "vertex 0 rank=1 gens=a\nvertex 1 rank=2 gens=x,y\n"
    'edge 0 0 1 minus="a^2" plus="x"\n'
    'edge 1 0 1 minus="a^3" plus="x^3"\n'
    'edge 2 0 0 minus="a" plus="a^4"\n'
    'edge 3 1 1 minus="y" plus="y^2"\n'
)

ALL_GRAPHS = [BS23, BS22, BS2M2, TREFOIL, THETA, CHAIN3, FXF, COMM, SEMI, MIXED]


def w(graph, vid, text):
    return graph.vertices[vid].parse(text)


def ori(graph, eid, forward=True):
    return OrientedEdge(graph.edges[eid], forward)


def verify_in_engine(graph, path, m, n):
    engine = Engine(graph)
    conj = engine.element_of(path.conjugator_items())
    lhs = engine.conjugate(conj, engine.power(engine.embed(path.start), m))
    rhs = engine.power(engine.embed(path.end), n)
    assert engine.equal(lhs, rhs)


# ------------------------------------------------------- check_conjugacy_path


class TestCheckConjugacyPath:
    def test_loop_identifying_powers(self):
        p = check_conjugacy_path(BS23, w(BS23, 0, "a^2"), w(BS23, 0, "a^3"), [ori(BS23, 0)])
        assert p is not None
        assert p.witness_exponents() == (1, 1)
        verify_in_engine(BS23, p, 1, 1)

    def test_amalgam_edge(self):
        p = check_conjugacy_path(TREFOIL, w(TREFOIL, 0, "a"), w(TREFOIL, 1, "b"), [ori(TREFOIL, 0)])
        assert p is not None
        assert p.witness_exponents() == (2, 3)
        verify_in_engine(TREFOIL, p, 2, 3)

    def test_unrelated_root_fails(self):
        assert check_conjugacy_path(FXF, w(FXF, 0, "b"), w(FXF, 1, "x"), [ori(FXF, 0)]) is None

    def test_distorted_endpoint(self):
        g = w(THETA, 0, "b a")  # conjugate of the inclusion word a b
        p = check_conjugacy_path(THETA, g, w(THETA, 1, "x"), [ori(THETA, 0)])
        assert p is not None
        m, n = p.witness_exponents()
        assert (m, n) == (1, 2)
        verify_in_engine(THETA, p, m, n)

    def test_malformed_queries(self):
        a, b = w(TREFOIL, 0, "a"), w(TREFOIL, 1, "b")
        with pytest.raises(DegenerateInputError):  # empty path
            check_conjugacy_path(TREFOIL, a, b, [])
        with pytest.raises(DegenerateInputError):  # trivial endpoint
            check_conjugacy_path(TREFOIL, w(TREFOIL, 0, "1"), b, [ori(TREFOIL, 0)])
        with pytest.raises(DegenerateInputError):  # b does not live at the start vertex
            check_conjugacy_path(TREFOIL, b, a, [ori(TREFOIL, 0)])

    def test_broken_chain(self):
        with pytest.raises(DegenerateInputError):
            check_conjugacy_path(
                THETA, w(THETA, 0, "a b"), w(THETA, 0, "b a"), [ori(THETA, 0), ori(THETA, 1)]
            )

    def test_certificates_recompose(self):
        p = check_conjugacy_path(THETA, w(THETA, 0, "a b"), w(THETA, 0, "a b"), [ori(THETA, 0), ori(THETA, 1, False)])
        assert p is not None
        for tr in p.transitions():
            k_in, k_out = tr.meet.exps
            theta = tr.conjugator()
            assert theta * tr.incoming**k_out * theta.inverse() == tr.outgoing**k_in


# ------------------------------------------------------------ complete paths


def naive_complete_keys(graph):
    """Generate-and-filter over all oriented edge sequences."""
    oriented = graph.oriented_edges()

    def key(seq):
        return tuple((s.edge.id, 0 if s.forward else 1) for s in seq)

    def canon(seq):
        rev = [s.reversed() for s in reversed(seq)]
        rots = [tuple(seq[i:]) + tuple(seq[:i]) for i in range(len(seq))]
        rots += [tuple(rev[i:]) + tuple(rev[:i]) for i in range(len(seq))]
        return min(key(r) for r in rots)

    found = {}
    for n in range(1, len(graph.edges) + 1):
        for seq in product(oriented, repeat=n):
            if any(a.terminus != b.origin for a, b in zip(seq, seq[1:])):
                continue
            if seq[-1].terminus != seq[0].origin:
                continue
            ids = [s.edge.id for s in seq]
            if len(set(ids)) != len(ids):
                continue
            if key(seq) != canon(seq):
                continue  # ratio is orientation-dependent; compute it at the representative
            if any(
                cyclic_meet(seq[i].terminus_word, seq[(i + 1) % n].origin_word) is None
                for i in range(n)
            ):
                continue
            ratio = Fraction(1)
            for i in range(n):
                meet = cyclic_meet(seq[i].terminus_word, seq[(i + 1) % n].origin_word)
                ratio *= Fraction(meet.exps[0], meet.exps[1])
            found[key(seq)] = ratio
    return found


class TestCompletePaths:
    def test_bs23(self):
        verdicts = enumerate_complete_paths(BS23)
        assert len(verdicts) == 1
        (v,) = verdicts
        assert v.ratio == Fraction(3, 2)
        assert not v.level
        assert v.witness == (2, 3)
        assert v.base_vertex == 0 and v.bases == (0,)
        verify_in_engine(BS23, v.path, *v.witness)

    def test_bs22_level(self):
        (v,) = enumerate_complete_paths(BS22)
        assert v.ratio == 1 and v.level and v.witness == (1, 1)

    def test_bs2_minus2_level_with_sign(self):
        (v,) = enumerate_complete_paths(BS2M2)
        assert v.ratio == -1 and v.level
        assert v.witness == (1, -1)
        verify_in_engine(BS2M2, v.path, 1, -1)

    def test_trees_have_none(self):
        assert enumerate_complete_paths(TREFOIL) == []
        assert enumerate_complete_paths(CHAIN3) == []
        assert enumerate_complete_paths(FXF) == []

    def test_theta_cycle_is_complete_and_nonlevel(self):
        verdicts = enumerate_complete_paths(THETA)
        assert len(verdicts) == 1
        (v,) = verdicts
        assert v.ratio == Fraction(2, 3)
        assert not v.level
        assert v.witness == (3, 2)
        assert v.base_word == w(THETA, 0, "a b")
        assert v.bases == (0, 1)
        verify_in_engine(THETA, v.path, 3, 2)

    def test_mixed_graph_verdicts_verify(self):
        verdicts = enumerate_complete_paths(MIXED)
        assert verdicts  # the two loops at least
        for v in verdicts:
            assert v.level == (abs(v.ratio) == 1)
            i, j = v.witness
            assert (abs(i) == abs(j)) == v.level
            assert Fraction(j, i) == v.ratio
            verify_in_engine(MIXED, v.path, i, j)

    @pytest.mark.parametrize("graph", ALL_GRAPHS)
    def test_matches_naive_enumeration(self, graph):
        expected = naive_complete_keys(graph)
        verdicts = enumerate_complete_paths(graph, max_edges_warn=10)
        got = {
            tuple((s.edge.id, 0 if s.forward else 1) for s in v.steps): v.ratio
            for v in verdicts
        }
        assert got == expected

    def test_reversal_inverts_ratio(self):
        (v,) = enumerate_complete_paths(THETA)
        back = [s.reversed() for s in reversed(v.steps)]
        base = back[0].origin_word
        p = check_conjugacy_path(THETA, base, base, back)
        assert p is not None
        assert p.ratio() == 1 / v.ratio

    def test_size_warning(self):
        with pytest.warns(EnumerationSizeWarning):
            enumerate_complete_paths(THETA, max_edges_warn=1)


# -------------------------------------------------------- non-maximal paths


class TestFullNonMaximalPaths:
    def test_single_edge_double_arrow(self):
        paths = enumerate_full_nonmaximal_paths(TREFOIL)
        assert len(paths) == 1
        (p,) = paths
        assert p.kind == "full"
        assert len(p.steps) == 1
        assert set(p.arrows) == {(0, -1), (0, 1)}
        m, n = p.path.witness_exponents()
        verify_in_engine(TREFOIL, p.path, m, n)

    def test_arrow_on_one_end_only(self):
        assert enumerate_full_nonmaximal_paths(COMM) == []

    def test_two_edge_chain(self):
        paths = enumerate_full_nonmaximal_paths(CHAIN3)
        assert len(paths) == 1
        (p,) = paths
        assert [s.edge.id for s in p.steps] == [0, 1]
        assert p.path.start == w(CHAIN3, 0, "a^2")
        assert p.path.end == w(CHAIN3, 2, "c^3")
        m, n = p.path.witness_exponents()
        assert (m, n) == (1, 1)  # a^2 = b = c^3 straight through
        verify_in_engine(CHAIN3, p.path, m, n)

    def test_middle_arrow_blocks(self):
        g = parse_graph(
            "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\nvertex 2 rank=1 gens=c\n"
            'edge 0 0 1 minus="a^2" plus="b^2"\nedge 1 1 2 minus="b" plus="c^3"'
        )
        # arrow at the far end of edge 0 (b^2) disqualifies every multi-edge chain
        paths = enumerate_full_nonmaximal_paths(g)
        assert len(paths) == 1 and len(paths[0].steps) == 1
        assert paths[0].steps[0].edge.id == 0

    def test_no_reversal_duplicates(self):
        for graph in ALL_GRAPHS:
            paths = enumerate_full_nonmaximal_paths(graph)
            keys = [tuple((s.edge.id, s.forward) for s in p.steps) for p in paths]
            rev_keys = [
                tuple((s.edge.id, not s.forward) for s in reversed(p.steps))
                for p in paths
            ]
            for rk in rev_keys:
                assert rk not in keys or (rk,) and keys.count(rk) <= 1


class TestSemiNonMaximalPaths:
    def test_spec_single_edge(self):
        hit = find_semi_nonmaximal_path_to(SEMI, w(SEMI, 0, "a"), word_hyperbolic=True)
        assert hit is not None and hit.kind == "semi"
        assert len(hit.steps) == 1 and not hit.steps[0].forward
        assert hit.arrows == ((0, 1),)
        assert hit.path.end == w(SEMI, 0, "a")
        assert hit.path.start == w(SEMI, 1, "x^2")  # the arrowed inclusion word
        m, n = hit.path.witness_exponents()
        assert (m, n) == (1, 1)  # x^2 = a on the nose
        verify_in_engine(SEMI, hit.path, m, n)

    def test_unrelated_target(self):
        assert find_semi_nonmaximal_path_to(SEMI, w(SEMI, 0, "b"), word_hyperbolic=True) is None

    def test_no_arrows_anywhere(self):
        assert find_semi_nonmaximal_path_to(FXF, w(FXF, 0, "a"), word_hyperbolic=True) is None

    def test_requires_established_hyperbolicity(self):
        with pytest.raises(PreconditionError):
            find_semi_nonmaximal_path_to(SEMI, w(SEMI, 0, "a"), word_hyperbolic=False)

    def test_trivial_target(self):
        with pytest.raises(DegenerateInputError):
            find_semi_nonmaximal_path_to(SEMI, w(SEMI, 0, "1"), word_hyperbolic=True)


# ---------------------------------------------------------------- open paths


class TestIterConjugacyPaths:
    def test_amalgam_hit(self):
        paths = list(iter_conjugacy_paths(TREFOIL, w(TREFOIL, 0, "a"), w(TREFOIL, 1, "b")))
        assert len(paths) == 1
        assert paths[0].witness_exponents() == (2, 3)

    def test_no_path_for_unrelated(self):
        assert list(iter_conjugacy_paths(FXF, w(FXF, 0, "b"), w(FXF, 1, "y"))) == []

    def test_closed_self_paths_included(self):
        a = w(BS23, 0, "a")
        paths = list(iter_conjugacy_paths(BS23, a, a))
        assert {p.witness_exponents() for p in paths} == {(2, 3), (3, 2)}
        for p in paths:
            verify_in_engine(BS23, p, *p.witness_exponents())
