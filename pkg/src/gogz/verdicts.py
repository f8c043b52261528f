"""Group-level verdicts read off a graph of groups, each with a checked witness.

Every decider reduces a question about the fundamental group to finitely
many path or root computations on the graph, and every positive claim is
re-verified in the normal-form engine before it is returned: a conjugation
witness must multiply out exactly, a central element must visibly commute
with every generator.  A verification failure is a bug in the enumeration
layer, never a property of the input, so it raises
:class:`~gogz.errors.InternalInconsistencyError`.

Verdicts decided here:

* ``is_balanced`` — no closed chain multiplies exponents by a ratio other
  than ±1; an offending chain exhibits conjugate distinct powers ``g^i ~
  g^j`` and pins down the Baumslag-Solitar subgroup BS(m, n) they generate.
* ``is_word_hyperbolic`` — no complete closed chain and no full
  non-maximal path; a witness of either kind embeds a Baumslag-Solitar
  subgroup (Z^2 counts as BS(1, 1)).
* ``is_acyl_hyperbolic`` — on a reduced graph, acylindrical hyperbolicity
  fails exactly when every vertex group is infinite cyclic; the common
  power of the incident inclusion words then generates an s-normal
  subgroup.
* ``trichotomy`` — acylindrically hyperbolic, or surjecting onto the
  integers, or carrying an infinite cyclic normal (here central) subgroup.
* ``power_conjugate`` — decides whether powers of two vertex elements are
  conjugate, returning a minimal certified witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Tuple, Union

from .engine import Engine
from .errors import (
    DegenerateInputError,
    GraphNotReducedError,
    InternalInconsistencyError,
)
from .graphs import MINUS, PLUS, ContractionLog, GraphOfGroups, maximal_tree, reduce_graph
from .paths import (
    CompletePathVerdict,
    ConjugacyPath,
    ConjugatorItem,
    NonMaximalPath,
    enumerate_complete_paths,
    enumerate_full_nonmaximal_paths,
    iter_conjugacy_paths,
)
from .words import FreeWord, cyclic_meet, maximal_root, root


def _holds_in_engine(
    engine: Engine,
    items: List[ConjugatorItem],
    x: FreeWord,
    m: int,
    y: FreeWord,
    n: int,
) -> bool:
    conj = engine.element_of(items)
    lhs = engine.conjugate(conj, engine.power(engine.embed(x), m))
    return engine.equal(lhs, engine.power(engine.embed(y), n))


def _require(engine: Engine, items, x, m, y, n, claim: str) -> None:
    if not _holds_in_engine(engine, items, x, m, y, n):
        raise InternalInconsistencyError(f"witness failed engine verification: {claim}")


# ------------------------------------------------------------------- balance


@dataclass(frozen=True)
class BalanceVerdict:
    """``balanced`` with, when false, the offending closed chain.

    ``bs_tag = (m, n)`` names the Baumslag-Solitar subgroup BS(m, n)
    generated by the witness relation (``bs_sign`` carries the sign of the
    transfer ratio).  ``modulus`` lists the distinct exponent-transfer
    ratios realised by complete closed chains.
    """

    balanced: bool
    witness: Optional[CompletePathVerdict]
    bs_tag: Optional[Tuple[int, int]]
    bs_sign: int
    modulus: Tuple[Fraction, ...]


def is_balanced(graph: GraphOfGroups) -> BalanceVerdict:
    """A non-level complete closed chain is exactly an unbalanced element."""
    verdicts = enumerate_complete_paths(graph)
    modulus = tuple(sorted({v.ratio for v in verdicts}, key=lambda r: (abs(r), r)))
    nonlevel = [v for v in verdicts if not v.level]
    if not nonlevel:
        return BalanceVerdict(True, None, None, 1, modulus)
    witness = nonlevel[0]
    i, j = witness.witness
    _require(
        Engine(graph),
        witness.path.conjugator_items(),
        witness.base_word,
        i,
        witness.base_word,
        j,
        f"closed chain conjugating g^{i} to g^{j}",
    )
    inverse_ratio = 1 / witness.ratio
    tag = (abs(inverse_ratio.numerator), abs(inverse_ratio.denominator))
    return BalanceVerdict(False, witness, tag, 1 if inverse_ratio > 0 else -1, modulus)


# -------------------------------------------------------------- hyperbolicity


@dataclass(frozen=True)
class HyperbolicityVerdict:
    """``hyperbolic`` with the first refuting path when false.

    A refutation of either kind forces a Baumslag-Solitar subgroup (a full
    non-maximal path of level ratio yields Z^2 = BS(1, 1)).
    """

    hyperbolic: bool
    witness: Union[CompletePathVerdict, NonMaximalPath, None]
    contains_baumslag_solitar: bool


def is_word_hyperbolic(graph: GraphOfGroups) -> HyperbolicityVerdict:
    complete = enumerate_complete_paths(graph)
    full = enumerate_full_nonmaximal_paths(graph)
    if not complete and not full:
        return HyperbolicityVerdict(True, None, False)
    engine = Engine(graph)
    if complete:
        witness: Union[CompletePathVerdict, NonMaximalPath] = complete[0]
        i, j = witness.witness
        _require(
            engine,
            witness.path.conjugator_items(),
            witness.base_word,
            i,
            witness.base_word,
            j,
            "complete closed chain",
        )
    else:
        witness = full[0]
        m, n = witness.path.witness_exponents()
        _require(
            engine,
            witness.path.conjugator_items(),
            witness.path.start,
            m,
            witness.path.end,
            n,
            "full non-maximal path",
        )
    return HyperbolicityVerdict(False, witness, True)


# --------------------------------------------------------------- acylindrical


@dataclass(frozen=True)
class AcylVerdict:
    """Acylindrical hyperbolicity of the fundamental group of a reduced graph.

    When acylindrically hyperbolic, ``condition`` names the failed clause:
    ``"edge_roots_disagree"`` (two incident inclusion words at ``vertex``
    generate cyclic subgroups with trivial intersection — ``evidence`` holds
    the pair) or ``"vertex_not_cyclic"`` (``vertex`` has rank at least two,
    so no cyclic subgroup is s-normal in it).  Otherwise every vertex group
    is infinite cyclic and ``snormal_generators`` maps each vertex to a
    generator of the intersection of its incident edge subgroups.
    """

    acyl_hyperbolic: bool
    condition: Optional[str]
    vertex: Optional[int]
    evidence: Tuple[FreeWord, ...]
    snormal_generators: Dict[int, FreeWord]


def is_acyl_hyperbolic(graph: GraphOfGroups) -> AcylVerdict:
    if not graph.is_reduced:
        raise GraphNotReducedError("acylindricity is decided on the reduced graph")
    if graph.is_trivial:
        raise DegenerateInputError(
            "graph reduces to a single free vertex group; the splitting "
            "criterion does not apply"
        )
    incident_words = {
        vid: [edge.word(side) for edge, side in graph.incident(vid)]
        for vid in sorted(graph.vertices)
    }
    for vid, ws in incident_words.items():
        anchor = maximal_root(ws[0])
        for other in ws[1:]:
            if maximal_root(other) != anchor:
                return AcylVerdict(True, "edge_roots_disagree", vid, (ws[0], other), {})
    for vid in sorted(graph.vertices):
        if graph.vertices[vid].rank >= 2:
            return AcylVerdict(True, "vertex_not_cyclic", vid, (), {})

    engine = Engine(graph)
    generators: Dict[int, FreeWord] = {}
    for vid, ws in incident_words.items():
        exps = [root(w).exponent for w in ws]
        common = lcm(*(abs(k) for k in exps))
        g_v = maximal_root(ws[0]) ** common
        for w, k in zip(ws, exps):
            sign = 1 if k > 0 else -1
            lhs = engine.power(engine.embed(w), common // abs(k))
            if not engine.equal(lhs, engine.power(engine.embed(g_v), sign)):
                raise InternalInconsistencyError(
                    f"s-normal generator at vertex {vid} failed verification"
                )
        generators[vid] = g_v
    return AcylVerdict(False, None, None, (), generators)


def rel_hyp_obstruction(graph: GraphOfGroups) -> Optional[str]:
    """A note when no relative hyperbolicity is available, else None.

    A reduced graph whose vertex groups are all infinite cyclic presents a
    generalised Baumslag-Solitar group, which is not hyperbolic relative to
    any collection of proper subgroups.
    """
    if not graph.is_reduced:
        raise GraphNotReducedError("the obstruction is read off the reduced graph")
    if all(v.rank == 1 for v in graph.vertices.values()):
        return (
            "all vertex groups are infinite cyclic (generalised Baumslag-Solitar "
            "group): not hyperbolic relative to any proper subgroups"
        )
    return None


# ----------------------------------------------------------------- trichotomy


@dataclass(frozen=True)
class CentralWitness:
    """An element written as a power of every vertex generator at once.

    ``element`` is the chosen expression at ``root_vertex``;
    ``exponents[v]`` rewrites it as (generator of v) ** exponents[v].
    Commuting with every generator of a tree of cyclic groups makes it
    central, so it spans an infinite cyclic normal subgroup.
    """

    root_vertex: int
    element: FreeWord
    exponents: Dict[int, int]


@dataclass(frozen=True)
class TrichotomyVerdict:
    """One of three mutually non-exclusive outcomes, checked in this order:
    acylindrically hyperbolic; surjects onto the integers; has an infinite
    cyclic normal subgroup."""

    branch: str  # "acylindrically_hyperbolic" | "surjects_Z" | "cyclic_normal_subgroup"
    acyl: Optional[AcylVerdict]
    surjection_edges: Tuple[int, ...]
    central: Optional[CentralWitness]
    free_rank: Optional[int]  # set when the graph reduces to a single vertex


def _vertex_generator(graph: GraphOfGroups, vid: int) -> FreeWord:
    return graph.vertices[vid].alphabet.word((1,))


def _central_witness(graph: GraphOfGroups) -> CentralWitness:
    """Common power of all vertex generators in a reduced tree of cyclic groups."""
    tree = maximal_tree(graph)
    assert not tree.non_tree_edge_ids
    ratio: Dict[int, Fraction] = {tree.root: Fraction(1)}
    for step in tree.steps:
        edge = graph.edges[step.edge_id]
        if edge.minus_vertex == step.parent:
            k_parent, k_child = root(edge.minus_word).exponent, root(edge.plus_word).exponent
        else:
            k_parent, k_child = root(edge.plus_word).exponent, root(edge.minus_word).exponent
        ratio[step.child] = ratio[step.parent] * Fraction(k_child, k_parent)
    scale = lcm(
        *(
            (ratio[e.minus_vertex] / root(e.minus_word).exponent).denominator
            for e in graph.edges.values()
        )
    ) if graph.edges else 1
    exponents = {}
    for vid, r in ratio.items():
        x = scale * r
        assert x.denominator == 1 and x != 0
        exponents[vid] = int(x)
    element = _vertex_generator(graph, tree.root) ** exponents[tree.root]

    engine = Engine(graph)
    g = engine.embed(element)
    for vid, x in exponents.items():
        if not engine.equal(g, engine.power(engine.embed(_vertex_generator(graph, vid)), x)):
            raise InternalInconsistencyError(
                f"central witness is not generator^{x} at vertex {vid}"
            )
        gen = engine.embed(_vertex_generator(graph, vid))
        if not engine.equal(engine.mul(gen, g), engine.mul(g, gen)):
            raise InternalInconsistencyError(
                f"central witness fails to commute at vertex {vid}"
            )
    return CentralWitness(tree.root, element, exponents)


def trichotomy(graph: GraphOfGroups) -> TrichotomyVerdict:
    """Reduce, then test: acylindrically hyperbolic / surjects Z / central cyclic.

    A non-tree reduced graph surjects onto the integers by sending one
    stable letter to 1 and every vertex group to 0; a reduced tree that is
    not acylindrically hyperbolic has all vertex groups cyclic and carries
    the common central power built by ``_central_witness``.
    """
    reduced, _ = reduce_graph(graph)
    if reduced.is_trivial:
        (vertex,) = reduced.vertices.values()
        return TrichotomyVerdict("surjects_Z", None, (), None, vertex.rank)
    acyl = is_acyl_hyperbolic(reduced)
    if acyl.acyl_hyperbolic:
        return TrichotomyVerdict("acylindrically_hyperbolic", acyl, (), None, None)
    if reduced.betti_number > 0:
        non_tree = maximal_tree(reduced).non_tree_edge_ids
        return TrichotomyVerdict("surjects_Z", acyl, non_tree, None, None)
    return TrichotomyVerdict("cyclic_normal_subgroup", acyl, (), _central_witness(reduced), None)


# ------------------------------------------------------------ power conjugacy


@dataclass(frozen=True)
class ConjugacyAnswer:
    """Whether some powers of x and y are conjugate, with a checked witness.

    When ``exists``, the engine has verified conjugator * x^m * conjugator^-1
    = y^n for ``exponents = (m, n)``.  ``route`` is "same_vertex" when the
    vertex group already provides the conjugation, else "path"; ``path``
    carries the certified chain in the latter case.
    """

    exists: bool
    exponents: Optional[Tuple[int, int]]
    conjugator: Tuple[ConjugatorItem, ...]
    route: Optional[str]
    path: Optional[ConjugacyPath]


def _same_vertex_candidate(
    x: FreeWord, y: FreeWord
) -> Optional[Tuple[int, int, List[ConjugatorItem]]]:
    meet = cyclic_meet(x, y)
    if meet is None:
        return None
    k_x, k_y = meet.exps
    d = gcd(abs(k_x), abs(k_y))
    m = abs(k_y) // d
    n = (k_x // d) * (1 if k_y > 0 else -1)
    theta = meet.transfer_conjugator()
    items: List[ConjugatorItem] = [] if theta.is_identity else [theta]
    return m, n, items


def power_conjugate(graph: GraphOfGroups, x: FreeWord, y: FreeWord) -> ConjugacyAnswer:
    """Minimal certified witness that x^m is conjugate to y^n, if any.

    Candidates come from the shared vertex group (when x and y live at the
    same vertex) and from every edge-once conjugacy path between their
    vertices; the winner minimises (m, |n|).  The witness exponents are
    divided by their gcd when the reduced claim still verifies.
    """
    if x.is_identity or y.is_identity:
        raise DegenerateInputError("power conjugacy is asked of nontrivial elements")
    candidates: List[Tuple[Tuple[int, int, int], int, int, List[ConjugatorItem], str, Optional[ConjugacyPath]]] = []
    if x.vertex == y.vertex:
        same = _same_vertex_candidate(x, y)
        if same is not None:
            m, n, items = same
            candidates.append(((m, abs(n), 0), m, n, items, "same_vertex", None))
    for path in iter_conjugacy_paths(graph, x, y):
        m, n = path.witness_exponents()
        candidates.append(((m, abs(n), 1), m, n, path.conjugator_items(), "path", path))
    if not candidates:
        return ConjugacyAnswer(False, None, (), None, None)

    candidates.sort(key=lambda c: c[0])
    _, m, n, items, route, path = candidates[0]
    engine = Engine(graph)
    _require(engine, items, x, m, y, n, f"power conjugacy ({m}, {n})")
    d = gcd(m, abs(n))
    if d > 1 and _holds_in_engine(engine, items, x, m // d, y, n // d):
        m, n = m // d, n // d
    return ConjugacyAnswer(True, (m, n), tuple(items), route, path)


# -------------------------------------------------------------------- report


@dataclass(frozen=True)
class AnalysisReport:
    """All verdicts for one graph, plus the reduction that was applied.

    ``acyl`` is None when the graph reduces to a single vertex: the
    fundamental group is then free of rank ``free_rank`` and the reduced
    splitting criterion has nothing to say.  ``notes`` collects shape
    caveats (currently: a reduced single vertex with a single bad loop).
    """

    graph: GraphOfGroups
    reduced: GraphOfGroups
    contractions: ContractionLog
    balance: BalanceVerdict
    hyperbolicity: HyperbolicityVerdict
    acyl: Optional[AcylVerdict]
    trichotomy: TrichotomyVerdict
    rel_hyp_note: Optional[str]
    free_rank: Optional[int]
    notes: Tuple[str, ...]


def analyze(graph: GraphOfGroups) -> AnalysisReport:
    """Run every decider and cross-check the verdicts against each other."""
    reduced, log = reduce_graph(graph)
    balance = is_balanced(graph)
    hyper = is_word_hyperbolic(graph)
    tri = trichotomy(graph)

    notes: List[str] = []
    if reduced.is_trivial:
        (vertex,) = reduced.vertices.values()
        free_rank: Optional[int] = vertex.rank
        acyl = None
        rel_note = rel_hyp_obstruction(reduced) if vertex.rank == 1 else None
    else:
        free_rank = None
        acyl = is_acyl_hyperbolic(reduced)
        rel_note = rel_hyp_obstruction(reduced)
        if len(reduced.vertices) == 1 and len(reduced.edges) == 1:
            edge = next(iter(reduced.edges.values()))
            if reduced.is_bad_end(edge, MINUS) or reduced.is_bad_end(edge, PLUS):
                notes.append(
                    "reduced shape is a single vertex with a single bad loop "
                    "(an ascending HNN extension of the vertex group)"
                )

    if not balance.balanced and hyper.hyperbolic:
        raise InternalInconsistencyError("unbalanced group reported word hyperbolic")
    if reduced.is_trivial and not (balance.balanced and hyper.hyperbolic):
        raise InternalInconsistencyError("free fundamental group misclassified")
    if acyl is not None and hyper.hyperbolic and not acyl.acyl_hyperbolic:
        raise InternalInconsistencyError(
            "word hyperbolic fundamental group reported not acylindrically hyperbolic"
        )
    return AnalysisReport(
        graph, reduced, log, balance, hyper, acyl, tri, rel_note, free_rank, tuple(notes)
    )
