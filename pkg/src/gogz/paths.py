"""Path criteria over a graph of groups.

A conjugacy path threads a power of a vertex element through a chain of
edges: at each vertex along the way the exponent is transferred between
two cyclic subgroups of the free vertex group (their overlap certified by
:func:`gogz.words.cyclic_meet`), and crossing an edge swaps one inclusion
word for the other at the cost of a stable letter.  Multiplying the exact
rational transfer ratios along the chain tells us which powers of the two
endpoint elements become conjugate in the fundamental group, and composing
the per-vertex conjugators with the stable letters yields an explicit
conjugator that the normal-form engine can check.

Three enumerations are built on this:

* closed chains that use each unoriented edge at most once and certify a
  self-conjugacy ``w g^i w^-1 = g^j`` (the *complete* closed paths; the
  chain is *level* when ``|i| = |j|``),
* *full non-maximal* paths, whose endpoint inclusion words are proper
  powers at both ends while every other inclusion along the way is
  maximal — the shape that produces a Z^2 or Baumslag-Solitar subgroup,
* *semi non-maximal* paths, the one-arrow variant used to decide whether
  a vertex element stays maximal in the fundamental group.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .errors import DegenerateInputError, PreconditionError
from .graphs import GraphOfGroups, OrientedEdge
from .words import CyclicMeet, FreeWord, cyclic_meet

TLetter = Tuple[str, int, int]
ConjugatorItem = Union[FreeWord, TLetter]


class EnumerationSizeWarning(UserWarning):
    """Closed-path enumeration grows factorially with the edge count."""


@dataclass(frozen=True)
class Transition:
    """One exponent transfer inside the vertex group at ``vertex_id``.

    ``meet`` certifies that a conjugate of <incoming> overlaps <outgoing>;
    ``conjugator()`` maps incoming^x to outgoing^(x * ratio) whenever the
    target exponent is an integer.
    """

    vertex_id: int
    incoming: FreeWord
    outgoing: FreeWord
    meet: CyclicMeet

    @property
    def ratio(self) -> Fraction:
        k_in, k_out = self.meet.exps
        return Fraction(k_in, k_out)

    def conjugator(self) -> FreeWord:
        return self.meet.transfer_conjugator()


def _t_letter(step: OrientedEdge) -> TLetter:
    return ("t", step.edge.id, 1 if step.forward else -1)


@dataclass(frozen=True)
class ConjugacyPath:
    """A certified chain carrying powers of ``start`` onto powers of ``end``.

    ``entry`` transfers ``start`` onto the first inclusion word, each of
    ``junctions[i]`` bridges steps[i] -> steps[i+1] inside a vertex group,
    and ``exit`` lands on ``end``.  Crossing an edge preserves the exponent
    (stable letters conjugate one inclusion word to the other).
    """

    steps: Tuple[OrientedEdge, ...]
    start: FreeWord
    end: FreeWord
    entry: Transition
    junctions: Tuple[Transition, ...]
    exit: Transition

    def transitions(self) -> Tuple[Transition, ...]:
        return (self.entry, *self.junctions, self.exit)

    def ratio(self) -> Fraction:
        out = Fraction(1)
        for tr in self.transitions():
            out *= tr.ratio
        return out

    def _partials(self) -> List[Fraction]:
        out = []
        q = Fraction(1)
        for tr in self.transitions():
            q *= tr.ratio
            out.append(q)
        return out

    def witness_exponents(self) -> Tuple[int, int]:
        """Minimal (m, n) with conjugator() * start^m * conjugator()^-1 = end^n.

        m is the least positive exponent whose transfer stays integral at
        every stage of the chain.
        """
        partials = self._partials()
        m = lcm(*(q.denominator for q in partials))
        n = m * partials[-1]
        assert n.denominator == 1
        return m, int(n)

    def conjugator_items(self) -> List[ConjugatorItem]:
        """The conjugator as a product of vertex words and stable letters.

        Items are listed left to right; the rightmost acts first.  Identity
        vertex words are dropped; stable letters of spanning-tree edges are
        kept (the engine treats them as the identity).
        """
        items: List[ConjugatorItem] = [self.exit.conjugator()]
        for step, junction in zip(reversed(self.steps[1:]), reversed(self.junctions)):
            items.append(_t_letter(step))
            items.append(junction.conjugator())
        items.append(_t_letter(self.steps[0]))
        items.append(self.entry.conjugator())
        return [w for w in items if not (isinstance(w, FreeWord) and w.is_identity)]


def check_conjugacy_path(
    graph: GraphOfGroups,
    g: FreeWord,
    g_prime: FreeWord,
    steps: Sequence[OrientedEdge],
) -> Optional[ConjugacyPath]:
    """Certify the edge chain ``steps`` as a conjugacy path from g to g'.

    Returns None when some overlap along the chain fails; raises on a
    malformed query (trivial endpoints, vertex mismatch, broken chain).
    """
    steps = tuple(steps)
    if not steps:
        raise DegenerateInputError("a conjugacy path needs at least one edge")
    if g.is_identity or g_prime.is_identity:
        raise DegenerateInputError("conjugacy paths connect nontrivial elements")
    if g.vertex != str(steps[0].origin):
        raise DegenerateInputError(
            f"g lives at vertex {g.vertex!r} but the path starts at {steps[0].origin}"
        )
    if g_prime.vertex != str(steps[-1].terminus):
        raise DegenerateInputError(
            f"g' lives at vertex {g_prime.vertex!r} but the path ends at {steps[-1].terminus}"
        )
    for a, b in zip(steps, steps[1:]):
        if a.terminus != b.origin:
            raise DegenerateInputError(f"broken chain: {a!r} does not meet {b!r}")

    entry_meet = cyclic_meet(g, steps[0].origin_word)
    if entry_meet is None:
        return None
    entry = Transition(steps[0].origin, g, steps[0].origin_word, entry_meet)

    junctions = []
    for a, b in zip(steps, steps[1:]):
        meet = cyclic_meet(a.terminus_word, b.origin_word)
        if meet is None:
            return None
        junctions.append(Transition(a.terminus, a.terminus_word, b.origin_word, meet))

    exit_meet = cyclic_meet(steps[-1].terminus_word, g_prime)
    if exit_meet is None:
        return None
    exit_ = Transition(steps[-1].terminus, steps[-1].terminus_word, g_prime, exit_meet)

    return ConjugacyPath(steps, g, g_prime, entry, tuple(junctions), exit_)


# ------------------------------------------------------------- closed paths


@dataclass(frozen=True)
class CompletePathVerdict:
    """A closed edge-once chain certifying w g^i w^-1 = g^j at its base.

    ``bases`` lists every vertex the chain can be based at (the closing
    overlap holds at each step origin).  ``level`` records |ratio| = 1;
    a non-level verdict exhibits an unbalanced element.
    """

    path: ConjugacyPath
    base_vertex: int
    bases: Tuple[int, ...]
    ratio: Fraction
    level: bool
    witness: Tuple[int, int]

    @property
    def steps(self) -> Tuple[OrientedEdge, ...]:
        return self.path.steps

    @property
    def base_word(self) -> FreeWord:
        return self.path.start


def _step_key(step: OrientedEdge) -> Tuple[int, int]:
    return (step.edge.id, 0 if step.forward else 1)


def _path_key(steps: Sequence[OrientedEdge]) -> Tuple[Tuple[int, int], ...]:
    return tuple(_step_key(s) for s in steps)


def _reversed_path(steps: Sequence[OrientedEdge]) -> List[OrientedEdge]:
    return [s.reversed() for s in reversed(steps)]


def _is_canonical_cycle(steps: Sequence[OrientedEdge]) -> bool:
    """True when ``steps`` is the lex-least rotation of itself and its reverse."""
    key = _path_key(steps)
    n = len(steps)
    candidates = [tuple(steps[i:]) + tuple(steps[:i]) for i in range(n)]
    rev = _reversed_path(steps)
    candidates += [tuple(rev[i:]) + tuple(rev[:i]) for i in range(n)]
    return key == min(_path_key(c) for c in candidates)


def _iter_edge_once_cycles(graph: GraphOfGroups) -> Iterator[Tuple[OrientedEdge, ...]]:
    """All closed edge-once chains, one representative per rotation/reversal class."""
    oriented = graph.oriented_edges()

    def extend(path: List[OrientedEdge], used: set) -> Iterator[Tuple[OrientedEdge, ...]]:
        here = path[-1].terminus
        if here == path[0].origin and _is_canonical_cycle(path):
            yield tuple(path)
        for step in oriented:
            if step.edge.id in used or step.origin != here:
                continue
            path.append(step)
            used.add(step.edge.id)
            yield from extend(path, used)
            used.discard(step.edge.id)
            path.pop()

    for start in oriented:
        yield from extend([start], {start.edge.id})


def enumerate_complete_paths(
    graph: GraphOfGroups, *, max_edges_warn: int = 8
) -> List[CompletePathVerdict]:
    """All complete closed chains, deduplicated under rotation and reversal.

    Each verdict is based at the canonical rotation's start; the closing
    overlap is part of the certificate chain, so the witness covers the
    full loop including the return to the base word.
    """
    if len(graph.edges) > max_edges_warn:
        warnings.warn(
            f"enumerating closed paths over {len(graph.edges)} edges may be slow",
            EnumerationSizeWarning,
            stacklevel=2,
        )
    verdicts = []
    for steps in _iter_edge_once_cycles(graph):
        base_word = steps[0].origin_word
        path = check_conjugacy_path(graph, base_word, base_word, steps)
        if path is None:
            continue
        ratio = path.ratio()
        verdicts.append(
            CompletePathVerdict(
                path=path,
                base_vertex=steps[0].origin,
                bases=tuple(sorted({s.origin for s in steps})),
                ratio=ratio,
                level=abs(ratio) == 1,
                witness=path.witness_exponents(),
            )
        )
    verdicts.sort(key=lambda v: (len(v.steps), _path_key(v.steps)))
    return verdicts


# -------------------------------------------------------- non-maximal paths


@dataclass(frozen=True)
class NonMaximalPath:
    """A conjugacy path whose arrow pattern defeats maximality.

    An *arrow* sits at an edge end whose inclusion word is a proper power.
    ``kind`` is "full" (arrows exactly at the path's two outer ends) or
    "semi" (a single arrow, on the initial edge pointing backwards).
    ``arrows`` lists the (edge_id, side) pairs carrying the defining arrows.
    """

    kind: str
    path: ConjugacyPath
    arrows: Tuple[Tuple[int, int], ...]

    @property
    def steps(self) -> Tuple[OrientedEdge, ...]:
        return self.path.steps


def _arrow_at_origin(graph: GraphOfGroups, step: OrientedEdge) -> bool:
    return graph.has_arrow(step.edge, step.origin_side)


def _arrow_at_terminus(graph: GraphOfGroups, step: OrientedEdge) -> bool:
    return graph.has_arrow(step.edge, step.terminus_side)


def _junction_holds(a: OrientedEdge, b: OrientedEdge) -> bool:
    return cyclic_meet(a.terminus_word, b.origin_word) is not None


def _full_path(graph: GraphOfGroups, steps: Sequence[OrientedEdge]) -> NonMaximalPath:
    path = check_conjugacy_path(
        graph, steps[0].origin_word, steps[-1].terminus_word, steps
    )
    assert path is not None  # junctions were checked during the walk
    arrows = (
        (steps[0].edge.id, steps[0].origin_side),
        (steps[-1].edge.id, steps[-1].terminus_side),
    )
    return NonMaximalPath("full", path, arrows)


def enumerate_full_nonmaximal_paths(graph: GraphOfGroups) -> List[NonMaximalPath]:
    """All edge-once chains with arrows exactly at their two outer ends.

    The initial inclusion word (a proper power, by its arrow) travels the
    chain through maximal inclusions only and lands on another proper
    power, so the fundamental group gains a Baumslag-Solitar subgroup.
    A single edge with arrows at both ends is the one-step case.  Results
    are deduplicated under reversal.
    """
    oriented = graph.oriented_edges()
    found = []

    def emit(steps: List[OrientedEdge]) -> None:
        if _path_key(steps) <= _path_key(_reversed_path(steps)):
            found.append(_full_path(graph, steps))

    def extend(path: List[OrientedEdge], used: set) -> None:
        for step in oriented:
            if step.edge.id in used or step.origin != path[-1].terminus:
                continue
            if _arrow_at_origin(graph, step) or not _junction_holds(path[-1], step):
                continue
            path.append(step)
            used.add(step.edge.id)
            if _arrow_at_terminus(graph, step):
                emit(path)  # final edge; an arrowed end cannot be extended past
            else:
                extend(path, used)
            used.discard(step.edge.id)
            path.pop()

    for start in oriented:
        if not _arrow_at_origin(graph, start):
            continue
        if _arrow_at_terminus(graph, start):
            emit([start])
        else:
            extend([start], {start.edge.id})

    found.sort(key=lambda p: (len(p.steps), _path_key(p.steps)))
    return found


def find_semi_nonmaximal_path_to(
    graph: GraphOfGroups,
    target: FreeWord,
    *,
    word_hyperbolic: bool,
) -> Optional[NonMaximalPath]:
    """First edge-once chain showing ``target`` is a proper power up to conjugacy.

    The chain starts on an arrowed edge end (its inclusion word is a proper
    power there), crosses only arrow-free edges, and its last inclusion word
    overlaps a conjugate of <target>.  The criterion reads maximality in the
    whole group off the graph only when that group is word hyperbolic, so
    callers must pass the established verdict.
    """
    if not word_hyperbolic:
        raise PreconditionError(
            "semi non-maximal paths decide maximality only over a word-hyperbolic "
            "fundamental group; establish that verdict first"
        )
    if target.is_identity:
        raise DegenerateInputError("target element is trivial")
    try:
        target_vid = int(target.vertex)
    except ValueError:
        target_vid = -1
    if target_vid not in graph.vertices:
        raise DegenerateInputError(f"unknown target vertex {target.vertex!r}")

    oriented = graph.oriented_edges()

    def finish(steps: List[OrientedEdge]) -> Optional[NonMaximalPath]:
        if steps[-1].terminus != target_vid:
            return None
        path = check_conjugacy_path(graph, steps[0].origin_word, target, steps)
        if path is None:
            return None
        arrows = ((steps[0].edge.id, steps[0].origin_side),)
        return NonMaximalPath("semi", path, arrows)

    def extend(path: List[OrientedEdge], used: set) -> Optional[NonMaximalPath]:
        hit = finish(path)
        if hit is not None:
            return hit
        for step in oriented:
            if step.edge.id in used or step.origin != path[-1].terminus:
                continue
            if _arrow_at_origin(graph, step) or _arrow_at_terminus(graph, step):
                continue
            if not _junction_holds(path[-1], step):
                continue
            path.append(step)
            used.add(step.edge.id)
            hit = extend(path, used)
            used.discard(step.edge.id)
            path.pop()
            if hit is not None:
                return hit
        return None

    for start in oriented:
        if not _arrow_at_origin(graph, start) or _arrow_at_terminus(graph, start):
            continue
        hit = extend([start], {start.edge.id})
        if hit is not None:
            return hit
    return None


# --------------------------------------------------------------- open search


def iter_conjugacy_paths(
    graph: GraphOfGroups, g: FreeWord, g_prime: FreeWord
) -> Iterator[ConjugacyPath]:
    """All edge-once conjugacy paths from g to g', in canonical walk order.

    Junction overlaps are pruned during the walk, so every yielded chain is
    fully certified; closed chains returning to the start vertex appear too.
    """
    if g.is_identity or g_prime.is_identity:
        raise DegenerateInputError("conjugacy paths connect nontrivial elements")
    oriented = graph.oriented_edges()
    try:
        start_vid, end_vid = int(g.vertex), int(g_prime.vertex)
    except ValueError:
        raise DegenerateInputError("endpoints must live at vertices of the graph")
    if start_vid not in graph.vertices or end_vid not in graph.vertices:
        raise DegenerateInputError("endpoints must live at vertices of the graph")

    def extend(path: List[OrientedEdge], used: set) -> Iterator[ConjugacyPath]:
        if path[-1].terminus == end_vid:
            certified = check_conjugacy_path(graph, g, g_prime, path)
            if certified is not None:
                yield certified
        for step in oriented:
            if step.edge.id in used or step.origin != path[-1].terminus:
                continue
            if not _junction_holds(path[-1], step):
                continue
            path.append(step)
            used.add(step.edge.id)
            yield from extend(path, used)
            used.discard(step.edge.id)
            path.pop()

    for start in oriented:
        if start.origin != start_vid:
            continue
        if cyclic_meet(g, start.origin_word) is None:
            continue
        yield from extend([start], {start.edge.id})
