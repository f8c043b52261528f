"""Normal-form arithmetic in the fundamental group of a graph of groups.

The group is assembled one edge at a time along a spanning tree: every tree
edge contributes an amalgamated product over the identified cyclic subgroups,
every remaining edge a stable letter ``t`` with ``t w- t^-1 = w+``.  Elements
are kept in canonical normal form at every level of that tower, built from
canonical right-coset representatives against the relevant cyclic subgroup,
so two elements are equal iff their normal forms are structurally equal.

This module is deliberately independent of the path machinery: it never
looks at conjugacy or balance criteria, it just multiplies.  That makes it a
referee — every certificate produced elsewhere is replayed here before it is
reported.

Element representations (nested tuples, interpreted by the node they belong
to):

* leaf (one vertex group): the reduced letter tuple of the word;
* amalgam node: ``(k, syls)`` meaning ``u^k * s1 * ... * sm`` where ``u`` is
  the identified edge element and each syllable ``(side, rep)`` is a
  nontrivial canonical coset representative in the left (0) or right (1)
  factor, with adjacent syllables on different sides;
* stable-letter node: ``(h0, tail)`` meaning ``h0 * t^e1 r1 * ... * t^en rn``
  with each ``ri`` a canonical rep against the subgroup matching the sign,
  and no ``t^e 1 t^-e`` pinches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import DegenerateInputError, InternalInconsistencyError
from .graphs import GraphOfGroups, SpanningTree, maximal_tree
from .words import (
    FreeWord,
    Letters,
    _coset_canonical_cached,
    _root_cached,
    invert_letters,
    letter_key,
    reduce_letters,
)

Atom = Tuple  # ('w', vertex_id, letters) or ('t', edge_id, +-1)
Elem = Tuple  # nested normal form, shaped by the owning node


# ------------------------------------------------------------------- nodes


class _Leaf:
    def __init__(self, index: int, vertex_id: int, tag: str, rank: int):
        self.index = index
        self.vertex_id = vertex_id
        self.tag = tag
        self.rank = rank
        self.leaf_vids = frozenset([vertex_id])
        self.t_ids = frozenset()


class _Amalgam:
    """left *_<u> right, with u embedded as u_left in left and u_right in right."""

    def __init__(self, index, left, right, edge_id, u_left, left_origin, right_origin):
        self.index = index
        self.left = left
        self.right = right
        self.edge_id = edge_id
        self.u_left = u_left  # element of `left`
        self.left_origin = left_origin  # (vertex_id, letters) generating u in left
        self.right_origin = right_origin  # (vertex_id, letters): u as a word at the right leaf
        self.leaf_vids = left.leaf_vids | right.leaf_vids
        self.t_ids = left.t_ids


class _HNN:
    """inner extended by a stable letter: t * minus^k * t^-1 = plus^k."""

    def __init__(self, index, inner, edge_id, minus, plus, minus_origin, plus_origin):
        self.index = index
        self.inner = inner
        self.edge_id = edge_id
        self.minus = minus  # element of `inner`
        self.plus = plus
        self.minus_origin = minus_origin  # (vertex_id, letters)
        self.plus_origin = plus_origin
        self.leaf_vids = inner.leaf_vids
        self.t_ids = inner.t_ids | frozenset([edge_id])


def _word_power(letters: Letters, k: int) -> Letters:
    if k >= 0:
        return reduce_letters(letters * k)
    return reduce_letters(invert_letters(letters) * (-k))


def _leaf_cyclic_power(tag: str, u: Letters, y: Letters) -> Optional[int]:
    if not y:
        return 0
    cu, pu, ku = _root_cached(tag, u)
    cy, py, ky = _root_cached(tag, y)
    if pu != py or cu != cy or ky % ku:
        return None
    return ky // ku


# ------------------------------------------------------------------- engine


class Engine:
    """Exact arithmetic for the fundamental group of one graph of groups.

    Elements are opaque nested tuples; obtain them from :meth:`embed`,
    :meth:`stable_letter` or :meth:`element_of` and combine them with
    :meth:`mul`, :meth:`inv`, :meth:`power`, :meth:`conjugate`.  Equality of
    elements is equality of the group elements they denote.
    """

    def __init__(self, graph: GraphOfGroups, tree: Optional[SpanningTree] = None):
        self.graph = graph
        self.tree = tree if tree is not None else maximal_tree(graph)
        self._decomp_cache: Dict[int, Dict] = {}
        self._u_power_cache: Dict[Tuple[int, int, int], Elem] = {}
        self._leaves: Dict[int, _Leaf] = {}
        counter = itertools.count()

        def make_leaf(vid: int) -> _Leaf:
            v = graph.vertices[vid]
            leaf = _Leaf(next(counter), vid, v.alphabet.vertex, v.rank)
            self._leaves[vid] = leaf
            return leaf

        node = make_leaf(self.tree.root)
        for step in self.tree.steps:
            edge = graph.edges[step.edge_id]
            if edge.minus_vertex == step.parent:
                parent_word, child_word = edge.minus_word, edge.plus_word
            else:
                parent_word, child_word = edge.plus_word, edge.minus_word
            child_leaf = make_leaf(step.child)
            u_left = self._embed(node, step.parent, parent_word.letters)
            node = _Amalgam(
                next(counter),
                node,
                child_leaf,
                edge.id,
                u_left,
                (step.parent, parent_word.letters),
                (step.child, child_word.letters),
            )
        for eid in self.tree.non_tree_edge_ids:
            edge = graph.edges[eid]
            minus = self._embed(node, edge.minus_vertex, edge.minus_word.letters)
            plus = self._embed(node, edge.plus_vertex, edge.plus_word.letters)
            node = _HNN(
                next(counter),
                node,
                eid,
                minus,
                plus,
                (edge.minus_vertex, edge.minus_word.letters),
                (edge.plus_vertex, edge.plus_word.letters),
            )
        self.root = node

    # ------------------------------------------------------------- identity

    def _identity(self, node) -> Elem:
        if isinstance(node, _Leaf):
            return ()
        if isinstance(node, _Amalgam):
            return (0, ())
        return (self._identity(node.inner), ())

    def _is_identity(self, node, g: Elem) -> bool:
        return g == self._identity(node)

    # ------------------------------------------------------------ factoring

    def _factor(self, node: _Amalgam, side: int):
        return node.left if side == 0 else node.right

    def _u_elem(self, node: _Amalgam, side: int) -> Elem:
        return node.u_left if side == 0 else node.right_origin[1]

    def _u_power(self, node: _Amalgam, side: int, k: int) -> Elem:
        """u^k as an element of the side's factor."""
        key = (node.index, side, k)
        cached = self._u_power_cache.get(key)
        if cached is None:
            vid, letters = node.left_origin if side == 0 else node.right_origin
            powered = _word_power(letters, k)
            cached = powered if side == 1 else self._embed(node.left, vid, powered)
            self._u_power_cache[key] = cached
        return cached

    def _sub_power(self, node: _HNN, positive: bool, k: int) -> Elem:
        """minus^k (positive=True) or plus^k as an element of the inner node."""
        key = (node.index, 2 if positive else 3, k)
        cached = self._u_power_cache.get(key)
        if cached is None:
            vid, letters = node.minus_origin if positive else node.plus_origin
            cached = self._embed(node.inner, vid, _word_power(letters, k))
            self._u_power_cache[key] = cached
        return cached

    # ------------------------------------------------------------ embedding

    def _embed(self, node, vid: int, letters: Letters) -> Elem:
        if isinstance(node, _Leaf):
            assert node.vertex_id == vid
            return letters
        if isinstance(node, _HNN):
            return (self._embed(node.inner, vid, letters), ())
        if vid == node.right.vertex_id:
            side, factor, y = 1, node.right, letters
        else:
            assert vid in node.left.leaf_vids
            side, factor, y = 0, node.left, self._embed(node.left, vid, letters)
        j, r = self._decomp(factor, self._u_elem(node, side), y)
        if self._is_identity(factor, r):
            return (j, ())
        return (j, ((side, r),))

    # --------------------------------------------------- coset decomposition

    def _decomp(self, node, w: Elem, x: Elem) -> Tuple[int, Elem]:
        """x = w^j * r with r the canonical representative of <w> x.

        The representative depends only on the coset, and the representative
        of <w> itself is the identity.  ``w`` must be an embedded edge word:
        at every level it is either a power of the identified element or
        lies in a single factor.
        """
        if isinstance(node, _Leaf):
            r = _coset_canonical_cached(node.tag, w, x)
            j = _leaf_cyclic_power(node.tag, w, reduce_letters(x + invert_letters(r)))
            assert j is not None, "coset representative differs by a power"
            return j, r
        cache = self._decomp_cache.setdefault(node.index, {})
        key = (w, x)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if isinstance(node, _Amalgam):
            out = self._decomp_amalgam(node, w, x)
        else:
            out = self._decomp_hnn(node, w, x)
        cache[key] = out
        return out

    def _decomp_amalgam(self, node: _Amalgam, w: Elem, x: Elem) -> Tuple[int, Elem]:
        kw, sw = w
        kx, sx = x
        if not sw:
            # w = u^kw: only the central power of x moves
            assert kw != 0, "decomposition against the identity"
            m = kx % abs(kw)
            return (kx - m) // kw, (m, sx)
        if len(sw) == 1:
            # w lies in one factor: it acts on the leading part of that side
            side, rep = sw[0]
            factor = self._factor(node, side)
            wf = self._mul(factor, self._u_power(node, side, kw), rep)
            if sx and sx[0][0] == side:
                f = self._mul(factor, self._u_power(node, side, kx), sx[0][1])
                tail = sx[1:]
            else:
                f = self._u_power(node, side, kx)
                tail = sx
            jf, rf = self._decomp(factor, wf, f)
            kr, rr = self._decomp(factor, self._u_elem(node, side), rf)
            if self._is_identity(factor, rr):
                return jf, (kr, tail)
            return jf, (kr, ((side, rr),) + tail)
        raise InternalInconsistencyError("edge subgroup generator is not factor-shaped")

    def _decomp_hnn(self, node: _HNN, w: Elem, x: Elem) -> Tuple[int, Elem]:
        h0w, tw = w
        if tw:
            raise InternalInconsistencyError("edge subgroup generator is not factor-shaped")
        h0x, tx = x
        j, r0 = self._decomp(node.inner, h0w, h0x)
        return j, (r0, tx)

    def _cyclic_power(self, node, w: Elem, y: Elem) -> Optional[int]:
        """The j with y = w^j, or None; same shape restriction as _decomp."""
        if isinstance(node, _Leaf):
            return _leaf_cyclic_power(node.tag, w, y)
        if self._is_identity(node, y):
            return 0
        if isinstance(node, _HNN):
            h0w, tw = w
            if tw:
                raise InternalInconsistencyError("edge subgroup generator is not factor-shaped")
            h0y, ty = y
            if ty:
                return None
            return self._cyclic_power(node.inner, h0w, h0y)
        kw, sw = w
        ky, sy = y
        if not sw:
            assert kw != 0
            if sy or ky % kw:
                return None
            return ky // kw
        if len(sw) == 1:
            side, rep = sw[0]
            factor = self._factor(node, side)
            wf = self._mul(factor, self._u_power(node, side, kw), rep)
            if not sy:
                yf = self._u_power(node, side, ky)
            elif len(sy) == 1 and sy[0][0] == side:
                yf = self._mul(factor, self._u_power(node, side, ky), sy[0][1])
            else:
                return None
            return self._cyclic_power(factor, wf, yf)
        raise InternalInconsistencyError("edge subgroup generator is not factor-shaped")

    # ------------------------------------------------------------- atomizing

    def _atoms(self, node, g: Elem, out: List[Atom]):
        if isinstance(node, _Leaf):
            if g:
                out.append(("w", node.vertex_id, g))
            return
        if isinstance(node, _Amalgam):
            k, syls = g
            if k:
                vid, letters = node.left_origin
                out.append(("w", vid, _word_power(letters, k)))
            for side, rep in syls:
                self._atoms(self._factor(node, side), rep, out)
            return
        h0, tail = g
        self._atoms(node.inner, h0, out)
        for eps, rep in tail:
            out.append(("t", node.edge_id, eps))
            self._atoms(node.inner, rep, out)

    def atoms(self, g: Elem) -> List[Atom]:
        """g as a product of vertex words and stable letters, left to right."""
        out: List[Atom] = []
        self._atoms(self.root, g, out)
        return out

    @staticmethod
    def _inv_atom(atom: Atom) -> Atom:
        kind, idx, payload = atom
        if kind == "w":
            return ("w", idx, invert_letters(payload))
        return ("t", idx, -payload)

    # ------------------------------------------------------------ prepending

    def _prepend_atom(self, node, atom: Atom, g: Elem) -> Elem:
        if isinstance(node, _Leaf):
            assert atom[0] == "w" and atom[1] == node.vertex_id
            return reduce_letters(atom[2] + g)
        if isinstance(node, _HNN):
            if atom[0] == "t" and atom[1] == node.edge_id:
                return self._prepend_t(node, atom[2], g)
            h0, tail = g
            return (self._prepend_atom(node.inner, atom, h0), tail)
        if atom[0] == "w" and atom[1] == node.right.vertex_id:
            side = 1
            a: Elem = atom[2]
        else:
            side = 0
            a = self._elem_from_atom(node.left, atom)
        return self._prepend_syllable(node, side, a, g)

    def _prepend_syllable(self, node: _Amalgam, side: int, a: Elem, g: Elem) -> Elem:
        k, syls = g
        factor = self._factor(node, side)
        if syls and syls[0][0] == side:
            merged = self._mul(factor, a, self._mul(factor, self._u_power(node, side, k), syls[0][1]))
            rest = syls[1:]
        else:
            merged = self._mul(factor, a, self._u_power(node, side, k))
            rest = syls
        j, r = self._decomp(factor, self._u_elem(node, side), merged)
        if self._is_identity(factor, r):
            return (j, rest)
        return (j, ((side, r),) + rest)

    def _prepend_t(self, node: _HNN, eps: int, g: Elem) -> Elem:
        h0, tail = g
        sub = node.minus if eps > 0 else node.plus
        j, r = self._decomp(node.inner, sub, h0)
        emitted = self._sub_power(node, eps < 0, j)  # t^e sub^j = out^j t^e
        if self._is_identity(node.inner, r) and tail and tail[0][0] == -eps:
            merged = self._mul(node.inner, emitted, tail[0][1])
            return (merged, tail[1:])
        return (emitted, ((eps, r),) + tail)

    def _elem_from_atom(self, node, atom: Atom) -> Elem:
        if atom[0] == "w":
            return self._embed(node, atom[1], atom[2])
        return self._prepend_atom(node, atom, self._identity(node))

    # ------------------------------------------------------------ public ops

    def _mul(self, node, g: Elem, h: Elem) -> Elem:
        out: List[Atom] = []
        self._atoms(node, g, out)
        for atom in reversed(out):
            h = self._prepend_atom(node, atom, h)
        return h

    def _inv(self, node, g: Elem) -> Elem:
        out = self._identity(node)
        atoms: List[Atom] = []
        self._atoms(node, g, atoms)
        for atom in atoms:
            out = self._prepend_atom(node, self._inv_atom(atom), out)
        return out

    @property
    def identity_elem(self) -> Elem:
        return self._identity(self.root)

    def embed(self, word: FreeWord) -> Elem:
        """A vertex-group word as a group element."""
        vid = int(word.vertex)
        if vid not in self.graph.vertices:
            raise DegenerateInputError(f"word over unknown vertex {word.vertex!r}")
        return self._embed(self.root, vid, word.letters)

    def stable_letter(self, edge_id: int, exp: int = 1) -> Elem:
        """t_e^exp; tree edges have trivial stable letter."""
        if edge_id not in self.graph.edges:
            raise DegenerateInputError(f"unknown edge {edge_id}")
        out = self.identity_elem
        if edge_id not in self.root.t_ids:
            return out
        atom = ("t", edge_id, 1 if exp > 0 else -1)
        for _ in range(abs(exp)):
            out = self._prepend_atom(self.root, atom, out)
        return out

    def element_of(self, items: Sequence[Union[FreeWord, Tuple[str, int, int]]]) -> Elem:
        """Evaluate a product of vertex words and ('t', edge_id, exp) letters."""
        out = self.identity_elem
        for item in reversed(items):
            if isinstance(item, FreeWord):
                out = self._mul(self.root, self.embed(item), out)
            else:
                kind, eid, exp = item
                assert kind == "t"
                out = self._mul(self.root, self.stable_letter(eid, exp), out)
        return out

    def mul(self, *elems: Elem) -> Elem:
        out = self.identity_elem
        for g in reversed(elems):
            out = self._mul(self.root, g, out)
        return out

    def inv(self, g: Elem) -> Elem:
        return self._inv(self.root, g)

    def power(self, g: Elem, k: int) -> Elem:
        if k < 0:
            return self.power(self.inv(g), -k)
        out = self.identity_elem
        for _ in range(k):
            out = self._mul(self.root, g, out)
        return out

    def conjugate(self, h: Elem, g: Elem) -> Elem:
        """h g h^-1."""
        return self.mul(h, g, self.inv(h))

    def equal(self, g: Elem, h: Elem) -> bool:
        return g == h

    def is_identity(self, g: Elem) -> bool:
        return g == self.identity_elem

    def top_length(self, g: Elem) -> int:
        """Distance moved by g in the outermost splitting; 0 on its edge group.

        For elements of the innermost kind (no syllables, no stable letters)
        the value 1 is used for anything nontrivial, which never underestimates
        growth; see :func:`iter_power_conjugacies` for how this is used.
        """
        node = self.root
        if isinstance(node, _Leaf):
            return len(g)
        if isinstance(node, _Amalgam):
            return len(g[1])
        h0, tail = g
        if tail:
            return len(tail)
        return 0 if self._is_identity(node.inner, h0) else 1

    # ------------------------------------------------------------ validation

    def validate_element(self, g: Elem):
        """Assert the structural normal-form invariants, recursively."""
        self._validate(self.root, g)

    def _validate(self, node, g: Elem):
        if isinstance(node, _Leaf):
            assert isinstance(g, tuple)
            assert reduce_letters(g) == g
            assert all(1 <= abs(l) <= node.rank for l in g)
            return
        if isinstance(node, _Amalgam):
            k, syls = g
            assert isinstance(k, int)
            for i, (side, rep) in enumerate(syls):
                factor = self._factor(node, side)
                assert side in (0, 1)
                assert not self._is_identity(factor, rep), "syllables are nontrivial"
                if i + 1 < len(syls):
                    assert syls[i + 1][0] != side, "syllables alternate"
                self._validate(factor, rep)
                j, r = self._decomp(factor, self._u_elem(node, side), rep)
                assert (j, r) == (0, rep), "syllables are canonical representatives"
            return
        h0, tail = g
        self._validate(node.inner, h0)
        for i, (eps, rep) in enumerate(tail):
            assert eps in (1, -1)
            self._validate(node.inner, rep)
            sub = node.minus if eps > 0 else node.plus
            j, r = self._decomp(node.inner, sub, rep)
            assert (j, r) == (0, rep), "reps are canonical against the crossing subgroup"
            if self._is_identity(node.inner, rep) and i + 1 < len(tail):
                assert tail[i + 1][0] == eps, "no pinches"


# ------------------------------------------------------------- brute force


@dataclass(frozen=True)
class PowerConjugacy:
    """A verified relation  w x^m w^-1 = y^n  found by exhaustive search.

    ``conjugator`` is the product expression for w: a tuple whose entries are
    vertex words (FreeWord) and stable letters ('t', edge_id, +-1).
    """

    conjugator: Tuple
    m: int
    n: int


def _atom_key(atom: Atom) -> Tuple:
    if atom[0] == "w":
        return (0, atom[1], len(atom[2]), tuple(letter_key(l) for l in atom[2]))
    return (1, atom[1], 0 if atom[2] > 0 else 1)


def _atom_pool(engine: Engine, max_letters: int) -> List[Tuple[Atom, int]]:
    """All candidate atoms with their letter costs, in canonical order.

    Vertex words of each length up to ``max_letters`` (ordered by vertex,
    then (length, lex)), then stable letters of non-tree edges (by edge id,
    positive sign first).  A stable letter costs one letter.
    """
    pool: List[Tuple[Atom, int]] = []
    for vid in sorted(engine.graph.vertices):
        alphabet = engine.graph.vertices[vid].alphabet
        frontier: List[Letters] = [()]
        for _ in range(max_letters):
            extended = []
            for stem in frontier:
                for i in range(1, alphabet.rank + 1):
                    for letter in (i, -i):
                        if stem and stem[-1] == -letter:
                            continue
                        extended.append(stem + (letter,))
            extended.sort(key=lambda w: tuple(letter_key(l) for l in w))
            pool.extend((("w", vid, w), len(w)) for w in extended)
            frontier = extended
    for eid in engine.tree.non_tree_edge_ids:
        pool.append((("t", eid, 1), 1))
        pool.append((("t", eid, -1), 1))
    pool.sort(key=lambda entry: _atom_key(entry[0]))
    return pool


def _compatible(atom: Atom, first: Optional[Atom]) -> bool:
    if first is None:
        return True
    if atom[0] == "w" and first[0] == "w" and atom[1] == first[1]:
        return False  # would merge into a single shorter word
    if atom[0] == "t" and first[0] == "t" and atom[1] == first[1] and atom[2] == -first[2]:
        return False  # t t^-1
    return True


def iter_power_conjugacies(
    engine: Engine,
    x: FreeWord,
    y: FreeWord,
    max_syllables: int = 3,
    max_letters: int = 6,
    max_exp: int = 6,
) -> Iterator[PowerConjugacy]:
    """Yield every in-bounds relation w x^m w^-1 = y^n, smallest w first.

    Conjugator candidates are products of at most ``max_syllables`` atoms
    (vertex words and stable letters) with at most ``max_letters`` letters in
    total, enumerated by syllable count and then slot by slot in the order of
    :func:`_atom_pool`; exponents satisfy 1 <= m <= max_exp and
    1 <= |n| <= max_exp, with n tried in the order 1, -1, 2, -2, ...

    The m-loop stops early once the powers provably outgrow every target:
    if length(c^2) > length(c) in the outermost splitting, the growth is
    exactly linear from there on, and lengths of powers never shrink back.
    Searching m > 0 only loses nothing: inverting n covers negative m.
    """
    if x.is_identity or y.is_identity:
        raise DegenerateInputError("power conjugacy needs nontrivial words")
    x_elem = engine.embed(x)
    y_elem = engine.embed(y)
    targets: Dict[Elem, int] = {}
    for k in range(1, max_exp + 1):
        for n in (k, -k):
            targets.setdefault(engine.power(y_elem, n), n)
    max_top = max(engine.top_length(t) for t in targets)
    pool = [
        (atom, cost, engine._elem_from_atom(engine.root, atom),
         engine._elem_from_atom(engine.root, engine._inv_atom(atom)))
        for atom, cost in _atom_pool(engine, max_letters)
    ]

    def conjugates(count: int, budget: int) -> Iterator[Tuple[Tuple[Atom, ...], Elem]]:
        if count == 0:
            yield (), x_elem
            return
        for atom, cost, a_elem, a_inv in pool:
            if cost > budget - (count - 1):  # every later slot needs >= 1 letter
                continue
            for seq, c in conjugates(count - 1, budget - cost):
                if not _compatible(atom, seq[0] if seq else None):
                    continue
                yield (atom,) + seq, engine.mul(a_elem, c, a_inv)

    for count in range(0, max_syllables + 1):
        for seq, c in conjugates(count, max_letters):
            p = c
            length_one = engine.top_length(c)
            tau = None
            for m in range(1, max_exp + 1):
                n = targets.get(p)
                if n is not None:
                    items = tuple(
                        FreeWord(str(a[1]), a[2]) if a[0] == "w" else a for a in seq
                    )
                    yield PowerConjugacy(items, m, n)
                if m == max_exp:
                    break
                p = engine.mul(p, c)
                if m == 1:
                    tau = engine.top_length(p) - length_one
                if tau is not None and tau > 0 and engine.top_length(p) > max_top:
                    break


def brute_force_power_conjugacy(
    engine: Engine,
    x: FreeWord,
    y: FreeWord,
    max_syllables: int = 3,
    max_letters: int = 6,
    max_exp: int = 6,
) -> Optional[PowerConjugacy]:
    """The first in-bounds relation w x^m w^-1 = y^n, or None."""
    for hit in iter_power_conjugacies(engine, x, y, max_syllables, max_letters, max_exp):
        return hit
    return None
