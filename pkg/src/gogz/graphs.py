"""Graphs of groups with free vertex groups and cyclic edge groups.

A graph of groups here is a finite connected multigraph (loops and parallel
edges allowed) whose vertices carry finitely generated free groups and whose
edges carry an infinite cyclic group, included into the two endpoint groups
by a nontrivial word on each side.

Text format, one declaration per line, ``#`` starts a comment::

    vertex 0 rank=2 gens=a,b
    vertex 1 rank=1 gens=x
    edge 0 0 1 minus="a b a^-1" plus="x^3"

``minus`` / ``plus`` are the inclusion words at the edge's minus and plus
endpoint.  Vertices must be declared before the edges that use them, and
generator names must be globally unique so that a word is unambiguous even
out of context.

An edge *end* is **bad** when its inclusion word generates the whole vertex
group (rank-one vertex, word a single letter); it carries an **arrow** when
the inclusion word is a proper power, i.e. the edge group is not maximal
cyclic on that side.  A non-loop edge with a bad end is *reducible*:
contracting it changes nothing about the fundamental group.
:func:`reduce_graph` contracts until no reducible edge remains and logs every
step.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import AlphabetError, DegenerateInputError, ParseError
from .words import Alphabet, FreeWord, root

MINUS = -1
PLUS = 1

_SIDE_NAMES = {MINUS: "minus", PLUS: "plus"}
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def side_name(side: int) -> str:
    return _SIDE_NAMES[side]


@dataclass(frozen=True)
class Vertex:
    """A vertex with its free group, named by a nonnegative integer id."""

    id: int
    alphabet: Alphabet

    def __post_init__(self):
        assert self.alphabet.vertex == str(self.id), "alphabet must be tagged with the vertex id"

    @classmethod
    def make(cls, vid: int, names: Iterable[str]) -> "Vertex":
        return cls(vid, Alphabet(str(vid), tuple(names)))

    @property
    def rank(self) -> int:
        return self.alphabet.rank

    def parse(self, text: str) -> FreeWord:
        return self.alphabet.parse(text)


@dataclass(frozen=True)
class Edge:
    """An edge with its two cyclic inclusion words.

    ``minus_word`` lives in the minus vertex group, ``plus_word`` in the plus
    vertex group; both generate the images of the same infinite cyclic edge
    group.
    """

    id: int
    minus_vertex: int
    plus_vertex: int
    minus_word: FreeWord
    plus_word: FreeWord

    @property
    def is_loop(self) -> bool:
        return self.minus_vertex == self.plus_vertex

    def vertex(self, side: int) -> int:
        return self.minus_vertex if side == MINUS else self.plus_vertex

    def word(self, side: int) -> FreeWord:
        return self.minus_word if side == MINUS else self.plus_word


@dataclass(frozen=True)
class OrientedEdge:
    """An edge together with a direction of travel (forward = minus to plus)."""

    edge: Edge
    forward: bool = True

    @property
    def origin_side(self) -> int:
        return MINUS if self.forward else PLUS

    @property
    def terminus_side(self) -> int:
        return PLUS if self.forward else MINUS

    @property
    def origin(self) -> int:
        return self.edge.vertex(self.origin_side)

    @property
    def terminus(self) -> int:
        return self.edge.vertex(self.terminus_side)

    @property
    def origin_word(self) -> FreeWord:
        return self.edge.word(self.origin_side)

    @property
    def terminus_word(self) -> FreeWord:
        return self.edge.word(self.terminus_side)

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.edge, not self.forward)

    def __repr__(self):
        arrow = "+" if self.forward else "-"
        return f"OrientedEdge(e{self.edge.id}{arrow})"


class GraphOfGroups:
    """A validated graph of groups.

    Construction checks that the graph is nonempty and connected, that edge
    endpoints exist, that inclusion words are nontrivial and live over the
    right alphabets, and that generator names are globally unique.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        self.vertices: Dict[int, Vertex] = {}
        for v in vertices:
            if v.id in self.vertices:
                raise DegenerateInputError(f"duplicate vertex id {v.id}")
            self.vertices[v.id] = v
        self.edges: Dict[int, Edge] = {}
        for e in edges:
            if e.id in self.edges:
                raise DegenerateInputError(f"duplicate edge id {e.id}")
            self.edges[e.id] = e
        self._validate()
        self._incident: Dict[int, List[Tuple[Edge, int]]] = {v: [] for v in self.vertices}
        for e in self._sorted_edges():
            self._incident[e.minus_vertex].append((e, MINUS))
            self._incident[e.plus_vertex].append((e, PLUS))

    # -------------------------------------------------------------- basics

    def _sorted_edges(self) -> List[Edge]:
        return [self.edges[i] for i in sorted(self.edges)]

    def _sorted_vertices(self) -> List[Vertex]:
        return [self.vertices[i] for i in sorted(self.vertices)]

    def _validate(self):
        if not self.vertices:
            raise DegenerateInputError("a graph of groups needs at least one vertex")
        seen: Dict[str, int] = {}
        for v in self._sorted_vertices():
            if v.rank < 1:
                raise DegenerateInputError(f"vertex {v.id} must have rank >= 1")
            for name in v.alphabet.names:
                if name in seen:
                    raise DegenerateInputError(
                        f"generator {name!r} declared at vertex {seen[name]} and again at vertex {v.id}"
                    )
                seen[name] = v.id
        for e in self._sorted_edges():
            for side in (MINUS, PLUS):
                vid = e.vertex(side)
                if vid not in self.vertices:
                    raise DegenerateInputError(f"edge {e.id} uses unknown vertex {vid}")
                word = e.word(side)
                if word.vertex != str(vid):
                    raise AlphabetError(
                        f"edge {e.id} {side_name(side)} word is over vertex {word.vertex!r}, expected {vid}"
                    )
                if word.is_identity:
                    raise DegenerateInputError(f"edge {e.id} has a trivial {side_name(side)} inclusion word")
        self._check_connected()

    def _check_connected(self):
        start = min(self.vertices)
        seen = {start}
        queue = deque([start])
        adjacency: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            adjacency[e.minus_vertex].append(e.plus_vertex)
            adjacency[e.plus_vertex].append(e.minus_vertex)
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != len(self.vertices):
            missing = sorted(set(self.vertices) - seen)
            raise DegenerateInputError(f"graph is not connected (vertex {missing[0]} unreachable)")

    @property
    def betti_number(self) -> int:
        """First Betti number |E| - |V| + 1 of the underlying connected graph."""
        return len(self.edges) - len(self.vertices) + 1

    def incident(self, vid: int) -> List[Tuple[Edge, int]]:
        """Edge ends at a vertex, ordered by (edge id, side); loops appear twice."""
        return list(self._incident[vid])

    def ends(self) -> List[Tuple[Edge, int]]:
        return [(e, side) for e in self._sorted_edges() for side in (MINUS, PLUS)]

    def oriented_edges(self) -> List[OrientedEdge]:
        return [OrientedEdge(e, fwd) for e in self._sorted_edges() for fwd in (True, False)]

    # -------------------------------------------------------------- labels

    def is_bad_end(self, edge: Edge, side: int) -> bool:
        """True when the inclusion word generates the whole vertex group."""
        return self.vertices[edge.vertex(side)].rank == 1 and len(edge.word(side)) == 1

    def has_arrow(self, edge: Edge, side: int) -> bool:
        """True when the inclusion word is a proper power (non-maximal image)."""
        return abs(root(edge.word(side)).exponent) >= 2

    def reducible_edges(self) -> List[Edge]:
        return [
            e
            for e in self._sorted_edges()
            if not e.is_loop and (self.is_bad_end(e, MINUS) or self.is_bad_end(e, PLUS))
        ]

    @property
    def is_reduced(self) -> bool:
        return not self.reducible_edges()

    @property
    def is_trivial(self) -> bool:
        """A single vertex and no edges: the group is just that free group."""
        return len(self.vertices) == 1 and not self.edges

    # -------------------------------------------------------------- output

    def to_text(self) -> str:
        lines = []
        for v in self._sorted_vertices():
            lines.append(f"vertex {v.id} rank={v.rank} gens={','.join(v.alphabet.names)}")
        for e in self._sorted_edges():
            minus = self.vertices[e.minus_vertex].alphabet.format(e.minus_word)
            plus = self.vertices[e.plus_vertex].alphabet.format(e.plus_word)
            lines.append(f'edge {e.id} {e.minus_vertex} {e.plus_vertex} minus="{minus}" plus="{plus}"')
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "vertices": [
                {"id": v.id, "rank": v.rank, "gens": list(v.alphabet.names)} for v in self._sorted_vertices()
            ],
            "edges": [
                {
                    "id": e.id,
                    "from": e.minus_vertex,
                    "to": e.plus_vertex,
                    "minus": self.vertices[e.minus_vertex].alphabet.format(e.minus_word),
                    "plus": self.vertices[e.plus_vertex].alphabet.format(e.plus_word),
                }
                for e in self._sorted_edges()
            ],
        }

    def __repr__(self):
        return f"GraphOfGroups({len(self.vertices)} vertices, {len(self.edges)} edges)"


# ------------------------------------------------------------------ parsing


def _tokenize(line: str, lineno: int) -> List[Tuple[str, int]]:
    tokens = []
    i, n = 0, len(line)
    while i < n:
        if line[i] in " \t":
            i += 1
            continue
        if line[i] == "#":
            break
        start = i
        buf = []
        quoted = False
        while i < n and (quoted or line[i] not in " \t#"):
            if line[i] == '"':
                quoted = not quoted
            else:
                buf.append(line[i])
            i += 1
        if quoted:
            raise ParseError("unterminated quote", lineno, start + 1)
        tokens.append(("".join(buf), start + 1))
    return tokens


def _parse_int(token: Tuple[str, int], lineno: int, what: str) -> int:
    text, col = token
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected {what}, got {text!r}", lineno, col) from None


def _parse_fields(tokens, lineno: int, col0: int, allowed) -> Dict[str, Tuple[str, int]]:
    out: Dict[str, Tuple[str, int]] = {}
    for text, col in tokens:
        key, eq, value = text.partition("=")
        if not eq:
            raise ParseError(f"expected a {'/'.join(sorted(allowed))} field, got {text!r}", lineno, col)
        if key not in allowed:
            raise ParseError(f"unknown field {key!r}", lineno, col)
        if key in out:
            raise ParseError(f"repeated field {key!r}", lineno, col)
        out[key] = (value, col)
    for key in sorted(set(allowed) - set(out)):
        raise ParseError(f"missing field {key!r}", lineno, col0)
    return out


def _parse_edge_word(vertex: Vertex, value: str, col: int, lineno: int) -> FreeWord:
    try:
        word = vertex.parse(value)
    except ParseError as exc:
        raise ParseError(exc.message, lineno, col) from None
    if word.is_identity:
        raise ParseError("inclusion word must not be the identity", lineno, col)
    return word


def parse_graph(text: str) -> GraphOfGroups:
    """Parse the text format; errors carry 1-based line and column positions."""
    vertices: Dict[int, Vertex] = {}
    edges: Dict[int, Edge] = {}
    gen_homes: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens:
            continue
        head, col0 = tokens[0]
        if head == "vertex":
            if len(tokens) < 2:
                raise ParseError("vertex needs an id", lineno, col0)
            vid = _parse_int(tokens[1], lineno, "a vertex id")
            if vid in vertices:
                raise ParseError(f"duplicate vertex id {vid}", lineno, tokens[1][1])
            fields = _parse_fields(tokens[2:], lineno, col0, {"rank", "gens"})
            rank = _parse_int(fields["rank"], lineno, "an integer rank")
            gens_text, gens_col = fields["gens"]
            names = tuple(gens_text.split(",")) if gens_text else ()
            for name in names:
                if not _NAME_RE.match(name):
                    raise ParseError(f"bad generator name {name!r}", lineno, gens_col)
                if name in gen_homes:
                    raise ParseError(
                        f"generator {name!r} already declared at vertex {gen_homes[name]}", lineno, gens_col
                    )
                gen_homes[name] = vid
            if rank != len(names) or rank < 1:
                raise ParseError(f"rank={rank} but {len(names)} generator name(s)", lineno, gens_col)
            vertices[vid] = Vertex.make(vid, names)
        elif head == "edge":
            if len(tokens) < 4:
                raise ParseError("edge needs an id and two endpoint vertex ids", lineno, col0)
            eid = _parse_int(tokens[1], lineno, "an edge id")
            if eid in edges:
                raise ParseError(f"duplicate edge id {eid}", lineno, tokens[1][1])
            endpoints = []
            for token in tokens[2:4]:
                vid = _parse_int(token, lineno, "a vertex id")
                if vid not in vertices:
                    raise ParseError(f"unknown vertex {vid} (declare vertices first)", lineno, token[1])
                endpoints.append(vid)
            fields = _parse_fields(tokens[4:], lineno, col0, {"minus", "plus"})
            minus = _parse_edge_word(vertices[endpoints[0]], *fields["minus"], lineno=lineno)
            plus = _parse_edge_word(vertices[endpoints[1]], *fields["plus"], lineno=lineno)
            edges[eid] = Edge(eid, endpoints[0], endpoints[1], minus, plus)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col0)
    if not vertices:
        raise ParseError("no vertices declared", max(1, text.count(chr(10)) + 1), 1)
    return GraphOfGroups(vertices.values(), edges.values())


# -------------------------------------------------------------- contraction


@dataclass(frozen=True)
class Contraction:
    """One contraction step: the absorbed vertex's generator maps to ``image``."""

    edge_id: int
    absorbed_vertex: int
    surviving_vertex: int
    image: FreeWord

    def to_json_dict(self, graph_after: "GraphOfGroups") -> dict:
        alphabet = graph_after.vertices[self.surviving_vertex].alphabet
        return {
            "edge": self.edge_id,
            "absorbed": self.absorbed_vertex,
            "into": self.surviving_vertex,
            "generator_image": alphabet.format(self.image),
        }


@dataclass(frozen=True)
class ContractionLog:
    steps: Tuple[Contraction, ...]

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def _contract(graph: GraphOfGroups, edge: Edge) -> Tuple[GraphOfGroups, Contraction]:
    minus_bad = graph.is_bad_end(edge, MINUS)
    plus_bad = graph.is_bad_end(edge, PLUS)
    assert (minus_bad or plus_bad) and not edge.is_loop
    if minus_bad and plus_bad:
        # both endpoint groups are swallowed by the edge group; keep the
        # smaller vertex id for determinism
        absorbed_side = MINUS if edge.minus_vertex > edge.plus_vertex else PLUS
    elif minus_bad:
        absorbed_side = MINUS
    else:
        absorbed_side = PLUS
    absorbed = edge.vertex(absorbed_side)
    survivor = edge.vertex(-absorbed_side)
    eps = edge.word(absorbed_side).letters[0]
    image = edge.word(-absorbed_side) ** (1 if eps > 0 else -1)

    def push(word: FreeWord) -> FreeWord:
        # a reduced rank-one word is generator^k with k the letter sum
        return image ** sum(word.letters)

    new_edges = []
    for e in graph.edges.values():
        if e.id == edge.id:
            continue
        mv, pv, mw, pw = e.minus_vertex, e.plus_vertex, e.minus_word, e.plus_word
        if mv == absorbed:
            mv, mw = survivor, push(mw)
        if pv == absorbed:
            pv, pw = survivor, push(pw)
        new_edges.append(Edge(e.id, mv, pv, mw, pw))
    new_vertices = [v for v in graph.vertices.values() if v.id != absorbed]
    return GraphOfGroups(new_vertices, new_edges), Contraction(edge.id, absorbed, survivor, image)


def reduce_graph(graph: GraphOfGroups) -> Tuple[GraphOfGroups, ContractionLog]:
    """Contract reducible edges (least edge id first) until none remain.

    Contraction removes one edge and one vertex, so the Betti number of the
    underlying graph never changes; in particular a graph that reduces to a
    single vertex with no edges was a tree, and its group is free.
    """
    steps = []
    current = graph
    while True:
        reducible = current.reducible_edges()
        if not reducible:
            return current, ContractionLog(tuple(steps))
        current, step = _contract(current, reducible[0])
        steps.append(step)


# ------------------------------------------------------------ spanning tree


@dataclass(frozen=True)
class TreeStep:
    edge_id: int
    parent: int
    child: int


@dataclass(frozen=True)
class SpanningTree:
    """A breadth-first spanning tree, rooted at the least vertex id.

    ``steps`` lists tree edges in discovery order (parent before child);
    ``non_tree_edge_ids`` are the remaining edges, sorted.  Ties are broken
    by edge id, so the tree is a deterministic function of the graph.
    """

    root: int
    steps: Tuple[TreeStep, ...]
    non_tree_edge_ids: Tuple[int, ...]

    @property
    def tree_edge_ids(self) -> frozenset:
        return frozenset(s.edge_id for s in self.steps)

    def parent_step(self, child: int) -> Optional[TreeStep]:
        for s in self.steps:
            if s.child == child:
                return s
        return None


def maximal_tree(graph: GraphOfGroups) -> SpanningTree:
    root_vertex = min(graph.vertices)
    seen = {root_vertex}
    queue = deque([root_vertex])
    steps: List[TreeStep] = []
    while queue:
        v = queue.popleft()
        for edge, side in graph.incident(v):
            other = edge.vertex(-side)
            if other not in seen:
                seen.add(other)
                steps.append(TreeStep(edge.id, v, other))
                queue.append(other)
    assert len(seen) == len(graph.vertices), "graph validated connected"
    tree_ids = {s.edge_id for s in steps}
    non_tree = tuple(i for i in sorted(graph.edges) if i not in tree_ids)
    return SpanningTree(root_vertex, tuple(steps), non_tree)
