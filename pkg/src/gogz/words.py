"""Free-group words over a vertex alphabet.

Words are stored freely reduced, as tuples of nonzero ints: letter ``+i``
is the i-th generator of the alphabet (1-based), ``-i`` its inverse.  The
letter order used everywhere for lexicographic comparisons is declaration
order, with the inverse of a generator sorting directly after the generator
itself (a < a^-1 < b < b^-1 ...).

The cyclic-subgroup operations (root, cyclic_meet, coset_canonical,
cyclic_power) are the primitives the rest of the package is built on: in a
free group every question about intersections and conjugates of cyclic
subgroups reduces to comparing primitive roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

from .errors import AlphabetError, DegenerateInputError, ParseError

Letters = Tuple[int, ...]


@dataclass(frozen=True)
class Generator:
    """A named generator of one vertex group."""

    name: str
    vertex: str


class Alphabet:
    """The ordered generator list of one vertex group."""

    def __init__(self, vertex: str, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate generator name in vertex {vertex!r}")
        self.vertex = vertex
        self.names = names
        self._index = {n: i + 1 for i, n in enumerate(names)}

    @property
    def rank(self) -> int:
        return len(self.names)

    def generators(self):
        return [Generator(n, self.vertex) for n in self.names]

    def word(self, letters) -> "FreeWord":
        return FreeWord(self.vertex, reduce_letters(tuple(letters)))

    def parse(self, text: str) -> "FreeWord":
        """Parse whitespace-separated tokens: ``name``, ``name^-1``, ``name^k``."""
        letters = []
        for tok in text.split():
            if tok == "1":
                continue
            name, _, exp = tok.partition("^")
            if name not in self._index:
                raise ParseError(f"unknown generator {name!r} (vertex {self.vertex!r})")
            k = 1
            if exp:
                try:
                    k = int(exp)
                except ValueError:
                    raise ParseError(f"bad exponent in token {tok!r}") from None
                if k == 0:
                    raise ParseError(f"zero exponent in token {tok!r}")
            letter = self._index[name] if k > 0 else -self._index[name]
            letters.extend([letter] * abs(k))
        return FreeWord(self.vertex, reduce_letters(tuple(letters)))

    def format(self, word: "FreeWord") -> str:
        """Inverse of parse, with run-length shorthand (a a a -> ``a^3``)."""
        if word.vertex != self.vertex:
            raise AlphabetError(f"word over {word.vertex!r} formatted with alphabet {self.vertex!r}")
        if not word.letters:
            return "1"
        out = []
        run_letter, run = word.letters[0], 1
        for l in word.letters[1:]:
            if l == run_letter:
                run += 1
            else:
                out.append(self._fmt_run(run_letter, run))
                run_letter, run = l, 1
        out.append(self._fmt_run(run_letter, run))
        return " ".join(out)

    def _fmt_run(self, letter: int, run: int) -> str:
        name = self.names[abs(letter) - 1]
        k = run if letter > 0 else -run
        return name if k == 1 else f"{name}^{k}"

    def __repr__(self):
        return f"Alphabet({self.vertex!r}, {self.names!r})"


def reduce_letters(letters) -> Letters:
    """Free reduction: cancel adjacent inverse pairs until none remain."""
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def invert_letters(letters: Letters) -> Letters:
    return tuple(-l for l in reversed(letters))


def letter_key(letter: int) -> Tuple[int, int]:
    # declaration order first, inverse after the positive letter
    return (abs(letter), 0 if letter > 0 else 1)


def letters_sort_key(letters: Letters):
    """(length, lex) key; the total order used for all canonical choices."""
    return (len(letters), tuple(letter_key(l) for l in letters))


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in one vertex group."""

    vertex: str
    letters: Letters

    def __post_init__(self):
        assert reduce_letters(self.letters) == tuple(self.letters), "FreeWord must be reduced"

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def _check(self, other: "FreeWord"):
        if self.vertex != other.vertex:
            raise AlphabetError(f"mixed alphabets: {self.vertex!r} vs {other.vertex!r}")

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        self._check(other)
        return FreeWord(self.vertex, reduce_letters(self.letters + other.letters))

    def inverse(self) -> "FreeWord":
        return FreeWord(self.vertex, invert_letters(self.letters))

    def __pow__(self, k: int) -> "FreeWord":
        base = self.letters if k >= 0 else invert_letters(self.letters)
        return FreeWord(self.vertex, reduce_letters(base * abs(k)))

    def conjugated_by(self, h: "FreeWord") -> "FreeWord":
        """h * self * h^-1."""
        self._check(h)
        return FreeWord(self.vertex, reduce_letters(h.letters + self.letters + invert_letters(h.letters)))

    def sort_key(self):
        return letters_sort_key(self.letters)


def identity(vertex: str) -> FreeWord:
    return FreeWord(vertex, ())


def cyclic_split(letters: Letters) -> Tuple[Letters, Letters]:
    """Split a reduced word as c * core * c^-1 with core cyclically reduced.

    A reduced nonempty word always has a nonempty core.
    """
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    return letters[:i], letters[i:j]


def _smallest_period(core: Letters) -> Letters:
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core == core[:d] * (n // d):
            return core[:d]
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class RootDecomposition:
    """w = conjugator * primitive^exponent * conjugator^-1, exponent != 0.

    The primitive is canonical: (length, lex)-least among all cyclic
    permutations of itself and of its inverse.  This folds inversion into the
    choice, so commensurable cyclic subgroups always share the same primitive.
    """

    conjugator: FreeWord
    primitive: FreeWord
    exponent: int

    def recompose(self) -> FreeWord:
        return (self.primitive ** self.exponent).conjugated_by(self.conjugator)


@lru_cache(maxsize=65536)
def _root_cached(vertex: str, letters: Letters):
    c, core = cyclic_split(letters)
    q = _smallest_period(core)
    m = len(core) // len(q)
    best = None
    for source, base in ((1, q), (-1, invert_letters(q))):
        for i in range(len(base)):
            cand = base[i:] + base[:i]
            key = tuple(letter_key(l) for l in cand)
            if best is None or key < best[0]:
                best = (key, cand, source, i)
    _, p, source, i = best
    base = q if source == 1 else invert_letters(q)
    conj = reduce_letters(c + base[:i])
    k = m if source == 1 else -m
    return conj, p, k


def root(w: FreeWord) -> RootDecomposition:
    """Primitive root decomposition of a nontrivial word."""
    if w.is_identity:
        raise DegenerateInputError("root of the identity is undefined")
    conj, p, k = _root_cached(w.vertex, w.letters)
    dec = RootDecomposition(FreeWord(w.vertex, conj), FreeWord(w.vertex, p), k)
    assert dec.recompose() == w, "root decomposition must recompose"
    return dec


def maximal_root(w: FreeWord) -> FreeWord:
    """The generator of the maximal cyclic subgroup containing w.

    Two nontrivial words have nontrivially intersecting cyclic subgroups
    (literally, not up to conjugacy) iff their maximal roots coincide; with
    the canonical primitive the inverse case cannot occur.
    """
    r = root(w)
    return r.primitive.conjugated_by(r.conjugator)


def conjugate_in_free(u: FreeWord, v: FreeWord) -> Optional[FreeWord]:
    """Some h with h u h^-1 = v, or None.

    Standard cyclic-word comparison: u ~ v iff their cyclic cores are
    rotations of each other.
    """
    u._check(v)
    if u.is_identity and v.is_identity:
        return identity(u.vertex)
    if u.is_identity or v.is_identity:
        return None
    cu, core_u = cyclic_split(u.letters)
    cv, core_v = cyclic_split(v.letters)
    if len(core_u) != len(core_v):
        return None
    for i in range(len(core_u)):
        if core_u[i:] + core_u[:i] == core_v:
            r = core_u[:i]
            h = reduce_letters(cv + invert_letters(r) + invert_letters(cu))
            return FreeWord(u.vertex, h)
    return None


@dataclass(frozen=True)
class CyclicMeet:
    """Witness that some conjugate of <u> meets <v> nontrivially.

    conjugator h satisfies h * u_root.primitive * h^-1 = v_root.primitive^sign.
    With the inversion-folding canonical primitive the sign is always +1 in a
    free group (no element is conjugate to its own inverse), but the field is
    part of the record.  exps are the signed root exponents (k_u, k_v).
    """

    conjugator: FreeWord
    sign: int
    exps: Tuple[int, int]
    u_root: RootDecomposition
    v_root: RootDecomposition

    def transfer_conjugator(self) -> FreeWord:
        """theta with theta * u^x * theta^-1 = v^(x * k_u / k_v) whenever integral."""
        return FreeWord(
            self.u_root.conjugator.vertex,
            reduce_letters(
                self.v_root.conjugator.letters
                + self.conjugator.letters
                + invert_letters(self.u_root.conjugator.letters)
            ),
        )


def cyclic_meet(u: FreeWord, v: FreeWord) -> Optional[CyclicMeet]:
    """Decide whether some conjugate of <u> intersects <v> nontrivially.

    Equivalently (free groups): the primitive roots are conjugate up to
    inversion.  Also decides "some power of u is conjugate into <v>".
    """
    u._check(v)
    if u.is_identity or v.is_identity:
        raise DegenerateInputError("cyclic_meet requires nontrivial words")
    ru, rv = root(u), root(v)
    if ru.primitive.letters != rv.primitive.letters:
        return None
    return CyclicMeet(
        conjugator=identity(u.vertex),
        sign=1,
        exps=(ru.exponent, rv.exponent),
        u_root=ru,
        v_root=rv,
    )


@lru_cache(maxsize=65536)
def _coset_canonical_cached(vertex: str, u: Letters, x: Letters) -> Letters:
    _, core = cyclic_split(u)
    # Any coset element no longer than x satisfies |k| * |core| <= 2|x|,
    # so this window contains every candidate that could beat x itself.
    bound = 2 * len(x) // len(core) + 1
    best = x
    best_key = letters_sort_key(x)
    for k in range(-bound, bound + 1):
        if k == 0:
            continue
        cand = reduce_letters((u * abs(k) if k > 0 else invert_letters(u) * (-k)) + x)
        key = letters_sort_key(cand)
        if key < best_key:
            best, best_key = cand, key
    return best


def coset_canonical(u: FreeWord, x: FreeWord) -> FreeWord:
    """The (length, lex)-least representative of the right coset <u> x."""
    u._check(x)
    if u.is_identity:
        raise DegenerateInputError("coset_canonical requires a nontrivial subgroup generator")
    return FreeWord(x.vertex, _coset_canonical_cached(u.vertex, u.letters, x.letters))


def cyclic_power(u: FreeWord, x: FreeWord) -> Optional[int]:
    """The j with x = u^j, or None.  u must be nontrivial."""
    u._check(x)
    if u.is_identity:
        raise DegenerateInputError("cyclic_power requires a nontrivial base")
    if x.is_identity:
        return 0
    ru, rx = root(u), root(x)
    if ru.primitive.letters != rx.primitive.letters:
        return None
    if ru.conjugator.letters != rx.conjugator.letters:
        return None
    if rx.exponent % ru.exponent:
        return None
    j = rx.exponent // ru.exponent
    assert u ** j == x
    return j


def coset_decompose(u: FreeWord, x: FreeWord) -> Tuple[int, FreeWord]:
    """x = u^j * r with r = coset_canonical(u, x); returns (j, r)."""
    r = coset_canonical(u, x)
    j = cyclic_power(u, x * r.inverse())
    assert j is not None, "coset representative must differ from x by a power of u"
    return j, r
