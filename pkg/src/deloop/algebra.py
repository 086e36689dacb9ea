"""Bound quiver algebras KQ/I with length-graded admissible relations.

A basis of the quotient is computed degree by degree: the degree-d component
of the ideal is spanned by arrow-extensions of the degree-(d-1) component
plus the degree-d relations, and the surviving words form the basis.  The
construction stops at the first degree whose quotient vanishes, which is the
nilpotency degree of the arrow ideal.

Paths compose left to right: the word (a, b) means "traverse a, then b".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArrow, NonGradedRelation, NotAdmissible
from .fields import QQ
from .linalg import Mat, from_rows, rref

# A word is (source_vertex, tuple_of_arrow_names); trivial paths have no arrows.
Word = tuple[str, tuple[str, ...]]

WORDS_PER_DEGREE_LIMIT = 200_000


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidArrow("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise InvalidArrow("duplicate arrow names")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise InvalidArrow(f"arrow {a.name}: {a.source} -> {a.target} uses unknown vertex")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise InvalidArrow(f"unknown arrow {name!r}")

    def arrows_from(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]


@dataclass(frozen=True)
class Relation:
    """A scalar combination of parallel equal-length paths (arrow-name tuples)."""

    terms: tuple[tuple[Fraction, tuple[str, ...]], ...]


def _path_endpoints(q: Quiver, path: tuple[str, ...]) -> tuple[str, str]:
    if not path:
        raise NonGradedRelation("empty path in relation")
    first = q.arrow(path[0])
    src, at = first.source, first.target
    for name in path[1:]:
        a = q.arrow(name)
        if a.source != at:
            raise InvalidArrow(f"path {'*'.join(path)} not composable at {name}")
        at = a.target
    return src, at


def word_target(q: Quiver, w: Word) -> str:
    v, arrows = w
    for name in arrows:
        v = q.arrow(name).target
    return v


class PathAlgebra:
    """Finite-dimensional KQ/I with an explicit word basis per degree."""

    def __init__(self, quiver: Quiver, field, relations: tuple[Relation, ...],
                 basis_by_degree, reductions, nilpotency: int, name: str = "algebra"):
        self.quiver = quiver
        self.field = field
        self.relations = relations
        self.basis_by_degree = basis_by_degree  # list[d] -> tuple of Words
        self._reductions = reductions  # list[d] -> dict[Word, dict[Word, scalar]]
        self.nilpotency = nilpotency  # least N with no basis words of length N
        self.name = name
        self.basis: tuple[Word, ...] = tuple(w for deg in basis_by_degree for w in deg)
        self.dim = len(self.basis)
        self._caches: dict[str, dict] = {}
        self._opposite: PathAlgebra | None = None
        self._opposite_of: PathAlgebra | None = None
        self._product_cache: dict[tuple[Word, Word], dict[Word, object]] = {}

    # -- structure ---------------------------------------------------------

    def cache(self, kind: str) -> dict:
        return self._caches.setdefault(kind, {})

    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def unit_word(self, v: str) -> Word:
        return (v, ())

    def basis_from(self, v: str) -> list[Word]:
        return [w for w in self.basis if w[0] == v]

    def word_source(self, w: Word) -> str:
        return w[0]

    def word_target(self, w: Word) -> str:
        return word_target(self.quiver, w)

    def reduce_word(self, w: Word) -> dict[Word, object]:
        """Express a composable word in the basis; {} if it is zero."""
        d = len(w[1])
        if d >= self.nilpotency:
            return {}
        table = self._reductions[d]
        return table[w]

    def multiply_words(self, u: Word, v: Word) -> dict[Word, object]:
        """Product of two basis words as a basis combination."""
        keyed = self._product_cache.get((u, v))
        if keyed is not None:
            return keyed
        if self.word_target(u) != v[0]:
            out: dict[Word, object] = {}
        else:
            out = self.reduce_word((u[0], u[1] + v[1]))
        self._product_cache[(u, v)] = out
        return out

    def multiply(self, x: dict[Word, object], y: dict[Word, object]) -> dict[Word, object]:
        """Bilinear extension of the word product; elements are word->scalar dicts."""
        f = self.field
        out: dict[Word, object] = {}
        for u, cu in x.items():
            if f.is_zero(cu):
                continue
            for v, cv in y.items():
                if f.is_zero(cv):
                    continue
                c = f.mul(cu, cv)
                for w, cw in self.multiply_words(u, v).items():
                    acc = f.add(out.get(w, f.zero()), f.mul(c, cw))
                    if f.is_zero(acc):
                        out.pop(w, None)
                    else:
                        out[w] = acc
        return out

    def unit(self, v: str) -> dict[Word, object]:
        return {self.unit_word(v): self.field.one()}

    def one(self) -> dict[Word, object]:
        return {self.unit_word(v): self.field.one() for v in self.vertices()}

    def is_monomial(self) -> bool:
        return all(len(r.terms) == 1 for r in self.relations)

    def opposite(self) -> PathAlgebra:
        """Opposite algebra: arrows and relation words reversed; an involution."""
        if self._opposite_of is not None:
            return self._opposite_of
        if self._opposite is None:
            q = Quiver(self.quiver.vertices,
                       tuple(Arrow(a.name, a.target, a.source) for a in self.quiver.arrows))
            rels = tuple(
                Relation(tuple((c, tuple(reversed(p))) for c, p in r.terms))
                for r in self.relations
            )
            opp = build_algebra(q, rels, self.field, name=self.name + "^op",
                                degree_cap=self.nilpotency + 1)
            opp._opposite_of = self
            self._opposite = opp
        return self._opposite

    def key(self):
        return (id(self),)

    def __repr__(self):
        return f"PathAlgebra({self.name}, dim {self.dim}, {self.field.name})"


def build_algebra(quiver: Quiver, relations, field=QQ, *, degree_cap: int = 32,
                  name: str = "algebra") -> PathAlgebra:
    """Build KQ/I from length-graded admissible relations.

    Raises NonGradedRelation for relations whose paths are not parallel of one
    length >= 2, InvalidArrow for unknown/ incomposable arrows, NotAdmissible
    if no degree below the cap has a vanishing quotient.
    """
    relations = tuple(relations)
    rels_by_degree: dict[int, list[Relation]] = {}
    for r in relations:
        if not r.terms:
            raise NonGradedRelation("relation with no terms")
        ends = set()
        lengths = set()
        for coeff, path in r.terms:
            src, tgt = _path_endpoints(quiver, path)
            ends.add((src, tgt))
            lengths.add(len(path))
        if len(lengths) != 1:
            raise NonGradedRelation(f"relation mixes path lengths {sorted(lengths)}")
        (length,) = lengths
        if length < 2:
            raise NonGradedRelation("relation paths must have length >= 2")
        if len(ends) != 1:
            raise NonGradedRelation("relation paths are not parallel")
        rels_by_degree.setdefault(length, []).append(r)

    f = field
    # Degree 0 and 1 are always basis words.
    basis_by_degree: list[tuple[Word, ...]] = [
        tuple((v, ()) for v in quiver.vertices),
        tuple((a.source, (a.name,)) for a in quiver.arrows),
    ]
    reductions: list[dict] = [
        {w: {w: f.one()} for w in basis_by_degree[0]},
        {w: {w: f.one()} for w in basis_by_degree[1]},
    ]
    if not quiver.arrows:
        return PathAlgebra(quiver, field, relations, [basis_by_degree[0]],
                           reductions[:1], 1, name)

    words_prev = list(basis_by_degree[1])  # all composable words of the previous degree
    ideal_prev_rows: list[dict[Word, object]] = []  # RREF span of ideal, as word->coeff dicts

    for degree in range(2, degree_cap + 1):
        words: list[Word] = []
        for (src, arrs) in words_prev:
            at = word_target(quiver, (src, arrs))
            for a in quiver.arrows_from(at):
                words.append((src, arrs + (a.name,)))
        if len(words) > WORDS_PER_DEGREE_LIMIT:
            raise NotAdmissible(
                f"{len(words)} words at degree {degree}; algebra looks infinite-dimensional")
        index = {w: i for i, w in enumerate(words)}

        gens: list[list] = []

        def add_gen(vec: dict[Word, object]):
            row = [f.zero()] * len(words)
            for w, c in vec.items():
                row[index[w]] = c
            gens.append(row)

        # Two-sided ideal, degree by degree: arrow * I_{d-1}, I_{d-1} * arrow, R_d.
        for vec in ideal_prev_rows:
            by_first: dict[str, list] = {}
            for w, c in vec.items():
                by_first.setdefault(w[0], []).append((w, c))
            for a in quiver.arrows:
                if a.target in by_first:
                    add_gen({(a.source, (a.name,) + w[1]): c for w, c in by_first[a.target]})
            by_last: dict[str, list] = {}
            for w, c in vec.items():
                by_last.setdefault(word_target(quiver, w), []).append((w, c))
            for a in quiver.arrows:
                if a.source in by_last:
                    add_gen({(w[0], w[1] + (a.name,)): c for w, c in by_last[a.source]})
        for r in rels_by_degree.get(degree, []):
            by_src: dict[Word, object] = {}
            for coeff, path in r.terms:
                src, _ = _path_endpoints(quiver, path)
                w = (src, tuple(path))
                by_src[w] = f.add(by_src.get(w, f.zero()), f.from_fraction(coeff))
            add_gen(by_src)

        if gens:
            reduced, pivots, rk = rref(from_rows(f, gens))
        else:
            reduced, pivots, rk = from_rows(f, []), (), 0
        pivot_set = set(pivots)
        basis_words = tuple(w for i, w in enumerate(words) if i not in pivot_set)

        table: dict[Word, dict[Word, object]] = {}
        for w in basis_words:
            table[w] = {w: f.one()}
        for i, pc in enumerate(pivots):
            expansion = {}
            for j, w in enumerate(words):
                if j in pivot_set or j == pc:
                    continue
                c = reduced.entries[i][j]
                if not f.is_zero(c):
                    expansion[w] = f.neg(c)
            table[words[pc]] = expansion

        basis_by_degree.append(basis_words)
        reductions.append(table)

        ideal_prev_rows = []
        for i in range(rk):
            vec = {w: reduced.entries[i][j] for j, w in enumerate(words)
                   if not f.is_zero(reduced.entries[i][j])}
            ideal_prev_rows.append(vec)
        words_prev = words

        if not basis_words:
            # Once a degree dies, every higher degree dies with it.
            return PathAlgebra(quiver, field, relations, basis_by_degree[:degree],
                               reductions[:degree], degree, name)

    raise NotAdmissible(f"quotient never vanished below degree cap {degree_cap}")
