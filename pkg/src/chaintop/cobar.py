"""Cobar constructions on chains of reduced simplicial sets.

Words are tuples of nondegenerate simplices of dimension >= 1, each
letter contributing its dimension minus one to the degree. The plain
construction truncates by degree and, when dimension-1 letters make a
degree infinite-rank, by word length; long words span a subcomplex, so
dropping them is a quotient and d^2 = 0 survives exactly.

The localized variant turns dimension-1 letters into invertible group
letters. There the group-word budget shrinks with the degree, because a
single boundary term can add group letters; the sliding budget keeps
the stored basis closed under the honest differential.
"""

from __future__ import annotations

from .complexes import ChainComplex
from .freemod import FreeElement, add_into
from .rings import QQ, Ring, ZZ
from .simplicial import SimplicialSet, back_face, front_face
from .smith import field_rank


def _check_reduced(space: SimplicialSet) -> None:
    if not space.is_reduced:
        raise ValueError(f"{space.name or 'space'} is not reduced")


def letter_degree(space: SimplicialSet, cell) -> int:
    return space.dim_of(cell) - 1


def word_degree(space: SimplicialSet, word) -> int:
    return sum(letter_degree(space, cell) for cell in word)


def letter_boundary(space: SimplicialSet, cell, ring: Ring) -> FreeElement:
    """Boundary of a one-letter word: shifted faces plus split terms.

    Face i carries (-1)^(i+1); the split into the first i vertices and
    the last n - i carries (-1)^i from moving a shift past the front
    factor. Degenerate letters and vertex letters drop.
    """
    n = space.dim_of(cell)
    terms = {}
    ref = space.ref(cell)
    if n >= 2:
        for i in range(n + 1):
            face = space.face_of_ref(ref, i)
            if not face.is_degenerate:
                sign = ring.from_int(-1 if i % 2 == 0 else 1)
                add_into(terms, ring, (face.base,), sign)
    for i in range(1, n):
        front = front_face(space, ref, i)
        back = back_face(space, ref, n - i)
        if front.is_degenerate or back.is_degenerate:
            continue
        sign = ring.from_int(-1 if i % 2 else 1)
        add_into(terms, ring, (front.base, back.base), sign)
    return FreeElement(ring, terms)


class CobarComplex:
    """Truncated tensor algebra on shifted chains, with its product."""

    def __init__(
        self,
        space: SimplicialSet,
        max_degree: int,
        ring: Ring = ZZ,
        max_length: int | None = None,
    ):
        _check_reduced(space)
        self.space = space
        self.ring = ring
        self.max_degree = int(max_degree)
        self.max_length = max_length if max_length is None else int(max_length)
        letters = [
            cell
            for m in space.dimensions()
            if m >= 1
            for cell in space.nondegenerate(m)
        ]
        if self.max_length is None and any(
            space.dim_of(cell) == 1 for cell in letters
        ):
            raise ValueError(
                "dimension-1 letters make degrees infinite-rank; "
                "pass a word length cutoff"
            )
        self._letters = letters
        basis = {n: [] for n in range(self.max_degree + 1)}
        for word in self._words():
            basis[word_degree(space, word)].append(word)
        basis = {n: tuple(sorted(ws, key=repr)) for n, ws in basis.items()}
        self._letter_boundaries = {}
        self.complex = ChainComplex(
            ring,
            basis,
            self._word_boundary,
            complete=False,
            name=f"cobar({space.name})",
        )

    def _words(self):
        yield ()
        frontier = [()]
        while frontier:
            new = []
            for word in frontier:
                if self.max_length is not None and len(word) >= self.max_length:
                    continue
                base = word_degree(self.space, word)
                for cell in self._letters:
                    if base + letter_degree(self.space, cell) <= self.max_degree:
                        grown = word + (cell,)
                        new.append(grown)
                        yield grown
            frontier = new

    def _letter_boundary(self, cell) -> FreeElement:
        if cell not in self._letter_boundaries:
            self._letter_boundaries[cell] = letter_boundary(
                self.space, cell, self.ring
            )
        return self._letter_boundaries[cell]

    def _in_basis(self, word) -> bool:
        return self.max_length is None or len(word) <= self.max_length

    def _word_boundary(self, word) -> FreeElement:
        ring = self.ring
        terms = {}
        sign = ring.one
        for j, cell in enumerate(word):
            for piece, c in self._letter_boundary(cell).items():
                new = word[:j] + piece + word[j + 1 :]
                if self._in_basis(new):
                    add_into(terms, ring, new, ring.mul(sign, c))
            if letter_degree(self.space, cell) % 2:
                sign = ring.neg(sign)
        return FreeElement(ring, terms)

    def unit(self) -> FreeElement:
        return FreeElement.single(self.ring, (), self.ring.one)

    def product(self, left: FreeElement, right: FreeElement) -> FreeElement:
        """Concatenation, dropping words outside the stored truncation."""
        ring = self.ring
        terms = {}
        for u, cu in left.items():
            for v, cv in right.items():
                w = u + v
                if word_degree(self.space, w) <= self.max_degree and self._in_basis(w):
                    add_into(terms, ring, w, ring.mul(cu, cv))
        return FreeElement(ring, terms)


def cobar(
    space: SimplicialSet,
    max_degree: int,
    ring: Ring = ZZ,
    max_length: int | None = None,
) -> CobarComplex:
    return CobarComplex(space, max_degree, ring, max_length)


# --- free group words over the 1-cells ---

def reduce_group_word(letters) -> tuple:
    """Free reduction: cancel adjacent (g, e)(g, -e) pairs."""
    out = []
    for cell, exp in letters:
        if exp not in (1, -1):
            raise ValueError(f"exponent must be +-1, got {exp!r}")
        if out and out[-1][0] == cell and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((cell, exp))
    return tuple(out)


def invert_group_word(word) -> tuple:
    return tuple((cell, -exp) for cell, exp in reversed(word))


def group_words(cells, max_len: int):
    """All reduced words of length <= max_len, shortest first."""
    yield ()
    frontier = [()]
    alphabet = [(cell, exp) for cell in cells for exp in (1, -1)]
    for _ in range(max(0, max_len)):
        new = []
        for w in frontier:
            for cell, exp in alphabet:
                if w and w[-1] == (cell, -exp):
                    continue
                grown = w + ((cell, exp),)
                new.append(grown)
                yield grown
        frontier = new


# --- localized words ---
#
# A localized word alternates group segments and letters of dimension
# >= 2: (g0, x1, g1, ..., xk, gk), always odd length, every group
# segment reduced. The unit is ((),).

def loc_degree(space: SimplicialSet, word) -> int:
    return sum(space.dim_of(word[j]) - 1 for j in range(1, len(word), 2))


def loc_group_count(word) -> int:
    return sum(len(word[j]) for j in range(0, len(word), 2))


def loc_product(left, right) -> tuple:
    joined = reduce_group_word(left[-1] + right[0])
    return left[:-1] + (joined,) + right[1:]


def expand_word(space: SimplicialSet, word, ring: Ring) -> FreeElement:
    """A plain word as a sum of localized words.

    Each dimension-1 letter t goes to the group letter minus the unit,
    so a word with k of them expands into 2^k signed localized words.
    """
    branches = [(ring.one, [()])]
    for cell in word:
        if space.dim_of(cell) == 1:
            grown = []
            for sign, parts in branches:
                grown.append((sign, parts[:-1] + [parts[-1] + ((cell, 1),)]))
                grown.append((ring.neg(sign), parts))
            branches = grown
        else:
            branches = [
                (sign, parts + [cell, ()]) for sign, parts in branches
            ]
    terms = {}
    for sign, parts in branches:
        add_into(terms, ring, tuple(parts), sign)
    return FreeElement(ring, terms)


def _expand_value(space: SimplicialSet, value: FreeElement, ring: Ring) -> FreeElement:
    out = {}
    for word, c in value.items():
        for loc, s in expand_word(space, word, ring).items():
            add_into(out, ring, loc, ring.mul(c, s))
    return FreeElement(ring, out)


class ExtendedCobarComplex:
    """Localized construction: 1-cells become invertible group letters.

    The group-letter budget of the degree-n basis is cutoff - g*n where
    g bounds how many group letters one boundary term can add (2 when
    2-cells exist, since their splits produce two dimension-1 factors;
    1 with higher cells only; 0 without 1-cells). Boundaries therefore
    never leave the stored basis and d^2 = 0 holds exactly.
    """

    def __init__(
        self,
        space: SimplicialSet,
        max_degree: int,
        cutoff: int | None,
        ring: Ring = ZZ,
    ):
        _check_reduced(space)
        if cutoff is None:
            raise ValueError(
                "localized degrees are infinite-rank; pass a group-letter cutoff"
            )
        self.space = space
        self.ring = ring
        self.max_degree = int(max_degree)
        self.cutoff = int(cutoff)
        self.group_letters = space.nondegenerate(1)
        self.heavy_letters = tuple(
            cell
            for m in space.dimensions()
            if m >= 2
            for cell in space.nondegenerate(m)
        )
        if not self.group_letters:
            self.growth = 0
        elif space.nondegenerate(2):
            self.growth = 2
        else:
            self.growth = 1
        self._letter_values = {}
        basis = {n: [] for n in range(self.max_degree + 1)}
        for word in self._enumerate():
            basis[loc_degree(space, word)].append(word)
        basis = {n: tuple(sorted(ws, key=repr)) for n, ws in basis.items()}
        self.complex = ChainComplex(
            ring,
            basis,
            self._boundary,
            complete=False,
            name=f"extended-cobar({space.name})",
        )

    def budget(self, degree: int) -> int:
        return self.cutoff - self.growth * degree

    def in_window(self, word) -> bool:
        degree = loc_degree(self.space, word)
        return degree <= self.max_degree and loc_group_count(word) <= self.budget(
            degree
        )

    def _skeletons(self):
        yield ()
        frontier = [()]
        while frontier:
            new = []
            for sk in frontier:
                base = sum(self.space.dim_of(c) - 1 for c in sk)
                for cell in self.heavy_letters:
                    if base + self.space.dim_of(cell) - 1 <= self.max_degree:
                        grown = sk + (cell,)
                        new.append(grown)
                        yield grown
            frontier = new

    def _segment_tuples(self, k: int, budget: int):
        if k == 0:
            for w in group_words(self.group_letters, budget):
                yield (w,)
            return
        for head in group_words(self.group_letters, budget):
            for tail in self._segment_tuples(k - 1, budget - len(head)):
                yield (head,) + tail

    def _enumerate(self):
        for sk in self._skeletons():
            degree = sum(self.space.dim_of(c) - 1 for c in sk)
            budget = self.budget(degree)
            if budget < 0:
                continue
            for segs in self._segment_tuples(len(sk), budget):
                parts = [segs[0]]
                for i, cell in enumerate(sk):
                    parts.append(cell)
                    parts.append(segs[i + 1])
                yield tuple(parts)

    def letter_value(self, cell) -> FreeElement:
        """d of a heavy letter, rewritten into localized words."""
        if cell not in self._letter_values:
            plain = letter_boundary(self.space, cell, self.ring)
            self._letter_values[cell] = _expand_value(self.space, plain, self.ring)
        return self._letter_values[cell]

    def _boundary(self, word) -> FreeElement:
        ring = self.ring
        terms = {}
        sign = ring.one
        for j in range(1, len(word), 2):
            cell = word[j]
            for piece, c in self.letter_value(cell).items():
                if len(piece) == 1:
                    mid = reduce_group_word(word[j - 1] + piece[0] + word[j + 1])
                    new = word[: j - 1] + (mid,) + word[j + 2 :]
                else:
                    first = reduce_group_word(word[j - 1] + piece[0])
                    last = reduce_group_word(piece[-1] + word[j + 1])
                    new = (
                        word[: j - 1]
                        + (first,)
                        + piece[1:-1]
                        + (last,)
                        + word[j + 2 :]
                    )
                add_into(terms, ring, new, ring.mul(sign, c))
            if (self.space.dim_of(cell) - 1) % 2:
                sign = ring.neg(sign)
        return FreeElement(ring, terms)

    def unit(self) -> FreeElement:
        return FreeElement.single(self.ring, ((),), self.ring.one)

    def product(self, left: FreeElement, right: FreeElement) -> FreeElement:
        ring = self.ring
        terms = {}
        for u, cu in left.items():
            for v, cv in right.items():
                w = loc_product(u, v)
                if self.in_window(w):
                    add_into(terms, ring, w, ring.mul(cu, cv))
        return FreeElement(ring, terms)

    def embed_word(self, word) -> FreeElement:
        """Image of a plain cobar word; fails if the window is too tight."""
        value = expand_word(self.space, word, self.ring)
        for loc in value.support():
            if not self.in_window(loc):
                raise ValueError(
                    f"embedding {word!r} needs words beyond the cutoff; "
                    "raise the group-letter budget"
                )
        return value


def extended_cobar(
    space: SimplicialSet,
    max_degree: int,
    cutoff: int | None = None,
    ring: Ring = ZZ,
) -> ExtendedCobarComplex:
    return ExtendedCobarComplex(space, max_degree, cutoff, ring)


# --- degree-0 homology of the localized construction ---

class H0Report:
    """Presentation plus a rank certificate for the degree-0 homology."""

    __slots__ = (
        "generators",
        "relators",
        "rank",
        "basis_size",
        "cutoff",
        "inconclusive",
    )

    def __init__(self, generators, relators, rank, basis_size, cutoff, inconclusive):
        self.generators = tuple(generators)
        self.relators = tuple(relators)
        self.rank = rank
        self.basis_size = basis_size
        self.cutoff = cutoff
        self.inconclusive = inconclusive

    def as_dict(self):
        return {
            "generators": [str(cell) for cell in self.generators],
            "relators": [
                [[str(cell), exp] for cell, exp in rel] for rel in self.relators
            ],
            "rank": self.rank,
            "basis_size": self.basis_size,
            "cutoff": self.cutoff,
            "inconclusive": self.inconclusive,
        }


def fundamental_relators(space: SimplicialSet):
    """One relator per nondegenerate 2-cell: its edge-path boundary word.

    The far face crosses first, then face 0, then face 1 backwards;
    degenerate faces contribute the identity and drop out.
    """
    relators = []
    for cell in space.nondegenerate(2):
        ref = space.ref(cell)
        letters = []
        for i, exp in ((2, 1), (0, 1), (1, -1)):
            face = space.face_of_ref(ref, i)
            if not face.is_degenerate:
                letters.append((face.base, exp))
        word = reduce_group_word(letters)
        if word:
            relators.append(word)
    return tuple(relators)


def _relator_values(space: SimplicialSet, ring: Ring):
    """d of each 2-cell letter as a group-algebra element."""
    values = []
    for cell in space.nondegenerate(2):
        plain = letter_boundary(space, cell, ring)
        loc = _expand_value(space, plain, ring)
        values.append({word[0]: c for word, c in loc.items()})
    return values


def _h0_within(space: SimplicialSet, cutoff: int, ring: Ring) -> tuple:
    """(basis size, certified relation rank) inside the cutoff window.

    Relations are the boundaries g * d(x) * h over all group words g, h
    with |g| + |h| <= cutoff, kept only when every reduced term stays
    within the window; each kept row is an honest boundary, so the
    quotient rank can only overshoot the true one, never undershoot.
    """
    words = list(group_words(space.nondegenerate(1), cutoff))
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for value in _relator_values(space, ring):
        for g in group_words(space.nondegenerate(1), cutoff):
            for h in group_words(space.nondegenerate(1), cutoff - len(g)):
                row = [ring.zero] * len(words)
                ok = True
                for w, c in value.items():
                    full = reduce_group_word(g + w + h)
                    if len(full) > cutoff:
                        ok = False
                        break
                    t = index[full]
                    row[t] = ring.add(row[t], c)
                if ok and any(c != ring.zero for c in row):
                    rows.append(row)
    rank = field_rank(rows, ring) if rows else 0
    return len(words), rank


def h0_group_ring(space: SimplicialSet, cutoff: int, ring: Ring = QQ) -> H0Report:
    """Group ring of the edge-path group, computed within a word cutoff.

    Quotients the span of reduced group words of length <= cutoff by
    all boundary relations certifiable inside that window. The rank is
    exact once the window saturates the relations; when the answer
    still moves between cutoff - 1 and cutoff the report says so.
    """
    _check_reduced(space)
    if not getattr(ring, "is_field", False):
        raise ValueError("rank certification needs field coefficients")
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    size, rank = _h0_within(space, cutoff, ring)
    h0 = size - rank
    prev_size, prev_rank = _h0_within(space, cutoff - 1, ring)
    inconclusive = (prev_size - prev_rank) != h0
    return H0Report(
        generators=space.nondegenerate(1),
        relators=fundamental_relators(space),
        rank=h0,
        basis_size=size,
        cutoff=cutoff,
        inconclusive=inconclusive,
    )
