"""Free modules on hashable basis keys, with exact coefficients.

A FreeElement is a sparse linear combination; zero coefficients are never
stored. Keys can be anything hashable: simplex references, words of cube
letters, serialized graphs. Degree bookkeeping lives with the callers,
so the Koszul sign helpers here take explicit degree data.
"""

from __future__ import annotations

from .rings import Ring


def add_into(terms: dict, ring: Ring, key, coeff) -> None:
    """Accumulate coeff onto terms[key], dropping the entry if it cancels."""
    c = ring.add(terms.get(key, ring.zero), coeff)
    if ring.is_zero(c):
        terms.pop(key, None)
    else:
        terms[key] = c


class FreeElement:
    """Finite linear combination of basis keys over a fixed ring.

    >>> from .rings import ZZ
    >>> x = FreeElement(ZZ, {"a": 2, "b": -1})
    >>> (x + x).coeff("a")
    4
    >>> (x - x).is_zero()
    True
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms=None):
        clean = {}
        if terms:
            for key, coeff in terms.items() if isinstance(terms, dict) else terms:
                add_into(clean, ring, key, ring.coerce(coeff))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FreeElement is immutable; build a new one")

    @classmethod
    def zero(cls, ring: Ring) -> "FreeElement":
        return cls(ring)

    @classmethod
    def single(cls, ring: Ring, key, coeff=None) -> "FreeElement":
        return cls(ring, {key: ring.one if coeff is None else coeff})

    def coeff(self, key):
        return self.terms.get(key, self.ring.zero)

    def items(self):
        return self.terms.items()

    def support(self):
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __contains__(self, key):
        return key in self.terms

    def _require_same_ring(self, other):
        if not isinstance(other, FreeElement):
            raise TypeError(f"expected FreeElement, got {type(other).__name__}")
        if self.ring != other.ring:
            raise ValueError(f"mixed rings: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._require_same_ring(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            add_into(terms, self.ring, key, coeff)
        out = FreeElement(self.ring)
        object.__setattr__(out, "terms", terms)
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(self.ring.neg(self.ring.one))

    def scale(self, coeff):
        coeff = self.ring.coerce(coeff)
        if self.ring.is_zero(coeff):
            return FreeElement(self.ring)
        out = FreeElement(self.ring)
        object.__setattr__(
            out, "terms", {k: self.ring.mul(c, coeff) for k, c in self.terms.items()}
        )
        # field or +-1 scaling never produces zeros; integers cannot either
        return out

    def __rmul__(self, coeff):
        return self.scale(coeff)

    def __eq__(self, other):
        return (
            isinstance(other, FreeElement)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, key=repr):
            c = self.terms[key]
            bits.append(f"{c}*{key!r}" if c != self.ring.one else f"{key!r}")
        return " + ".join(bits)

    def map_keys(self, fn) -> "FreeElement":
        """Linear extension of a key map; fn may return None to drop a key."""
        terms = {}
        for key, coeff in self.terms.items():
            new = fn(key)
            if new is not None:
                add_into(terms, self.ring, new, coeff)
        out = FreeElement(self.ring)
        object.__setattr__(out, "terms", terms)
        return out

    def map_terms(self, fn) -> "FreeElement":
        """Linear extension of a key -> FreeElement map."""
        terms = {}
        for key, coeff in self.terms.items():
            image = fn(key)
            if image is None:
                continue
            for k2, c2 in image.terms.items():
                add_into(terms, self.ring, k2, self.ring.mul(coeff, c2))
        out = FreeElement(self.ring)
        object.__setattr__(out, "terms", terms)
        return out


def koszul_sign(perm, degrees) -> int:
    """Sign picked up when graded symbols are reordered.

    perm[i] is the index of the input symbol landing in output slot i;
    degrees are the input degrees. Every transposition of two odd-degree
    symbols contributes a factor -1.

    >>> koszul_sign([1, 0], [1, 1])
    -1
    >>> koszul_sign([1, 0], [1, 0])
    1
    >>> koszul_sign([2, 0, 1], [1, 1, 1])
    1
    """
    if sorted(perm) != list(range(len(degrees))):
        raise ValueError(f"not a permutation of {len(degrees)} symbols: {perm!r}")
    sign = 1
    for j in range(len(perm)):
        for i in range(j):
            if perm[i] > perm[j] and degrees[perm[i]] % 2 and degrees[perm[j]] % 2:
                sign = -sign
    return sign


def permute_word(word: tuple, perm, degrees):
    """Apply a permutation to a tensor word, returning (new_word, sign).

    Output slot i receives word[perm[i]]; the sign is the Koszul sign of
    the reordering.
    """
    new_word = tuple(word[i] for i in perm)
    return new_word, koszul_sign(list(perm), list(degrees))


def cyclic_rotation_sign(degrees) -> int:
    """Koszul sign for bringing the last tensor factor to the front."""
    n = len(degrees)
    if n <= 1:
        return 1
    return koszul_sign([n - 1] + list(range(n - 1)), list(degrees))


def tensor_elements(a: FreeElement, b: FreeElement, degree_fn=None) -> FreeElement:
    """Tensor product over pair keys (ka, kb).

    No sign appears here; Koszul signs only enter when factors move past
    each other. With degree_fn given, each input must be homogeneous.
    """
    if a.ring != b.ring:
        raise ValueError("tensor over mixed rings")
    if degree_fn is not None:
        for el in (a, b):
            degs = {degree_fn(k) for k in el.support()}
            if len(degs) > 1:
                raise ValueError(f"mixed-degree tensor factor, degrees {sorted(degs)}")
    ring = a.ring
    terms = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            add_into(terms, ring, (ka, kb), ring.mul(ca, cb))
    out = FreeElement(ring)
    object.__setattr__(out, "terms", terms)
    return out
