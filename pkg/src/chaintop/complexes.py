"""Chain complexes with an explicit finite basis in each degree.

A complex stores an ordered basis per degree and a differential rule on
basis keys. Complexes may be truncations of infinite objects; the
`complete` flag records whether the listed basis is the whole thing.
Homology routines refuse to answer when the needed degrees fall outside
a truncation (see InsufficientTruncationError).
"""

from __future__ import annotations

from .freemod import FreeElement, add_into
from .rings import Ring


class InsufficientTruncationError(Exception):
    """The requested computation needs degrees beyond the stored range."""


class ChainComplex:
    """Non-negatively graded complex data: basis per degree plus boundary rule.

    basis maps degree -> ordered iterable of keys; keys must be globally
    unique across degrees. diff maps a basis key to a FreeElement supported
    in the basis one degree down (checked lazily, with caching).
    """

    def __init__(self, ring: Ring, basis, diff, complete: bool = False, name: str = ""):
        self.ring = ring
        self.basis = {int(n): tuple(keys) for n, keys in basis.items() if len(tuple(keys))}
        degree_of = {}
        for n, keys in self.basis.items():
            for key in keys:
                if key in degree_of:
                    raise ValueError(f"basis key appears in two degrees: {key!r}")
                degree_of[key] = n
        self._degree_of = degree_of
        self._diff_rule = diff
        self._diff_cache = {}
        self.complete = complete
        self.name = name
        self.min_degree = min(self.basis) if self.basis else 0
        self.max_degree = max(self.basis) if self.basis else -1

    def degrees(self):
        return sorted(self.basis)

    def basis_in(self, n: int) -> tuple:
        return self.basis.get(n, ())

    def rank(self, n: int) -> int:
        return len(self.basis_in(n))

    def degree_of(self, key) -> int:
        try:
            return self._degree_of[key]
        except KeyError:
            raise KeyError(f"key not in complex basis: {key!r}") from None

    def zero(self) -> FreeElement:
        return FreeElement.zero(self.ring)

    def element(self, terms) -> FreeElement:
        el = FreeElement(self.ring, terms)
        for key in el.support():
            self.degree_of(key)
        return el

    def diff(self, key) -> FreeElement:
        """Boundary of a single basis key, validated to land in the basis."""
        if key in self._diff_cache:
            return self._diff_cache[key]
        n = self.degree_of(key)
        value = self._diff_rule(key)
        if value is None:
            value = self.zero()
        for out_key in value.support():
            m = self._degree_of.get(out_key)
            if m != n - 1:
                raise ValueError(
                    f"diff of {key!r} (degree {n}) hit {out_key!r} "
                    f"(degree {m}), expected degree {n - 1}"
                )
        self._diff_cache[key] = value
        return value

    def diff_element(self, el: FreeElement) -> FreeElement:
        return el.map_terms(self.diff)

    def d_squared_witness(self, degrees=None):
        """First basis key whose d(d(key)) is nonzero, or None if d^2 = 0."""
        if degrees is None:
            degrees = [n for n in self.degrees() if n - 2 >= self.min_degree - 1]
        for n in sorted(degrees):
            for key in self.basis_in(n):
                dd = self.diff_element(self.diff(key))
                if not dd.is_zero():
                    return key, dd
        return None

    def diff_matrix(self, n: int):
        """Matrix of d: C_n -> C_{n-1}; rows indexed by C_{n-1}, columns by C_n."""
        rows = self.basis_in(n - 1)
        cols = self.basis_in(n)
        index = {key: i for i, key in enumerate(rows)}
        mat = [[self.ring.zero] * len(cols) for _ in rows]
        for j, key in enumerate(cols):
            for out_key, coeff in self.diff(key).items():
                mat[index[out_key]][j] = coeff
        return mat


class GradedLinearMap:
    """Degree-homogeneous linear map between complexes.

    shift s sends degree n to degree n + s; the chain-map condition used
    throughout is f(d x) = (-1)^s d(f x).
    """

    def __init__(self, source: ChainComplex, target: ChainComplex, shift: int, rule):
        if source.ring != target.ring:
            raise ValueError("chain map between complexes over different rings")
        self.source = source
        self.target = target
        self.shift = shift
        self._rule = rule
        self._cache = {}

    def apply_key(self, key) -> FreeElement:
        if key not in self._cache:
            n = self.source.degree_of(key)
            value = self._rule(key)
            if value is None:
                value = FreeElement.zero(self.target.ring)
            for out_key in value.support():
                m = self.target.degree_of(out_key)
                if m != n + self.shift:
                    raise ValueError(
                        f"map of {key!r} (degree {n}, shift {self.shift}) "
                        f"hit {out_key!r} of degree {m}"
                    )
            self._cache[key] = value
        return self._cache[key]

    def apply(self, el: FreeElement) -> FreeElement:
        return el.map_terms(self.apply_key)

    def is_chain_map(self, degrees=None):
        """Check f(dx) = (-1)^shift d(fx) on basis keys.

        Returns (True, None) or (False, (key, f_dx, d_fx_signed)); the
        witness carries both sides so failures are inspectable.
        """
        sign = -1 if self.shift % 2 else 1
        if degrees is None:
            degrees = [n for n in self.source.degrees() if n > self.source.min_degree]
        for n in sorted(degrees):
            for key in self.source.basis_in(n):
                lhs = self.apply(self.source.diff(key))
                rhs = self.target.diff_element(self.apply_key(key)).scale(sign)
                if lhs != rhs:
                    return False, (key, lhs, rhs)
        return True, None


def tensor_complex(a: ChainComplex, b: ChainComplex, max_degree=None, name: str = "") -> ChainComplex:
    """Tensor product complex with the Leibniz boundary.

    d(x ox y) = dx ox y + (-1)^{|x|} x ox dy; keys are pairs (ka, kb).
    """
    if a.ring != b.ring:
        raise ValueError("tensor of complexes over different rings")
    top = a.max_degree + b.max_degree
    if max_degree is not None:
        top = min(top, max_degree)
    basis = {}
    for n in range(min(a.min_degree + b.min_degree, top), top + 1):
        keys = []
        for i in a.degrees():
            j = n - i
            for ka in a.basis_in(i):
                for kb in b.basis_in(j):
                    keys.append((ka, kb))
        if keys:
            basis[n] = keys
    complete = a.complete and b.complete and (max_degree is None or max_degree >= a.max_degree + b.max_degree)
    ring = a.ring

    def diff(key):
        ka, kb = key
        deg_a = a.degree_of(ka)
        terms = {}
        for k2, c in a.diff(ka).items():
            add_into(terms, ring, (k2, kb), c)
        sign = ring.from_int(-1 if deg_a % 2 else 1)
        for k2, c in b.diff(kb).items():
            add_into(terms, ring, (ka, k2), ring.mul(sign, c))
        return FreeElement(ring, terms)

    return ChainComplex(ring, basis, diff, complete=complete, name=name or f"({a.name})ox({b.name})")
