"""Natural operations on chains of arbitrary spaces, and Steenrod actions.

Operations are defined once on standard cells, where the counit,
diagonal, and join live, and transported to any simplicial or cubical
set along characteristic maps. On homology over a prime field this
yields chain-level Steenrod operations computed through an explicit
cocycle pairing.
"""

from __future__ import annotations

import math

from .complexes import ChainComplex, InsufficientTruncationError
from .cubical import CubeBialgebra, CubicalSet, cell_pushforward, cubical_chains
from .freemod import FreeElement
from .propm import PropGraph, PsiMachine, evaluate
from .rings import GF, Ring
from .simplicial import SimplicialSet, monotone_ref, normalized_chains
from .simplicial import SimplexBialgebra
from .smith import field_rank, solve_field


class UmCoalgebra:
    """Chains of a space together with the transported prop action.

    `geometry` picks the standard-cell family; `push` carries a basis
    cell of the standard model through the characteristic map of a cell
    of the space, returning None when the image is degenerate.
    """

    def __init__(self, geometry: str, space, complex_: ChainComplex):
        if geometry not in ("simplex", "cube"):
            raise ValueError(f"unknown geometry {geometry!r}")
        self.geometry = geometry
        self.space = space
        self.complex = complex_
        self.ring = complex_.ring
        self._models = {}
        self._machines = {}

    def model(self, n: int):
        if n not in self._models:
            cls = SimplexBialgebra if self.geometry == "simplex" else CubeBialgebra
            self._models[n] = cls(n, self.ring)
        return self._models[n]

    def machine(self, p: int) -> PsiMachine:
        if self.ring.characteristic != p:
            raise ValueError(
                f"ring has characteristic {self.ring.characteristic}, need {p}"
            )
        if p not in self._machines:
            self._machines[p] = PsiMachine(p, self.geometry, self.ring)
        return self._machines[p]

    def top_cell(self, n: int):
        if self.geometry == "simplex":
            return tuple(range(n + 1))
        return ("I",) * n

    def push(self, cell, std_key):
        """Image of a standard-model basis key; None when degenerate."""
        if self.geometry == "simplex":
            ref = monotone_ref(self.space, cell, std_key)
        else:
            ref = cell_pushforward(self.space, cell, std_key)
        return None if ref.is_degenerate else ref.base

    def push_tensor(self, cell, element: FreeElement) -> FreeElement:
        terms = {}
        ring = self.ring
        for key, c in element.items():
            images = []
            for component in key:
                image = self.push(cell, component)
                if image is None:
                    break
                images.append(image)
            else:
                k = tuple(images)
                prev = terms.get(k, ring.zero)
                total = ring.add(prev, c)
                if ring.is_zero(total):
                    terms.pop(k, None)
                else:
                    terms[k] = total
        return FreeElement(self.ring, terms)


def simplicial_um(space: SimplicialSet, ring: Ring, max_degree=None) -> UmCoalgebra:
    return UmCoalgebra("simplex", space, normalized_chains(space, max_degree, ring))


def cubical_um(space: CubicalSet, ring: Ring, max_degree=None) -> UmCoalgebra:
    return UmCoalgebra("cube", space, cubical_chains(space, max_degree, ring))


def _as_element(coalg: UmCoalgebra, chain) -> FreeElement:
    if isinstance(chain, FreeElement):
        return chain
    return FreeElement.single(coalg.ring, chain, coalg.ring.one)


def um_action(coalg: UmCoalgebra, op: PropGraph, chain) -> FreeElement:
    """Evaluate a one-input prop operation on a chain of the space.

    The operation runs on the top cell of the standard model in each
    dimension and the answer is pushed forward componentwise.
    """
    if op.n_in != 1:
        raise ValueError("prop action needs a one-input operation")
    chain = _as_element(coalg, chain)
    out = FreeElement.zero(coalg.ring)
    for cell, c in chain.items():
        n = coalg.complex.degree_of(cell)
        value = evaluate(op, coalg.model(n), (coalg.top_cell(n),))
        out = out + coalg.push_tensor(cell, value).scale(c)
    return out


def psi_action(coalg: UmCoalgebra, p: int, i: int, chain) -> FreeElement:
    """The width-p operation psi(e_i) transported to the space's chains."""
    if i < 0:
        return FreeElement.zero(coalg.ring)
    machine = coalg.machine(p)
    chain = _as_element(coalg, chain)
    out = FreeElement.zero(coalg.ring)
    for cell, c in chain.items():
        n = coalg.complex.degree_of(cell)
        value = machine.top_value(i, n)
        out = out + coalg.push_tensor(cell, value).scale(c)
    return out


def cup_i(coalg: UmCoalgebra, i: int, chain) -> FreeElement:
    """Mod-2 cup-i coproduct; i = 0 is the diagonal, higher i its homotopies."""
    if coalg.ring.characteristic != 2:
        raise ValueError("cup-i coproducts need characteristic 2")
    return psi_action(coalg, 2, i, chain)


def tensor_diff(complex_: ChainComplex, element: FreeElement) -> FreeElement:
    """Componentwise boundary on tensor words with Koszul signs."""
    ring = complex_.ring
    out = FreeElement.zero(ring)
    for key, c in element.items():
        sign = ring.one
        for j, x in enumerate(key):
            for face, c2 in complex_.diff(x).items():
                out = out + FreeElement.single(
                    ring,
                    key[:j] + (face,) + key[j + 1 :],
                    ring.mul(ring.mul(c, c2), sign),
                )
            if complex_.degree_of(x) % 2:
                sign = ring.neg(sign)
    return out


# --- homology over a field, with explicit representatives ---

class HomologyClass:
    """A homology class carried by an explicit representative cycle."""

    __slots__ = ("complex", "degree", "representative", "ring", "is_zero_class")

    def __init__(self, complex_, degree, representative, is_zero_class=False):
        self.complex = complex_
        self.degree = int(degree)
        self.representative = representative
        self.ring = complex_.ring
        self.is_zero_class = bool(is_zero_class)
        for key in representative.support():
            if complex_.degree_of(key) != self.degree:
                raise ValueError("representative not homogeneous of the stated degree")
        if not complex_.diff_element(representative).is_zero():
            raise ValueError("representative is not a cycle")

    def __repr__(self):
        return f"[{self.representative!r}] in H_{self.degree}"


def _certify_degree(complex_: ChainComplex, n: int) -> None:
    # boundaries into degree n come from degree n + 1
    if not complex_.complete and n + 1 > complex_.max_degree:
        raise InsufficientTruncationError(
            f"H_{n} needs basis through degree {n + 1}, "
            f"truncation stops at {complex_.max_degree}"
        )


class FieldHomology:
    """Homology of one degree of a complex over a field.

    Stores representative cycles plus enough linear algebra to express
    any cycle in terms of them. Refuses truncations that cannot certify
    the requested degree.
    """

    def __init__(self, complex_: ChainComplex, n: int):
        ring = complex_.ring
        if not getattr(ring, "is_field", False):
            raise ValueError("field coefficients required")
        _certify_degree(complex_, n)
        self.complex = complex_
        self.degree = int(n)
        self.ring = ring
        basis = complex_.basis_in(n)
        self._basis = basis
        self._index = {key: t for t, key in enumerate(basis)}

        mat = complex_.diff_matrix(n)
        rows = len(basis)
        boundary_cols = []
        for key in complex_.basis_in(n + 1):
            vec = [ring.zero] * rows
            for out_key, c in complex_.diff(key).items():
                vec[self._index[out_key]] = c
            boundary_cols.append(vec)

        def stack(cols):
            return [[col[r] for col in cols] for r in range(rows)]

        picked = []
        b_rank = 0
        for vec in boundary_cols:
            if field_rank(stack(picked + [vec]), ring) > len(picked):
                picked.append(vec)
        b_rank = len(picked)
        self._boundary_cols = picked

        reps = []
        if rows:
            cycle_cols = _cycle_columns(mat, rows, ring)
            current = list(picked)
            for vec in cycle_cols:
                if field_rank(stack(current + [vec]), ring) > len(current):
                    current.append(vec)
                    reps.append(vec)
        self._rep_cols = reps
        self._solve_matrix = [
            [col[r] for col in self._boundary_cols + self._rep_cols]
            for r in range(rows)
        ]
        self.dim = len(reps)
        self.boundary_rank = b_rank

    def _vector(self, chain: FreeElement):
        vec = [self.ring.zero] * len(self._basis)
        for key, c in chain.items():
            t = self._index.get(key)
            if t is None:
                raise ValueError(f"chain not supported in degree {self.degree}: {key!r}")
            vec[t] = c
        return vec

    def _element(self, vec) -> FreeElement:
        terms = {}
        for key, c in zip(self._basis, vec):
            if not self.ring.is_zero(c):
                terms[key] = c
        return FreeElement(self.ring, terms)

    def classes(self):
        return [
            HomologyClass(self.complex, self.degree, self._element(vec))
            for vec in self._rep_cols
        ]

    def coordinates(self, chain: FreeElement):
        """Coordinates of a cycle in the representative basis."""
        vec = self._vector(chain)
        if not self.complex.diff_element(chain).is_zero():
            raise ValueError("not a cycle")
        if not self._basis:
            return []
        sol = solve_field(self._solve_matrix, vec, self.ring)
        if sol is None:
            raise ValueError("cycle outside the computed cycle space")
        return sol[len(self._boundary_cols):]

    def class_from_pairings(self, values) -> HomologyClass:
        """The class whose dual-basis pairings are the given values."""
        values = list(values)
        if len(values) != self.dim:
            raise ValueError("pairing vector has the wrong length")
        rep = FreeElement.zero(self.ring)
        for vec, v in zip(self._rep_cols, values):
            if not self.ring.is_zero(v):
                rep = rep + self._element(vec).scale(v)
        return HomologyClass(
            self.complex, self.degree, rep, is_zero_class=rep.is_zero()
        )

    def dual_cocycles(self):
        """Functionals on C_n dual to the representatives, zero on boundaries.

        Returned as coefficient dicts key -> ring element; evaluating a
        chain is a dot product against these.
        """
        ring = self.ring
        rows = len(self._basis)
        span = self._boundary_cols + self._rep_cols
        full = list(span)
        for t in range(rows):
            unit = [ring.zero] * rows
            unit[t] = ring.one
            mat = [[col[r] for col in full + [unit]] for r in range(rows)]
            if field_rank(mat, ring) > len(full):
                full.append(unit)
        # rows of the inverse of [boundaries | reps | complement]
        mat = [[col[r] for col in full] for r in range(rows)]
        out = []
        nb = len(self._boundary_cols)
        for t in range(self.dim):
            # alpha_t is the row of the inverse matrix picking rep t
            sol = _solve_transposed(mat, nb + t, ring)
            out.append(
                {key: sol[r] for r, key in enumerate(self._basis) if not ring.is_zero(sol[r])}
            )
        return out


def _cycle_columns(mat, ncols, ring):
    if not mat:
        cols = []
        for t in range(ncols):
            vec = [ring.zero] * ncols
            vec[t] = ring.one
            cols.append(vec)
        return cols
    from .smith import nullspace

    return nullspace(mat, ring)


def _solve_transposed(mat, unit_index, ring):
    """Row `unit_index` of the inverse of the square matrix `mat`."""
    n = len(mat)
    rhs = [ring.zero] * n
    rhs[unit_index] = ring.one
    transposed = [[mat[c][r] for c in range(n)] for r in range(n)]
    sol = solve_field(transposed, rhs, ring)
    if sol is None:
        raise ValueError("matrix not invertible")
    return sol


def evaluate_cochain(alpha: dict, chain: FreeElement, ring: Ring):
    total = ring.zero
    for key, c in chain.items():
        a = alpha.get(key)
        if a is not None:
            total = ring.add(total, ring.mul(a, c))
    return total


# --- Steenrod operations ---

def steenrod_sq(coalg: UmCoalgebra, s: int, mu: HomologyClass) -> HomologyClass:
    """Right action of the s-th square on a mod-2 homology class.

    The image in degree k - s pairs with a cocycle alpha as
    (alpha ox alpha)(psi(e_{k-2s})(rep)); 2s = k recovers the cup
    square, and negative indices vanish for degree reasons.
    """
    ring = coalg.ring
    if ring.characteristic != 2:
        raise ValueError("steenrod squares need characteristic 2")
    if mu.complex is not coalg.complex:
        raise ValueError("class does not live on this coalgebra")
    k = mu.degree
    out_degree = k - s
    if out_degree < 0:
        raise ValueError("output degree is negative")
    target = FieldHomology(coalg.complex, out_degree)
    index = k - 2 * s
    if index < 0:
        return target.class_from_pairings([ring.zero] * target.dim)
    value = psi_action(coalg, 2, index, mu.representative)
    pairings = []
    for alpha in target.dual_cocycles():
        total = ring.zero
        for (a, b), c in value.items():
            total = ring.add(
                total,
                ring.mul(
                    ring.mul(
                        evaluate_cochain(alpha, FreeElement.single(ring, a, ring.one), ring),
                        evaluate_cochain(alpha, FreeElement.single(ring, b, ring.one), ring),
                    ),
                    c,
                ),
            )
        pairings.append(total)
    return target.class_from_pairings(pairings)


def nu_coefficient(q: int, p: int):
    """nu(q) = (-1)^(q(q-1)m/2) (m!)^q in F_p, with m = (p-1)/2."""
    if p % 2 == 0:
        raise ValueError("nu is an odd-prime coefficient")
    ring = GF(p)
    m = (p - 1) // 2
    sign = -1 if (q * (q - 1) * m // 2) % 2 else 1
    base = ring.from_int(math.factorial(m))
    power = ring.one
    # m! is invertible mod p, so negative q reduces mod p - 1 as well
    for _ in range(q % (p - 1)):
        power = ring.mul(power, base)
    return ring.mul(ring.from_int(sign), power)


def steenrod_odd(
    coalg: UmCoalgebra, eps: int, s: int, mu: HomologyClass
) -> HomologyClass:
    """Odd-prime operations: the class pairing alpha to
    alpha^{ox p}((-1)^p nu(q) psi(e_{(2s-q)(p-1)-eps})(rep)).
    """
    ring = coalg.ring
    p = ring.characteristic
    if p < 3:
        raise ValueError("odd-prime operation needs odd characteristic")
    if eps not in (0, 1):
        raise ValueError("eps must be 0 or 1")
    if mu.complex is not coalg.complex:
        raise ValueError("class does not live on this coalgebra")
    k = mu.degree
    q = -k - 2 * s * (p - 1) + eps
    index = (2 * s - q) * (p - 1) - eps
    total_degree = k + index
    if total_degree % p:
        raise ValueError("pairing degree is not divisible by p")
    out_degree = total_degree // p
    if index < 0:
        zero = FreeElement.zero(ring)
        return HomologyClass(
            coalg.complex, max(out_degree, 0), zero, is_zero_class=True
        )
    if out_degree < 0:
        raise ValueError("output degree is negative")
    target = FieldHomology(coalg.complex, out_degree)
    coeff = ring.mul(ring.from_int((-1) ** p), nu_coefficient(q, p))
    value = psi_action(coalg, p, index, mu.representative).scale(coeff)
    pairings = []
    for alpha in target.dual_cocycles():
        total = ring.zero
        for key, c in value.items():
            prod = c
            for component in key:
                prod = ring.mul(
                    prod,
                    evaluate_cochain(
                        alpha, FreeElement.single(ring, component, ring.one), ring
                    ),
                )
            total = ring.add(total, prod)
        pairings.append(total)
    return target.class_from_pairings(pairings)
