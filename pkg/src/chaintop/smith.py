"""Integer Smith normal form and exact homology of truncated complexes.

The Smith form is computed by integer elimination, always pivoting on an
entry of minimal absolute value (keeps intermediate growth down and makes
the run deterministic); the divisibility chain is restored afterwards by
gcd/lcm passes. Field-coefficient ranks use exact Gaussian elimination
with Fraction or modular scalars.
"""

from __future__ import annotations

from math import gcd

from .complexes import ChainComplex, InsufficientTruncationError
from .rings import QQ, ZZ, Ring


def smith_normal_form(mat) -> list:
    """Positive invariant factors d_1 | d_2 | ... of an integer matrix.

    >>> smith_normal_form([[2, 4], [6, 10]])
    [2, 2]
    >>> smith_normal_form([[1, 0], [0, 0]])
    [1]
    """
    m = [[int(x) for x in row] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    t = 0
    while t < rows and t < cols:
        # locate a minimal |entry| pivot in the trailing submatrix
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = m[i][j]
                if v and (pivot is None or abs(v) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        # clear row and column by remainder steps; a nonzero remainder
        # becomes the new, strictly smaller pivot next pass
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, cols):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for i in range(t, rows):
                            m[i][t], m[i][j] = m[i][j], m[i][t]
                        dirty = True
            if not dirty:
                break
        diag.append(abs(m[t][t]))
        t += 1
    # restore the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i]:
                    g = gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
                    changed = True
    return diag


def field_row_reduce(mat, ring: Ring):
    """Row-reduce over a field; returns (reduced rows, pivot column list)."""
    if not ring.is_field:
        raise ValueError(f"row reduction needs a field, got {ring}")
    rows = [list(map(ring.coerce, row)) for row in mat]
    cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        hit = None
        for i in range(r, len(rows)):
            if not ring.is_zero(rows[i][c]):
                hit = i
                break
        if hit is None:
            continue
        rows[r], rows[hit] = rows[hit], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not ring.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def field_rank(mat, ring: Ring) -> int:
    if not mat or not mat[0]:
        return 0
    return len(field_row_reduce(mat, ring)[1])


def nullspace(mat, ring: Ring):
    """Basis of the right nullspace over a field, as coefficient vectors."""
    cols = len(mat[0]) if mat else 0
    reduced, pivots = field_row_reduce(mat, ring) if mat else ([], [])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [ring.zero] * cols
        vec[f] = ring.one
        for r, p in enumerate(pivots):
            vec[p] = ring.neg(reduced[r][f])
        basis.append(vec)
    return basis


def solve_field(mat, rhs, ring: Ring):
    """One solution of mat * x = rhs over a field, or None."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [list(mat[i]) + [rhs[i]] for i in range(rows)]
    reduced, pivots = field_row_reduce(aug, ring)
    if cols in pivots:
        return None
    x = [ring.zero] * cols
    for r, p in enumerate(pivots):
        x[p] = reduced[r][cols]
    return x


def integer_matrix(mat):
    out = []
    for row in mat:
        new = []
        for x in row:
            xi = int(x)
            if xi != x:
                raise ValueError(f"non-integer entry {x!r} in integer matrix")
            new.append(xi)
        out.append(new)
    return out


class HomologySummary:
    """free_rank copies of the ring plus one cyclic factor per invariant factor."""

    __slots__ = ("degree", "ring", "free_rank", "invariant_factors")

    def __init__(self, degree: int, ring: Ring, free_rank: int, invariant_factors):
        self.degree = degree
        self.ring = ring
        self.free_rank = free_rank
        self.invariant_factors = tuple(invariant_factors)

    @property
    def pair(self):
        return self.free_rank, list(self.invariant_factors)

    def __eq__(self, other):
        if isinstance(other, tuple):
            return self.pair == (other[0], list(other[1]))
        return (
            isinstance(other, HomologySummary)
            and self.pair == other.pair
            and self.degree == other.degree
            and self.ring == other.ring
        )

    def __repr__(self):
        bits = []
        if self.free_rank:
            bits.append(f"{self.ring}^{self.free_rank}")
        bits.extend(f"{self.ring}/{d}" for d in self.invariant_factors)
        return " + ".join(bits) if bits else "0"

    def to_json(self):
        return {
            "degree": self.degree,
            "ring": self.ring.to_json(),
            "free_rank": self.free_rank,
            "invariant_factors": list(self.invariant_factors),
        }


def _boundary_matrices(complex_: ChainComplex, n: int):
    """The matrices of d_n and d_{n+1}, guarding against truncation."""
    if n < complex_.min_degree:
        # complexes store their honest bottom degree, so below it H = 0
        return None, None
    if n > complex_.max_degree:
        if complex_.complete:
            return None, None
        raise InsufficientTruncationError(
            f"degree {n} is above the stored truncation "
            f"(max degree {complex_.max_degree})"
        )
    if n + 1 > complex_.max_degree and not complex_.complete:
        raise InsufficientTruncationError(
            f"homology in degree {n} needs the boundary from degree {n + 1}, "
            f"but the complex is truncated at degree {complex_.max_degree}"
        )
    d_n = complex_.diff_matrix(n)
    d_np1 = complex_.diff_matrix(n + 1)
    return d_n, d_np1


def smith_homology(complex_: ChainComplex, n: int, ring: Ring | None = None) -> HomologySummary:
    """Homology of the complex in degree n with coefficients in ring.

    Over Z the answer is (free rank, invariant factors > 1); over a field
    the factor list is empty. The complex must either be complete or
    store degree n + 1, else InsufficientTruncationError is raised.
    """
    ring = ring or complex_.ring
    if complex_.ring != ring and complex_.ring != ZZ:
        raise ValueError(
            f"cannot change coefficients from {complex_.ring} to {ring}; "
            "only integral complexes can be reduced"
        )
    d_n, d_np1 = _boundary_matrices(complex_, n)
    if d_n is None:
        return HomologySummary(n, ring, 0, ())
    dim = complex_.rank(n)
    if ring == ZZ:
        a = integer_matrix(d_n)
        b = integer_matrix(d_np1)
        rank_dn = field_rank(a, QQ)
        factors = smith_normal_form(b) if b and b[0] else []
        rank_dnp1 = len(factors)
        free_rank = dim - rank_dn - rank_dnp1
        torsion = tuple(f for f in factors if f > 1)
        return HomologySummary(n, ring, free_rank, torsion)
    rank_dn = field_rank(d_n, ring)
    rank_dnp1 = field_rank(d_np1, ring)
    return HomologySummary(n, ring, dim - rank_dn - rank_dnp1, ())


def homology_all(complex_: ChainComplex, degrees, ring: Ring | None = None):
    return {n: smith_homology(complex_, n, ring) for n in degrees}
