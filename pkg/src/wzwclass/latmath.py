"""Exact integer/rational linear algebra: normal forms, lattices, quotients.

Everything in this module is computed over arbitrary-precision rationals
(`fractions.Fraction`); no floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class LatticeError(Exception):
    pass


class NotASublattice(LatticeError):
    pass


class RankMismatch(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


Vector = tuple[Fraction, ...]


def vec(entries: Iterable) -> Vector:
    return tuple(Fraction(e) for e in entries)


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c, a: Vector) -> Vector:
    c = Fraction(c)
    return tuple(c * x for x in a)


def vec_zero(n: int) -> Vector:
    return (Fraction(0),) * n


class RatMatrix:
    """Immutable matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(Fraction(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)

    def __setattr__(self, *args):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[Fraction(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, diag: Sequence) -> "RatMatrix":
        n = len(diag)
        return cls([[Fraction(diag[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Vector]) -> "RatMatrix":
        n = len(columns[0])
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"RatMatrix({[list(map(str, r)) for r in self.entries]})"

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return RatMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def scale(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix([[c * a for a in r] for r in self.entries])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        return RatMatrix(
            [
                [sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                 for j in range(other.cols)]
                for i in range(self.rows)
            ]
        )

    def apply(self, v: Vector) -> Vector:
        if self.cols != len(v):
            raise DimensionMismatch("matrix-vector shape mismatch")
        return tuple(sum((r[k] * v[k] for k in range(self.cols)), Fraction(0)) for r in self.entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def _echelon(self):
        """Row-reduce a working copy; returns (echelon rows, rank, det factor)."""
        m = [list(r) for r in self.entries]
        rank = 0
        det = Fraction(1)
        for col in range(self.cols):
            piv = next((r for r in range(rank, self.rows) if m[r][col] != 0), None)
            if piv is None:
                det = Fraction(0) if self.rows == self.cols else det
                continue
            if piv != rank:
                m[rank], m[piv] = m[piv], m[rank]
                det = -det
            det *= m[rank][col]
            inv = 1 / m[rank][col]
            m[rank] = [x * inv for x in m[rank]]
            for r in range(self.rows):
                if r != rank and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
            rank += 1
        return m, rank, det

    def rank(self) -> int:
        return self._echelon()[1]

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant needs a square matrix")
        _, rank, det = self._echelon()
        return det if rank == self.rows else Fraction(0)

    def inverse(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("inverse needs a square matrix")
        n = self.rows
        aug = [list(self.entries[i]) + [Fraction(i == j) for j in range(n)] for i in range(n)]
        work = RatMatrix(aug)
        red, rank, _ = work._echelon()
        if rank < n:
            raise ValueError("matrix is singular")
        return RatMatrix([row[n:] for row in red])

    def solve(self, v: Vector) -> Vector:
        """Solve self @ x = v for square invertible self."""
        return self.inverse().apply(v)

    def leading_principal_minors(self) -> list[Fraction]:
        if self.rows != self.cols:
            raise DimensionMismatch("principal minors need a square matrix")
        return [RatMatrix([r[: k + 1] for r in self.entries[: k + 1]]).det() for k in range(self.rows)]

    def is_positive_definite(self) -> bool:
        return self.is_symmetric() and all(m > 0 for m in self.leading_principal_minors())


def gram_matrix(basis: Sequence[Vector], form: RatMatrix) -> RatMatrix:
    fb = [form.apply(b) for b in basis]
    return RatMatrix(
        [[sum((basis[i][k] * fb[j][k] for k in range(len(basis[i]))), Fraction(0)) for j in range(len(basis))]
         for i in range(len(basis))]
    )


@dataclass(frozen=True)
class IntLattice:
    """Full-column-rank lattice in Q^ambient_dim with an explicit basis.

    `gram` records pairwise inner products of the basis vectors under the
    form the lattice was built with.
    """

    ambient_dim: int
    basis: tuple[Vector, ...]
    gram: RatMatrix

    @classmethod
    def from_basis(cls, basis: Sequence[Vector], form: RatMatrix | None = None) -> "IntLattice":
        basis = tuple(vec(b) for b in basis)
        dim = len(basis[0])
        if any(len(b) != dim for b in basis):
            raise DimensionMismatch("basis vectors have differing lengths")
        if form is None:
            form = RatMatrix.identity(dim)
        if RatMatrix.from_columns(basis).rank() != len(basis):
            raise ValueError("basis vectors are linearly dependent")
        return cls(dim, basis, gram_matrix(basis, form))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords_of(self, x: Vector) -> Vector:
        """Rational coordinates of x in this basis (raises if x is off-span)."""
        cols = RatMatrix.from_columns(self.basis)
        if self.rank == self.ambient_dim:
            return cols.solve(vec(x))
        # least-squares-free exact solve via normal equations on independent rows
        g = cols.transpose() @ cols
        rhs = cols.transpose().apply(vec(x))
        coords = g.solve(rhs)
        recon = tuple(
            sum((self.basis[j][i] * coords[j] for j in range(self.rank)), Fraction(0))
            for i in range(self.ambient_dim)
        )
        if recon != vec(x):
            raise ValueError("vector is not in the lattice span")
        return coords

    def contains(self, x: Vector) -> bool:
        try:
            coords = self.coords_of(x)
        except ValueError:
            return False
        return all(c.denominator == 1 for c in coords)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant-factor presentation of a finite abelian group with lifts.

    Internal SNF data is kept so that cosets of ambient vectors can be
    computed after the fact (`class_of`).
    """

    invariant_factors: tuple[int, ...]
    generator_lifts: tuple[Vector, ...]
    _over_basis: tuple[Vector, ...] = field(default=(), repr=False)
    _u_matrix: tuple[tuple[int, ...], ...] = field(default=(), repr=False)
    _all_factors: tuple[int, ...] = field(default=(), repr=False)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def class_of(self, x: Vector) -> tuple[int, ...]:
        """Coset of an overlattice vector, as coordinates on the SNF generators."""
        over = IntLattice.from_basis(self._over_basis)
        a = over.coords_of(vec(x))
        if any(c.denominator != 1 for c in a):
            raise ValueError("vector is not in the overlattice")
        full = [
            int(sum(self._u_matrix[i][j] * a[j] for j in range(len(a)))) % self._all_factors[i]
            for i in range(len(self._all_factors))
        ]
        return tuple(full[i] for i in range(len(full)) if self._all_factors[i] != 1)

    def elements(self) -> list[tuple[int, ...]]:
        out = [()]
        for d in self.invariant_factors:
            out = [e + (i,) for e in out for i in range(d)]
        return [tuple(e) for e in out]


def _int_matrix(m) -> list[list[int]]:
    out = []
    for row in m:
        r = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError("integer matrix expected")
            r.append(int(f))
        out.append(r)
    return out


def hermite_normal_form(m) -> tuple[list[list[int]], list[list[int]]]:
    """Row HNF with transform: returns (H, U) with U @ m == H, det(U) = ±1.

    H is in row echelon form with positive pivots and entries above each
    pivot reduced into [0, pivot).
    """
    h = _int_matrix(m)
    nrows = len(h)
    ncols = len(h[0]) if nrows else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    pivot_row = 0
    for col in range(ncols):
        # clear column below pivot_row with gcd steps
        while True:
            nz = [r for r in range(pivot_row, nrows) if h[r][col] != 0]
            if not nz:
                break
            r0 = min(nz, key=lambda r: abs(h[r][col]))
            if r0 != pivot_row:
                h[pivot_row], h[r0] = h[r0], h[pivot_row]
                u[pivot_row], u[r0] = u[r0], u[pivot_row]
            done = True
            for r in range(pivot_row + 1, nrows):
                if h[r][col] != 0:
                    q = h[r][col] // h[pivot_row][col]
                    h[r] = [a - q * b for a, b in zip(h[r], h[pivot_row])]
                    u[r] = [a - q * b for a, b in zip(u[r], u[pivot_row])]
                    if h[r][col] != 0:
                        done = False
            if done:
                break
        if pivot_row < nrows and h[pivot_row][col] != 0:
            if h[pivot_row][col] < 0:
                h[pivot_row] = [-a for a in h[pivot_row]]
                u[pivot_row] = [-a for a in u[pivot_row]]
            p = h[pivot_row][col]
            for r in range(pivot_row):
                q = h[r][col] // p
                if q:
                    h[r] = [a - q * b for a, b in zip(h[r], h[pivot_row])]
                    u[r] = [a - q * b for a, b in zip(u[r], u[pivot_row])]
            pivot_row += 1
            if pivot_row == nrows:
                break
    return h, u


def smith_normal_form(m) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Returns (S, U, V) with S == U @ m @ V diagonal, d1 | d2 | ..., di >= 0."""
    s = _int_matrix(m)
    nrows = len(s)
    ncols = len(s[0]) if nrows else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        s[dst] = [a + q * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in s:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def eliminate(t):
        """Diagonalize position t of the remaining block; True if a pivot exists."""
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if s[i][j] != 0 and (piv is None or abs(s[i][j]) < abs(s[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            return False
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            for i in range(t + 1, nrows):
                if s[i][t] != 0:
                    add_row(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t] != 0:
                        swap_rows(t, i)
            for j in range(t + 1, ncols):
                if s[t][j] != 0:
                    add_col(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j] != 0:
                        swap_cols(t, j)
            if all(s[i][t] == 0 for i in range(t + 1, nrows)) and all(
                s[t][j] == 0 for j in range(t + 1, ncols)
            ):
                break
        if s[t][t] < 0:
            s[t] = [-a for a in s[t]]
            u[t] = [-a for a in u[t]]
        return True

    t = 0
    while t < min(nrows, ncols):
        if not eliminate(t):
            break
        t += 1
    # enforce the divisibility chain; mixing adjacent diagonal entries and
    # re-eliminating converges because gcds strictly divide
    fixed = False
    while not fixed:
        fixed = True
        for i in range(t - 1):
            a, b = s[i][i], s[i + 1][i + 1]
            if a and b and b % a != 0:
                add_col(i, i + 1, 1)
                j = i
                while j < t:
                    eliminate(j)
                    j += 1
                fixed = False
                break
    return s, u, v


def _unimodular_inverse(u: list[list[int]]) -> list[list[int]]:
    inv = RatMatrix(u).inverse()
    return _int_matrix(inv.entries)


def smith_quotient(overlattice: IntLattice, sublattice: IntLattice) -> FiniteAbelianGroup:
    """Invariant-factor decomposition of overlattice/sublattice with lifts."""
    if overlattice.rank != sublattice.rank:
        raise RankMismatch(f"ranks differ: {overlattice.rank} vs {sublattice.rank}")
    coords = []
    for b in sublattice.basis:
        c = overlattice.coords_of(b)
        if any(x.denominator != 1 for x in c):
            raise NotASublattice("sublattice basis is not integral over the overlattice")
        coords.append([int(x) for x in c])
    # columns of m are the sub-basis in over-basis coordinates
    m = [[coords[j][i] for j in range(len(coords))] for i in range(overlattice.rank)]
    s, u, _v = smith_normal_form(m)
    diag = [s[i][i] for i in range(overlattice.rank)]
    if any(d == 0 for d in diag):
        raise RankMismatch("sublattice does not have full rank in the overlattice")
    uinv = _unimodular_inverse(u)
    lifts = []
    kept = []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        kept.append(d)
        lift = vec_zero(overlattice.ambient_dim)
        for j in range(overlattice.rank):
            lift = vec_add(lift, vec_scale(uinv[j][i], overlattice.basis[j]))
        lifts.append(lift)
    return FiniteAbelianGroup(
        invariant_factors=tuple(kept),
        generator_lifts=tuple(lifts),
        _over_basis=overlattice.basis,
        _u_matrix=tuple(tuple(r) for r in u),
        _all_factors=tuple(diag),
    )


def solve_integrality(constraints: Sequence[Sequence], d: int) -> IntLattice:
    """Lattice of u in Q^d with c . u integral for every constraint row c.

    When the constraints do not pin down all d directions, the free
    directions are closed off at the canonical integer scale.
    """
    rows = [vec(c) for c in constraints]
    if any(len(r) != d for r in rows):
        raise DimensionMismatch("constraint length differs from unknown count")
    q = 1
    for r in rows:
        for x in r:
            q = q * x.denominator // math.gcd(q, x.denominator)
    m = [[int(x * q) for x in r] for r in rows]
    if not m or RatMatrix(m).rank() < d:
        m = m + [[q * int(i == j) for j in range(d)] for i in range(d)]
    s, _u, v = smith_normal_form(m)
    basis = []
    for i in range(d):
        si = s[i][i]
        scale = Fraction(q, si)
        basis.append(tuple(Fraction(v[r][i]) * scale for r in range(d)))
    return IntLattice.from_basis(basis)
