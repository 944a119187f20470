"""Cartan data for the simple Lie algebras A-G.

Coordinates: everything on the Cartan subalgebra h uses the coroot basis
(simple coroots = standard basis vectors), so the coroot lattice is Z^rank.
Functionals on h (roots, weights) are stored by their values on the simple
coroots, i.e. in fundamental-weight coordinates, making the weight lattice
Z^rank on the dual side.  Simple roots follow Bourbaki numbering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .latmath import (
    DimensionMismatch,
    FiniteAbelianGroup,
    IntLattice,
    RatMatrix,
    Vector,
    smith_quotient,
    vec,
    vec_add,
    vec_scale,
    vec_zero,
)


class RootSystemError(Exception):
    pass


class InvalidRank(RootSystemError):
    pass


class OrderExceedsBound(RootSystemError):
    def __init__(self, order: int):
        super().__init__(f"Weyl group order {order} exceeds the enumeration bound")
        self.order = order


_RANK_RANGE = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_RANGE:
            raise InvalidRank(f"unknown family {self.family!r}")
        lo, hi = _RANK_RANGE[self.family]
        if self.rank < lo or (hi is not None and self.rank > hi):
            raise InvalidRank(f"rank {self.rank} out of range for family {self.family}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, s: str) -> "SimpleType":
        s = s.strip()
        if len(s) < 2 or not s[1:].isdigit():
            raise InvalidRank(f"cannot parse simple type {s!r}")
        return cls(s[0].upper(), int(s[1:]))


def cartan_matrix(t: SimpleType) -> list[list[int]]:
    n = t.rank
    c = [[2 * int(i == j) for j in range(n)] for i in range(n)]

    def link(i, j, a=-1, b=-1):
        c[i][j] = a
        c[j][i] = b

    if t.family in ("A", "B", "C"):
        for i in range(n - 1):
            link(i, i + 1)
        if t.family == "B" and n >= 2:
            link(n - 2, n - 1, -2, -1)
        if t.family == "C" and n >= 2:
            link(n - 2, n - 1, -1, -2)
    elif t.family == "D":
        for i in range(n - 3):
            link(i, i + 1)
        link(n - 3, n - 2)
        link(n - 3, n - 1)
    elif t.family == "E":
        # Bourbaki: chain 1-3-4-5-6(-7-8), node 2 hangs off node 4
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for a, b in zip(chain, chain[1:]):
            link(a, b)
        link(1, 3)
    elif t.family == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    elif t.family == "G":
        link(0, 1, -1, -3)
    return c


def _symmetrizer(c: list[list[int]]) -> list[Fraction]:
    """d_i with d_i*c[i][j] symmetric and max(d_i) = 1 (long roots)."""
    n = len(c)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    pending = [0]
    while pending:
        i = pending.pop()
        for j in range(n):
            if i != j and c[i][j] != 0 and d[j] is None:
                d[j] = d[i] * Fraction(c[j][i], c[i][j])
                pending.append(j)
    top = max(d)  # type: ignore[type-var]
    return [x / top for x in d]  # type: ignore[union-attr]


def _positive_roots(c: list[list[int]]) -> list[tuple[int, ...]]:
    """All positive roots as coefficient vectors on the simple roots."""
    n = len(c)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)

    def pairing(r, j):
        return sum(r[i] * c[i][j] for i in range(n))

    while frontier:
        nxt = []
        for r in frontier:
            for j in range(n):
                # root string through alpha_j: r + alpha_j is a root iff p - <r,aj^> > 0
                p = 0
                back = list(r)
                while True:
                    back[j] -= 1
                    tb = tuple(back)
                    if tb in roots:
                        p += 1
                    else:
                        break
                if p - pairing(r, j) > 0:
                    up = list(r)
                    up[j] += 1
                    tu = tuple(up)
                    if tu not in roots:
                        roots.add(tu)
                        nxt.append(tu)
        frontier = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


@dataclass(frozen=True)
class RootSystemData:
    type: SimpleType
    cartan: tuple[tuple[int, ...], ...]
    root_lengths: tuple[Fraction, ...]          # d_i = |alpha_i|^2 / 2
    positive_roots: tuple[tuple[int, ...], ...]  # simple-root coefficients
    highest_root: tuple[int, ...]                # marks c_i
    comarks: tuple[int, ...]                     # c_i * d_i
    dual_coxeter: int
    gram_coroot: RatMatrix                       # basic form on h, coroot basis
    gram_weight: RatMatrix                       # basic form on h*, weight basis
    fundamental_coweights: tuple[Vector, ...]    # columns of C^{-1}
    rho: Vector                                  # (1,...,1) in weight coords

    @property
    def rank(self) -> int:
        return self.type.rank

    def simple_root_weight_coords(self, i: int) -> Vector:
        """alpha_i in fundamental-weight coordinates (row i of the Cartan matrix)."""
        return vec(self.cartan[i])

    def root_to_weight_coords(self, coeffs) -> Vector:
        n = self.rank
        return tuple(
            Fraction(sum(coeffs[i] * self.cartan[i][j] for i in range(n))) for j in range(n)
        )

    def coroot_of_root(self, coeffs) -> Vector:
        """Coroot of a root (given by simple-root coefficients), in coroot coords."""
        # alpha^vee = 2 alpha / |alpha|^2; with alpha = sum c_i alpha_i this is
        # sum c_i d_i alpha_i^vee / d_alpha where d_alpha = |alpha|^2/2
        n = self.rank
        w = self.root_to_weight_coords(coeffs)
        raw = tuple(Fraction(coeffs[i]) * self.root_lengths[i] for i in range(n))
        norm2 = sum((w[i] * raw[i] for i in range(n)), Fraction(0))
        return vec_scale(Fraction(2) / norm2, raw)

    def highest_root_coroot(self) -> Vector:
        return vec(self.comarks)

    def weight_pairing(self, x: Vector, y: Vector) -> Fraction:
        """Basic inner product of two functionals in weight coordinates."""
        if len(x) != self.rank or len(y) != self.rank:
            raise DimensionMismatch("weight vector length mismatch")
        gy = self.gram_weight.apply(vec(y))
        return sum((Fraction(a) * b for a, b in zip(vec(x), gy)), Fraction(0))

    def coroot_basis(self) -> IntLattice:
        return IntLattice.from_basis(
            [tuple(Fraction(i == j) for j in range(self.rank)) for i in range(self.rank)],
            form=self.gram_coroot,
        )

    def coweight_basis(self) -> IntLattice:
        return IntLattice.from_basis(self.fundamental_coweights, form=self.gram_coroot)

    def in_closed_alcove(self, x: Vector) -> bool:
        """Membership of x in A = {alpha_i(x) >= 0, alpha_max(x) <= 1}, coroot coords."""
        n = self.rank
        x = vec(x)
        for i in range(n):
            if sum((Fraction(self.cartan[i][j]) * x[j] for j in range(n)), Fraction(0)) < 0:
                return False
        hr = self.root_to_weight_coords(self.highest_root)
        # alpha_max(x) with alpha_max in weight coords paired against coroot coords
        val = sum((hr[j] * x[j] for j in range(n)), Fraction(0))
        return val <= 1


def basic_pairing(rs: RootSystemData, x, y) -> Fraction:
    """Basic inner product of two Cartan vectors in coroot coordinates."""
    x, y = vec(x), vec(y)
    if len(x) != rs.rank or len(y) != rs.rank:
        raise DimensionMismatch("vector length differs from rank")
    gy = rs.gram_coroot.apply(y)
    return sum((a * b for a, b in zip(x, gy)), Fraction(0))


@lru_cache(maxsize=None)
def build(t: SimpleType) -> RootSystemData:
    n = t.rank
    c = cartan_matrix(t)
    d = _symmetrizer(c)
    pos = _positive_roots(c)
    highest = pos[-1]
    assert sum(highest) == max(sum(r) for r in pos)
    comarks = [highest[i] * d[i] for i in range(n)]
    assert all(x.denominator == 1 for x in comarks)
    comarks_i = [int(x) for x in comarks]
    dual_cox = 1 + sum(comarks_i)
    gram_coroot = RatMatrix([[Fraction(c[i][j]) / d[i] for j in range(n)] for i in range(n)])
    ct = RatMatrix(c).transpose()
    gram_weight = RatMatrix.diagonal(d) @ ct.inverse()
    cinv = RatMatrix(c).inverse()
    coweights = tuple(cinv.column(i) for i in range(n))
    return RootSystemData(
        type=t,
        cartan=tuple(tuple(r) for r in c),
        root_lengths=tuple(d),
        positive_roots=tuple(pos),
        highest_root=tuple(highest),
        comarks=tuple(comarks_i),
        dual_coxeter=dual_cox,
        gram_coroot=gram_coroot,
        gram_weight=gram_weight,
        fundamental_coweights=coweights,
        rho=tuple(Fraction(1) for _ in range(n)),
    )


def weyl_order(t: SimpleType) -> int:
    n = t.rank
    if t.family == "A":
        return math.factorial(n + 1)
    if t.family in ("B", "C"):
        return 2**n * math.factorial(n)
    if t.family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    if t.family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[n]
    if t.family == "F":
        return 1152
    return 12


@dataclass(frozen=True)
class WeylGroup:
    elements: tuple[tuple[tuple[int, ...], ...], ...]
    order: int
    generators: tuple[tuple[tuple[int, ...], ...], ...]


def simple_reflection_matrix(rs: RootSystemData, i: int) -> tuple[tuple[int, ...], ...]:
    """Matrix of s_i on h in coroot coordinates (acts on column vectors)."""
    n = rs.rank
    m = [[int(r == s) for s in range(n)] for r in range(n)]
    for s in range(n):
        m[i][s] -= rs.cartan[i][s]
    return tuple(tuple(r) for r in m)


def weyl_enumerate(rs: RootSystemData, bound: int = 10**6) -> WeylGroup:
    order = weyl_order(rs.type)
    if order > bound:
        raise OrderExceedsBound(order)
    gens = tuple(simple_reflection_matrix(rs, i) for i in range(rs.rank))
    n = rs.rank

    def mul(a, b):
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
        )

    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                p = mul(g, w)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    assert len(seen) == order
    return WeylGroup(elements=tuple(sorted(seen)), order=order, generators=gens)


def center_group(rs: RootSystemData) -> FiniteAbelianGroup:
    """Coweight/coroot quotient with generator lifts chosen as sharp corners."""
    q = smith_quotient(rs.coweight_basis(), rs.coroot_basis())
    if q.is_trivial():
        return q
    corners = alcove_coweights(rs)
    by_class = {q.class_of(w): w for w in corners}
    lifts = tuple(by_class[q.class_of(lift)] for lift in q.generator_lifts)
    return FiniteAbelianGroup(
        invariant_factors=q.invariant_factors,
        generator_lifts=lifts,
        _over_basis=q._over_basis,
        _u_matrix=q._u_matrix,
        _all_factors=q._all_factors,
    )


def alcove_coweights(rs: RootSystemData) -> list[Vector]:
    """Points of the coweight lattice lying in the closed alcove.

    These are the origin plus the fundamental coweights at the mark-1 nodes
    of the highest root; membership is still verified through the alcove
    inequalities rather than assumed.
    """
    out = [vec_zero(rs.rank)]
    for i in range(rs.rank):
        if rs.highest_root[i] == 1:
            w = rs.fundamental_coweights[i]
            assert rs.in_closed_alcove(w)
            out.append(w)
    return out
