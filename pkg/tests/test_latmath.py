from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wzwclass.latmath import (
    DimensionMismatch,
    FiniteAbelianGroup,
    IntLattice,
    NotASublattice,
    RatMatrix,
    hermite_normal_form,
    smith_normal_form,
    smith_quotient,
    solve_integrality,
)

int_matrices = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(-9, 9), min_size=m, max_size=m), min_size=n, max_size=n
        )
    )
)


def _is_unimodular(u):
    return abs(RatMatrix([[Fraction(x) for x in row] for row in u]).det()) == 1


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_hnf_properties(m):
    h, u = hermite_normal_form(m)
    assert _is_unimodular(u)
    # H = U M
    um = RatMatrix([[Fraction(x) for x in row] for row in u]) @ RatMatrix(
        [[Fraction(x) for x in row] for row in m]
    )
    assert [[int(x) for x in row] for row in um.entries] == [list(r) for r in h]
    # row echelon with positive pivots and reduced entries above them
    pivots = []
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            pivots.append(nz[0])
            assert row[nz[0]] > 0
    assert pivots == sorted(pivots)


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_snf_properties(m):
    s, u, v = smith_normal_form(m)
    assert _is_unimodular(u) and _is_unimodular(v)
    prod = (
        RatMatrix([[Fraction(x) for x in row] for row in u])
        @ RatMatrix([[Fraction(x) for x in row] for row in m])
        @ RatMatrix([[Fraction(x) for x in row] for row in v])
    )
    assert [[int(x) for x in row] for row in prod.entries] == [list(r) for r in s]
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    for i in range(len(s)):
        for j in range(len(s[0])):
            if i != j:
                assert s[i][j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


def test_rat_matrix_basics():
    m = RatMatrix([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]])
    assert m.det() == 3
    assert m.rank() == 2
    assert (m @ m.inverse()).entries == RatMatrix.identity(2).entries
    assert m.is_positive_definite()
    assert not RatMatrix([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(1)]]).is_positive_definite()


def test_rat_matrix_solve_and_errors():
    m = RatMatrix([[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]])
    x = m.solve((Fraction(5), Fraction(2)))
    assert x == (Fraction(1), Fraction(2))
    with pytest.raises(DimensionMismatch):
        m.apply((Fraction(1),))


def test_lattice_membership_and_coords():
    lat = IntLattice.from_basis([(Fraction(2), Fraction(0)), (Fraction(1), Fraction(3))])
    assert lat.contains((Fraction(3), Fraction(3)))
    assert not lat.contains((Fraction(1), Fraction(0)))
    assert lat.coords_of((Fraction(3), Fraction(3))) == (Fraction(1), Fraction(1))


def test_smith_quotient_cyclic():
    over = IntLattice.from_basis([(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
    sub = IntLattice.from_basis([(Fraction(2), Fraction(0)), (Fraction(0), Fraction(3))])
    q = smith_quotient(over, sub)
    assert q.invariant_factors == (6,)
    assert len(q.elements()) == 6


def test_smith_quotient_requires_sublattice():
    over = IntLattice.from_basis([(Fraction(2), Fraction(0)), (Fraction(0), Fraction(2))])
    sub = IntLattice.from_basis([(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
    with pytest.raises(NotASublattice):
        smith_quotient(over, sub)


def test_finite_group_class_arithmetic():
    over = IntLattice.from_basis([(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
    sub = IntLattice.from_basis([(Fraction(2), Fraction(0)), (Fraction(0), Fraction(2))])
    q = smith_quotient(over, sub)
    assert sorted(q.invariant_factors) == [2, 2]
    a, b = q.generator_lifts
    assert q.class_of(a) != q.class_of(b)
    assert q.class_of(tuple(x + y for x, y in zip(a, b))) == tuple(
        (c1 + c2) % d for c1, c2, d in zip(q.class_of(a), q.class_of(b), q.invariant_factors)
    )


def test_solve_integrality_basic():
    # u with 2u in Z and 3u in Z has lattice Z... gcd scale
    lat = solve_integrality([(Fraction(1, 2),)], 1)
    assert lat.contains((Fraction(2),))
    assert not lat.contains((Fraction(1),))


def test_solve_integrality_rank_deficient_closes_at_integer_scale():
    # a single constraint in two unknowns: the free direction stays integral
    lat = solve_integrality([(Fraction(1, 2), Fraction(0))], 2)
    assert lat.contains((Fraction(0), Fraction(1)))
    assert lat.contains((Fraction(2), Fraction(0)))
    assert not lat.contains((Fraction(1), Fraction(0)))


@settings(max_examples=60, deadline=None)
@given(int_matrices)
def test_quotient_order_equals_index(m):
    basis = [tuple(Fraction(x) for x in row) for row in m]
    sq = RatMatrix([[Fraction(x) for x in row] for row in m])
    if sq.rows != sq.cols or sq.det() == 0:
        return
    over = IntLattice.from_basis(
        [tuple(Fraction(i == j) for j in range(sq.cols)) for i in range(sq.rows)]
    )
    sub = IntLattice.from_basis(basis)
    q = smith_quotient(over, sub)
    order = 1
    for d in q.invariant_factors:
        order *= d
    assert order == abs(sq.det())
