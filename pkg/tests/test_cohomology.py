from fractions import Fraction

import pytest

from wzwclass.cohomology import (
    GroupDescriptor,
    InvalidCentralElement,
    LevelForm,
    NotACompatibleCover,
    NotALevel,
    group_from_json,
    group_to_json,
    h4_basis,
    integral_lattice,
    is_level,
    is_positive,
    level_from_json,
    level_to_json,
    restrict_level,
)
from wzwclass.latmath import RatMatrix
from wzwclass.rootsys import SimpleType

SU2 = GroupDescriptor(factors=(SimpleType("A", 1),), torus_rank=0)
SO3 = GroupDescriptor(factors=(SimpleType("A", 1),), torus_rank=0, pi_finite_gens=((((1,),), ()),))
U1 = GroupDescriptor(factors=(), torus_rank=1)
T2 = GroupDescriptor(factors=(), torus_rank=2)


def test_h4_su2_is_generated_by_basic():
    basis = h4_basis(SU2)
    assert len(basis) == 1
    assert basis[0].k_per_factor == (Fraction(1),)


def test_h4_so3_has_index_four():
    basis = h4_basis(SO3)
    assert len(basis) == 1
    assert basis[0].k_per_factor == (Fraction(4),)


def test_h4_u1_generator_gram():
    basis = h4_basis(U1)
    assert len(basis) == 1
    assert basis[0].center_gram.entries == ((Fraction(2),),)


def test_h4_t2_rank_three():
    basis = h4_basis(T2)
    assert len(basis) == 3
    # diagonal generators are even, the off-diagonal generator is unimodular
    dets = sorted(abs(f.center_gram.det()) for f in basis)
    assert all(is_level(T2, f) for f in basis)


def test_is_level_and_positive():
    assert is_level(SU2, LevelForm((Fraction(3),)))
    assert not is_level(SO3, LevelForm((Fraction(3),)))
    assert is_level(SO3, LevelForm((Fraction(8),)))
    assert is_positive(SU2, LevelForm((Fraction(2),)))
    assert not is_positive(SU2, LevelForm((Fraction(-2),)))
    with pytest.raises(NotALevel):
        is_positive(SU2, LevelForm((Fraction(1, 2),)))


def test_positive_requires_definite_center_gram():
    f = LevelForm((), RatMatrix([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(-2)]]))
    assert is_level(T2, f)
    assert not is_positive(T2, f)


def test_integral_lattice_of_so3_contains_corner_lift():
    lat = integral_lattice(SO3)
    assert lat.contains((Fraction(1, 2),))
    assert not integral_lattice(SU2).contains((Fraction(1, 2),))


def test_restrict_level():
    f = LevelForm((Fraction(4),))
    assert restrict_level(SU2, SO3, f) == f
    with pytest.raises(NotALevel):
        restrict_level(SU2, SO3, LevelForm((Fraction(2),)))
    with pytest.raises(NotACompatibleCover):
        restrict_level(SO3, GroupDescriptor(factors=(SimpleType("A", 2),), torus_rank=0), f)


def test_invalid_central_element_rejected():
    with pytest.raises(InvalidCentralElement):
        GroupDescriptor(factors=(SimpleType("A", 1),), torus_rank=0, pi_finite_gens=((((2,),), ()),))
    with pytest.raises(InvalidCentralElement):
        GroupDescriptor(factors=(SimpleType("G", 2),), torus_rank=0, pi_finite_gens=((((1,),), ()),))


@pytest.mark.parametrize("G", [SU2, SO3, U1, T2], ids=["SU2", "SO3", "U1", "T2"])
def test_group_json_round_trip(G):
    s = group_to_json(G)
    assert group_to_json(group_from_json(s)) == s


def test_level_json_round_trip():
    f = LevelForm((Fraction(3), Fraction(1, 2)), RatMatrix([[Fraction(5, 3)]]))
    s = level_to_json(f)
    assert level_to_json(level_from_json(s)) == s
    assert '"5/3"' in s  # rationals as p/q strings, never floats


def test_h4_mixed_group_with_torus():
    G = GroupDescriptor(factors=(SimpleType("A", 1),), torus_rank=1)
    basis = h4_basis(G)
    assert len(basis) == 2
    ks = sorted(f.k_per_factor[0] for f in basis)
    assert ks == [Fraction(0), Fraction(1)]
