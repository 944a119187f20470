from fractions import Fraction

import pytest

from wzwclass.latmath import RatMatrix
from wzwclass.rootsys import SimpleType, build, center_group
from wzwclass.spectrum import (
    AlcovePoint,
    corner_alcove_point,
    corner_energy,
    enumerate_alcove,
    heisenberg_energy,
    min_energy,
    sharp_corners,
    spin_of_energy,
    verify_isometry_lemma,
)

ALL_TYPES = [
    SimpleType(fam, r)
    for fam, lo, hi in [("A", 1, 8), ("B", 2, 8), ("C", 2, 8), ("D", 3, 8), ("E", 6, 8), ("F", 4, 4), ("G", 2, 2)]
    for r in range(lo, hi + 1)
]


@pytest.mark.parametrize(
    "name,k,count", [("A2", 4, 15), ("B2", 3, 10), ("G2", 5, 12), ("A1", 1, 2), ("A1", 4, 5)]
)
def test_alcove_counts(name, k, count):
    assert len(enumerate_alcove(SimpleType.parse(name), k)) == count


def test_alcove_sorted_and_deduplicated():
    pts = enumerate_alcove(SimpleType("A", 2), 3)
    coords = [p.dominant_coords for p in pts]
    assert coords == sorted(coords)
    assert len(set(coords)) == len(coords)


def test_alcove_point_validation():
    with pytest.raises(ValueError):
        AlcovePoint(SimpleType("A", 1), 2, (3,))
    with pytest.raises(ValueError):
        AlcovePoint(SimpleType("A", 1), 2, (-1,))


@pytest.mark.parametrize("t", ALL_TYPES, ids=str)
def test_corner_count_equals_center_order(t):
    corners = sharp_corners(t)
    cg = center_group(build(t))
    order = 1
    for d in cg.invariant_factors:
        order *= d
    assert len(corners) == order
    assert sum(1 for c in corners if c.is_origin()) == 1
    # corners represent distinct center classes
    assert len({c.center_class for c in corners}) == len(corners)


def test_min_energy_known_values():
    # su(2) level 2 spin-1/2: h = 3/16; level 4 adjoint: h = 1/3
    assert min_energy(AlcovePoint(SimpleType("A", 1), 2, (1,))) == Fraction(3, 16)
    assert min_energy(AlcovePoint(SimpleType("A", 1), 4, (2,))) == Fraction(1, 3)
    # su(3) level 1 fundamental: h = 1/3
    assert min_energy(AlcovePoint(SimpleType("A", 2), 1, (1, 0))) == Fraction(1, 3)
    # vacuum always has h = 0
    assert min_energy(AlcovePoint(SimpleType("G", 2), 3, (0, 0))) == 0


@pytest.mark.parametrize("t", ALL_TYPES, ids=str)
def test_corner_energy_matches_min_energy(t):
    for k in range(1, 6):
        for c in sharp_corners(t):
            p = corner_alcove_point(c, k)
            assert min_energy(p) == corner_energy(c, k)


@pytest.mark.parametrize("t", ALL_TYPES, ids=str)
def test_isometry_lemma(t):
    assert verify_isometry_lemma(t)


def test_heisenberg_energy():
    b = RatMatrix([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(4)]])
    assert heisenberg_energy(b, (Fraction(1), Fraction(1, 2))) == Fraction(3, 2)
    assert heisenberg_energy(b, (Fraction(0), Fraction(0))) == 0


def test_spin_of_energy():
    s = spin_of_energy(Fraction(7, 4))
    assert s.h_mod_1 == Fraction(3, 4)
    assert s.h_exact == Fraction(7, 4)
    assert not s.is_integral()
    assert spin_of_energy(Fraction(3)).is_integral()
