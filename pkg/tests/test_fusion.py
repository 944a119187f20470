import math
from fractions import Fraction

import pytest

from wzwclass.fusion import (
    AlcoveTooLarge,
    RankTooLarge,
    fusion_group_invariants,
    fusion_product,
    fusion_table,
    invertible_modules,
    weight_multiplicities,
)
from wzwclass.rootsys import SimpleType, build, center_group
from wzwclass.spectrum import corner_alcove_point, sharp_corners


def weyl_dimension(rs, lam):
    """Independent dimension oracle: the Weyl dimension formula."""
    num = den = Fraction(1)
    rho = tuple(map(Fraction, rs.rho))
    lam_rho = tuple(Fraction(x) + 1 for x in lam)
    for alpha in rs.positive_roots:
        a = rs.root_to_weight_coords(alpha)
        num *= rs.weight_pairing(lam_rho, a)
        den *= rs.weight_pairing(rho, a)
    return num / den


@pytest.mark.parametrize(
    "name,lam",
    [
        ("A1", (3,)),
        ("A2", (1, 0)),
        ("A2", (1, 1)),
        ("A2", (2, 1)),
        ("B2", (1, 0)),
        ("B2", (0, 1)),
        ("B2", (1, 1)),
        ("C3", (1, 0, 0)),
        ("G2", (1, 0)),
        ("G2", (0, 1)),
    ],
)
def test_freudenthal_matches_weyl_dimension(name, lam):
    rs = build(SimpleType.parse(name))
    ws = weight_multiplicities(rs, lam)
    assert ws.dimension() == weyl_dimension(rs, lam)


def test_adjoint_zero_weight_multiplicity_is_rank():
    rs = build(SimpleType("A", 2))
    assert weight_multiplicities(rs, (1, 1)).multiplicity((0, 0)) == 2
    rs = build(SimpleType("G", 2))
    assert weight_multiplicities(rs, (0, 1)).multiplicity((0, 0)) == 2


def test_weight_table_weyl_symmetric():
    rs = build(SimpleType("B", 2))
    ws = weight_multiplicities(rs, (1, 1))
    for mu, m in ws.table.items():
        for j in range(rs.rank):
            refl = tuple(mu[s] - mu[j] * rs.cartan[j][s] for s in range(rs.rank))
            assert ws.multiplicity(refl) == m


def test_ising_fusion_rules():
    t = fusion_table(SimpleType("A", 1), 2)
    sigma, psi, vac = (1,), (2,), (0,)
    assert fusion_product(t, sigma, sigma) == {vac: 1, psi: 1}
    assert fusion_product(t, psi, psi) == {vac: 1}
    assert fusion_product(t, sigma, psi) == {sigma: 1}


def test_su2_level_one_group_law():
    t = fusion_table(SimpleType("A", 1), 1)
    assert fusion_product(t, (1,), (1,)) == {(0,): 1}


def test_su3_level_one_is_z3():
    t = fusion_table(SimpleType("A", 2), 1)
    assert fusion_group_invariants(t) == (3,)
    assert fusion_product(t, (1, 0), (1, 0)) == {(0, 1): 1}


def test_fusion_commutative_and_vacuum_unit():
    t = fusion_table(SimpleType("B", 2), 2)
    labels = t.labels()
    vac = (0, 0)
    for lam in labels:
        assert fusion_product(t, vac, lam) == {lam: 1}
        for mu in labels:
            assert fusion_product(t, lam, mu) == fusion_product(t, mu, lam)


@pytest.mark.parametrize(
    "name,kmax", [("A1", 6), ("A2", 4), ("B2", 3), ("G2", 2)]
)
def test_invertibles_are_sharp_corners(name, kmax):
    t = SimpleType.parse(name)
    for k in range(1, kmax + 1):
        table = fusion_table(t, k)
        inv = sorted(p.dominant_coords for p in invertible_modules(table))
        corners = sorted(corner_alcove_point(c, k).dominant_coords for c in sharp_corners(t))
        assert inv == corners
        assert fusion_group_invariants(table) == center_group(build(t)).invariant_factors


def test_guards():
    with pytest.raises(RankTooLarge):
        fusion_table(SimpleType("D", 4), 1)
    with pytest.raises(AlcoveTooLarge):
        fusion_table(SimpleType("A", 2), 100)
