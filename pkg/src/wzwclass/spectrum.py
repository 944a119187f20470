"""Level-k alcove enumeration, sharp corners, minimal energies, spins."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .latmath import DimensionMismatch, RatMatrix, Vector, vec
from .rootsys import RootSystemData, SimpleType, alcove_coweights, basic_pairing, build, center_group


@dataclass(frozen=True)
class AlcovePoint:
    factor: SimpleType
    level: int
    dominant_coords: tuple[int, ...]

    def __post_init__(self):
        rs = build(self.factor)
        if len(self.dominant_coords) != rs.rank:
            raise DimensionMismatch("dominant coordinate length differs from rank")
        if any(x < 0 for x in self.dominant_coords):
            raise ValueError("dominant coordinates must be non-negative")
        mark = sum(c * a for c, a in zip(self.dominant_coords, rs.comarks))
        if mark > self.level:
            raise ValueError("weight violates the level constraint")


@dataclass(frozen=True)
class SharpCorner:
    factor: SimpleType
    coweight: Vector
    center_class: tuple[int, ...]

    def is_origin(self) -> bool:
        return not any(self.coweight)


@dataclass(frozen=True)
class SpinValue:
    """Minimal energy mod 1; the exact value when it is known."""

    h_mod_1: Fraction
    h_exact: Fraction | None = None

    def __post_init__(self):
        if not (0 <= self.h_mod_1 < 1):
            raise ValueError("h mod 1 must lie in [0,1)")
        if self.h_exact is not None and self.h_exact - self.h_mod_1 != int(self.h_exact - self.h_mod_1):
            raise ValueError("h_exact inconsistent with h_mod_1")

    def is_integral(self) -> bool:
        return self.h_mod_1 == 0


def enumerate_alcove(factor: SimpleType, k: int) -> list[AlcovePoint]:
    """Dominant integral weights of level at most k, in lexicographic order."""
    if k < 1:
        raise ValueError("level must be positive")
    rs = build(factor)
    comarks = rs.comarks
    points: list[tuple[int, ...]] = []

    def rec(prefix, budget):
        i = len(prefix)
        if i == rs.rank:
            points.append(tuple(prefix))
            return
        for c in range(budget // comarks[i] + 1):
            rec(prefix + [c], budget - c * comarks[i])

    rec([], k)
    return [AlcovePoint(factor, k, p) for p in sorted(points)]


def sharp_corners(factor: SimpleType, k: int = 1) -> list[SharpCorner]:
    """Coweight-lattice points of the closed alcove, with their center classes.

    The list does not depend on k; the argument is accepted to mirror the
    level-alcove picture (each corner kw is a point of the level-k alcove).
    """
    if k < 1:
        raise ValueError("level must be positive")
    rs = build(factor)
    cg = center_group(rs)
    out = []
    for w in alcove_coweights(rs):
        cls = cg.class_of(w) if not cg.is_trivial() else ()
        out.append(SharpCorner(factor, w, cls))
    out.sort(key=lambda c: c.center_class)
    return out


def corner_alcove_point(corner: SharpCorner, k: int) -> AlcovePoint:
    """The alcove point k*omega under the level map h -> h*."""
    rs = build(corner.factor)
    w = rs.gram_coroot.apply(vec(corner.coweight))
    coords = tuple(Fraction(k) * x for x in w)
    if any(x.denominator != 1 for x in coords):
        raise ValueError("corner does not map to an integral weight at this level")
    return AlcovePoint(corner.factor, k, tuple(int(x) for x in coords))


def min_energy(p: AlcovePoint) -> Fraction:
    """Minimal energy (||lam+rho||^2 - ||rho||^2) / (2(k+g)), basic form on h*."""
    rs = build(p.factor)
    lam_rho = vec_add_int(p.dominant_coords, rs.rho)
    num = rs.weight_pairing(lam_rho, lam_rho) - rs.weight_pairing(rs.rho, rs.rho)
    return num / (2 * (p.level + rs.dual_coxeter))


def vec_add_int(a, b) -> Vector:
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b, strict=True))


def corner_energy(c: SharpCorner, k: int) -> Fraction:
    """Minimal energy of the invertible module at a sharp corner: k/2 <w,w>."""
    rs = build(c.factor)
    return Fraction(k, 2) * basic_pairing(rs, c.coweight, c.coweight)


def heisenberg_energy(center_gram: RatMatrix, v) -> Fraction:
    """Minimal energy of the free-boson module at v: (1/2) v^T B v."""
    v = vec(v)
    if center_gram.rows != len(v):
        raise DimensionMismatch("vector length differs from Gram size")
    bv = center_gram.apply(v)
    return sum((a * b for a, b in zip(v, bv)), Fraction(0)) / 2


def verify_isometry_lemma(factor: SimpleType) -> bool:
    """||rho - g*omega|| = ||rho|| for every sharp corner omega, exactly."""
    rs = build(factor)
    g = rs.dual_coxeter
    rho2 = rs.weight_pairing(rs.rho, rs.rho)
    for corner in sharp_corners(factor):
        # move omega to h* via the basic form, then compare squared norms
        w_star = rs.gram_coroot.apply(vec(corner.coweight))
        shifted = tuple(r - g * w for r, w in zip(rs.rho, w_star))
        if rs.weight_pairing(shifted, shifted) != rho2:
            return False
    return True


def spin_of_energy(h: Fraction) -> SpinValue:
    return SpinValue(h_mod_1=h - (h.numerator // h.denominator), h_exact=h)
