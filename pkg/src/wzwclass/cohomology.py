"""Degree-4 classifying-space cohomology of compact connected Lie groups.

A group is presented as (simple factors, torus rank m, discrete central
subgroup pi of the cover).  Its H^4 is realized as the group of invariant
symmetric bilinear forms that are even on the integral lattice of the
presentation; the positive cone is cut out by positive definiteness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .latmath import (
    DimensionMismatch,
    IntLattice,
    RatMatrix,
    Vector,
    hermite_normal_form,
    solve_integrality,
    vec,
    vec_zero,
)
from .rootsys import SimpleType, alcove_coweights, basic_pairing, build, center_group


class CohomologyError(Exception):
    pass


class InvalidCentralElement(CohomologyError):
    pass


class NotALevel(CohomologyError):
    pass


class NotACompatibleCover(CohomologyError):
    pass


CentralTuple = tuple[tuple[int, ...], ...]  # one center-class tuple per simple factor


@dataclass(frozen=True)
class GroupDescriptor:
    """Compact connected Lie group: cover factors, torus rank, central pi.

    The lattice part of pi is normalized to Z^m; each finite generator is a
    pair (central tuple, z-vector mod Z^m).
    """

    factors: tuple[SimpleType, ...]
    torus_rank: int
    pi_finite_gens: tuple[tuple[CentralTuple, Vector], ...] = ()
    pi_lattice_basis: tuple[Vector, ...] = field(default=())

    def __post_init__(self):
        if self.torus_rank < 0:
            raise ValueError("torus rank must be non-negative")
        basis = self.pi_lattice_basis
        if not basis and self.torus_rank:
            basis = tuple(
                tuple(Fraction(i == j) for j in range(self.torus_rank)) for i in range(self.torus_rank)
            )
        object.__setattr__(self, "pi_lattice_basis", basis)
        gens = []
        for central, v in self.pi_finite_gens:
            if len(central) != len(self.factors):
                raise InvalidCentralElement("central tuple length differs from factor count")
            for t, cls in zip(self.factors, central):
                cg = center_group(build(t))
                if len(cls) != len(cg.invariant_factors):
                    raise InvalidCentralElement(f"bad center class arity for {t}")
                if any(not (0 <= c < d) for c, d in zip(cls, cg.invariant_factors)):
                    raise InvalidCentralElement(f"center class out of range for {t}")
            v = vec(v)
            if len(v) != self.torus_rank:
                raise DimensionMismatch("z-vector length differs from torus rank")
            gens.append((tuple(tuple(c) for c in central), v))
        object.__setattr__(self, "pi_finite_gens", tuple(gens))

    @property
    def semisimple_rank(self) -> int:
        return sum(t.rank for t in self.factors)

    @property
    def ambient_dim(self) -> int:
        return self.semisimple_rank + self.torus_rank


@dataclass(frozen=True)
class LevelForm:
    """Per-factor multiples of the basic form plus a Gram matrix on the center."""

    k_per_factor: tuple[Fraction, ...]
    center_gram: RatMatrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "k_per_factor", tuple(Fraction(k) for k in self.k_per_factor))
        if self.center_gram is not None and not self.center_gram.is_symmetric():
            raise ValueError("center Gram matrix must be symmetric")

    @property
    def torus_rank(self) -> int:
        return self.center_gram.rows if self.center_gram is not None else 0


def corner_lift_of_class(t: SimpleType, cls: tuple[int, ...]) -> Vector:
    """The unique sharp-corner coweight representing a center class."""
    rs = build(t)
    cg = center_group(rs)
    if len(cls) != len(cg.invariant_factors):
        raise InvalidCentralElement(f"bad center class arity for {t}")
    for w in alcove_coweights(rs):
        w_cls = cg.class_of(w) if not cg.is_trivial() else ()
        if w_cls == tuple(cls):
            return w
    raise InvalidCentralElement(f"class {cls} not realized by a sharp corner of {t}")


def _embed(G: GroupDescriptor, per_factor: list[Vector], z_part: Vector) -> Vector:
    out: list[Fraction] = []
    for v in per_factor:
        out.extend(v)
    out.extend(z_part)
    return tuple(out)


def integral_lattice(G: GroupDescriptor) -> IntLattice:
    """The lattice of X with exp(2 pi i X) trivial, in the coroot-basis chart."""
    gens: list[Vector] = []
    offset_zero = [vec_zero(t.rank) for t in G.factors]
    for fi, t in enumerate(G.factors):
        for j in range(t.rank):
            per = list(offset_zero)
            per[fi] = tuple(Fraction(j == s) for s in range(t.rank))
            gens.append(_embed(G, per, vec_zero(G.torus_rank)))
    for b in G.pi_lattice_basis:
        gens.append(_embed(G, offset_zero, vec(b)))
    for central, v in G.pi_finite_gens:
        per = [corner_lift_of_class(t, cls) for t, cls in zip(G.factors, central)]
        gens.append(_embed(G, per, v))
    # reduce the generating set to a basis via HNF on cleared denominators
    q = 1
    for g in gens:
        for x in g:
            q = q * x.denominator // math.gcd(q, x.denominator)
    rows = [[int(x * q) for x in g] for g in gens]
    h, _u = hermite_normal_form(rows)
    basis = [tuple(Fraction(x, q) for x in row) for row in h if any(row)]
    return IntLattice.from_basis(basis)


def _form_parameters(G: GroupDescriptor) -> list[tuple]:
    """Ordered unknowns: one k per factor, then upper-triangle center entries."""
    params: list[tuple] = [("k", i) for i in range(len(G.factors))]
    m = G.torus_rank
    params += [("B", i, j) for i in range(m) for j in range(i, m)]
    return params


def _split(G: GroupDescriptor, x: Vector) -> tuple[list[Vector], Vector]:
    parts = []
    pos = 0
    for t in G.factors:
        parts.append(x[pos : pos + t.rank])
        pos += t.rank
    return parts, x[pos:]


def _bilinear_coeffs(G: GroupDescriptor, x: Vector, y: Vector) -> Vector:
    """<x,y> as a linear form in the unknown parameters of the level form."""
    xs, xz = _split(G, x)
    ys, yz = _split(G, y)
    coeffs: list[Fraction] = []
    for fi, t in enumerate(G.factors):
        coeffs.append(basic_pairing(build(t), xs[fi], ys[fi]))
    m = G.torus_rank
    for i in range(m):
        for j in range(i, m):
            if i == j:
                coeffs.append(xz[i] * yz[i])
            else:
                coeffs.append(xz[i] * yz[j] + xz[j] * yz[i])
    return tuple(coeffs)


def _evenness_constraints(G: GroupDescriptor) -> list[Vector]:
    lat = integral_lattice(G)
    rows = []
    for a, va in enumerate(lat.basis):
        rows.append(tuple(c / 2 for c in _bilinear_coeffs(G, va, va)))
        for vb in lat.basis[a + 1 :]:
            rows.append(_bilinear_coeffs(G, va, vb))
    return rows


def _form_from_parameters(G: GroupDescriptor, u: Vector) -> LevelForm:
    n = len(G.factors)
    ks = u[:n]
    m = G.torus_rank
    if m == 0:
        return LevelForm(ks, None)
    entries = [[Fraction(0)] * m for _ in range(m)]
    pos = n
    for i in range(m):
        for j in range(i, m):
            entries[i][j] = entries[j][i] = u[pos]
            pos += 1
    return LevelForm(ks, RatMatrix(entries))


def _parameters_of_form(G: GroupDescriptor, f: LevelForm) -> Vector:
    if len(f.k_per_factor) != len(G.factors) or f.torus_rank != G.torus_rank:
        raise DimensionMismatch("level form shape differs from descriptor")
    u = list(f.k_per_factor)
    m = G.torus_rank
    for i in range(m):
        for j in range(i, m):
            u.append(f.center_gram[i, j])
    return tuple(u)


def h4_basis(G: GroupDescriptor) -> list[LevelForm]:
    """Basis of H^4(BG,Z) as level forms, sorted canonically."""
    d = len(G.factors) + G.torus_rank * (G.torus_rank + 1) // 2
    lattice = solve_integrality(_evenness_constraints(G), d)
    forms = [_form_from_parameters(G, b) for b in lattice.basis]
    forms.sort(key=lambda f: _parameters_of_form(G, f))
    return forms


def is_level(G: GroupDescriptor, f: LevelForm) -> bool:
    """Whether the form is even on the integral lattice of G."""
    u = _parameters_of_form(G, f)
    for row in _evenness_constraints(G):
        val = sum((c * x for c, x in zip(row, u)), Fraction(0))
        if val.denominator != 1:
            return False
    return True


def is_positive(G: GroupDescriptor, f: LevelForm) -> bool:
    """Positivity of a level: positive factor multiples, definite center Gram."""
    if not is_level(G, f):
        raise NotALevel("form is not a level for this group")
    if any(k <= 0 for k in f.k_per_factor):
        return False
    if f.center_gram is not None and not f.center_gram.is_positive_definite():
        return False
    return True


def restrict_level(cover: GroupDescriptor, base: GroupDescriptor, f: LevelForm) -> LevelForm:
    """Pull a level of `base` back along the covering map onto `cover`.

    The form itself is unchanged; only the integrality constraint coarsens.
    """
    if cover.factors != base.factors or cover.torus_rank != base.torus_rank:
        raise NotACompatibleCover("factor/torus data differ")
    cover_lat = integral_lattice(cover)
    base_lat = integral_lattice(base)
    if not all(base_lat.contains(v) for v in cover_lat.basis):
        raise NotACompatibleCover("cover's integral lattice is not contained in the base's")
    if not is_level(base, f):
        raise NotALevel("form is not a level on the base group")
    assert is_level(cover, f)
    return f


# -- canonical JSON ---------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac_parse(s: str) -> Fraction:
    return Fraction(s)


def group_to_json(G: GroupDescriptor) -> str:
    doc = {
        "factors": [str(t) for t in G.factors],
        "torus_rank": G.torus_rank,
        "pi_lattice_basis": [[_frac_str(x) for x in b] for b in G.pi_lattice_basis],
        "pi_finite_gens": [
            {"central": [list(cls) for cls in central], "z": [_frac_str(x) for x in v]}
            for central, v in G.pi_finite_gens
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def group_from_json(s: str) -> GroupDescriptor:
    doc = json.loads(s)
    return GroupDescriptor(
        factors=tuple(SimpleType.parse(t) for t in doc["factors"]),
        torus_rank=int(doc["torus_rank"]),
        pi_finite_gens=tuple(
            (
                tuple(tuple(int(c) for c in cls) for cls in g["central"]),
                tuple(_frac_parse(x) for x in g["z"]),
            )
            for g in doc["pi_finite_gens"]
        ),
        pi_lattice_basis=tuple(
            tuple(_frac_parse(x) for x in b) for b in doc["pi_lattice_basis"]
        ),
    )


def level_to_json(f: LevelForm) -> str:
    doc = {
        "k_per_factor": [_frac_str(k) for k in f.k_per_factor],
        "center_gram": None
        if f.center_gram is None
        else [[_frac_str(x) for x in row] for row in f.center_gram.entries],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def level_from_json(s: str) -> LevelForm:
    doc = json.loads(s)
    gram = doc["center_gram"]
    return LevelForm(
        k_per_factor=tuple(_frac_parse(k) for k in doc["k_per_factor"]),
        center_gram=None if gram is None else RatMatrix([[_frac_parse(x) for x in row] for row in gram]),
    )
