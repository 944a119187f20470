"""Simple-current extension data: admissibility, rationality, the (G,k) bijection.

A model descriptor packages the degree-one sub-VOA data (simple factors
with levels, a positive definite Gram matrix on the abelian part) together
with the extension group pi, presented by generators inside the product of
the per-factor invertible-module groups and the abelian part.

The invertible modules of a simple factor at level k are the sharp corners
of its alcove, with one exception: an E8 factor at level 2 carries one
extra invertible module that is not a corner.  That module enters only
through its spin (conformal spin -1, i.e. energy 1/2 mod 1) and is kept as
a hardcoded marker.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import (
    GroupDescriptor,
    LevelForm,
    NotALevel,
    corner_lift_of_class,
    is_positive,
)
from .latmath import (
    DimensionMismatch,
    RatMatrix,
    Vector,
    hermite_normal_form,
    smith_normal_form,
    vec,
    vec_add,
    vec_zero,
)
from .rootsys import SimpleType, build, center_group
from .spectrum import SharpCorner, SpinValue, corner_energy, heisenberg_energy, sharp_corners

E8 = SimpleType("E", 8)
EXCEPTIONAL_SPIN_HALF = Fraction(1, 2)  # M_{E8,2} has conformal spin -1


class ExtensionError(Exception):
    pass


class IncompatibleLabel(ExtensionError):
    pass


class NotAWZWModel(ExtensionError):
    pass


class NotPositive(ExtensionError):
    pass


class BoundsTooLarge(ExtensionError):
    pass


def invertible_class_orders(factor: SimpleType, level: int) -> tuple[int, ...]:
    """Cyclic orders of the invertible-module group coordinates of one factor."""
    if factor == E8 and level == 2:
        return (2,)
    return center_group(build(factor)).invariant_factors


def _is_exceptional_slot(factor: SimpleType, level: int) -> bool:
    return factor == E8 and level == 2


@dataclass(frozen=True)
class InvertibleModuleLabel:
    """Invertible module of the product VOA: per-factor classes plus a z-vector.

    `per_factor_classes` holds, for each factor, coordinates on the cyclic
    generators of that factor's invertible-module group (the center classes,
    or Z/2 for the exceptional E8-level-2 slot).
    """

    per_factor_classes: tuple[tuple[int, ...], ...]
    z_vector: Vector

    def __post_init__(self):
        object.__setattr__(self, "z_vector", vec(self.z_vector))


@dataclass(frozen=True)
class ModelDescriptor:
    factors: tuple[tuple[SimpleType, int], ...]
    torus_rank: int
    center_gram: RatMatrix | None
    pi_gens: tuple[InvertibleModuleLabel, ...]

    def __post_init__(self):
        for (t, k) in self.factors:
            if k < 1:
                raise ValueError(f"level must be positive, got {k} for {t}")
        if self.torus_rank and (self.center_gram is None or self.center_gram.rows != self.torus_rank):
            raise DimensionMismatch("center Gram size differs from torus rank")
        for g in self.pi_gens:
            self._check_label(g)

    def _check_label(self, label: InvertibleModuleLabel):
        if len(label.per_factor_classes) != len(self.factors):
            raise IncompatibleLabel("label factor count differs from model")
        for (t, k), cls in zip(self.factors, label.per_factor_classes):
            orders = invertible_class_orders(t, k)
            if len(cls) != len(orders) or any(not (0 <= c < d) for c, d in zip(cls, orders)):
                raise IncompatibleLabel(f"bad invertible class {cls} for {t} level {k}")
        if len(label.z_vector) != self.torus_rank:
            raise IncompatibleLabel("label z-vector length differs from torus rank")

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "admissible": admissible(self),
            "rational": is_rational(self),
            "contaminated": is_contaminated(self),
        }


def zero_label(model: ModelDescriptor) -> InvertibleModuleLabel:
    return InvertibleModuleLabel(
        tuple(tuple(0 for _ in invertible_class_orders(t, k)) for t, k in model.factors),
        vec_zero(model.torus_rank),
    )


def add_labels(
    model: ModelDescriptor, a: InvertibleModuleLabel, b: InvertibleModuleLabel
) -> InvertibleModuleLabel:
    classes = tuple(
        tuple((x + y) % d for x, y, d in zip(ca, cb, invertible_class_orders(t, k)))
        for (t, k), ca, cb in zip(model.factors, a.per_factor_classes, b.per_factor_classes)
    )
    return InvertibleModuleLabel(classes, vec_add(a.z_vector, b.z_vector))


def _label_corners(model: ModelDescriptor, label: InvertibleModuleLabel) -> list[SharpCorner | None]:
    """Per-factor sharp corners of a label; None marks the exceptional module."""
    out: list[SharpCorner | None] = []
    for (t, k), cls in zip(model.factors, label.per_factor_classes):
        if _is_exceptional_slot(t, k) and cls != (0,) * len(cls):
            out.append(None)
            continue
        if _is_exceptional_slot(t, k):
            cls = ()
        corner = next(c for c in sharp_corners(t) if c.center_class == cls)
        out.append(corner)
    return out


def label_exceptional_count(model: ModelDescriptor, label: InvertibleModuleLabel) -> int:
    return sum(
        1
        for (t, k), cls in zip(model.factors, label.per_factor_classes)
        if _is_exceptional_slot(t, k) and any(cls)
    )


def label_spin(model: ModelDescriptor, label: InvertibleModuleLabel) -> SpinValue:
    """Minimal energy mod 1 of the invertible module named by the label."""
    model._check_label(label)
    h = Fraction(0)
    for (t, k), corner in zip(model.factors, _label_corners(model, label)):
        if corner is not None:
            h += corner_energy(corner, k)
    if model.torus_rank:
        h += heisenberg_energy(model.center_gram, label.z_vector)
    n_exc = label_exceptional_count(model, label)
    if n_exc:
        frac = (h + n_exc * EXCEPTIONAL_SPIN_HALF) % 1
        return SpinValue(h_mod_1=frac, h_exact=None)
    return SpinValue(h_mod_1=h % 1, h_exact=h)


def _label_cross_pairing(
    model: ModelDescriptor, a: InvertibleModuleLabel, b: InvertibleModuleLabel
) -> Fraction:
    """Polarization <a,b> of the energy quadratic form, mod-1-well-defined.

    The exceptional marker lives on its own tensor factor, so its cross
    terms against everything else vanish.
    """
    from .rootsys import basic_pairing

    total = Fraction(0)
    for (t, k), ca, cb in zip(
        model.factors, _label_corners(model, a), _label_corners(model, b)
    ):
        if ca is None or cb is None:
            continue
        total += k * basic_pairing(build(t), ca.coweight, cb.coweight)
    if model.torus_rank:
        bv = model.center_gram.apply(b.z_vector)
        total += sum((x * y for x, y in zip(a.z_vector, bv)), Fraction(0))
    return total


def admissible(model: ModelDescriptor) -> bool:
    """Integral-spin criterion for the extension, decided on generators."""
    gens = model.pi_gens
    for g in gens:
        if not label_spin(model, g).is_integral():
            return False
    for a, b in itertools.combinations(gens, 2):
        if _label_cross_pairing(model, a, b).denominator != 1:
            return False
    return True


def _finite_part_kernel(model: ModelDescriptor) -> list[tuple[int, ...]]:
    """Integer combinations of pi generators with trivial invertible classes."""
    orders: list[int] = []
    for t, k in model.factors:
        orders.extend(invertible_class_orders(t, k))
    g = len(model.pi_gens)
    if not orders:
        return [tuple(int(i == j) for j in range(g)) for i in range(g)]
    rows = []
    for gen in model.pi_gens:
        flat = [c for cls in gen.per_factor_classes for c in cls]
        rows.append(flat)
    # x in Z^g with sum x_i rows[i] == 0 mod orders: kernel of [rows^T | diag(orders)]
    c = len(orders)
    m = [[rows[j][i] for j in range(g)] + [orders[i] * int(i == s) for s in range(c)] for i in range(c)]
    s, _u, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(len(m), g + c)) if s[i][i] != 0)
    kernel = []
    for col in range(rank, g + c):
        kernel.append(tuple(v[r][col] for r in range(g)))
    return kernel


def pi_z_intersection_basis(model: ModelDescriptor) -> list[Vector]:
    """HNF basis of the lattice pi intersect z_R (trivial finite part)."""
    m = model.torus_rank
    if m == 0:
        return []
    zvecs = []
    for combo in _finite_part_kernel(model):
        v = vec_zero(m)
        for x, gen in zip(combo, model.pi_gens):
            v = vec_add(v, tuple(Fraction(x) * y for y in gen.z_vector))
        if any(v):
            zvecs.append(v)
    if not zvecs:
        return []
    q = 1
    import math

    for v in zvecs:
        for x in v:
            q = q * x.denominator // math.gcd(q, x.denominator)
    h, _u = hermite_normal_form([[int(x * q) for x in v] for v in zvecs])
    return [tuple(Fraction(x, q) for x in row) for row in h if any(row)]


def is_rational(model: ModelDescriptor) -> bool:
    """rk(pi intersect z_R) == dim(z)."""
    return len(pi_z_intersection_basis(model)) == model.torus_rank


def is_contaminated(model: ModelDescriptor) -> bool:
    """Whether pi touches the exceptional E8-level-2 invertible module."""
    return any(label_exceptional_count(model, g) > 0 for g in model.pi_gens)


def _reduce_mod_lattice(v: Vector, basis: list[Vector]) -> Vector:
    """Canonical representative of v modulo the lattice spanned by an HNF basis."""
    v = list(vec(v))
    # basis rows are in HNF (upper triangular up to column order); reduce greedily
    for row in basis:
        piv = next(i for i, x in enumerate(row) if x)
        q = v[piv] / row[piv]
        q_floor = q.numerator // q.denominator
        if q_floor:
            for i in range(len(v)):
                v[i] -= q_floor * row[i]
    # final pass so coordinates under pivots land in [0, pivot)
    for row in basis:
        piv = next(i for i, x in enumerate(row) if x)
        q = v[piv] / row[piv]
        q_floor = q.numerator // q.denominator
        for i in range(len(v)):
            v[i] -= q_floor * row[i]
    return tuple(v)


def pi_finite_elements(
    model: ModelDescriptor, limit: int = 10**5
) -> list[tuple[tuple[tuple[int, ...], ...], Vector]]:
    """All elements of pi modulo its z-lattice part, as (classes, z mod L)."""
    lat = pi_z_intersection_basis(model)
    zero = zero_label(model)
    seen = {(zero.per_factor_classes, _reduce_mod_lattice(zero.z_vector, lat))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for classes, v in frontier:
            cur = InvertibleModuleLabel(classes, v)
            for g in model.pi_gens:
                s = add_labels(model, cur, g)
                key = (s.per_factor_classes, _reduce_mod_lattice(s.z_vector, lat))
                if key not in seen:
                    if len(seen) >= limit:
                        raise BoundsTooLarge("pi/L is larger than the enumeration limit")
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    return sorted(seen)


def from_group(G: GroupDescriptor, f: LevelForm) -> ModelDescriptor:
    """(G,k) -> model descriptor: the forward direction of the classification."""
    try:
        if not is_positive(G, f):
            raise NotPositive("form is not in the positive cone")
    except NotALevel as e:
        raise NotPositive(str(e)) from e
    levels = []
    for k in f.k_per_factor:
        if k.denominator != 1:
            raise NotPositive("factor levels must be integers")
        levels.append(int(k))
    factors = tuple(zip(G.factors, levels))
    gens: list[InvertibleModuleLabel] = []
    for i in range(G.torus_rank):
        gens.append(
            InvertibleModuleLabel(
                tuple(tuple(0 for _ in invertible_class_orders(t, k)) for t, k in factors),
                G.pi_lattice_basis[i],
            )
        )
    for central, v in G.pi_finite_gens:
        classes = []
        for (t, k), cls in zip(factors, central):
            if _is_exceptional_slot(t, k):
                # the center of E8 is trivial; embed as the trivial class
                classes.append((0,))
            else:
                classes.append(tuple(cls))
        gens.append(InvertibleModuleLabel(tuple(classes), v))
    model = ModelDescriptor(
        factors=factors,
        torus_rank=G.torus_rank,
        center_gram=f.center_gram,
        pi_gens=tuple(gens),
    )
    assert admissible(model) and is_rational(model) and not is_contaminated(model)
    return model


def to_group(model: ModelDescriptor) -> tuple[GroupDescriptor, LevelForm]:
    """Inverse direction; defined only on admissible rational clean models."""
    if is_contaminated(model):
        raise NotAWZWModel("extension uses the exceptional E8-level-2 module")
    if not admissible(model):
        raise NotAWZWModel("extension group has non-integral spins")
    if not is_rational(model):
        raise NotAWZWModel("pi meets the abelian part in too small a rank")
    lat = pi_z_intersection_basis(model)
    pi_finite = []
    for classes, v in pi_finite_elements(model):
        if not any(any(cls) for cls in classes):
            continue
        central = []
        for (t, k), cls in zip(model.factors, classes):
            central.append(() if _is_exceptional_slot(t, k) else tuple(cls))
        pi_finite.append((tuple(central), v))
    G = GroupDescriptor(
        factors=tuple(t for t, _ in model.factors),
        torus_rank=model.torus_rank,
        pi_finite_gens=tuple(pi_finite),
        pi_lattice_basis=tuple(lat),
    )
    f = LevelForm(tuple(Fraction(k) for _, k in model.factors), model.center_gram)
    return G, f


# -- canonical form ---------------------------------------------------------

def canonical_form(model: ModelDescriptor):
    """Hashable normal form: sorted factors, full pi element set modulo its lattice."""
    order = sorted(range(len(model.factors)), key=lambda i: (model.factors[i][0], model.factors[i][1]))
    factors = tuple(model.factors[i] for i in order)
    lat = tuple(pi_z_intersection_basis(model))
    elements = []
    for classes, v in pi_finite_elements(model):
        elements.append((tuple(classes[i] for i in order), v))
    gram = None if model.center_gram is None else model.center_gram.entries
    return (factors, model.torus_rank, gram, lat, tuple(sorted(elements)))


def models_equal(a: ModelDescriptor, b: ModelDescriptor) -> bool:
    return canonical_form(a) == canonical_form(b)


# -- bounded enumeration ----------------------------------------------------

_CATALOG_FAMILIES = ["A", "B", "C", "D", "E", "F", "G"]


def _simple_types_up_to_rank(max_rank: int) -> list[SimpleType]:
    out = []
    for fam in _CATALOG_FAMILIES:
        for r in range(1, max_rank + 1):
            try:
                out.append(SimpleType(fam, r))
            except Exception:
                pass
    return out


def _subgroups_of(orders: list[int]) -> list[frozenset[tuple[int, ...]]]:
    """All subgroups of the product of cyclic groups Z/orders[i]."""
    all_elems = [tuple(e) for e in itertools.product(*(range(d) for d in orders))]

    def close(gens):
        zero = (0,) * len(orders)
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    s = tuple((a + b) % d for a, b, d in zip(x, g, orders))
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return frozenset(seen)

    subgroups = {close([])}
    frontier = [close([])]
    while frontier:
        nxt = []
        for h in frontier:
            for e in all_elems:
                if e not in h:
                    h2 = close(list(h) + [e])
                    if h2 not in subgroups:
                        subgroups.add(h2)
                        nxt.append(h2)
        frontier = nxt
    return sorted(subgroups, key=lambda h: (len(h), sorted(h)))


def _group_generators(elems: frozenset[tuple[int, ...]], orders: list[int]) -> list[tuple[int, ...]]:
    """A small generating set for a subgroup given by its element list."""
    zero = (0,) * len(orders)
    gens: list[tuple[int, ...]] = []
    span = {zero}
    for e in sorted(elems):
        if e in span:
            continue
        gens.append(e)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                s = tuple((a + b) % d for a, b, d in zip(x, e, orders))
                if s not in span:
                    span.add(s)
                    nxt.append(s)
            frontier = nxt
        if len(span) == len(elems):
            break
    return gens


def _factor_combos(max_rank: int, max_level: int):
    types = _simple_types_up_to_rank(max_rank)
    combos = [[]]
    for combo_size in range(1, max_rank + 1):
        for multiset in itertools.combinations_with_replacement(types, combo_size):
            if sum(t.rank for t in multiset) > max_rank:
                continue
            for levels in itertools.product(range(1, max_level + 1), repeat=len(multiset)):
                factors = tuple(sorted(zip(multiset, levels)))
                combos.append(list(factors))
    # dedupe sorted factor tuples
    seen = set()
    out = []
    for c in combos:
        key = tuple(c)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def _models_for_cell(factors, torus_rank, max_level, guard):
    """All candidate models for one (factor multiset, torus rank) cell."""
    factors = tuple(factors)
    orders: list[int] = []
    slots: list[int] = []
    for t, k in factors:
        o = invertible_class_orders(t, k)
        slots.append(len(o))
        orders.extend(o)
    prod = 1
    for d in orders:
        prod *= d
    if prod > guard:
        raise BoundsTooLarge(f"product of invertible-group orders {prod} exceeds guard {guard}")

    def unflatten(flat):
        out = []
        pos = 0
        for n in slots:
            out.append(tuple(flat[pos : pos + n]))
            pos += n
        return tuple(out)

    results = []
    if torus_rank == 0:
        for sub in _subgroups_of(orders or [1]):
            gens = _group_generators(sub, orders or [1])
            labels = tuple(
                InvertibleModuleLabel(unflatten(g), ()) for g in gens
            )
            results.append(
                ModelDescriptor(factors=factors, torus_rank=0, center_gram=None, pi_gens=labels)
            )
        return results
    # torus_rank == 1: z-part of finite generators has denominator dividing
    # the exponent of the finite classes; B ranges over even 1x1 Grams
    exponent = 1
    for d in orders:
        exponent = exponent * d // __import__("math").gcd(exponent, d)
    ext_orders = orders + [exponent]
    for b in range(1, max_level + 1):
        gram = RatMatrix([[2 * b]])
        lattice_gen = InvertibleModuleLabel(unflatten([0] * len(orders)), (Fraction(1),))
        for sub in _subgroups_of(ext_orders):
            # normalization: elements with trivial classes must have integral z
            if any(not any(e[:-1]) and e[-1] != 0 for e in sub):
                continue
            gens = _group_generators(sub, ext_orders)
            labels = [lattice_gen]
            for g in gens:
                labels.append(
                    InvertibleModuleLabel(unflatten(list(g[:-1])), (Fraction(g[-1], exponent),))
                )
            results.append(
                ModelDescriptor(
                    factors=factors, torus_rank=1, center_gram=gram, pi_gens=tuple(labels)
                )
            )
    return results


def enumerate_models(
    max_rank: int,
    max_level: int,
    semisimple_only: bool = True,
    guard: int = 10**4,
    threads: int = 1,
) -> tuple[list[ModelDescriptor], list[ModelDescriptor]]:
    """Admissible models within bounds; returns (clean, contaminated_residue).

    Clean models are admissible, rational, and uncontaminated; the residue
    list holds admissible rational models that use the exceptional module.
    Output is duplicate-free modulo canonical form and canonically sorted.
    """
    cells = []
    for factors in _factor_combos(max_rank, max_level):
        ranks = [0] if semisimple_only else [0, 1]
        for m in ranks:
            if not factors and m == 0:
                continue
            cells.append((tuple(factors), m))

    def work(cell):
        factors, m = cell
        out = []
        for model in _models_for_cell(factors, m, max_level, guard):
            if not admissible(model):
                continue
            if not is_rational(model):
                continue
            out.append(model)
        return out

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, cells))
    else:
        chunks = [work(c) for c in cells]

    clean: dict = {}
    residue: dict = {}
    for chunk in chunks:
        for model in chunk:
            key = canonical_form(model)
            target = residue if is_contaminated(model) else clean
            if key not in target:
                target[key] = model
    clean_list = [clean[k] for k in sorted(clean.keys(), key=_canon_sort_key)]
    residue_list = [residue[k] for k in sorted(residue.keys(), key=_canon_sort_key)]
    return clean_list, residue_list


def _canon_sort_key(key):
    factors, m, gram, lat, elements = key
    return (
        tuple((t.family, t.rank, k) for t, k in factors),
        m,
        () if gram is None else gram,
        lat,
        elements,
    )


# -- JSON -------------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def model_to_json(model: ModelDescriptor) -> str:
    doc = {
        "schema": "wzwclass/model/v1",
        "factors": [{"type": str(t), "level": k} for t, k in model.factors],
        "torus_rank": model.torus_rank,
        "center_gram": None
        if model.center_gram is None
        else [[_frac_str(x) for x in row] for row in model.center_gram.entries],
        "pi_gens": [
            {
                "classes": [list(c) for c in g.per_factor_classes],
                "z": [_frac_str(x) for x in g.z_vector],
                "h_mod_1": _frac_str(label_spin(model, g).h_mod_1),
            }
            for g in model.pi_gens
        ],
        "flags": model.flags,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def model_from_json(s: str) -> ModelDescriptor:
    doc = json.loads(s)
    gram = doc["center_gram"]
    return ModelDescriptor(
        factors=tuple((SimpleType.parse(f["type"]), int(f["level"])) for f in doc["factors"]),
        torus_rank=int(doc["torus_rank"]),
        center_gram=None if gram is None else RatMatrix([[Fraction(x) for x in row] for row in gram]),
        pi_gens=tuple(
            InvertibleModuleLabel(
                tuple(tuple(int(c) for c in cls) for cls in g["classes"]),
                tuple(Fraction(x) for x in g["z"]),
            )
            for g in doc["pi_gens"]
        ),
    )
