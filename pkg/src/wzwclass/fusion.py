"""Low-rank fusion rules by tensor decomposition and affine folding.

Classical weight multiplicities come from the Freudenthal recursion; the
level-k fusion coefficients are obtained by folding the tensor product
back into the interior of the shifted alcove with alternating signs
(points landing on a wall are dropped).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rootsys import RootSystemData, SimpleType, build
from .spectrum import AlcovePoint, enumerate_alcove


class FusionError(Exception):
    pass


class BoundExceeded(FusionError):
    pass


class RankTooLarge(FusionError):
    pass


class AlcoveTooLarge(FusionError):
    pass


Weight = tuple[int, ...]


@dataclass(frozen=True)
class WeightMultiplicitySet:
    highest_weight: Weight
    table: dict[Weight, int]

    def multiplicity(self, mu: Weight) -> int:
        return self.table.get(mu, 0)

    def dimension(self) -> int:
        return sum(self.table.values())


def _simple_root_weight_rows(rs: RootSystemData) -> list[Weight]:
    return [tuple(rs.cartan[i]) for i in range(rs.rank)]


def _dominant_rep(rs: RootSystemData, mu: Weight) -> Weight:
    rows = _simple_root_weight_rows(rs)
    mu = list(mu)
    while True:
        j = next((i for i, x in enumerate(mu) if x < 0), None)
        if j is None:
            return tuple(mu)
        c = mu[j]
        for s in range(rs.rank):
            mu[s] -= c * rows[j][s]


def _norm2_shifted(rs: RootSystemData, mu: Weight) -> Fraction:
    v = tuple(Fraction(x + 1) for x in mu)  # mu + rho
    return rs.weight_pairing(v, v)


def weight_multiplicities(rs: RootSystemData, lam: Weight, bound: int = 200000) -> WeightMultiplicitySet:
    """Exact weight multiplicities of the irreducible module with highest weight lam."""
    if any(x < 0 for x in lam):
        raise ValueError("highest weight must be dominant")
    rows = _simple_root_weight_rows(rs)
    lam = tuple(int(x) for x in lam)
    lam_norm = rs.weight_pairing(tuple(map(Fraction, lam)), tuple(map(Fraction, lam)))

    # collect every mu with lam - mu in the positive root cone and |mu| <= |lam|
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for r in rows:
                cand = tuple(a - b for a, b in zip(mu, r))
                if cand in seen:
                    continue
                cn = rs.weight_pairing(tuple(map(Fraction, cand)), tuple(map(Fraction, cand)))
                if cn > lam_norm:
                    continue
                if len(seen) >= bound:
                    raise BoundExceeded("weight ball exceeds the configured bound")
                seen.add(cand)
                nxt.append(cand)
        frontier = nxt

    dominant = [mu for mu in seen if all(x >= 0 for x in mu)]
    # height of lam - mu orders the recursion outermost-first
    cinv_rows = None

    def depth(mu):
        # coefficients of lam - mu on the simple roots are rational-linear in
        # weight coordinates; total height works as an ordering key
        diff = tuple(Fraction(a - b) for a, b in zip(lam, mu))
        nonlocal cinv_rows
        if cinv_rows is None:
            from .latmath import RatMatrix

            cinv_rows = RatMatrix([list(r) for r in rows]).transpose().inverse()
        coeffs = cinv_rows.apply(diff)
        return sum(coeffs)

    dominant.sort(key=depth)
    pos_roots = [rs.root_to_weight_coords(c) for c in rs.positive_roots]
    lam_shift = _norm2_shifted(rs, lam)
    mult: dict[Weight, int] = {lam: 1}

    for mu in dominant:
        if mu == lam:
            continue
        denom = lam_shift - _norm2_shifted(rs, mu)
        acc = Fraction(0)
        for alpha in pos_roots:
            t = 1
            while True:
                shifted = tuple(int(m + t * a) for m, a in zip(mu, alpha))
                rep = _dominant_rep(rs, shifted)
                m_up = mult.get(rep, 0)
                # beyond the top of the root string every higher mult is zero
                if rs.weight_pairing(
                    tuple(map(Fraction, shifted)), tuple(map(Fraction, shifted))
                ) > lam_norm and m_up == 0:
                    break
                if m_up:
                    acc += m_up * rs.weight_pairing(tuple(map(Fraction, shifted)), alpha)
                t += 1
        val = 2 * acc / denom
        assert val.denominator == 1 and val >= 0
        if val:
            mult[mu] = int(val)

    # expand to the full Weyl-orbit table
    table: dict[Weight, int] = {}
    for mu, m in mult.items():
        orbit = {mu}
        frontier = [mu]
        while frontier:
            nxt = []
            for w in frontier:
                for j in range(rs.rank):
                    c = w[j]
                    refl = tuple(w[s] - c * rows[j][s] for s in range(rs.rank))
                    if refl not in orbit:
                        orbit.add(refl)
                        nxt.append(refl)
            frontier = nxt
        for w in orbit:
            table[w] = m
    return WeightMultiplicitySet(highest_weight=lam, table=table)


@dataclass(frozen=True)
class FusionTable:
    factor: SimpleType
    level: int
    coefficients: dict[tuple[Weight, Weight, Weight], int]

    def n(self, lam: Weight, mu: Weight, nu: Weight) -> int:
        return self.coefficients.get((lam, mu, nu), 0)

    def labels(self) -> list[Weight]:
        return [p.dominant_coords for p in enumerate_alcove(self.factor, self.level)]


def _fold_into_alcove(rs: RootSystemData, xi: list[Fraction], kappa: int) -> tuple[int, Weight | None]:
    """Affine-Weyl fold of a rho-shifted weight; returns (sign, nu) or (0, None)."""
    theta = rs.root_to_weight_coords(rs.highest_root)
    comarks = rs.comarks
    sign = 1
    while True:
        j = next((i for i, x in enumerate(xi) if x <= 0), None)
        if j is not None:
            if xi[j] == 0:
                return 0, None
            c = xi[j]
            for s in range(rs.rank):
                xi[s] -= c * rs.cartan[j][s]
            sign = -sign
            continue
        s_level = sum(x * a for x, a in zip(xi, comarks))
        if s_level == kappa:
            return 0, None
        if s_level < kappa:
            nu = tuple(int(x) - 1 for x in xi)
            return sign, nu
        # reflect through the affine wall at level kappa
        for s in range(rs.rank):
            xi[s] = xi[s] - (s_level - kappa) * theta[s]
        sign = -sign


def fusion_table(factor: SimpleType, k: int, max_rank: int = 3, max_alcove: int = 200) -> FusionTable:
    """Complete fusion coefficients over the level-k alcove."""
    rs = build(factor)
    if rs.rank > max_rank:
        raise RankTooLarge(f"rank {rs.rank} exceeds the fusion guard {max_rank}")
    points = [p.dominant_coords for p in enumerate_alcove(factor, k)]
    if len(points) > max_alcove:
        raise AlcoveTooLarge(f"|A_k| = {len(points)} exceeds the fusion guard {max_alcove}")
    kappa = k + rs.dual_coxeter
    coeffs: dict[tuple[Weight, Weight, Weight], int] = {}
    mult_cache: dict[Weight, WeightMultiplicitySet] = {}
    for a, lam in enumerate(points):
        for mu in points[a:]:
            if mu not in mult_cache:
                mult_cache[mu] = weight_multiplicities(rs, mu)
            acc: dict[Weight, int] = {}
            for w, m in mult_cache[mu].table.items():
                xi = [Fraction(l + x + 1) for l, x in zip(lam, w)]
                sign, nu = _fold_into_alcove(rs, xi, kappa)
                if sign:
                    acc[nu] = acc.get(nu, 0) + sign * m
            for nu, n in acc.items():
                if n:
                    assert n > 0, (lam, mu, nu, n)
                    coeffs[(lam, mu, nu)] = n
                    coeffs[(mu, lam, nu)] = n
    return FusionTable(factor=factor, level=k, coefficients=coeffs)


def invertible_modules(table: FusionTable) -> list[AlcovePoint]:
    """Labels with a fusion inverse: lam x mu = vacuum with total multiplicity 1."""
    vacuum = tuple(0 for _ in range(build(table.factor).rank))
    out = []
    for lam in table.labels():
        for mu in table.labels():
            total = sum(
                n for (a, b, _nu), n in table.coefficients.items() if (a, b) == (lam, mu)
            )
            if total == 1 and table.n(lam, mu, vacuum) == 1:
                out.append(AlcovePoint(table.factor, table.level, lam))
                break
    return out


def fusion_product(table: FusionTable, lam: Weight, mu: Weight) -> dict[Weight, int]:
    return {
        nu: n for (a, b, nu), n in table.coefficients.items() if (a, b) == (lam, mu)
    }


def fusion_group_invariants(table: FusionTable) -> tuple[int, ...]:
    """Invariant factors of the abelian group formed by the invertible labels."""
    elems = [p.dominant_coords for p in invertible_modules(table)]
    vacuum = tuple(0 for _ in range(build(table.factor).rank))

    def mul(a, b):
        prod = fusion_product(table, a, b)
        assert len(prod) == 1 and next(iter(prod.values())) == 1
        return next(iter(prod))

    def order(a):
        n, x = 1, a
        while x != vacuum:
            x = mul(x, a)
            n += 1
        return n

    # abelian, small: peel off maximal cyclic factors from the order multiset
    orders = sorted((order(a) for a in elems), reverse=True)
    remaining = len(elems)
    invariants = []
    while remaining > 1:
        d = orders[0]
        invariants.append(d)
        remaining //= d
        orders = [o for o in orders if o <= remaining] or [1]
    return tuple(reversed(invariants))
