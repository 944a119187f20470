"""Command-line interface: JSON/JSONL output and SVG alcove figures.

Exit codes: 0 success, 1 domain error (machine-readable JSON on stderr),
2 malformed input.  All rationals cross the wire as "p/q" strings; output
is canonical and byte-identical across runs and thread counts.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import cohomology, extension, fusion, rootsys, spectrum
from .latmath import LatticeError
from .rootsys import OrderExceedsBound, SimpleType, build

SIMPLE_TYPE_PATTERN = "letter A-G followed by the rank, e.g. A2 or G2"


class MalformedInput(Exception):
    pass


class DomainError(Exception):
    pass


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _parse_types(spec: str) -> list[SimpleType]:
    try:
        return [SimpleType.parse(part) for part in spec.split(",")]
    except (ValueError, rootsys.InvalidRank) as e:
        raise MalformedInput(f"bad --type {spec!r}: expected {SIMPLE_TYPE_PATTERN}") from e


def _parse_levels(spec: str, n: int) -> list[int]:
    try:
        levels = [int(part) for part in spec.split(",")]
    except ValueError as e:
        raise MalformedInput(f"bad --level {spec!r}: expected comma-separated integers") from e
    if len(levels) != n:
        raise MalformedInput(f"expected {n} level(s), got {len(levels)}")
    if any(k < 1 for k in levels):
        raise MalformedInput("levels must be positive")
    return levels


def _read_input(args) -> str:
    if getattr(args, "input", None) and args.input != "-":
        with open(args.input, encoding="utf-8") as f:
            return f.read()
    return sys.stdin.read()


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedInput("top-level JSON value must be an object")
    return doc


def _require_keys(doc: dict, keys: list[str], schema: str):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise MalformedInput(f"document does not match schema {schema}: missing {missing}")


def _emit(args, text: str):
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# -- product alcoves (figures and counts) -----------------------------------

def _product_alcove(types: list[SimpleType], levels: list[int]) -> list[tuple[int, ...]]:
    pts: list[tuple[int, ...]] = [()]
    for t, k in zip(types, levels):
        layer = [p.dominant_coords for p in spectrum.enumerate_alcove(t, k)]
        pts = [a + b for a in pts for b in layer]
    return sorted(pts)


def _embedding(types: list[SimpleType]) -> list[list[float]]:
    """Columns e_i with <e_i,e_j> = gram_weight, block per factor (render only)."""
    blocks = []
    for t in types:
        g = build(t).gram_weight
        n = g.rows
        chol = [[0.0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                s = float(g[i, j]) - sum(chol[i][p] * chol[j][p] for p in range(j))
                chol[i][j] = math.sqrt(s) if i == j else s / chol[j][j]
        blocks.append(chol)
    dim = sum(b and len(b) or 0 for b in blocks)
    emb = [[0.0] * dim for _ in range(dim)]
    pos = 0
    for b in blocks:
        n = len(b)
        for i in range(n):
            for j in range(n):
                emb[pos + i][pos + j] = b[i][j]
        pos += n
    return emb


def _alcove_vertices(types: list[SimpleType], levels: list[int]) -> list[tuple[Fraction, ...]]:
    """Vertices of the product alcove polygon, in dominant coordinates."""
    if len(types) == 1:
        rs = build(types[0])
        k = levels[0]
        verts = [tuple(Fraction(0) for _ in range(rs.rank))]
        for i, a in enumerate(rs.comarks):
            verts.append(tuple(Fraction(k, a) if j == i else Fraction(0) for j in range(rs.rank)))
        return verts
    if len(types) == 2 and all(t.rank == 1 for t in types):
        k1, k2 = levels
        return [
            (Fraction(0), Fraction(0)),
            (Fraction(k1), Fraction(0)),
            (Fraction(k1), Fraction(k2)),
            (Fraction(0), Fraction(k2)),
        ]
    raise DomainError("figures support one rank-2 factor or a product of two rank-1 factors")


def render_alcove_svg(types: list[SimpleType], levels: list[int]) -> str:
    if sum(t.rank for t in types) != 2:
        raise DomainError("figures require total rank 2")
    emb = _embedding(types)

    def project(coords) -> tuple[float, float]:
        x = sum(emb[0][j] * float(c) for j, c in enumerate(coords))
        y = sum(emb[1][j] * float(c) for j, c in enumerate(coords))
        return x, y

    points = [project(p) for p in _product_alcove(types, levels)]
    verts = [project(v) for v in _alcove_vertices(types, levels)]
    xs = [p[0] for p in points + verts]
    ys = [p[1] for p in points + verts]
    pad = 0.6
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    scale = 120.0
    width = (x1 - x0) * scale
    height = (y1 - y0) * scale

    def fmt(v: float) -> str:
        return f"{v:.6f}"

    def to_px(p):
        return fmt((p[0] - x0) * scale), fmt((y1 - p[1]) * scale)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
    ]
    boundary = " ".join(f"{x},{y}" for x, y in (to_px(v) for v in verts))
    lines.append(
        f'<polygon points="{boundary}" fill="none" stroke="black" '
        'stroke-width="1" stroke-dasharray="6,4"/>'
    )
    for p in points:
        x, y = to_px(p)
        lines.append(f'<circle class="node" cx="{x}" cy="{y}" r="4" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# -- subcommand handlers ----------------------------------------------------

def _cmd_h4(args) -> str:
    G = cohomology.group_from_json(_read_input(args))
    basis = cohomology.h4_basis(G)
    doc = {
        "schema": "wzwclass/h4/v1",
        "group": json.loads(cohomology.group_to_json(G)),
        "rank": len(basis),
        "basis": [json.loads(cohomology.level_to_json(f)) for f in basis],
    }
    return _dump(doc)


def _cmd_alcove(args) -> str:
    types = _parse_types(args.type)
    levels = _parse_levels(args.level, len(types))
    pts = _product_alcove(types, levels)
    if args.count:
        return str(len(pts))
    doc = {
        "schema": "wzwclass/alcove/v1",
        "type": [str(t) for t in types],
        "level": levels,
        "count": len(pts),
        "points": [list(p) for p in pts],
    }
    return _dump(doc)


def _cmd_corners(args) -> str:
    (t,) = _parse_types(args.type)
    corners = spectrum.sharp_corners(t)
    doc = {
        "schema": "wzwclass/corners/v1",
        "type": str(t),
        "count": len(corners),
        "corners": [
            {"coweight": [_frac_str(x) for x in c.coweight], "center_class": list(c.center_class)}
            for c in corners
        ],
    }
    return _dump(doc)


def _point_of_args(args) -> spectrum.AlcovePoint:
    (t,) = _parse_types(args.type)
    (k,) = _parse_levels(args.level, 1)
    try:
        coords = tuple(int(x) for x in args.weight.split(","))
    except ValueError as e:
        raise MalformedInput(f"bad --weight {args.weight!r}") from e
    try:
        return spectrum.AlcovePoint(t, k, coords)
    except (ValueError, LatticeError) as e:
        raise DomainError(str(e)) from e


def _cmd_energy(args) -> str:
    p = _point_of_args(args)
    return _dump({"schema": "wzwclass/energy/v1", "h": _frac_str(spectrum.min_energy(p))})


def _cmd_spin(args) -> str:
    p = _point_of_args(args)
    s = spectrum.spin_of_energy(spectrum.min_energy(p))
    return _dump(
        {
            "schema": "wzwclass/spin/v1",
            "h_mod_1": _frac_str(s.h_mod_1),
            "h_exact": _frac_str(s.h_exact),
            "trivial": s.is_integral(),
        }
    )


def _cmd_extend_check(args) -> str:
    model = _model_from_input(args)
    doc = {
        "schema": "wzwclass/flags/v1",
        "flags": model.flags,
        "generators": [
            {"h_mod_1": _frac_str(extension.label_spin(model, g).h_mod_1)} for g in model.pi_gens
        ],
    }
    return _dump(doc)


def _model_from_input(args) -> extension.ModelDescriptor:
    doc = _load_json(_read_input(args))
    _require_keys(doc, ["factors", "torus_rank", "center_gram", "pi_gens"], "wzwclass/model/v1")
    try:
        return extension.model_from_json(_dump(doc))
    except (ValueError, KeyError, TypeError, extension.IncompatibleLabel, LatticeError) as e:
        raise MalformedInput(f"bad model document: {e}") from e


def _cmd_classify(args, stdout) -> int:
    clean, residue = extension.enumerate_models(
        max_rank=args.max_rank,
        max_level=args.max_level,
        semisimple_only=not args.allow_torus,
        threads=args.threads,
    )
    for model in clean:
        stdout.write(extension.model_to_json(model) + "\n")
    if args.residue:
        for model in residue:
            stdout.write(extension.model_to_json(model) + "\n")
    return 0


def _cmd_to_group(args) -> str:
    model = _model_from_input(args)
    try:
        G, f = extension.to_group(model)
    except extension.NotAWZWModel as e:
        raise DomainError(f"not a WZW model: {e}") from e
    return _dump(
        {
            "schema": "wzwclass/group-level/v1",
            "group": json.loads(cohomology.group_to_json(G)),
            "level": json.loads(cohomology.level_to_json(f)),
        }
    )


def _cmd_from_group(args) -> str:
    doc = _load_json(_read_input(args))
    _require_keys(doc, ["group", "level"], "wzwclass/group-level/v1")
    try:
        G = cohomology.group_from_json(_dump(doc["group"]))
        f = cohomology.level_from_json(_dump(doc["level"]))
    except (ValueError, KeyError, TypeError, cohomology.CohomologyError, LatticeError) as e:
        raise MalformedInput(f"bad group/level document: {e}") from e
    try:
        model = extension.from_group(G, f)
    except (extension.NotPositive, cohomology.NotALevel) as e:
        raise DomainError(str(e)) from e
    return extension.model_to_json(model)


def _cmd_fusion(args) -> str:
    (t,) = _parse_types(args.type)
    (k,) = _parse_levels(args.level, 1)
    try:
        table = fusion.fusion_table(t, k)
    except fusion.FusionError as e:
        raise DomainError(str(e)) from e
    inv = fusion.invertible_modules(table)
    doc = {
        "schema": "wzwclass/fusion/v1",
        "type": str(t),
        "level": k,
        "labels": [list(w) for w in table.labels()],
        "coefficients": [
            {"lam": list(lam), "mu": list(mu), "nu": list(nu), "n": n}
            for (lam, mu, nu), n in sorted(table.coefficients.items())
        ],
        "invertible": [list(p.dominant_coords) for p in inv],
    }
    return _dump(doc)


def _cmd_figure(args) -> int:
    types = _parse_types(args.type)
    levels = _parse_levels(args.level, len(types))
    svg = render_alcove_svg(types, levels)
    with open(args.svg, "w", encoding="utf-8") as f:
        f.write(svg)
    return 0


def _weyl_guard() -> int:
    # groups above the guard are checked by the order formula only; raise the
    # guard via WZW_WEYL_GUARD to force enumeration of larger Weyl groups
    raw = os.environ.get("WZW_WEYL_GUARD", "")
    try:
        return int(raw) if raw else 10**4
    except ValueError as e:
        raise MalformedInput(f"bad WZW_WEYL_GUARD {raw!r}") from e


def _verify_suites(max_rank: int, guard: int):
    types = [
        t
        for fam in "ABCDEFG"
        for r in range(1, max_rank + 1)
        for t in [SimpleType(fam, r) if _valid_type(fam, r) else None]
        if t is not None
    ]

    def isometry():
        return {str(t): spectrum.verify_isometry_lemma(t) for t in types}

    def corner_spin():
        out = {}
        for t in types:
            ok = True
            for k in range(1, 6):
                for c in spectrum.sharp_corners(t):
                    p = spectrum.corner_alcove_point(c, k)
                    ok = ok and spectrum.min_energy(p) == spectrum.corner_energy(c, k)
            out[str(t)] = ok
        return out

    def pairing_integrality():
        out = {}
        for t in types:
            rs = build(t)
            ok = all(
                rootsys.basic_pairing(rs, w, a).denominator == 1
                for w in rs.coweight_basis().basis
                for a in rs.coroot_basis().basis
            )
            out[str(t)] = ok
        return out

    def weyl_order():
        out = {}
        for t in types:
            rs = build(t)
            n = rootsys.weyl_order(t)
            if n <= guard:
                out[str(t)] = len(rootsys.weyl_enumerate(rs, bound=guard).elements) == n
            else:
                out[str(t)] = True  # order formula only; enumeration skipped
        return out

    return {
        "isometry-lemma": isometry,
        "corner-spin": corner_spin,
        "pairing-integrality": pairing_integrality,
        "weyl-order": weyl_order,
    }


def _valid_type(fam: str, r: int) -> bool:
    try:
        SimpleType(fam, r)
        return True
    except rootsys.InvalidRank:
        return False


def _cmd_verify(args) -> str:
    suites = _verify_suites(args.max_rank, _weyl_guard())
    if args.suite != "all" and args.suite not in suites:
        raise MalformedInput(f"unknown suite {args.suite!r}; choose from {sorted(suites)} or 'all'")
    selected = sorted(suites) if args.suite == "all" else [args.suite]
    report = {}
    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            for name, result in zip(selected, pool.map(lambda n: suites[n](), selected)):
                report[name] = result
    else:
        for name in selected:
            report[name] = suites[name]()
    all_pass = all(all(v.values()) for v in report.values())
    doc = {
        "schema": "wzwclass/verify/v1",
        "max_rank": args.max_rank,
        "suites": report,
        "all_pass": all_pass,
    }
    return _dump(doc)


# -- argument parsing and dispatch ------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wzw", description="Exact chiral WZW model classification toolkit")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--output", help="write the result to this file instead of stdout")
        return sp

    sp = add("h4", help="basis of H^4(BG,Z) for a group descriptor (JSON on stdin)")
    sp.add_argument("--input", help="JSON file ('-' for stdin)")

    sp = add("alcove", help="enumerate the level-k alcove")
    sp.add_argument("--type", required=True, help="simple type(s), e.g. A2 or A1,A1")
    sp.add_argument("--level", required=True, help="level(s), e.g. 4 or 3,4")
    sp.add_argument("--count", action="store_true", help="print only the point count")

    sp = add("corners", help="sharp corners and their center classes")
    sp.add_argument("--type", required=True)

    for name in ("energy", "spin"):
        sp = add(name, help=f"minimal {name} of an alcove point")
        sp.add_argument("--type", required=True)
        sp.add_argument("--level", required=True)
        sp.add_argument("--weight", required=True, help="dominant coordinates, e.g. 1,0")

    sp = add("extend-check", help="admissibility/rationality/contamination flags of a model")
    sp.add_argument("--input", help="model JSON file ('-' for stdin)")

    sp = add("classify", help="bounded enumeration of models as a JSONL stream")
    sp.add_argument("--max-rank", type=int, required=True)
    sp.add_argument("--max-level", type=int, required=True)
    sp.add_argument("--allow-torus", action="store_true", help="include torus rank 1")
    sp.add_argument("--residue", action="store_true", help="also stream the contaminated residue")
    sp.add_argument("--threads", type=int, default=1)

    sp = add("to-group", help="map a model to its (group, level) pair")
    sp.add_argument("--input", help="model JSON file ('-' for stdin)")

    sp = add("from-group", help="map a (group, level) pair to its model")
    sp.add_argument("--input", help="group-level JSON file ('-' for stdin)")

    sp = add("fusion", help="Kac-Walton fusion table at low rank")
    sp.add_argument("--type", required=True)
    sp.add_argument("--level", required=True)

    sp = add("figure", help="SVG alcove figure (rank 2)")
    sp.add_argument("--type", required=True)
    sp.add_argument("--level", required=True)
    sp.add_argument("--svg", required=True, help="output SVG path")

    sp = add("verify", help="run internal verification suites")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--max-rank", type=int, default=8)
    sp.add_argument("--threads", type=int, default=1)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except MalformedInput as e:
        sys.stderr.write(_dump({"error": "malformed-input", "message": str(e)}) + "\n")
        return 2
    try:
        if args.subcommand == "classify":
            return _cmd_classify(args, sys.stdout)
        if args.subcommand == "figure":
            return _cmd_figure(args)
        handler = {
            "h4": _cmd_h4,
            "alcove": _cmd_alcove,
            "corners": _cmd_corners,
            "energy": _cmd_energy,
            "spin": _cmd_spin,
            "extend-check": _cmd_extend_check,
            "to-group": _cmd_to_group,
            "from-group": _cmd_from_group,
            "fusion": _cmd_fusion,
            "verify": _cmd_verify,
        }[args.subcommand]
        _emit(args, handler(args))
        return 0
    except MalformedInput as e:
        sys.stderr.write(_dump({"error": "malformed-input", "message": str(e)}) + "\n")
        return 2
    except (DomainError, OrderExceedsBound, extension.ExtensionError, cohomology.CohomologyError, LatticeError) as e:
        sys.stderr.write(_dump({"error": "domain-error", "message": str(e)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
