"""Command-line interface.

Every subcommand prints a deterministic report (JSON by default) on
standard output.  Exit codes: 0 success, 1 a --expect assertion failed,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, cech, ellinv, fan as fan_mod, fan_io, gkm, triang
from .errors import TorellError


def _add_common(parser):
    parser.add_argument("--corpus", default=None,
                        help="directory of *.fan.json files overriding the built-in corpus")
    parser.add_argument("--format", default="json", choices=("json", "text", "dot"),
                        help="output format (dot applies to gkm only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torell",
        description="exact invariants of torus-equivariant elliptic cohomology "
                    "of toric varieties")
    parser.add_argument("--version", action="version", version=f"torell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="classify fans as smooth / good / proper")
    p.add_argument("fans", nargs="+")
    _add_common(p)

    p = sub.add_parser("invariant", help="compute the shadow invariant of a fan")
    p.add_argument("fan")
    p.add_argument("--ladder", action="store_true",
                   help="include the chart-intersection ladder terms")
    _add_common(p)

    p = sub.add_parser("compare", help="compare the invariants of two fans")
    p.add_argument("fan_a")
    p.add_argument("fan_b")
    p.add_argument("--expect", choices=("iso", "noniso"), default=None,
                   help="exit 1 when the verdict contradicts the expectation")
    _add_common(p)

    p = sub.add_parser("gkm", help="emit the moment graph of a fan")
    p.add_argument("fan")
    _add_common(p)

    p = sub.add_parser("cech", help="cover statistics, poset grading and witnesses")
    p.add_argument("fan")
    _add_common(p)

    p = sub.add_parser("flop", help="list or apply diagonal flips of a triangulation")
    p.add_argument("triangulation",
                   help="built-in name (mu2-kernel) or a triangulation JSON file")
    p.add_argument("--list", action="store_true", help="list legal flips")
    p.add_argument("--apply", default=None, metavar="ID",
                   help="flip id (index or colour alias) to apply")
    _add_common(p)

    p = sub.add_parser("mckay-example",
                       help="quotient simplex of a finite abelian torus subgroup")
    p.add_argument("--generators", default=None,
                   help="semicolon-separated weight vectors, e.g. '1/2,1/2,0;1/2,0,1/2'")
    p.add_argument("--rank", type=int, default=None,
                   help="ambient rank (needed for the trivial group)")
    _add_common(p)

    return parser


def _emit(report: dict, fmt: str, text_lines=None) -> None:
    if fmt == "text" and text_lines is not None:
        sys.stdout.write("\n".join(text_lines) + "\n")
    else:
        sys.stdout.write(fan_io.dumps_canonical(report))


def _cmd_validate(args) -> int:
    results = []
    inputs = []
    lines = []
    for operand in args.fans:
        f, name, data = fan_io.resolve_fan_argument(operand, args.corpus)
        inputs.append((name, data))
        report = fan_mod.validate(f)
        results.append({"fan": name, **fan_io.fan_report_json(report)})
        lines.append(f"{name}: smooth={report.smooth} good={report.good} "
                     f"proper={report.proper}")
    _emit(fan_io.make_report("validate", inputs, results), args.format, lines)
    return 0


def _cmd_invariant(args) -> int:
    f, name, data = fan_io.resolve_fan_argument(args.fan, args.corpus)
    shadow = ellinv.ell_shadow(f)
    result = {"fan": name, "shadow": fan_io.shadow_json(shadow)}
    if args.ladder:
        result["ladder"] = fan_io.ladder_json(ellinv.mv_ladder(f))
    lines = [f"{name}: rank={shadow.rank} "
             f"interior_walls={len(shadow.wall_spans)} "
             f"det_divisor_degree={shadow.det_divisor_degree()}"]
    for cls in shadow.wall_spans:
        lines.append(f"  wall span {cls.describe()}")
    _emit(fan_io.make_report("invariant", [(name, data)], result), args.format, lines)
    return 0


def _cmd_compare(args) -> int:
    fa, name_a, data_a = fan_io.resolve_fan_argument(args.fan_a, args.corpus)
    fb, name_b, data_b = fan_io.resolve_fan_argument(args.fan_b, args.corpus)
    sa, sb = ellinv.ell_shadow(fa), ellinv.ell_shadow(fb)
    verdict = ellinv.compare(sa, sb, fans=(fa, fb))
    result = {
        "fan_a": name_a,
        "fan_b": name_b,
        "shadow_a": fan_io.shadow_json(sa),
        "shadow_b": fan_io.shadow_json(sb),
        "verdict": fan_io.verdict_json(verdict),
    }
    lines = [f"{name_a} vs {name_b}: {verdict.outcome} (rule: {verdict.rule})"]
    _emit(fan_io.make_report("compare", [(name_a, data_a), (name_b, data_b)], result),
          args.format, lines)
    if args.expect == "iso" and verdict.outcome == ellinv.NOT_ISOMORPHIC:
        return 1
    if args.expect == "noniso" and verdict.outcome == ellinv.ISOMORPHIC:
        return 1
    return 0


def _cmd_gkm(args) -> int:
    f, name, data = fan_io.resolve_fan_argument(args.fan, args.corpus)
    graph = gkm.moment_graph(f)
    if args.format == "dot":
        sys.stdout.write(gkm.to_dot(graph))
        return 0
    skeleton = gkm.partial_skeleton(graph)
    result = {"fan": name, "graph": fan_io.graph_json(graph),
              "partial_skeleton": fan_io.skeleton_json(skeleton)}
    lines = [f"{name}: {len(graph.vertices)} fixed points, "
             f"{len(graph.edges)} edges "
             f"({sum(1 for e in graph.edges if e.compact)} compact)"]
    _emit(fan_io.make_report("gkm", [(name, data)], result), args.format, lines)
    return 0


def _cmd_cech(args) -> int:
    f, name, data = fan_io.resolve_fan_argument(args.fan, args.corpus)
    poset = cech.cech_poset(f)
    witness = cech.cohomology_witness(f)
    result = {"fan": name, "cover_size": len(cech.cover(f)),
              **fan_io.cech_json(poset, witness)}
    lines = [f"{name}: cover size {result['cover_size']}, "
             f"poset size {result['element_count']}, "
             f"singular top-grade elements {witness.singular_count}"]
    _emit(fan_io.make_report("cech", [(name, data)], result), args.format, lines)
    return 0


def _resolve_triangulation(operand: str):
    if operand == "mu2-kernel":
        t, _ = triang.mu2_kernel_triangulations()
        return t, operand, fan_io.dumps_canonical(fan_io.triangulation_json(t)).encode()
    data = Path(operand).read_bytes()
    return fan_io.parse_triangulation(data), operand, data


def _flip_listing(t):
    moves = triang.flips(t)
    aliases = triang.flip_aliases(t)
    alias_of = {id(m): [] for m in moves}
    for name, move in aliases.items():
        for m in moves:
            if m == move:
                alias_of[id(m)].append(name)
    return moves, alias_of


def _cmd_flop(args) -> int:
    t, name, data = _resolve_triangulation(args.triangulation)
    moves, alias_of = _flip_listing(t)
    listing = [{"id": i,
                "aliases": sorted(alias_of[id(m)]),
                "removed_edge": list(m.removed_edge),
                "added_edge": list(m.added_edge)}
               for i, m in enumerate(moves)]
    if args.apply is None:
        result = {"triangulation": fan_io.triangulation_json(t), "flips": listing}
        lines = [f"{name}: {len(moves)} legal flips"] + [
            f"  [{entry['id']}] remove {entry['removed_edge']} add {entry['added_edge']}"
            + (f" ({', '.join(entry['aliases'])})" if entry["aliases"] else "")
            for entry in listing]
        _emit(fan_io.make_report("flop", [(name, data)], result), args.format, lines)
        return 0
    chosen = None
    for i, m in enumerate(moves):
        if args.apply == str(i) or args.apply in alias_of[id(m)]:
            chosen = m
            break
    if chosen is None:
        raise TorellError(f"no flip with id {args.apply!r}; use --list")
    flipped, certificate = triang.apply_flip(t, chosen)
    fan_before = triang.cone_fan(t)
    fan_after = triang.cone_fan(flipped)
    verdict = ellinv.compare(ellinv.ell_shadow(fan_before), ellinv.ell_shadow(fan_after),
                             fans=(fan_before, fan_after))
    result = {
        "triangulation": fan_io.triangulation_json(t),
        "flipped": fan_io.triangulation_json(flipped),
        "fan": fan_io.fan_to_document(fan_after, name=f"{name}:flipped"),
        "certificate": fan_io.certificate_json(certificate),
        "comparison": fan_io.verdict_json(verdict),
    }
    lines = [f"{name}: applied flip removing {list(chosen.removed_edge)}; "
             f"invariant comparison: {verdict.outcome}"]
    _emit(fan_io.make_report("flop", [(name, data)], result), args.format, lines)
    return 0


def _parse_generators(spec: str):
    gens = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        gens.append(tuple(Fraction(x.strip()) for x in part.split(",")))
    return gens


def _cmd_mckay(args) -> int:
    if args.generators is None and args.rank is None:
        gens = triang.mu2_kernel_generators()
    elif args.generators is None:
        gens = []
    else:
        gens = _parse_generators(args.generators)
    simplex = triang.quotient_simplex(gens, rank=args.rank)
    result = {"simplex": fan_io.simplex_json(simplex)}
    if simplex.dim <= 2 and len(simplex.points) <= 12:
        triangulations = triang.unimodular_triangulations(simplex)
        result["triangulation_count"] = len(triangulations)
        result["triangulations"] = [fan_io.triangulation_json(t)
                                    for t in triangulations]
    lines = [f"simplex with {len(simplex.points)} lattice points, "
             f"normalized volume {simplex.normalized_volume()}"]
    if "triangulation_count" in result:
        lines.append(f"unimodular triangulations: {result['triangulation_count']}")
    label = args.generators if args.generators is not None else "built-in"
    _emit(fan_io.make_report("mckay-example", [(label, str(gens).encode())], result),
          args.format, lines)
    return 0


_HANDLERS = {
    "validate": _cmd_validate,
    "invariant": _cmd_invariant,
    "compare": _cmd_compare,
    "gkm": _cmd_gkm,
    "cech": _cmd_cech,
    "flop": _cmd_flop,
    "mckay-example": _cmd_mckay,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except TorellError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
