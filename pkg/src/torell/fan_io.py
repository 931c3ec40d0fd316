"""Fan documents, the golden corpus, and deterministic report envelopes.

Fans travel as versioned JSON documents listing rays and maximal cones;
faces are completed on load.  A tolerant text reader accepts a bare ray
list like ``(1,0) (0,1) (-1,-1)`` and builds the complete surface fan with
those rays.  Reports are canonical JSON: two runs on identical inputs
produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .cech import CechPoset, CoverElement, WitnessReport, classify
from .ellinv import EllShadow, MayerVietorisLadder, SurfaceIncidence, Verdict
from .errors import MalformedFan, ParseError, SchemaError
from .fan import Fan, FanReport
from .gkm import MomentGraph, PartialSkeleton
from .lattice import SublatticeClass, primitive_normal
from .triang import DerivedEquivalenceCertificate, LatticeSimplex, Triangulation

SCHEMA_VERSION = "1"

CORPUS_ENV = "TORELL_CORPUS"


# --- parsing ---------------------------------------------------------------

def parse_fan_document(data) -> tuple[Fan, dict]:
    """Parse JSON (or a bare ray list) into a validated fan plus metadata."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    text = data.strip()
    if not text.startswith("{"):
        return fan_from_ray_text(text), {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno,
                         column=exc.colno) from exc
    return _fan_from_dict(doc), doc.get("metadata", {})


def parse_fan(data) -> Fan:
    return parse_fan_document(data)[0]


def _fan_from_dict(doc) -> Fan:
    if not isinstance(doc, dict):
        raise SchemaError("fan document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}")
    for key in ("ambient_rank", "rays", "cones"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}")
    n = doc["ambient_rank"]
    rays = doc["rays"]
    cones = doc["cones"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError("ambient_rank must be a positive integer")
    if not isinstance(rays, list) or not all(
            isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rays):
        raise SchemaError("rays must be a list of integer vectors")
    if not isinstance(cones, list) or not all(
            isinstance(c, list) and all(isinstance(i, int) for i in c) for c in cones):
        raise SchemaError("cones must be a list of ray-index lists")
    for cone in cones:
        for i in cone:
            if not 0 <= i < len(rays):
                raise SchemaError(f"cone {cone} references missing ray index {i}")
    return Fan.from_cones(n, [tuple(r) for r in rays], [tuple(c) for c in cones])


_RAY_GROUP = re.compile(r"\(([^()]*)\)")


def parse_ray_text(text: str) -> list[tuple[int, ...]]:
    """Read a tolerant ray list: ``(1,0) (0,1)`` or one ray per line."""
    groups = _RAY_GROUP.findall(text)
    if not groups:
        groups = [line for line in text.splitlines() if line.strip()]
    rays = []
    for group in groups:
        parts = [p for p in re.split(r"[,\s;]+", group.strip()) if p]
        try:
            rays.append(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ParseError(f"cannot read ray {group!r}") from exc
    if not rays:
        raise ParseError("no rays found in text input")
    return rays


def fan_from_ray_text(text: str) -> Fan:
    return complete_surface_fan(parse_ray_text(text))


def complete_surface_fan(rays: Sequence[Sequence[int]]) -> Fan:
    """The complete fan with the given rays; surfaces only.

    Rays are sorted by angle and consecutive pairs span the top cones, so
    this is the unique complete simplicial fan on the given rays.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    if any(len(r) != 2 for r in rays):
        raise SchemaError("ray-list input builds surface fans only")
    import functools

    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(i, j):
        u, v = rays[i], rays[j]
        if half(u) != half(v):
            return -1 if half(u) < half(v) else 1
        c = u[0] * v[1] - u[1] * v[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    order = sorted(range(len(rays)), key=functools.cmp_to_key(cmp))
    if len(order) < 3:
        raise MalformedFan("a complete surface fan needs at least three rays")
    cones = [(order[k], order[(k + 1) % len(order)]) for k in range(len(order))]
    return Fan.from_cones(2, rays, cones)


# --- emission --------------------------------------------------------------

def fan_to_document(fan: Fan, name: Optional[str] = None,
                    source: Optional[str] = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "ambient_rank": fan.ambient_rank,
        "rays": [list(r) for r in fan.rays],
        "cones": [list(c) for c in fan.maximal_cones()],
    }
    metadata = {}
    if name:
        metadata["name"] = name
    if source:
        metadata["source"] = source
    if metadata:
        doc["metadata"] = metadata
    return doc


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def emit_fan(fan: Fan, name: Optional[str] = None, source: Optional[str] = None) -> str:
    return dumps_canonical(fan_to_document(fan, name=name, source=source))


# --- corpus ----------------------------------------------------------------

def corpus_names(corpus: Optional[str] = None) -> list[str]:
    if corpus is None:
        corpus = os.environ.get(CORPUS_ENV)
    if corpus is not None:
        return sorted(p.stem.replace(".fan", "")
                      for p in Path(corpus).glob("*.fan.json"))
    root = resources.files("torell").joinpath("corpus")
    return sorted(p.name[:-len(".fan.json")] for p in root.iterdir()
                  if p.name.endswith(".fan.json"))


def corpus_bytes(name: str, corpus: Optional[str] = None) -> bytes:
    if corpus is None:
        corpus = os.environ.get(CORPUS_ENV)
    filename = f"{name}.fan.json"
    if corpus is not None:
        path = Path(corpus) / filename
        if not path.exists():
            raise SchemaError(f"no corpus fan named {name!r} in {corpus}")
        return path.read_bytes()
    ref = resources.files("torell").joinpath("corpus").joinpath(filename)
    try:
        return ref.read_bytes()
    except FileNotFoundError:
        raise SchemaError(f"no corpus fan named {name!r}") from None


def load_corpus_fan(name: str, corpus: Optional[str] = None) -> Fan:
    return parse_fan(corpus_bytes(name, corpus))


def resolve_fan_argument(arg: str, corpus: Optional[str] = None):
    """Resolve a CLI operand to (fan, display_name, input_bytes).

    Operands containing a path separator or ending in .json are files;
    anything else is looked up in the corpus.
    """
    if os.sep in arg or arg.endswith(".json") or arg.endswith(".txt"):
        data = Path(arg).read_bytes()
        return parse_fan(data), arg, data
    data = corpus_bytes(arg, corpus)
    return parse_fan(data), arg, data


# --- JSON views of results --------------------------------------------------

def sublattice_json(s: SublatticeClass) -> dict:
    out = {"ambient_rank": s.ambient_rank, "rank": s.rank,
           "basis": [list(r) for r in s.basis]}
    if s.corank == 1:
        out["normal"] = list(primitive_normal(s))
    return out


def fan_report_json(report: FanReport) -> dict:
    return {"smooth": report.smooth, "good": report.good, "proper": report.proper}


def shadow_json(s: EllShadow) -> dict:
    return {
        "ambient_rank": s.ambient_rank,
        "rank": s.rank,
        "wall_spans": [sublattice_json(c) for c in s.wall_spans],
        "det_divisor": [{"coefficient": coeff, "class": sublattice_json(cls)}
                        for coeff, cls in s.det_divisor],
        "det_divisor_degree": s.det_divisor_degree(),
    }


def ladder_json(ladder: MayerVietorisLadder) -> dict:
    return {
        "terms": [
            [{"cone_ids": list(s.cone_ids),
              "span": sublattice_json(s.span),
              "vanishes_in_codim2": s.vanishes_in_codim2}
             for s in term]
            for term in ladder.terms
        ],
    }


def _witness_detail_json(kind: str, detail) -> object:
    if kind == "rank-mismatch":
        return {"rank_a": detail[0], "rank_b": detail[1]}
    if kind == "wall-span-mismatch":
        return {"only_in_a": [sublattice_json(c) for c in detail[0]],
                "only_in_b": [sublattice_json(c) for c in detail[1]]}
    if kind == "surface-ray-line-bijection":
        return {"pairs": [[list(a), list(b)] for a, b in detail]}
    return None


def verdict_json(v: Verdict) -> dict:
    out = {"outcome": v.outcome, "rule": v.rule, "witness": None}
    if v.witness is not None:
        out["witness"] = {"kind": v.witness.kind,
                          "detail": _witness_detail_json(v.witness.kind, v.witness.detail)}
    return out


def graph_json(g: MomentGraph) -> dict:
    return {
        "ambient_rank": g.ambient_rank,
        "vertices": [list(c) for c in g.vertices],
        "edges": [{"endpoints": list(e.endpoints), "label": list(e.label),
                   "isotropy": sublattice_json(e.isotropy), "compact": e.compact}
                  for e in g.edges],
    }


def skeleton_json(s: PartialSkeleton) -> dict:
    return {"vertex_count": s.vertex_count,
            "edge_labels": [sublattice_json(c) for c in s.edge_labels]}


def element_json(e: CoverElement) -> dict:
    return {"support": list(e.support), "words": list(e.words), "grade": e.grade}


def cech_json(poset: CechPoset, witness: WitnessReport) -> dict:
    grading = poset.grading()
    histogram: dict[int, int] = {}
    for e in poset.elements:
        histogram[len(e.support)] = histogram.get(len(e.support), 0) + 1
    return {
        "element_count": len(poset.elements),
        "counts_per_grade": {str(k): len(v) for k, v in grading.items()},
        "support_size_histogram": {str(k): v for k, v in sorted(histogram.items())},
        "classification": [
            {"element": element_json(e), "smooth": classify(e).smooth}
            for e in poset.elements
        ],
        "witness": {
            "singular_count": witness.singular_count,
            "entries": [
                {"singular": element_json(w.singular),
                 "components": [element_json(c) for c in w.components],
                 "smooth_covers": [element_json(c) for c in w.smooth_covers],
                 "divisor_positions": list(w.divisor_positions)}
                for w in witness.entries
            ],
        },
    }


def incidence_json(inc: SurfaceIncidence) -> dict:
    return {"m": inc.m, "matrix": [list(r) for r in inc.matrix.entries],
            "ray_order": [list(r) for r in inc.ray_order]}


def simplex_json(s: LatticeSimplex) -> dict:
    return {
        "dim": s.dim,
        "vertices": [list(v) for v in s.vertices],
        "points": [list(p) for p in s.points],
        "boundary_points": [list(p) for p in s.boundary_points],
        "interior_points": [list(p) for p in s.interior_points],
        "normalized_volume": s.normalized_volume(),
    }


def triangulation_json(t: Triangulation) -> dict:
    return {"schema_version": SCHEMA_VERSION,
            "vertices": [list(v) for v in t.simplex.vertices],
            "points": [list(p) for p in t.simplex.points],
            "cells": [list(c) for c in t.cells]}


def parse_triangulation(data) -> Triangulation:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno,
                         column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise SchemaError("triangulation document must be a JSON object")
    for key in ("vertices", "cells"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}")
    simplex = LatticeSimplex.from_vertices([tuple(v) for v in doc["vertices"]])
    cells = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in doc["cells"]))
    for cell in cells:
        for i in cell:
            if not 0 <= i < len(simplex.points):
                raise SchemaError(f"cell {cell} references missing point index {i}")
    return Triangulation(simplex, cells)


def certificate_json(cert: DerivedEquivalenceCertificate) -> dict:
    return {
        "source_cells": [list(c) for c in cert.source.cells],
        "target_cells": [list(c) for c in cert.target.cells],
        "moves": [
            {"cells_before": [list(c) for c in m.cells_before],
             "cells_after": [list(c) for c in m.cells_after],
             "removed_edge": list(m.removed_edge),
             "added_edge": list(m.added_edge)}
            for m in cert.moves
        ],
    }


# --- report envelope ---------------------------------------------------------

def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def make_report(command: str, inputs: Sequence[tuple[str, bytes]], result) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "torell", "version": __version__},
        "command": command,
        "inputs": [{"name": name, "sha256": input_digest(data)}
                   for name, data in inputs],
        "result": result,
    }
