"""Command-line front end: ``cubesc <subcommand> ...``.

Every report is deterministic JSON carrying the schema version, the
parameters used, the seed and SHA-256 digests of the input files.
Exit codes: 0 success or certified, 1 usage or input error,
2 refuted or violation found, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .builders import (
    BuilderError,
    LabeledGraph,
    artin_presentation,
    counterexample_c8,
    dyer_presentation,
    salvetti,
)
from .cube_core import CubeComplex, CubeComplexError, is_npc, validate as validate_complex
from .decomposition import (
    TIE_BREAKS,
    DecompositionError,
    admissible_ordering,
    decompose,
    develop_model,
    nerve,
    structure_graph,
)
from .diagrams import DiagramError, DiscDiagram, complexity, detect_features, greendlinger_classify, is_reduced
from .homology import HomologyError, chain_complex, coned_homology, homology, verify_direct_sum
from .presentation import (
    CubicalPresentation,
    PresentationError,
    certify_Cp,
    enumerate_pieces,
    presentation_from_json,
    presentation_to_json,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
DEFAULT_MAX_CELLS = 10 ** 6


class UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit code 1."""


def max_cells() -> int:
    raw = os.environ.get("CUBESC_MAX_CELLS")
    if raw is None or raw == "":
        return DEFAULT_MAX_CELLS
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"CUBESC_MAX_CELLS must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError("CUBESC_MAX_CELLS must be positive")
    return value


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Inputs:
    """Reads input files once and remembers their digests."""

    def __init__(self) -> None:
        self.digests: Dict[str, str] = {}

    def load(self, path: str) -> dict:
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}")
        self.digests[os.path.basename(path)] = digest_bytes(raw)
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
        if not isinstance(data, dict):
            raise UsageError(f"{path}: $: expected a JSON object")
        if data.get("tool") == "cubesc" and isinstance(data.get("result"), dict):
            data = data["result"]
        return data


def unwrap_presentation(data: dict) -> CubicalPresentation:
    if "presentation" in data and isinstance(data["presentation"], dict):
        data = data["presentation"]
    try:
        return presentation_from_json(data)
    except PresentationError as exc:
        raise UsageError(str(exc))


def unwrap_complex(data: dict) -> dict:
    """The complex inside a salvetti build report, or the data itself."""
    if "complex" in data and isinstance(data["complex"], dict):
        return data["complex"]
    return data


def read_graph(inputs: Inputs, path: Optional[str]) -> LabeledGraph:
    if path is None:
        raise UsageError("--graph is required")
    data = inputs.load(path)
    try:
        return LabeledGraph.from_json(data)
    except (BuilderError, TypeError, ValueError, KeyError, IndexError) as exc:
        raise UsageError(f"{path}: $.edges: {exc}")


def report(command: str, params: dict, inputs: Inputs, result, seed: Optional[int] = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "cubesc",
        "version": __version__,
        "command": command,
        "params": params,
        "seed": seed,
        "inputs": dict(sorted(inputs.digests.items())),
        "result": result,
    }


def render_text(obj, indent: int = 0) -> str:
    """Plain-text rendering of a report; a pure function of the JSON."""
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(val, sort_keys=True)}")
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}-")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(val, sort_keys=True)}")
    else:
        lines.append(f"{pad}{json.dumps(obj, sort_keys=True)}")
    return "\n".join(lines)


# ----------------------------------------------------------------------
# subcommands; each returns (report, exit code)


def cmd_validate(args, inputs: Inputs):
    data = inputs.load(args.file)
    kind = args.kind
    if kind == "auto":
        if "base" in data or "presentation" in data:
            kind = "presentation"
        elif "cells" in data and "edges" in data:
            kind = "diagram"
        else:
            kind = "complex"
    problems: List[dict] = []
    if kind == "complex":
        try:
            X = CubeComplex.from_json(unwrap_complex(data))
        except (CubeComplexError, TypeError, ValueError, KeyError, IndexError) as exc:
            raise UsageError(f"{args.file}: $.cubes: {exc}")
        rep = validate_complex(X)
        problems = list(rep.violations)
        if rep.valid:
            problems += [{"kind": "not non-positively curved", "detail": v} for v in is_npc(X).violations]
        result = {"kind": "complex", "counts": list(X.counts()), "problems": problems}
    elif kind == "presentation":
        pres = unwrap_presentation(data)
        try:
            problems = pres.validate()
        except CubeComplexError as exc:
            problems = [{"kind": "invalid base", "detail": str(exc)}]
        result = {"kind": "presentation", "relators": len(pres.relators), "problems": problems}
    else:
        try:
            D = DiscDiagram.from_json(data)
        except (DiagramError, TypeError, ValueError, KeyError, IndexError) as exc:
            raise UsageError(f"{args.file}: {exc}")
        problems = [{"kind": p} for p in D.validate()]
        result = {"kind": "diagram", "cells": len(D.cells), "problems": problems}
    result["valid"] = not problems
    return report("validate", {"kind": kind}, inputs, result), (EXIT_OK if not problems else EXIT_REFUTED)


def cmd_build(args, inputs: Inputs):
    what = args.what
    params = {"what": what, "variant": args.variant, "radius": args.radius}
    try:
        if what == "salvetti":
            G = read_graph(inputs, args.graph)
            result = {"complex": salvetti(G).to_json(), "graph": G.to_json()}
        elif what == "artin":
            G = read_graph(inputs, args.graph)
            b = artin_presentation(G, args.variant or "truncated-cayley", args.radius)
            result = _bundle_json(b)
        elif what == "dyer":
            G = read_graph(inputs, args.graph)
            b = dyer_presentation(G, args.variant or "cycle", args.radius)
            result = _bundle_json(b)
        else:
            ex = counterexample_c8()
            result = _bundle_json(ex.bundle)
            result["diagram"] = ex.diagram.to_json()
    except BuilderError as exc:
        raise UsageError(str(exc))
    rep = report("build", params, inputs, result)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dumps(rep))
        return report("build", params, inputs, {"written": os.path.basename(args.output)}), EXIT_OK
    return rep, EXIT_OK


def _bundle_json(b) -> dict:
    return {
        "presentation": presentation_to_json(b.presentation),
        "provenance": b.provenance,
        "expected": b.expected,
    }


def cmd_pieces(args, inputs: Inputs):
    pres = unwrap_presentation(inputs.load(args.file))
    _require_valid(pres)
    rep = enumerate_pieces(pres, args.radius, max_cells=max_cells())
    result = {"pieces": [p.to_json() for p in rep.pieces], "skipped": rep.skipped, "count": len(rep.pieces)}
    return report("pieces", {"R": args.radius}, inputs, result), EXIT_OK


def _require_valid(pres: CubicalPresentation) -> None:
    problems = pres.validate()
    if problems:
        raise UsageError(f"invalid presentation: {problems[0]}")


def cmd_certify(args, inputs: Inputs):
    pres = unwrap_presentation(inputs.load(args.file))
    _require_valid(pres)
    pieces = enumerate_pieces(pres, args.radius, max_cells=max_cells())
    cert = certify_Cp(pres, args.p, R=args.radius, A=args.area, pieces=pieces)
    code = {"CERTIFIED": EXIT_OK, "REFUTED": EXIT_REFUTED}.get(cert.verdict, EXIT_INCONCLUSIVE)
    params = {"p": args.p, "R": args.radius, "A": args.area}
    return report("certify", params, inputs, cert.to_json()), code


def _decomposition(args, inputs: Inputs):
    pres = unwrap_presentation(inputs.load(args.file))
    _require_valid(pres)
    if any(r.truncated for r in pres.relators):
        raise UsageError("decomposition models need compact cones")
    if not (0 <= args.vertex < pres.base.n_vertices):
        raise UsageError(f"--vertex {args.vertex} is not a vertex of the base")
    model = develop_model(pres, args.vertex, args.radius, max_cells=max_cells())
    pieces = enumerate_pieces(pres, min(args.piece_radius, args.radius), max_cells=max_cells())
    dec = decompose(pres, model, pieces)
    return dec


def cmd_decompose(args, inputs: Inputs):
    dec = _decomposition(args, inputs)
    g = structure_graph(dec)
    N = nerve(dec, args.max_card)
    result = {
        "decomposition": dec.to_json(),
        "graph": g.to_json(),
        "nerve": N.to_json(),
        "skeleton_matches_graph": N.one_skeleton() == g.edges,
    }
    params = {"R": args.radius, "piece_R": args.piece_radius, "vertex": args.vertex, "max_card": args.max_card}
    ok = dec.covers and g.simplicial and result["skeleton_matches_graph"]
    return report("decompose", params, inputs, result), (EXIT_OK if ok else EXIT_REFUTED)


def cmd_order(args, inputs: Inputs):
    dec = _decomposition(args, inputs)
    g = structure_graph(dec)
    N = nerve(dec, args.max_card)
    v0 = args.v0
    if v0 is None:
        cones = dec.of_kind("cone")
        if not cones:
            raise UsageError("the model has no cone vertex to start from")
        v0 = cones[0]
    try:
        order = admissible_ordering(g, N, v0, args.tie_break, args.seed)
    except DecompositionError as exc:
        raise UsageError(str(exc))
    bad = order.monotonicity_violations(g)
    result = {"ordering": order.to_json(), "monotonicity_violations": [list(p) for p in bad]}
    params = {"R": args.radius, "piece_R": args.piece_radius, "vertex": args.vertex, "v0": v0,
              "tie_break": args.tie_break, "max_card": args.max_card}
    return report("order", params, inputs, result, seed=args.seed), (EXIT_OK if not bad else EXIT_REFUTED)


def cmd_homology(args, inputs: Inputs):
    data = inputs.load(args.file)
    if args.coned or "base" in data or "presentation" in data:
        pres = unwrap_presentation(data)
        _require_valid(pres)
        both = coned_homology(pres, both=True)
        result = both.to_json()
        code = EXIT_OK if both.agree else EXIT_REFUTED
        return report("homology", {"coned": True}, inputs, result), code
    try:
        X = CubeComplex.from_json(unwrap_complex(data))
    except (CubeComplexError, TypeError, ValueError, KeyError, IndexError) as exc:
        raise UsageError(f"{args.file}: $.cubes: {exc}")
    return report("homology", {"coned": False}, inputs, homology(chain_complex(X)).to_json()), EXIT_OK


def cmd_artin_verify(args, inputs: Inputs):
    G = read_graph(inputs, args.graph)
    rep = verify_direct_sum(G, args.nmax)
    return report("artin-verify", {"nmax": args.nmax}, inputs, rep.to_json()), (EXIT_OK if rep.ok else EXIT_REFUTED)


def cmd_diagram_check(args, inputs: Inputs):
    data = inputs.load(args.file)
    if "diagram" in data and isinstance(data["diagram"], dict):
        ddata = data["diagram"]
    else:
        ddata = data
    try:
        D = DiscDiagram.from_json(ddata)
    except (DiagramError, TypeError, ValueError, KeyError, IndexError) as exc:
        raise UsageError(f"{args.file}: {exc}")
    pres = None
    if args.presentation:
        pres = unwrap_presentation(inputs.load(args.presentation))
    elif "presentation" in data:
        pres = unwrap_presentation(data)
    problems = D.validate(pres)
    result: dict = {"problems": problems, "complexity": [complexity(D).cone_cells, complexity(D).squares]}
    if problems:
        return report("diagram-check", {"R": args.radius}, inputs, result), EXIT_REFUTED
    pieces = enumerate_pieces(pres, args.radius, max_cells=max_cells()) if pres is not None else None
    feats = detect_features(D, pres, pieces)
    result["features"] = [f.to_json() for f in feats]
    if pres is None or D.labels is None:
        result["classification"] = None
        return report("diagram-check", {"R": args.radius}, inputs, result), EXIT_INCONCLUSIVE
    result["reduced"] = is_reduced(D, pres, feats)
    if not result["reduced"]:
        result["classification"] = None
        return report("diagram-check", {"R": args.radius}, inputs, result), EXIT_INCONCLUSIVE
    cls = greendlinger_classify(D, pres, pieces)
    result["classification"] = cls.to_json()
    code = EXIT_REFUTED if cls.kind == "VIOLATION" else EXIT_OK
    return report("diagram-check", {"R": args.radius}, inputs, result), code


def cmd_corpus(args, inputs: Inputs):
    from .corpus import EXAMPLES, run_corpus

    if args.list:
        return report("corpus", {"list": True}, inputs, {"examples": [e.id for e in EXAMPLES]}), EXIT_OK
    res = run_corpus(only=args.only or None, p_override=args.p)
    code = EXIT_OK if res["ok"] else EXIT_REFUTED
    return report("corpus", {"only": args.only or [], "p": args.p}, inputs, res), code


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubesc", description="Cubical small-cancellation toolkit.")
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a complex, presentation or diagram file")
    s.add_argument("file")
    s.add_argument("--kind", choices=("auto", "complex", "presentation", "diagram"), default="auto")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("build", help="build Salvetti complexes and presentations")
    s.add_argument("what", choices=("salvetti", "artin", "dyer", "c8-example"))
    s.add_argument("--graph")
    s.add_argument("--variant")
    s.add_argument("--radius", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("pieces", help="enumerate pieces")
    s.add_argument("file")
    s.add_argument("--radius", type=int, default=2)
    s.set_defaults(func=cmd_pieces)

    s = sub.add_parser("certify", help="certify or refute C(p)")
    s.add_argument("file")
    s.add_argument("--p", type=int, default=9)
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--area", type=int, default=8)
    s.set_defaults(func=cmd_certify)

    for name, func in (("decompose", cmd_decompose), ("order", cmd_order)):
        s = sub.add_parser(name, help="three-way decomposition of a developed model" if name == "decompose"
                           else "admissible ordering of the structure graph")
        s.add_argument("file")
        s.add_argument("--radius", type=int, default=3)
        s.add_argument("--piece-radius", type=int, default=2)
        s.add_argument("--vertex", type=int, default=0)
        s.add_argument("--max-card", type=int, default=6)
        if name == "order":
            s.add_argument("--v0", type=int)
            s.add_argument("--tie-break", choices=TIE_BREAKS, default="lowest-id")
            s.add_argument("--seed", type=int, default=0)
        s.set_defaults(func=func)

    s = sub.add_parser("homology", help="integral homology of a complex or coned-off presentation")
    s.add_argument("file")
    s.add_argument("--coned", action="store_true")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("artin-verify", help="compare Artin group homology with its right-angled part")
    s.add_argument("--graph", required=True)
    s.add_argument("--nmax", type=int, default=5)
    s.set_defaults(func=cmd_artin_verify)

    s = sub.add_parser("diagram-check", help="validate, reduce-check and classify a disc diagram")
    s.add_argument("file")
    s.add_argument("--presentation")
    s.add_argument("--radius", type=int, default=2)
    s.set_defaults(func=cmd_diagram_check)

    s = sub.add_parser("corpus", help="run the golden examples")
    s.add_argument("--list", action="store_true")
    s.add_argument("--only", nargs="*")
    s.add_argument("--p", type=int, help="override the small-cancellation threshold (mutation checks)")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    inputs = Inputs()
    try:
        max_cells()
        rep, code = args.func(args, inputs)
    except UsageError as exc:
        sys.stderr.write(f"cubesc: error: {exc}\n")
        return EXIT_USAGE
    except (PresentationError, CubeComplexError, DecompositionError, DiagramError, HomologyError, BuilderError) as exc:
        sys.stderr.write(f"cubesc: error: {exc}\n")
        return EXIT_USAGE
    if args.format == "text":
        sys.stdout.write(render_text(rep) + "\n")
    else:
        sys.stdout.write(dumps(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
