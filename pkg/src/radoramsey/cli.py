"""Batch front-end: one subcommand per library operation, reproducible output.

Exit codes: 0 success / certificate valid; 1 semantic negative (not similar,
not found, verification failed); 2 input error; 3 budget exceeded.  JSON
output is byte-stable: sorted keys, compact separators, schema version field,
nodes as bitstrings.  Timestamps never enter the primary output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import degrees as degrees_mod
from . import ramsey_space as space
from .core import Node
from .errors import (BudgetError, ContextError, DepthError, DomainError,
                     RadoRamseyError, StructureError)
from .ordinals import OrdinalCNF
from .rado import (FiniteGraph, decode_graph, build_SR, graph_from_name,
                   oracle_from_spec, tree_of_subgraph)
from .similarity import (SimKind, are_strongly_similar, canonical_form,
                         is_strongly_diagonal)
from .trees import CodingTree, FiniteApprox, meet_closure

SCHEMA = 1

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _emit(args, payload: dict | str) -> None:
    if isinstance(payload, dict):
        payload.setdefault("schema", SCHEMA)
        text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = payload if payload.endswith("\n") else payload + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_nodes(text: str) -> list:
    if not text:
        return []
    return [Node.from_text(part) for part in text.split(",") if part.strip() != ""]


def _read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _read_tree(path: str) -> CodingTree:
    return CodingTree.from_json_dict(_read_json(path))


def _graph_arg(spec: str) -> FiniteGraph:
    if spec.startswith("name:"):
        return graph_from_name(spec[5:])
    if spec.startswith("g6:"):
        return FiniteGraph.from_graph6(spec[3:])
    if spec.startswith("file:"):
        with open(spec[5:], "r", encoding="ascii") as fh:
            return FiniteGraph.from_graph6(fh.read())
    raise DomainError(f"bad graph spec {spec!r}; use name:, g6: or file:")


def _kind(mode: str) -> SimKind:
    return SimKind.FULL if mode == "full" else SimKind.ORDER_ONLY


def _tree_dot(tree: CodingTree) -> str:
    """Deterministic DOT export: coding nodes double-circled, edges between
    consecutive levels."""
    lines = ["digraph codingtree {", "  rankdir=TB;"]
    coding = set(tree.coding)
    ordered = sorted(tree.nodes, key=lambda v: (v.len, v.lex_key()))
    for v in ordered:
        name = v.text() or "e"
        shape = "doublecircle" if v in coding else "circle"
        lines.append(f'  "{name}" [shape={shape}];')
    levels = list(tree.levels)
    for i in range(1, len(levels)):
        lower = levels[i - 1]
        for v in ordered:
            if v.len == levels[i]:
                from .core import restrict

                parent = restrict(v, lower)
                lines.append(f'  "{parent.text() or "e"}" -> "{v.text() or "e"}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_build_tree(args) -> int:
    oracle = oracle_from_spec(args.oracle)
    tree = build_SR(oracle, args.depth)
    if args.format == "dot":
        _emit(args, _tree_dot(tree))
    else:
        doc = tree.to_json_dict()
        doc["schema"] = SCHEMA
        _emit(args, doc)
    return EXIT_OK


def cmd_decode(args) -> int:
    tree = _read_tree(args.tree)
    graph = decode_graph(tree)
    _emit(args, {"n": graph.n, "graph6": graph.to_graph6(),
                 "edges": sorted(graph.edges())})
    return EXIT_OK


def cmd_canon(args) -> int:
    nodes = meet_closure(_parse_nodes(args.nodes)) if args.close else frozenset(_parse_nodes(args.nodes))
    coding = _parse_nodes(args.coding) if args.coding is not None else None
    members = _parse_nodes(args.members) if args.members is not None else None
    form = canonical_form(nodes, coding=coding, members=members, kind=_kind(args.mode))
    _emit(args, {"form": form.to_json(), "digest": form.digest()})
    return EXIT_OK


def cmd_similar(args) -> int:
    ok = are_strongly_similar(
        _parse_nodes(args.left), _parse_nodes(args.right), _kind(args.mode))
    _emit(args, {"similar": ok})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_diagonal(args) -> int:
    ok = is_strongly_diagonal(_parse_nodes(args.nodes))
    _emit(args, {"diagonal": ok})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_types(args) -> int:
    catalog = degrees_mod.enumerate_diagonal_types(
        args.n, _kind(args.mode), workers=args.workers)
    _emit(args, catalog.to_json(include_witnesses=args.witness))
    return EXIT_OK


def cmd_degrees(args) -> int:
    graph = _graph_arg(args.graph)
    report = degrees_mod.big_ramsey_degree(graph, workers=args.workers)
    doc = report.to_json()
    if not args.ordered:
        doc.pop("ordered")
    _emit(args, doc)
    return EXIT_OK


def cmd_devlin(args) -> int:
    _emit(args, {"count": degrees_mod.devlin_count(args.n, workers=args.workers)})
    return EXIT_OK


def cmd_witness(args) -> int:
    catalog = degrees_mod.enumerate_diagonal_types(
        args.n, _kind(args.mode), workers=args.workers)
    if args.digest not in catalog.entries:
        raise DomainError(f"digest {args.digest!r} not in the n={args.n} catalog")
    form = catalog.entries[args.digest][0]
    if args.coding_aware:
        witness = degrees_mod.realize_coding_witness(
            form, oracle_from_spec(args.oracle), args.depth)
    else:
        witness = degrees_mod.realize_witness(form, args.depth)
    if witness is None:
        _emit(args, {"found": False, "depth": args.depth})
        return EXIT_NEGATIVE
    _emit(args, {"found": True, "witness": [v.text() for v in witness]})
    return EXIT_OK


def _load_family(path: str) -> list:
    doc = _read_json(path)
    members = doc["members"] if isinstance(doc, dict) else doc
    return [FiniteApprox.from_tree(CodingTree.from_json_dict(d)) for d in members]


def cmd_fronts(args) -> int:
    ctx = space.ExtensionContext.from_json(_read_json(args.context))
    family = _load_family(args.family)
    verdict = space.is_front(family, ctx, args.depth)
    _emit(args, {"verdict": verdict.value})
    return EXIT_OK if verdict is not space.FrontVerdict.FALSE else EXIT_NEGATIVE


def cmd_rank(args) -> int:
    if args.cylinder is not None:
        value = OrdinalCNF.omega_power(args.cylinder) if args.cylinder else OrdinalCNF.from_int(1)
        _emit(args, {"rank": str(value), "cnf": value.to_json()})
        return EXIT_OK
    family = _load_family(args.family)
    value = space.rank(family)
    _emit(args, {"rank": str(value), "cnf": value.to_json()})
    return EXIT_OK


def cmd_hl_search(args) -> int:
    ctx = space.ExtensionContext.from_json(_read_json(args.context))
    coloring = space.coloring_from_spec(args.coloring)
    cert = space.search_monochromatic(ctx, coloring, args.targets, args.budget)
    if cert is None:
        _emit(args, {"found": False, "budget": args.budget, "targets": args.targets})
        return EXIT_NEGATIVE
    doc = cert.to_json()
    doc["found"] = True
    _emit(args, doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = space.Certificate.from_json(_read_json(args.certificate))
    coloring = space.coloring_from_spec(args.coloring)
    result = space.verify_certificate(cert, coloring)
    _emit(args, {"valid": result.ok, "problems": result.problems})
    return EXIT_OK if result.ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radoramsey",
        description="Coding-tree combinatorics of the Rado graph")
    parser.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallelism cap for enumerations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-tree", help="standard coding tree truncation")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--oracle", default="bit")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_build_tree)

    p = sub.add_parser("decode", help="graph represented by a tree's coding nodes")
    p.add_argument("--tree", default="-", help="tree JSON path or - for stdin")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("canon", help="canonical form of a meet-closed node set")
    p.add_argument("--nodes", required=True, help="comma-separated bitstrings (e = root)")
    p.add_argument("--coding", default=None)
    p.add_argument("--members", default=None)
    p.add_argument("--mode", choices=("full", "order"), default="full")
    p.add_argument("--close", action="store_true",
                   help="meet-close the input before canonicalizing")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("similar", help="strong similarity of two node sets")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--mode", choices=("full", "order"), default="full")
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("diagonal", help="strongly diagonal antichain test")
    p.add_argument("--nodes", required=True)
    p.set_defaults(func=cmd_diagonal)

    p = sub.add_parser("types", help="catalog of diagonal similarity types")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("full", "order"), default="full")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_types)

    p = sub.add_parser("degrees", help="big Ramsey degree of a finite graph")
    p.add_argument("--graph", required=True, help="name:K2 | g6:... | file:path")
    p.add_argument("--ordered", action="store_true",
                   help="include the per-ordered-copy breakdown")
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("devlin", help="order-only type count (rational order)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_devlin)

    p = sub.add_parser("witness", help="realize a witness antichain for a type")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("full", "order"), default="full")
    p.add_argument("--digest", required=True)
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--coding-aware", action="store_true")
    p.add_argument("--oracle", default="bit")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("fronts", help="front verdict for a family on a context")
    p.add_argument("--context", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_fronts)

    p = sub.add_parser("rank", help="rank of an explicit family, or a cylinder rank")
    p.add_argument("--family", default=None)
    p.add_argument("--cylinder", type=int, default=None,
                   help="report the symbolic rank w^n instead")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("hl-search", help="monochromatization certificate search")
    p.add_argument("--context", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--targets", type=int, default=1)
    p.add_argument("--budget", type=int, required=True)
    p.set_defaults(func=cmd_hl_search)

    p = sub.add_parser("verify", help="replay and check a certificate")
    p.add_argument("--certificate", required=True)
    p.add_argument("--coloring", required=True)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "rank" and args.family is None and args.cylinder is None:
        parser.error("rank needs --family or --cylinder")
    try:
        return args.func(args)
    except BudgetError as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, DepthError, StructureError, ContextError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
