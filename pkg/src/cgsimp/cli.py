"""Command-line entry points: batch simplification, depth statistics, server.

Exit codes: 1 I/O failure, 2 parse failure, 3 semantic failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import GraphError, GraphSyntaxError, SchemaError, SemanticError
from .layout import LayoutParams
from .session import Session, SessionOptions
from .svg import render_svg
from .ingest import parse_graph_file

EXIT_IO = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3


def _load_session(args) -> Session:
    try:
        with open(args.input, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    try:
        raw = parse_graph_file(data)
    except (GraphSyntaxError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    options = SessionOptions(
        cgm=args.cgm,
        stacking=not args.no_stacking,
        module_threshold=args.threshold,
        min_repeat=args.min_repeat,
    )
    try:
        session = Session(raw, options)
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_SEMANTIC)
    return session


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="GraphFile JSON path")
    parser.add_argument("--cgm", action="store_true", help="concept graph mode (cycle removal + layer classes)")
    parser.add_argument("--no-stacking", action="store_true", help="disable isomorphic subgraph stacking")
    parser.add_argument("--threshold", type=int, default=20, help="module descendant threshold (default 20)")
    parser.add_argument("--min-repeat", type=int, default=2, help="minimum pile size (default 2)")


def cmd_simplify(args) -> int:
    session = _load_session(args)
    try:
        session.expand_to_depth(args.depth)
        visible = session.derive_visible()
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    payload = visible.to_json()
    if args.report and session.report is not None:
        payload["cycle_report"] = session.report.to_json()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=1)
                fh.write("\n")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.svg:
        result = session.layout(LayoutParams(flow=args.flow))
        try:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(render_svg(visible, result, scale=args.scale))
        except OSError as exc:
            print(f"error: cannot write {args.svg}: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.stats:
        _print_stats(session, args.depth)
    if not args.out and not args.svg and not args.stats:
        json.dump(payload, sys.stdout, indent=1)
        sys.stdout.write("\n")
    return 0


def _print_stats(session: Session, max_depth: int) -> None:
    rows = session.stats_by_depth(max_depth)
    print("depth,raw_nodes,raw_edges,vis_nodes,vis_edges,reduction_pct")
    for r in rows:
        print(
            f"{r['depth']},{r['raw_nodes']},{r['raw_edges']},{r['vis_nodes']},{r['vis_edges']},{r['reduction_pct']}"
        )


def cmd_stats(args) -> int:
    session = _load_session(args)
    _print_stats(session, args.max_depth)
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    try:
        serve(args.graphs, host=args.host, port=args.port)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cgsimp", description="computational-graph simplification engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p_simplify = sub.add_parser("simplify", help="derive the simplified visible graph at a given depth")
    _add_common(p_simplify)
    p_simplify.add_argument("--depth", type=int, default=1, help="expansion depth (default 1)")
    p_simplify.add_argument("--out", help="write visible-graph JSON here")
    p_simplify.add_argument("--svg", help="write an SVG rendering here")
    p_simplify.add_argument("--scale", type=float, default=1.0, help="SVG scale factor")
    p_simplify.add_argument("--flow", choices=["left-right", "top-down"], default="left-right")
    p_simplify.add_argument("--stats", action="store_true", help="also print the depth-stats CSV")
    p_simplify.add_argument("--report", action="store_true", help="include the cycle report in the JSON output")
    p_simplify.set_defaults(func=cmd_simplify)

    p_stats = sub.add_parser("stats", help="per-depth element counts, CSV on stdout")
    _add_common(p_stats)
    p_stats.add_argument("--max-depth", type=int, default=3)
    p_stats.set_defaults(func=cmd_stats)

    p_serve = sub.add_parser("serve", help="HTTP+JSON session service")
    p_serve.add_argument("--graphs", required=True, help="directory of GraphFile JSON documents")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=None, help="default: $CGS_PORT or 8321")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
