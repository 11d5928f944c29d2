"""Command-line entry point.

Subcommands:
  ingest    parse per-year CSVs into a graph and write the exchange files
  generate  emit a synthetic dataset (CSV per year + ingest config)
  serve     launch the HTTP API over one or more datasets
  export    read exchange files and rewrite them canonically
  import    validate exchange files and print a summary

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys

from yeargraph import __version__
from yeargraph.config import load_config
from yeargraph.errors import YeargraphError
from yeargraph.exchange import export_pg, import_pg
from yeargraph.ingest import ingest_files
from yeargraph.service import DEFAULT_SESSION_TTL, create_app
from yeargraph.synth import generate_dataset, load_spec


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1 (argparse default is 2)
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="yeargraph", description=__doc__.split("\n", 1)[0])
    parser.add_argument("--version", action="version", version=f"yeargraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="convert per-year CSVs into exchange-format files")
    p.add_argument("--config", required=True, help="ingest config (YAML)")
    p.add_argument("--out", required=True, help="output graph prefix")
    p.add_argument("inputs", nargs="+", help="input CSV files")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("--spec", required=True, help="synthetic dataset spec (YAML)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="serve datasets over HTTP")
    p.add_argument(
        "--listen",
        default=os.environ.get("YEARGRAPH_LISTEN", "127.0.0.1:8000"),
        help="host:port to bind (env YEARGRAPH_LISTEN)",
    )
    p.add_argument(
        "--dataset-dir",
        default=os.environ.get("YEARGRAPH_DATASET_DIR"),
        help="directory of <name>.nodes.tsv/<name>.edges.tsv pairs (env YEARGRAPH_DATASET_DIR)",
    )
    p.add_argument("--config", help="ingest config for serving CSVs directly")
    p.add_argument("--dataset", default="dataset", help="dataset id when serving CSVs")
    p.add_argument(
        "--static",
        default=os.environ.get("YEARGRAPH_STATIC"),
        help="directory of frontend assets to serve at / (env YEARGRAPH_STATIC)",
    )
    p.add_argument(
        "--session-ttl",
        type=float,
        default=float(os.environ.get("YEARGRAPH_SESSION_TTL", DEFAULT_SESSION_TTL)),
        help="idle seconds before a layout session expires (env YEARGRAPH_SESSION_TTL)",
    )
    p.add_argument("inputs", nargs="*", help="input CSV files (with --config)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="round-trip exchange files through the store")
    p.add_argument("--graph", required=True, help="input graph prefix")
    p.add_argument("--out", required=True, help="output graph prefix")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import", help="validate exchange files")
    p.add_argument("--graph", required=True, help="graph prefix")
    p.set_defaults(func=cmd_import)

    return parser


def _print_summary(summary) -> None:
    print(f"files: {summary.files}")
    print(f"rows: {summary.rows}")
    print(f"applicant nodes: {summary.applicant_nodes}")
    print(f"attribute nodes: {summary.attribute_nodes}")
    print(f"edges: {summary.edges}")
    print(f"warnings: {len(summary.warnings)}")
    for w in summary.warnings:
        print(f"  {w}")


def cmd_ingest(args) -> int:
    config = load_config(args.config)
    graph, summary = ingest_files(args.inputs, config)
    nodes_path, edges_path = export_pg(graph, args.out)
    _print_summary(summary)
    print(f"wrote {nodes_path} and {edges_path}")
    return 0


def cmd_generate(args) -> int:
    spec = load_spec(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    paths, config_path = generate_dataset(spec, args.out)
    for path in paths:
        print(f"wrote {path}")
    print(f"wrote {config_path}")
    return 0


def _load_datasets(args) -> dict:
    datasets = {}
    if args.dataset_dir:
        pattern = os.path.join(args.dataset_dir, "*.nodes.tsv")
        for nodes_path in sorted(glob.glob(pattern)):
            prefix = nodes_path[: -len(".nodes.tsv")]
            datasets[os.path.basename(prefix)] = import_pg(prefix)
    if args.config:
        if not args.inputs:
            raise YeargraphError("serving with --config requires input CSV files")
        config = load_config(args.config)
        graph, _summary = ingest_files(args.inputs, config)
        datasets[args.dataset] = graph
    if not datasets:
        raise YeargraphError("no datasets: pass --dataset-dir or --config with CSV inputs")
    return datasets


def cmd_serve(args) -> int:
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise YeargraphError(f"--listen must be host:port, got {args.listen!r}")
    datasets = _load_datasets(args)
    app = create_app(datasets, session_ttl=args.session_ttl, static_dir=args.static)
    for did, graph in sorted(datasets.items()):
        print(f"dataset {did}: {graph.node_count} nodes, {graph.edge_count} edges")

    import uvicorn

    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return 0


def cmd_export(args) -> int:
    graph = import_pg(args.graph)
    nodes_path, edges_path = export_pg(graph, args.out)
    print(f"wrote {nodes_path} and {edges_path}")
    return 0


def cmd_import(args) -> int:
    graph = import_pg(args.graph)
    applicants = sum(1 for n in graph.nodes() if n.kind == "applicant")
    print(f"nodes: {graph.node_count} ({applicants} applicants)")
    print(f"edges: {graph.edge_count}")
    print(f"years: {', '.join(str(y) for y in graph.list_years()) or '-'}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits itself for usage errors / --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except YeargraphError as exc:
        print(f"yeargraph: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"yeargraph: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
