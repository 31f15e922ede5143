import argparse
import logging

from analysis import (
    avg_id_length,
    cluster_size_histogram,
    extra_token_count,
    overlap_cooccurrence_correlation,
    tree_depth,
)
from corpus import build_cooccurrence_graph
from store import ArtifactStore
from tokenization import TokenRegistry
from utils import ConsoleManager

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def stats_command(args: argparse.Namespace) -> int:
    assignment = store.load_assignment(args.map)
    tree = store.load_tree(args.tree, TokenRegistry()) if args.tree else assignment.tree

    stats = {
        "scheme": assignment.scheme.value if assignment.scheme else None,
        "items": len(assignment),
        "avg_len": avg_id_length(assignment) if len(assignment) else 0.0,
        "extra_tokens": extra_token_count(assignment),
        "rho": None,
        "rho_degenerate": None,
        "histogram": {str(size): count for size, count in cluster_size_histogram(tree).items()},
        "depth": tree_depth(tree),
    }

    if args.graph:
        _, split = store.load_corpus_and_split(args.graph)
        correlation = overlap_cooccurrence_correlation(assignment, build_cooccurrence_graph(split))
        stats["rho"] = correlation.rho
        stats["rho_degenerate"] = correlation.degenerate

    console.emit_json(stats)
    return 0


def add_stats_parser(subparsers) -> None:
    parser = subparsers.add_parser("stats", help="Length, prefix and correlation metrics of an ID map")
    parser.add_argument("--map", required=True, help="ID map TSV")
    parser.add_argument("--graph", help="Corpus directory whose co-occurrence graph is correlated")
    parser.add_argument("--tree", help="Tree JSON (defaults to the map's sidecar)")
    parser.set_defaults(handler=stats_command)
