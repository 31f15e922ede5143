import argparse
import logging

import config
from analysis import length_sweep
from corpus import build_cooccurrence_graph
from helper_func import derive_seed
from store import ArtifactStore
from utils import ConsoleManager, parse_int_list

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def sweep_command(args: argparse.Namespace) -> int:
    Ns = parse_int_list(args.N, "--N")
    ks = parse_int_list(args.k, "--k")
    seed = config.DEFAULT_SEED if args.seed is None else args.seed

    _, split = store.load_corpus_and_split(args.corpus)
    rows = length_sweep(build_cooccurrence_graph(split), Ns, ks, derive_seed(seed, "kmeans"))
    console.show_table("CID length sweep", rows)
    console.emit_json(rows)
    return 0


def add_sweep_parser(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="Average CID ID length over an (N, k) grid")
    parser.add_argument("--corpus", required=True, help="Corpus directory")
    parser.add_argument("--N", default=str(config.CID_N), help="Comma-separated branching factors")
    parser.add_argument("--k", default=str(config.CID_K), help="Comma-separated final cluster sizes")
    parser.add_argument("--seed", type=int, help=f"Run seed (default {config.DEFAULT_SEED})")
    parser.set_defaults(handler=sweep_command)
