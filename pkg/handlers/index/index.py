import argparse
import logging
from typing import Dict, Optional

import config
from analysis import avg_id_length, extra_token_count
from corpus import Corpus, SplitCorpus, build_cooccurrence_graph
from errors import UsageError
from helper_func import derive_seed
from indexing import (
    IndexAssignment,
    compose_hid,
    index_cid,
    index_iid,
    index_rid,
    index_semid,
    index_sid,
    index_tid,
    required_parts,
)
from store import ArtifactStore
from tokenization import SegmenterModel, load_unigram_model
from utils import ConsoleManager, format_count, parse_params, timed

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def needs_tokenizer(scheme: str, params: Dict[str, object]) -> bool:
    if scheme == "hid":
        return "sid" in required_parts(params["variant"])
    return scheme in config.TOKENIZER_SCHEMES


def build_assignment(
    scheme: str,
    params: Dict[str, object],
    corpus: Corpus,
    split: SplitCorpus,
    model: Optional[SegmenterModel],
    seed: int,
) -> IndexAssignment:
    """One scheme over the corpus; sub-seeds are derived from ``seed`` per consumer."""
    if scheme == "rid":
        return index_rid(corpus.items, derive_seed(seed, "rid"), model)
    if scheme == "tid":
        return index_tid(corpus.items, corpus.metadata, model)
    if scheme == "iid":
        return index_iid(corpus.items)
    if scheme == "sid":
        return index_sid(split, params.get("ordering", "TSO"), model, derive_seed(seed, "ro"))
    if scheme == "cid":
        graph = build_cooccurrence_graph(split)
        N = params.get("N", config.CID_N)
        k = params.get("k", config.CID_K)
        return index_cid(graph, N, k, derive_seed(seed, "kmeans"))
    if scheme == "semid":
        return index_semid(corpus.items, corpus.metadata, params.get("mode", "tree"))
    if scheme == "hid":
        variant = params["variant"]
        parts = {name: build_assignment(name, params, corpus, split, model, seed) for name in required_parts(variant)}
        return compose_hid(variant, parts, order=params.get("order", config.HID_ORDERS[0]))
    raise UsageError(f"Unknown scheme {scheme!r}; choose from {', '.join(config.SCHEMES)}")


def index_command(args: argparse.Namespace) -> int:
    scheme = args.scheme.lower()
    params = parse_params(args.params, scheme)
    if scheme == "hid" and "variant" not in params:
        raise UsageError(f"Scheme hid needs variant=... ({', '.join(config.HID_VARIANTS)})")
    if needs_tokenizer(scheme, params) and not args.tokenizer:
        raise UsageError(f"Scheme {scheme} segments plain-text IDs and needs --tokenizer")

    seed = config.DEFAULT_SEED if args.seed is None else args.seed
    with timed() as watch:
        model = load_unigram_model(args.tokenizer) if args.tokenizer else None
        corpus, split = store.load_corpus_and_split(args.corpus)
        assignment = build_assignment(scheme, params, corpus, split, model, seed)
        if "seed" in assignment.params:
            assignment.params["seed"] = seed
        store.save_assignment(assignment, args.out)

    logger.info(f"Indexed {format_count(len(assignment))} items with {scheme} in {watch}")
    console.show_panel(
        config.Messages.INDEX_TEXT,
        scheme=scheme,
        items=format_count(len(assignment)),
        avg_len=avg_id_length(assignment) if len(assignment) else 0.0,
        extra_tokens=format_count(extra_token_count(assignment)),
        elapsed=str(watch),
        path=args.out,
    )
    return 0


def add_index_parser(subparsers) -> None:
    parser = subparsers.add_parser("index", help="Assign item IDs with one indexing scheme")
    parser.add_argument("--corpus", required=True, help="Corpus directory")
    parser.add_argument("--scheme", required=True, help=f"One of {', '.join(config.SCHEMES)}")
    parser.add_argument("--params", action="append", default=[], help="KEY=VAL pairs, comma-separated or repeated")
    parser.add_argument("--seed", type=int, help=f"Run seed (default {config.DEFAULT_SEED})")
    parser.add_argument("--tokenizer", help="Unigram piece table: piece<TAB>score")
    parser.add_argument("--out", required=True, help="Output map TSV")
    parser.set_defaults(handler=index_command)
