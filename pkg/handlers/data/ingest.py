import argparse
import logging

import config
from corpus import attach_metadata, filter_time_window, load_interactions, load_metadata
from errors import EmptyCorpusError
from store import ArtifactStore
from utils import ConsoleManager, format_count, format_span, timed

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def ingest_command(args: argparse.Namespace) -> int:
    with timed() as watch:
        corpus = load_interactions(args.interactions)
        if args.since or args.until:
            corpus = filter_time_window(corpus, args.since, args.until)
            if not corpus.users:
                raise EmptyCorpusError(args.interactions)
        if args.meta:
            corpus = attach_metadata(corpus, load_metadata(args.meta))
        path = store.save_corpus(corpus, args.out)

    summary = store.summary(corpus)
    logger.info(f"Ingest finished in {watch}")
    console.show_panel(
        config.Messages.INGEST_TEXT,
        users=format_count(summary["users"]),
        items=format_count(summary["items"]),
        interactions=format_count(summary["interactions"]),
        sparsity=summary["sparsity_pct"],
        first=summary["first_interaction"],
        last=summary["last_interaction"],
        span=format_span(summary["span_seconds"]),
        path=path,
    )
    return 0


def add_ingest_parser(subparsers) -> None:
    parser = subparsers.add_parser("ingest", help="Load interactions (and metadata) into a corpus archive")
    parser.add_argument("--interactions", required=True, help="TSV file: user<TAB>item<TAB>timestamp")
    parser.add_argument("--meta", help="JSON-lines item metadata")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--since", help="Keep interactions from this UTC date (YYYY-MM-DD)")
    parser.add_argument("--until", help="Keep interactions up to this UTC date, inclusive")
    parser.set_defaults(handler=ingest_command)
