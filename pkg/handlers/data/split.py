import argparse
import logging

import config
from corpus import leave_one_out_split
from store import ArtifactStore
from utils import ConsoleManager, format_count

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def split_command(args: argparse.Namespace) -> int:
    corpus = store.load_corpus(args.corpus)
    split = leave_one_out_split(corpus)
    path = store.save_split(split, args.out or args.corpus)

    evaluated = len(split.test_target)
    console.show_panel(
        config.Messages.SPLIT_TEXT,
        evaluated=format_count(evaluated),
        train_only=format_count(len(split.users) - evaluated),
        train_interactions=format_count(sum(len(seq) for seq in split.train.values())),
        path=path,
    )
    return 0


def add_split_parser(subparsers) -> None:
    parser = subparsers.add_parser("split", help="Leave-one-out split of a corpus archive")
    parser.add_argument("--corpus", required=True, help="Corpus directory")
    parser.add_argument("--out", help="Output directory (defaults to the corpus directory)")
    parser.set_defaults(handler=split_command)
