import argparse
import logging

import config
from store import ArtifactStore
from trie import verify_assignment
from utils import ConsoleManager, format_count

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def verify_command(args: argparse.Namespace) -> int:
    assignment = store.load_assignment(args.map, with_tree=False)
    report = verify_assignment(None, assignment)

    if report.unique:
        console.show_panel(
            config.Messages.VERIFY_OK_TEXT,
            items=format_count(report.items),
            prefix_free=report.prefix_free,
        )
    else:
        console.show_panel(
            config.Messages.VERIFY_FAIL_TEXT,
            collisions=format_count(len(report.collisions)),
            items=format_count(report.items),
        )
    console.emit_json(report.to_dict())
    return 0 if report.unique else 1


def add_verify_parser(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Check an ID map for duplicates and prefix pairs")
    parser.add_argument("--map", required=True, help="ID map TSV")
    parser.set_defaults(handler=verify_command)
