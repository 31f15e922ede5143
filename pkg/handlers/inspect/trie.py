import argparse
import logging

from store import ArtifactStore
from trie import END_OF_ID, allowed_next, build_trie, lookup
from utils import ConsoleManager

logger = logging.getLogger(__name__)
store = ArtifactStore()
console = ConsoleManager()


def trie_command(args: argparse.Namespace) -> int:
    assignment = store.load_assignment(args.map, with_tree=False)
    trie = build_trie(assignment)
    prefix = tuple(assignment.registry.parse(token) for token in (args.prefix or "").split())

    if args.lookup:
        item = lookup(trie, prefix)
        console.emit_lines([item] if item is not None else [])
        return 0 if item is not None else 1

    allowed = allowed_next(trie, prefix)
    tokens = sorted(token.render() for token in allowed if token is not END_OF_ID)
    if END_OF_ID in allowed:
        tokens.append(str(END_OF_ID))
    console.emit_lines(tokens)
    return 0


def add_trie_parser(subparsers) -> None:
    parser = subparsers.add_parser("trie", help="Allowed next tokens after an ID prefix")
    parser.add_argument("--map", required=True, help="ID map TSV")
    parser.add_argument("--prefix", default="", help='Space-separated tokens, e.g. "<1> <9>"')
    parser.add_argument("--lookup", action="store_true", help="Print the item whose ID is exactly the prefix")
    parser.set_defaults(handler=trie_command)
