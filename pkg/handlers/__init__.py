from .data import ingest_command, add_ingest_parser, split_command, add_split_parser
from .index import index_command, add_index_parser, sweep_command, add_sweep_parser
from .inspect import (
    stats_command,
    add_stats_parser,
    verify_command,
    add_verify_parser,
    trie_command,
    add_trie_parser,
)

# subcommand registration order is the order shown by --help
PARSERS = [
    add_ingest_parser,
    add_split_parser,
    add_index_parser,
    add_stats_parser,
    add_verify_parser,
    add_trie_parser,
    add_sweep_parser,
]

__all__ = [
    'PARSERS',
    'ingest_command',
    'split_command',
    'index_command',
    'sweep_command',
    'stats_command',
    'verify_command',
    'trie_command'
]
