from .stats import stats_command, add_stats_parser
from .verify import verify_command, add_verify_parser
from .trie import trie_command, add_trie_parser

__all__ = [
    'stats_command',
    'add_stats_parser',
    'verify_command',
    'add_verify_parser',
    'trie_command',
    'add_trie_parser'
]
