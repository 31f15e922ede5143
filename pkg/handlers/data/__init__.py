from .ingest import ingest_command, add_ingest_parser
from .split import split_command, add_split_parser

__all__ = [
    'ingest_command',
    'add_ingest_parser',
    'split_command',
    'add_split_parser'
]
