from .index import index_command, add_index_parser, build_assignment
from .sweep import sweep_command, add_sweep_parser

__all__ = [
    'index_command',
    'add_index_parser',
    'build_assignment',
    'sweep_command',
    'add_sweep_parser'
]
