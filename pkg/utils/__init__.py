from .console_manager import ConsoleManager, exit_code
from .progress import format_count, format_elapsed, format_span, timed
from .param_check import parse_params, parse_int_list

__all__ = [
    'ConsoleManager',
    'exit_code',
    'format_count',
    'format_elapsed',
    'format_span',
    'timed',
    'parse_params',
    'parse_int_list'
]
