import json
import logging
import sys
from typing import Iterable

from rich.console import Console
from rich.markdown import Markdown
from rich.panel import Panel
from rich.table import Table

import config
from errors import ConstraintError, IndexingError, UsageError

logger = logging.getLogger(__name__)


class ConsoleManager:
    """Status panels on stderr; machine-readable results on stdout."""

    def __init__(self, console: Console = None):
        self.console = console or Console(stderr=True)

    def show_panel(self, template: str, title: str = None, **values) -> None:
        self.console.print(Panel(Markdown(template.format(**values).strip()), title=title, expand=False))

    def show_table(self, title: str, rows: Iterable[dict]) -> None:
        rows = list(rows)
        if not rows:
            return
        table = Table(title=title)
        for column in rows[0]:
            table.add_column(str(column))
        for row in rows:
            table.add_row(*(f"{value:.2f}" if isinstance(value, float) else str(value) for value in row.values()))
        self.console.print(table)

    def show_error(self, error: IndexingError) -> None:
        if isinstance(error, UsageError):
            text = config.Messages.USAGE_ERROR_TEXT.format(reason=str(error))
        elif isinstance(error, ConstraintError):
            text = config.Messages.CONSTRAINT_ERROR_TEXT.format(reason=str(error))
        else:
            text = config.Messages.FAILURE_TEXT.format(kind=error.kind, reason=str(error))
        self.console.print(Panel(Markdown(text.strip()), border_style="red", expand=False))

    def emit_json(self, data) -> None:
        sys.stdout.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")

    def emit_lines(self, lines: Iterable[str]) -> None:
        for line in lines:
            sys.stdout.write(f"{line}\n")


def exit_code(error: IndexingError) -> int:
    if isinstance(error, UsageError):
        return 2
    if isinstance(error, ConstraintError):
        return 3
    return 1
