import argparse
import logging
import sys
from typing import List, Optional

import config
from errors import IndexingError
from handlers import PARSERS
from utils import ConsoleManager, exit_code

logger = logging.getLogger(__name__)


class IndexingToolkit:
    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="main.py",
            description="Deterministic item indexing for generative recommendation",
        )
        subparsers = self.parser.add_subparsers(dest="command", required=True)
        for add_parser in PARSERS:
            add_parser(subparsers)
        self.console = ConsoleManager()

    def run(self, argv: Optional[List[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        try:
            return args.handler(args)
        except IndexingError as e:
            logger.debug(f"{args.command} failed", exc_info=True)
            self.console.show_error(e)
            return exit_code(e)
        except OSError as e:
            logger.error(f"{args.command} failed: {str(e)}")
            self.console.console.print(config.Messages.FAILURE_TEXT.format(kind="I/O error", reason=str(e)))
            return 1


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=config.LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    return IndexingToolkit().run(argv)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Stopped by user!")
        sys.exit(130)
