from typing import List, Optional, Sequence, Tuple


class IndexingError(Exception):
    """Base class for every error raised by the toolkit."""

    kind = "Error"


class ParseError(IndexingError):
    kind = "Parse error"

    def __init__(self, path: str, line_no: int, reason: str):
        self.path = path
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{path}:{line_no}: {reason}")


class EmptyCorpusError(IndexingError):
    kind = "Empty corpus"

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"No interactions found in {path}")


class ArgumentError(IndexingError):
    kind = "Invalid argument"


class UsageError(IndexingError):
    kind = "Usage error"


class ConstraintError(IndexingError):
    kind = "Constraint violated"


class StructureError(IndexingError):
    kind = "Structure error"


class CoverageError(IndexingError):
    kind = "Coverage error"

    def __init__(self, text: str, position: int):
        self.text = text
        self.position = position
        char = text[position] if position < len(text) else ""
        super().__init__(f"No piece covers {char!r} at position {position} of {text!r}")


class ConvergenceError(IndexingError):
    kind = "Eigensolver did not converge"

    def __init__(self, residual: float, iterations: Optional[int] = None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"Eigensolver stopped with residual {residual:.3e}"
            + (f" after {iterations} iterations" if iterations is not None else "")
        )


class MissingTitleError(IndexingError):
    kind = "Missing title"

    def __init__(self, items: Sequence[str]):
        self.items = list(items)
        preview = ", ".join(self.items[:10])
        more = f" (+{len(self.items) - 10} more)" if len(self.items) > 10 else ""
        super().__init__(f"{len(self.items)} item(s) have no title: {preview}{more}")


class ItemSetMismatchError(IndexingError):
    kind = "Item set mismatch"

    def __init__(self, missing: Sequence[str], extra: Sequence[str]):
        self.missing = list(missing)
        self.extra = list(extra)
        super().__init__(
            f"Constituent assignments differ: {len(self.missing)} missing, {len(self.extra)} extra"
        )


class DuplicateIdError(IndexingError):
    kind = "Duplicate ID"

    def __init__(self, collisions: List[Tuple[str, str]]):
        self.collisions = collisions
        first = collisions[0] if collisions else ("?", "?")
        super().__init__(
            f"{len(collisions)} duplicate ID(s), first between {first[0]!r} and {first[1]!r}"
        )
