import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence

import config
from errors import ArgumentError, CoverageError, ParseError

logger = logging.getLogger(__name__)

_FORBIDDEN_LABEL = re.compile(r"[\s<>]")


class TokenKind(str, Enum):
    BASE = "base"
    EXTRA = "extra"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    id: int = field(compare=False)

    @property
    def is_extra(self) -> bool:
        return self.kind is TokenKind.EXTRA

    def render(self) -> str:
        return f"<{self.text}>" if self.is_extra else self.text

    def __str__(self) -> str:
        return self.render()


@dataclass
class SegmenterModel:
    """Unigram piece table: piece -> log-probability.

    Piece ids follow file order, so a registry built from the model hands out
    the same ids that ``segment`` stamps on its tokens.
    """

    pieces: Dict[str, float]

    @cached_property
    def piece_ids(self) -> Dict[str, int]:
        return {piece: i for i, piece in enumerate(self.pieces)}

    @cached_property
    def max_piece_len(self) -> int:
        return max((len(piece) for piece in self.pieces), default=0)

    def token(self, piece: str) -> Token:
        return Token(TokenKind.BASE, piece, self.piece_ids[piece])

    def score(self, pieces: Iterable[str]) -> float:
        return sum(self.pieces[piece] for piece in pieces)


class TokenRegistry:
    """Base vocabulary plus the extra (out-of-vocabulary) tokens a scheme adds."""

    def __init__(self, model: Optional[SegmenterModel] = None):
        self.base: Dict[str, int] = {}
        self.extras: Dict[str, int] = {}
        self.next_id = 0
        if model is not None:
            for piece in model.pieces:
                self.register_base(piece)

    def register_base(self, piece: str) -> Token:
        if not piece:
            raise ArgumentError("Base piece must be non-empty")
        if piece.startswith("<"):
            raise ArgumentError(f"Base piece {piece!r} may not begin with '<'")
        if piece not in self.base:
            self.base[piece] = self.next_id
            self.next_id += 1
        return Token(TokenKind.BASE, piece, self.base[piece])

    def register_extra(self, label: str) -> Token:
        if not label:
            raise ArgumentError("Extra token label must be non-empty")
        if _FORBIDDEN_LABEL.search(label):
            raise ArgumentError(f"Extra token label {label!r} may not contain whitespace or angle brackets")
        if label not in self.extras:
            self.extras[label] = self.next_id
            self.next_id += 1
        return Token(TokenKind.EXTRA, label, self.extras[label])

    def adopt(self, token: Token) -> Token:
        """Re-issue a token from another registry under this registry's ids."""
        if token.is_extra:
            return self.register_extra(token.text)
        return self.register_base(token.text)

    def parse(self, rendered: str) -> Token:
        if len(rendered) > 2 and rendered.startswith("<") and rendered.endswith(">"):
            return self.register_extra(rendered[1:-1])
        return self.register_base(rendered)

    @property
    def extra_labels(self) -> List[str]:
        return list(self.extras)

    def export_additions(self, labels: Optional[Iterable[str]] = None) -> str:
        labels = self.extra_labels if labels is None else list(labels)
        lines = [f"#init={config.VOCAB_INIT}"] + [f"<{label}>" for label in labels]
        return "\n".join(lines) + "\n"

    def __len__(self) -> int:
        return len(self.base) + len(self.extras)


def register_extra(registry: TokenRegistry, label: str) -> Token:
    return registry.register_extra(label)


def load_unigram_model(path: str) -> SegmenterModel:
    pieces: Dict[str, float] = {}
    skipped = 0
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(path, line_no, f"expected 'piece<TAB>score', got {len(fields)} field(s)")
            piece, raw_score = fields
            try:
                score = float(raw_score)
            except ValueError:
                raise ParseError(path, line_no, f"score {raw_score!r} is not a number")
            if not math.isfinite(score):
                raise ParseError(path, line_no, f"score {raw_score!r} is not finite")
            if not piece or piece.startswith("<"):
                # control symbols such as <pad>/<unk> never take part in segmentation
                skipped += 1
                continue
            if piece in pieces:
                logger.warning(f"{path}:{line_no}: duplicate piece {piece!r}, keeping the later score")
            pieces[piece] = score

    if skipped:
        logger.warning(f"Skipped {skipped} empty or angle-bracket pieces in {path}")
    logger.info(f"Loaded unigram model with {len(pieces)} pieces from {path}")
    return SegmenterModel(pieces=pieces)


def _coverage_gap(model: SegmenterModel, text: str) -> int:
    # furthest position reachable from the start; segmentation breaks there
    n = len(text)
    reachable = [False] * (n + 1)
    reachable[0] = True
    for i in range(n):
        if not reachable[i]:
            continue
        for j in range(i + 1, min(n, i + model.max_piece_len) + 1):
            if text[i:j] in model.pieces:
                reachable[j] = True
    return max(i for i in range(n) if reachable[i])


def segment(model: SegmenterModel, text: str) -> List[Token]:
    """Viterbi segmentation maximising the summed piece scores.

    Ties go to the segmentation whose first differing piece is longer: the
    suffix table is filled right to left, candidates are tried longest first
    and only a strictly better score replaces the incumbent.
    """
    if not text:
        raise ArgumentError("Cannot segment an empty string")

    n = len(text)
    best: List[Optional[float]] = [None] * (n + 1)
    cut = [0] * (n + 1)
    best[n] = 0.0
    for i in range(n - 1, -1, -1):
        for j in range(min(n, i + model.max_piece_len), i, -1):
            score = model.pieces.get(text[i:j])
            if score is None or best[j] is None:
                continue
            total = score + best[j]
            if best[i] is None or total > best[i]:
                best[i] = total
                cut[i] = j

    if best[0] is None:
        raise CoverageError(text, _coverage_gap(model, text))

    tokens = []
    i = 0
    while i < n:
        tokens.append(model.token(text[i:cut[i]]))
        i = cut[i]
    return tokens


def segment_greedy(model: SegmenterModel, text: str) -> List[Token]:
    if not text:
        raise ArgumentError("Cannot segment an empty string")

    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        for end in range(min(n, pos + model.max_piece_len), pos, -1):
            if text[pos:end] in model.pieces:
                break
        else:
            raise CoverageError(text, pos)
        tokens.append(model.token(text[pos:end]))
        pos = end
    return tokens


def segment_words(model: SegmenterModel, text: str) -> List[Token]:
    """Segment each whitespace-separated word on its own (titles)."""
    tokens: List[Token] = []
    for word in text.split():
        tokens.extend(segment(model, word))
    return tokens


def render(tokens: Sequence[Token]) -> str:
    return " ".join(token.render() for token in tokens)
