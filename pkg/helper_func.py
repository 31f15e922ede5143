import hashlib
import re
from datetime import datetime, timedelta
from typing import Optional

import pytz

import config

_WHITESPACE = re.compile(r"\s+")


def derive_seed(seed: int, label: str) -> int:
    """Sub-seed for one consumer of randomness (``rid``, ``ro``, ``kmeans`` ...).

    The same (seed, label) pair always yields the same 32-bit value, so a
    single --seed flag reproduces a whole run.
    """
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def normalize_whitespace(text: str) -> str:
    return _WHITESPACE.sub(" ", text).strip()


def category_label(name: str) -> str:
    """Token label for a category name: "Lip Liners" -> "Lip_Liners".

    Angle brackets and the reserved mark are dropped, so only the escape below
    produces a marked label. Digit-only names ("0") and "Unknown" are escaped
    to "#0" and "#Unknown"; the bare forms belong to leaf counters and the
    uncategorised node.
    """
    cleaned = normalize_whitespace(name)
    for char in ("<", ">", config.RESERVED_LABEL_MARK):
        cleaned = cleaned.replace(char, "")
    cleaned = cleaned.replace(" ", "_")
    if not cleaned or cleaned.isdigit() or cleaned == config.UNKNOWN_CATEGORY:
        return f"{config.RESERVED_LABEL_MARK}{cleaned}"
    return cleaned


def parse_utc_date(value: Optional[str]) -> Optional[datetime]:
    if not value:
        return None
    try:
        return pytz.UTC.localize(datetime.strptime(value, "%Y-%m-%d"))
    except ValueError:
        return None


def end_of_day(day: datetime) -> datetime:
    return day + timedelta(days=1)


def epoch_to_iso(timestamp: Optional[int]) -> Optional[str]:
    if timestamp is None:
        return None
    return datetime.fromtimestamp(timestamp, tz=pytz.UTC).isoformat()
