import json
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import numpy as np
import scipy.sparse as sp

import config
from errors import ArgumentError, EmptyCorpusError, ParseError
from helper_func import end_of_day, parse_utc_date

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interaction:
    user: str
    item: str
    timestamp: int

    def __post_init__(self):
        if not self.user or not self.item:
            raise ArgumentError("user and item must be non-empty")
        if self.timestamp < 0:
            raise ArgumentError(f"timestamp must be >= 0, got {self.timestamp}")


@dataclass(frozen=True)
class ItemMeta:
    title: Optional[str] = None
    category_paths: Tuple[Tuple[str, ...], ...] = ()

    def to_dict(self) -> dict:
        return {"title": self.title, "categories": [list(path) for path in self.category_paths]}

    @classmethod
    def from_dict(cls, data: dict) -> "ItemMeta":
        return cls(
            title=data.get("title"),
            category_paths=_normalize_paths(data.get("categories")),
        )


@dataclass
class Corpus:
    """Per-user interaction sequences, stably sorted by timestamp.

    ``users`` keeps the order of each user's first line in the source file and
    ``items`` the order in which items were first seen (the ingest order every
    index builder falls back on).
    """

    users: List[str]
    sequences: Dict[str, List[str]]
    timestamps: Dict[str, List[int]]
    items: List[str]
    metadata: Dict[str, ItemMeta] = field(default_factory=dict)

    @classmethod
    def from_interactions(cls, interactions: Iterable[Interaction]) -> "Corpus":
        per_user: Dict[str, List[Tuple[int, str]]] = {}
        items: Dict[str, None] = {}
        for interaction in interactions:
            per_user.setdefault(interaction.user, []).append((interaction.timestamp, interaction.item))
            items.setdefault(interaction.item, None)

        sequences = {}
        timestamps = {}
        for user, rows in per_user.items():
            rows.sort(key=lambda row: row[0])  # stable: ties keep input order
            sequences[user] = [item for _, item in rows]
            timestamps[user] = [ts for ts, _ in rows]
        return cls(users=list(per_user), sequences=sequences, timestamps=timestamps, items=list(items))

    @property
    def item_universe(self) -> Set[str]:
        return set(self.items)

    @property
    def interaction_count(self) -> int:
        return sum(len(seq) for seq in self.sequences.values())

    def first_timestamp(self, user: str) -> int:
        return self.timestamps[user][0]

    def to_dict(self) -> dict:
        return {
            "users": self.users,
            "items": self.items,
            "sequences": {
                user: [[item, ts] for item, ts in zip(self.sequences[user], self.timestamps[user])]
                for user in self.users
            },
            "metadata": {item: self.metadata[item].to_dict() for item in self.items if item in self.metadata},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Corpus":
        sequences = {user: [row[0] for row in rows] for user, rows in data["sequences"].items()}
        timestamps = {user: [int(row[1]) for row in rows] for user, rows in data["sequences"].items()}
        return cls(
            users=list(data["users"]),
            sequences=sequences,
            timestamps=timestamps,
            items=list(data["items"]),
            metadata={item: ItemMeta.from_dict(meta) for item, meta in data.get("metadata", {}).items()},
        )


@dataclass
class SplitCorpus:
    users: List[str]
    items: List[str]
    train: Dict[str, List[str]]
    validation_target: Dict[str, str]
    test_target: Dict[str, str]
    first_timestamps: Dict[str, int]

    @property
    def train_items(self) -> Set[str]:
        return {item for seq in self.train.values() for item in seq}

    def to_dict(self) -> dict:
        return {
            "users": self.users,
            "items": self.items,
            "train": {user: self.train[user] for user in self.users},
            "validation": {user: self.validation_target[user] for user in self.users if user in self.validation_target},
            "test": {user: self.test_target[user] for user in self.users if user in self.test_target},
            "first_timestamps": {user: self.first_timestamps[user] for user in self.users},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SplitCorpus":
        return cls(
            users=list(data["users"]),
            items=list(data["items"]),
            train={user: list(seq) for user, seq in data["train"].items()},
            validation_target=dict(data["validation"]),
            test_target=dict(data["test"]),
            first_timestamps={user: int(ts) for user, ts in data["first_timestamps"].items()},
        )


class UserOrdering(str, Enum):
    TSO = "TSO"
    RO = "RO"
    S2LO = "S2LO"
    L2SO = "L2SO"

    @classmethod
    def parse(cls, value: Union[str, "UserOrdering"]) -> "UserOrdering":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ArgumentError(f"Unknown user ordering {value!r}; choose from {', '.join(config.USER_ORDERINGS)}")


@dataclass(frozen=True)
class CooccurrenceGraph:
    """Weighted undirected item graph; ``edges`` keys are ordered by node position."""

    nodes: Tuple[str, ...]
    edges: Dict[Tuple[str, str], float]

    @classmethod
    def from_weights(cls, nodes: Iterable[str], weights: Mapping[Tuple[str, str], float]) -> "CooccurrenceGraph":
        nodes = tuple(dict.fromkeys(nodes))
        position = {node: i for i, node in enumerate(nodes)}
        edges: Dict[Tuple[str, str], float] = {}
        for (a, b), weight in weights.items():
            if a == b:
                raise ArgumentError(f"Self-loop on {a!r} is not allowed")
            if a not in position or b not in position:
                raise ArgumentError(f"Edge ({a!r}, {b!r}) references an unknown node")
            if weight <= 0:
                continue
            key = (a, b) if position[a] < position[b] else (b, a)
            edges[key] = edges.get(key, 0) + weight
        return cls(nodes=nodes, edges=edges)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {node: i for i, node in enumerate(self.nodes)}

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        n = len(self.nodes)
        if not self.edges:
            return sp.csr_matrix((n, n), dtype=float)
        rows, cols, data = [], [], []
        for (a, b), weight in self.edges.items():
            i, j = self.index[a], self.index[b]
            rows += [i, j]
            cols += [j, i]
            data += [weight, weight]
        return sp.csr_matrix((np.asarray(data, dtype=float), (rows, cols)), shape=(n, n))

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def weight(self, a: str, b: str) -> float:
        if self.index[a] > self.index[b]:
            a, b = b, a
        return self.edges.get((a, b), 0)

    def degree(self, item: str) -> float:
        return float(self.degrees[self.index[item]])

    def adjacency(self, items: Iterable[str]) -> sp.csr_matrix:
        idx = [self.index[item] for item in items]
        return self.matrix[idx][:, idx].tocsr()

    @property
    def total_weight(self) -> float:
        return sum(self.edges.values())


def _normalize_paths(raw) -> Tuple[Tuple[str, ...], ...]:
    if not raw:
        return ()
    if all(isinstance(part, str) for part in raw):
        raw = [raw]
    paths = []
    for path in raw:
        cleaned = tuple(str(name).strip() for name in path if str(name).strip())
        if cleaned:
            paths.append(cleaned)
    return tuple(paths)


def load_interactions(path: str) -> Corpus:
    interactions: List[Interaction] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(path, line_no, f"expected 3 tab-separated fields, got {len(fields)}")
            user, item, raw_ts = fields
            try:
                timestamp = int(raw_ts)
            except ValueError:
                raise ParseError(path, line_no, f"timestamp {raw_ts!r} is not an integer")
            try:
                interactions.append(Interaction(user, item, timestamp))
            except ArgumentError as e:
                raise ParseError(path, line_no, str(e))

    if not interactions:
        raise EmptyCorpusError(path)

    corpus = Corpus.from_interactions(interactions)
    logger.info(f"Loaded {len(interactions)} interactions for {len(corpus.users)} users from {path}")
    return corpus


def load_metadata(path: str) -> Dict[str, ItemMeta]:
    metadata: Dict[str, ItemMeta] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(path, line_no, f"invalid JSON: {e.msg}")
            if not isinstance(record, dict) or not record.get("item"):
                raise ParseError(path, line_no, "record has no 'item' field")
            title = record.get("title")
            metadata[str(record["item"])] = ItemMeta(
                title=str(title) if title is not None else None,
                category_paths=_normalize_paths(record.get("categories")),
            )
    logger.info(f"Loaded metadata for {len(metadata)} items from {path}")
    return metadata


def attach_metadata(corpus: Corpus, metadata: Mapping[str, ItemMeta]) -> Corpus:
    universe = corpus.item_universe
    kept = {item: meta for item, meta in metadata.items() if item in universe}
    dropped = len(metadata) - len(kept)
    if dropped:
        logger.warning(f"Ignoring metadata for {dropped} items without interactions")
    return replace(corpus, metadata=kept)


def filter_time_window(corpus: Corpus, since: Optional[str] = None, until: Optional[str] = None) -> Corpus:
    start = parse_utc_date(since)
    stop = parse_utc_date(until)
    if since and start is None:
        raise ArgumentError(f"Invalid --since date {since!r}, expected YYYY-MM-DD")
    if until and stop is None:
        raise ArgumentError(f"Invalid --until date {until!r}, expected YYYY-MM-DD")
    if start and stop and start > stop:
        raise ArgumentError(f"--since {since} is after --until {until}")

    low = int(start.timestamp()) if start else None
    high = int(end_of_day(stop).timestamp()) if stop else None

    users, sequences, timestamps = [], {}, {}
    for user in corpus.users:
        rows = [
            (item, ts)
            for item, ts in zip(corpus.sequences[user], corpus.timestamps[user])
            if (low is None or ts >= low) and (high is None or ts < high)
        ]
        if rows:
            users.append(user)
            sequences[user] = [item for item, _ in rows]
            timestamps[user] = [ts for _, ts in rows]

    seen = {item for seq in sequences.values() for item in seq}
    items = [item for item in corpus.items if item in seen]
    metadata = {item: meta for item, meta in corpus.metadata.items() if item in seen}
    logger.info(f"Time window kept {len(users)}/{len(corpus.users)} users and {len(items)}/{len(corpus.items)} items")
    return Corpus(users=users, sequences=sequences, timestamps=timestamps, items=items, metadata=metadata)


def corpus_statistics(corpus: Corpus) -> dict:
    users = len(corpus.users)
    items = len(corpus.items)
    interactions = corpus.interaction_count
    sparsity = 100.0 * interactions / (users * items) if users and items else 0.0
    return {"users": users, "items": items, "interactions": interactions, "sparsity_pct": sparsity}


def leave_one_out_split(corpus: Corpus) -> SplitCorpus:
    train, validation, test = {}, {}, {}
    for user in corpus.users:
        sequence = corpus.sequences[user]
        if len(sequence) < 3:
            # too short for targets; the whole sequence trains
            train[user] = list(sequence)
            continue
        train[user] = list(sequence[:-2])
        validation[user] = sequence[-2]
        test[user] = sequence[-1]

    logger.info(f"Split {len(corpus.users)} users: {len(test)} with targets, {len(corpus.users) - len(test)} train-only")
    return SplitCorpus(
        users=list(corpus.users),
        items=list(corpus.items),
        train=train,
        validation_target=validation,
        test_target=test,
        first_timestamps={user: corpus.first_timestamp(user) for user in corpus.users},
    )


def order_users(
    corpus: Union[Corpus, SplitCorpus],
    ordering: Union[UserOrdering, str],
    seed: Optional[int] = None,
) -> List[str]:
    split = corpus if isinstance(corpus, SplitCorpus) else leave_one_out_split(corpus)
    ordering = UserOrdering.parse(ordering)
    users = list(split.users)

    if ordering is UserOrdering.TSO:
        return sorted(users, key=lambda user: split.first_timestamps[user])
    if ordering is UserOrdering.S2LO:
        return sorted(users, key=lambda user: len(split.train[user]))
    if ordering is UserOrdering.L2SO:
        return sorted(users, key=lambda user: -len(split.train[user]))

    rng = np.random.default_rng(config.DEFAULT_SEED if seed is None else seed)
    return [users[i] for i in rng.permutation(len(users))]


def build_cooccurrence_graph(split: SplitCorpus) -> CooccurrenceGraph:
    position = {item: i for i, item in enumerate(split.items)}
    weights: Counter = Counter()
    for user in split.users:
        # one count per user, however often a pair repeats inside the sequence
        distinct = sorted(set(split.train[user]), key=position.__getitem__)
        weights.update(combinations(distinct, 2))

    graph = CooccurrenceGraph(nodes=tuple(split.items), edges=dict(weights))
    logger.info(f"Co-occurrence graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
    return graph
