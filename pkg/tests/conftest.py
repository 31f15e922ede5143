import string
from itertools import combinations
from typing import Dict, List, Sequence

import numpy as np
import pytest

from corpus import Corpus, CooccurrenceGraph, Interaction, ItemMeta, leave_one_out_split
from tokenization import SegmenterModel

# Training sequence, validation target, test target per user, as table IDs.
TABLE2 = {
    "User1": ([1001, 1002, 1003, 1004, 1005, 1006, 1007, 1008, 1009], 1018, 1019),
    "User2": ([1010, 1011, 1001, 1012, 1008, 1009, 1013, 1014], 1022, 1023),
    "User3": ([1015, 1016, 1017, 1007, 1018, 1019, 1020, 1021, 1009], 1015, 1016),
    "User4": ([1022, 1023, 1005, 1002, 1006, 1024], 1002, 1008),
    "User5": ([1025, 1026, 1027, 1028, 1029, 1030, 1024, 1020, 1021, 1031], 1033, 1034),
}


def item_name(number: int) -> str:
    return f"item{number}"


def corpus_from_sequences(sequences: Dict[str, Sequence[str]], start: int = 1000) -> Corpus:
    """Users in dict order; each user's clock starts after the previous user's."""
    interactions = []
    clock = start
    for user, sequence in sequences.items():
        for item in sequence:
            interactions.append(Interaction(user, item, clock))
            clock += 1
        clock += 100
    return Corpus.from_interactions(interactions)


@pytest.fixture
def table2_corpus() -> Corpus:
    sequences = {
        user: [item_name(n) for n in train + [validation, test]]
        for user, (train, validation, test) in TABLE2.items()
    }
    return corpus_from_sequences(sequences)


@pytest.fixture
def table2_split(table2_corpus):
    return leave_one_out_split(table2_corpus)


@pytest.fixture
def numeric_model() -> SegmenterModel:
    pieces = {digit: -5.0 for digit in string.digits}
    pieces.update({"10": -2.0, "43": -2.0, "32": -2.0, "18": -2.0, "89": -2.0, "100": -2.5})
    return SegmenterModel(pieces=pieces)


@pytest.fixture
def title_model() -> SegmenterModel:
    pieces = {char: -6.0 for char in string.ascii_letters + string.digits + "()-'&"}
    pieces.update({"Ci": -3.0, "gar": -3.0, "Las": -3.0, "Vegas": -3.0, "Outlet": -3.0, "Soap": -3.0})
    return SegmenterModel(pieces=pieces)


def clique_graph(sizes: Sequence[int], prefix: str = "c") -> CooccurrenceGraph:
    nodes: List[str] = []
    weights = {}
    for index, size in enumerate(sizes):
        members = [f"{prefix}{index}_{i}" for i in range(size)]
        nodes.extend(members)
        weights.update({pair: 1 for pair in combinations(members, 2)})
    return CooccurrenceGraph.from_weights(nodes, weights)


def random_graph(rng: np.random.Generator, n: int, density: float = 0.3, connected: bool = True) -> CooccurrenceGraph:
    nodes = [f"n{i}" for i in range(n)]
    weights = {}
    for i, j in combinations(range(n), 2):
        if rng.random() < density:
            weights[(nodes[i], nodes[j])] = int(rng.integers(1, 6))
    if connected:
        # a weighted path keeps every random graph in one component
        for i in range(n - 1):
            weights.setdefault((nodes[i], nodes[i + 1]), 1)
    return CooccurrenceGraph.from_weights(nodes, weights)


def two_population_corpus(seed: int, items_per_side: int = 500, users_per_side: int = 200, length: int = 12) -> Corpus:
    """Two disjoint user/item populations, each made of sub-groups users mostly stay inside."""
    rng = np.random.default_rng(seed)
    sequences = {}
    groups = 5
    group_size = items_per_side // groups
    for side in ("A", "B"):
        catalog = [f"{side}{i}" for i in range(items_per_side)]
        for u in range(users_per_side):
            home = rng.integers(groups)
            sequence = []
            for _ in range(length):
                if rng.random() < 0.9:
                    pick = home * group_size + rng.integers(group_size)
                else:
                    pick = rng.integers(items_per_side)
                sequence.append(catalog[int(pick)])
            sequences[f"{side}_user{u}"] = sequence
    return corpus_from_sequences(sequences)


def random_corpus(rng: np.random.Generator, users: int, items: int, max_len: int = 8) -> Corpus:
    catalog = [f"i{n}" for n in range(items)]
    sequences = {}
    for u in range(users):
        size = int(rng.integers(1, max_len + 1))
        sequences[f"u{u}"] = [catalog[int(x)] for x in rng.integers(items, size=size)]
    return corpus_from_sequences(sequences)


def random_metadata(rng: np.random.Generator, items: Sequence[str]) -> Dict[str, ItemMeta]:
    tops = ["Makeup", "Skin Care", "Fragrance", "Hair Care"]
    mids = ["Eyes", "Lips", "Face", "Creams", "Body"]
    leaves = ["Liners", "Sets", "Oils", "Masks"]
    metadata = {}
    for n, item in enumerate(items):
        if rng.random() < 0.05:
            metadata[item] = ItemMeta(title=f"Product {n}")
            continue
        depth = int(rng.integers(1, 4))
        path = ["Beauty", tops[int(rng.integers(len(tops)))]]
        if depth > 1:
            path.append(mids[int(rng.integers(len(mids)))])
        if depth > 2:
            path.append(leaves[int(rng.integers(len(leaves)))])
        metadata[item] = ItemMeta(title=f"Product {n}", category_paths=(tuple(path),))
    return metadata
