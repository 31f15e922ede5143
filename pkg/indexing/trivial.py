import logging
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

import config
from corpus import ItemMeta
from errors import CoverageError, MissingTitleError
from helper_func import normalize_whitespace
from indexing.base import IndexAssignment, Scheme, TokenIds
from tokenization import SegmenterModel, TokenRegistry, segment, segment_words

logger = logging.getLogger(__name__)


def index_rid(items: Sequence[str], seed: int, model: SegmenterModel) -> IndexAssignment:
    """Distinct random integers from [1, RID_RANGE_FACTOR * |items|], segmented as text."""
    items = list(items)
    registry = TokenRegistry(model)
    ids: Dict[str, TokenIds] = {}
    if items:
        rng = np.random.default_rng(seed)
        numbers = rng.choice(config.RID_RANGE_FACTOR * len(items), size=len(items), replace=False) + 1
        for item, number in zip(items, numbers):
            ids[item] = tuple(segment(model, str(int(number))))

    logger.info(f"RID: indexed {len(ids)} items")
    return IndexAssignment(Scheme.RID, ids, registry, params={"seed": seed})


def _suffix_tokens(model: SegmenterModel, registry: TokenRegistry, number: int) -> TokenIds:
    text = f"({number})"
    try:
        return tuple(segment(model, text))
    except CoverageError:
        # piece tables without brackets or digits get the suffix as one extra token
        return (registry.register_extra(text),)


def index_tid(items: Sequence[str], metadata: Mapping[str, ItemMeta], model: SegmenterModel) -> IndexAssignment:
    items = list(items)
    titles: Dict[str, str] = {}
    missing: List[str] = []
    for item in items:
        meta = metadata.get(item)
        title = normalize_whitespace(meta.title) if meta and meta.title else ""
        if title:
            titles[item] = title
        else:
            missing.append(item)
    if missing:
        raise MissingTitleError(missing)

    registry = TokenRegistry(model)
    ids: Dict[str, TokenIds] = {}
    used = set()
    renamed = 0
    for item in items:
        title_tokens = tuple(segment_words(model, titles[item]))
        tokens = title_tokens
        suffix = 2
        # "Soap", "Soap (2)", "Soap (3)" ...
        while tokens in used:
            tokens = title_tokens + _suffix_tokens(model, registry, suffix)
            suffix += 1
        if suffix > 2:
            renamed += 1
        used.add(tokens)
        ids[item] = tokens

    if renamed:
        logger.warning(f"TID: {renamed} duplicate title(s) were numbered to stay unique")
    logger.info(f"TID: indexed {len(ids)} items")
    return IndexAssignment(Scheme.TID, ids, registry)


def index_iid(items: Sequence[str], registry: Optional[TokenRegistry] = None) -> IndexAssignment:
    registry = registry or TokenRegistry()
    ids = {
        item: (registry.register_extra(f"{config.IID_PREFIX}{n}"),)
        for n, item in enumerate(items)
    }
    logger.info(f"IID: indexed {len(ids)} items")
    return IndexAssignment(Scheme.IID, ids, registry)
