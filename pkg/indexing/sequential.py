import logging
from typing import Dict, List, Optional, Tuple, Union

import config
from corpus import SplitCorpus, UserOrdering, order_users
from indexing.base import IndexAssignment, Scheme
from tokenization import SegmenterModel, TokenRegistry, segment

logger = logging.getLogger(__name__)


def sequential_numbers(
    split: SplitCorpus,
    ordering: Union[UserOrdering, str],
    seed: Optional[int] = None,
) -> Tuple[Dict[str, int], List[str]]:
    """Item -> integer, plus the items first met outside training.

    Training items are numbered consecutively from SID_START in the order the
    chosen user ordering first meets them; validation/test-only items follow,
    in time-sensitive user order.
    """
    ordering = UserOrdering.parse(ordering)
    numbers: Dict[str, int] = {}
    next_number = config.SID_START

    for user in order_users(split, ordering, seed):
        for item in split.train[user]:
            if item not in numbers:
                numbers[item] = next_number
                next_number += 1

    cold: List[str] = []
    for user in order_users(split, UserOrdering.TSO):
        for target in (split.validation_target.get(user), split.test_target.get(user)):
            if target is not None and target not in numbers:
                numbers[target] = next_number
                next_number += 1
                cold.append(target)
    return numbers, cold


def index_sid(
    split: SplitCorpus,
    ordering: Union[UserOrdering, str],
    model: SegmenterModel,
    seed: Optional[int] = None,
) -> IndexAssignment:
    ordering = UserOrdering.parse(ordering)
    numbers, cold = sequential_numbers(split, ordering, seed)
    registry = TokenRegistry(model)

    # ingest order for the map; the integers carry the sequential order
    ids = {item: tuple(segment(model, str(numbers[item]))) for item in split.items if item in numbers}
    if cold:
        logger.warning(f"SID: {len(cold)} item(s) appear only in validation/test targets")
    logger.info(f"SID ({ordering.value}): indexed {len(ids)} items from {config.SID_START}")

    params = {"ordering": ordering.value}
    if ordering is UserOrdering.RO:
        params["seed"] = seed
    return IndexAssignment(Scheme.SID, ids, registry, params=params, cold_items=cold)
