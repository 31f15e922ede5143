import logging
from typing import Dict, Mapping, Optional

import config
from errors import ArgumentError, ItemSetMismatchError
from indexing.base import IndexAssignment, Scheme, TokenIds
from tokenization import TokenRegistry

logger = logging.getLogger(__name__)

# variant -> (leading constituent, trailing constituent)
_CONSTITUENTS = {
    "sid+iid": ("sid", "iid"),
    "cid+iid": ("cid", "iid"),
    "semid+iid": ("semid", "iid"),
    "semid+cid": ("semid", "cid"),
}


def required_parts(variant: str):
    if variant not in _CONSTITUENTS:
        raise ArgumentError(f"Unknown HID variant {variant!r}; choose from {', '.join(config.HID_VARIANTS)}")
    return _CONSTITUENTS[variant]


def _check_items(first: IndexAssignment, second: IndexAssignment) -> None:
    left, right = set(first.ids), set(second.ids)
    if left != right:
        missing = [item for item in first.ids if item not in right]
        extra = [item for item in second.ids if item not in left]
        raise ItemSetMismatchError(missing, extra)


def compose_hid(
    variant: str,
    parts: Mapping[str, IndexAssignment],
    registry: Optional[TokenRegistry] = None,
    order: str = "semid-first",
) -> IndexAssignment:
    """Concatenate two assignments item by item.

    The full SID is kept; CID and SemID lose their leaf token before the
    suffix is appended. For semid+cid the CID keeps its leaf and ``order``
    decides which half comes first.
    """
    lead_name, tail_name = required_parts(variant)
    if order not in config.HID_ORDERS:
        raise ArgumentError(f"Unknown HID order {order!r}; choose from {', '.join(config.HID_ORDERS)}")
    missing_parts = [name for name in (lead_name, tail_name) if name not in parts]
    if missing_parts:
        raise ArgumentError(f"HID {variant} needs the {' and '.join(missing_parts)} assignment(s)")

    lead, tail = parts[lead_name], parts[tail_name]
    _check_items(lead, tail)
    registry = registry or TokenRegistry()

    ids: Dict[str, TokenIds] = {}
    for item in lead.ids:
        head = lead.ids[item] if lead_name == "sid" else lead.ids[item][:-1]
        rest = tail.ids[item]
        tokens = rest + head if variant == "semid+cid" and order == "cid-first" else head + rest
        ids[item] = tuple(registry.adopt(token) for token in tokens)

    params: Dict[str, object] = {"variant": variant}
    for part in (lead, tail):
        params.update(part.params)
    if variant == "semid+cid":
        params["order"] = order
    tree = parts["cid"].tree if "cid" in (lead_name, tail_name) else lead.tree

    logger.info(f"HID ({variant}): composed {len(ids)} items")
    return IndexAssignment(
        Scheme.HID,
        ids,
        registry,
        params=params,
        cold_items=list(lead.cold_items),
        tree=tree,
    ).ensure_unique()
