from typing import Dict, Iterable, List, Optional

import config
from errors import UsageError

_INT_PARAMS = {"N", "k"}


def _choice(key: str, value: str, choices: List[str], upper: bool = False) -> str:
    value = value.upper() if upper else value.lower()
    if value not in choices:
        raise UsageError(f"Invalid value {value!r} for {key}; choose from {', '.join(choices)}")
    return value


def parse_params(raw: Optional[Iterable[str]], scheme: str) -> Dict[str, object]:
    """
    Parse --params values for a scheme.

    Accepts comma-separated and/or repeated KEY=VAL pairs; keys may be bare
    (``N=4``) or scheme-qualified (``cid.N=4``).
    """
    if scheme not in config.SCHEME_PARAMS:
        raise UsageError(f"Unknown scheme {scheme!r}; choose from {', '.join(config.SCHEMES)}")
    allowed = config.SCHEME_PARAMS[scheme]
    params: Dict[str, object] = {}

    for chunk in raw or []:
        for pair in chunk.split(","):
            pair = pair.strip()
            if not pair:
                continue
            key, sep, value = pair.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise UsageError(f"Malformed parameter {pair!r}, expected KEY=VAL")
            if "." in key:
                owner, _, key = key.partition(".")
                if owner not in config.SCHEME_PARAMS or key not in config.SCHEME_PARAMS[owner]:
                    raise UsageError(f"Unknown parameter {owner}.{key}")
            if key not in allowed:
                accepted = ", ".join(allowed) or "none"
                raise UsageError(f"Scheme {scheme} does not take {key!r} (accepted: {accepted})")

            if key in _INT_PARAMS:
                try:
                    params[key] = int(value)
                except ValueError:
                    raise UsageError(f"{key} must be an integer, got {value!r}")
            elif key == "ordering":
                params[key] = _choice(key, value, config.USER_ORDERINGS, upper=True)
            elif key == "mode":
                params[key] = _choice(key, value, config.SEMID_MODES)
            elif key == "variant":
                params[key] = _choice(key, value, config.HID_VARIANTS)
            elif key == "order":
                params[key] = _choice(key, value, config.HID_ORDERS)
    return params


def parse_int_list(raw: str, name: str) -> List[int]:
    try:
        values = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of integers, got {raw!r}")
    if not values:
        raise UsageError(f"{name} needs at least one value")
    return values
