"""JSON output with every float written to 17 significant digits."""

from __future__ import annotations

import json
import math
import re
from datetime import datetime, timezone

_MARK = "@@float{}@@"
_TOKEN = re.compile(r'"@@float(\d+)@@"')


def _prepare(obj, floats: list):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        floats.append(obj)
        return _MARK.format(len(floats) - 1)
    if isinstance(obj, dict):
        return {str(k): _prepare(v, floats) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(v, floats) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _prepare(obj.item(), floats)
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    floats: list[float] = []
    text = json.dumps(_prepare(obj, floats), indent=indent)
    return _TOKEN.sub(lambda m: f"{floats[int(m.group(1))]:.17g}", text)


def timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")
