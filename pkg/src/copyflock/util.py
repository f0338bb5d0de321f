"""Small shared helpers: empirical CDFs, hashing, stable serialization."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable


def ecdf(values: Iterable[float]) -> list[tuple[float, float]]:
    """Empirical CDF as (value, cumulative fraction) rows over distinct values.

    Nondecreasing by construction; the last fraction is exactly 1.0. Empty
    input gives an empty table.
    """
    data = sorted(values)
    n = len(data)
    if n == 0:
        return []
    table = []
    count = 0
    for i, v in enumerate(data):
        count += 1
        if i + 1 == n or data[i + 1] != v:
            table.append((v, count / n))
    return table


def cdf_at(table: list[tuple[float, float]], x: float) -> float:
    """Value of a step CDF at x (fraction of mass <= x)."""
    result = 0.0
    for v, frac in table:
        if v <= x:
            result = frac
        else:
            break
    return result


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def stable_json(obj) -> str:
    """Deterministic JSON text: sorted keys, no trailing whitespace drift."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
