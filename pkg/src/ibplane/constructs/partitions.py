"""
Set partitions as restricted growth strings
===========================================

A partition of {0, ..., n-1} is encoded as a tuple ``a`` with a[0] = 0 and
a[i] <= max(a[:i]) + 1; a[i] is the block of element i. Enumeration follows
lexicographic order of these strings, which is also the canonical order of
hard clusterings elsewhere in the package.
"""

from __future__ import annotations

from collections.abc import Iterator
from functools import cache

from ibplane.config import get_config
from ibplane.errors import InvalidInputError, ResourceLimitError


@cache
def bell_number(n: int) -> int:
    """Number of set partitions of an n-element set (Bell triangle)."""
    if n < 0:
        raise InvalidInputError(f"bell_number needs n >= 0, got {n}")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def _rgs(n: int) -> Iterator[tuple[int, ...]]:
    a = [0] * n
    # b[i] = 1 + max(a[:i]), the largest label position i may take
    b = [1] * n
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i <= 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = max(b[j - 1], a[j - 1] + 1)


def restricted_growth_strings(n: int, max_n: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every set partition of n elements, in lexicographic RGS order.

    Raises:
        ResourceLimitError: if n exceeds *max_n* (default: configured guard)
    """
    limit = get_config().partition_guard if max_n is None else max_n
    if n < 1:
        raise InvalidInputError(f"need at least one element, got {n}")
    if n > limit:
        raise ResourceLimitError("classes to partition", n, limit)
    return _rgs(n)
