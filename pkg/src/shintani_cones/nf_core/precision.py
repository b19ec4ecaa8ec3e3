"""Working-precision policy shared by every certified computation."""

from __future__ import annotations

from collections.abc import Iterator

DEFAULT_PRECISION_BITS = 192
MAX_PRECISION_BITS = 8192
# extra bits used for root isolation so downstream evaluation keeps its target
GUARD_BITS = 32


def precision_ladder(start: int | None = None, cap: int | None = None) -> Iterator[int]:
    """Yield ``start, 2*start, 4*start, ...`` while not above ``cap``."""
    prec = DEFAULT_PRECISION_BITS if start is None else int(start)
    cap = MAX_PRECISION_BITS if cap is None else int(cap)
    if prec < 16:
        raise ValueError("precision must be at least 16 bits")
    while prec <= cap:
        yield prec
        prec *= 2
