"""Backend selection for shell evaluation and the fixed summation contract.

The compiled extension is used when it imports; setting
``SHINTANI_CONES_BACKEND=python`` forces the pure-Python fallback. Both
backends return identical term arrays, so results do not depend on which one
ran.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _kernel_py

CHUNK = 4096

_forced = os.environ.get("SHINTANI_CONES_BACKEND", "").strip().lower()
if _forced == "python":
    _impl, BACKEND = _kernel_py, "python"
else:
    try:
        from . import _shell_kernel as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        _impl, BACKEND = _kernel_py, "python"


def shell_terms(base, gens, shell: int, s: float, backend: str | None = None) -> np.ndarray:
    impl = _impl
    if backend == "python":
        impl = _kernel_py
    elif backend == "cython":
        from . import _shell_kernel as impl  # type: ignore[no-redef]
    return impl.shell_terms(np.ascontiguousarray(base, dtype=np.float64),
                            np.ascontiguousarray(gens, dtype=np.float64), int(shell), float(s))


def pairwise_sum(values: list[float]) -> float:
    if not values:
        return 0.0
    while len(values) > 1:
        nxt = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            nxt.append(values[-1])
        values = nxt
    return values[0]


def reduce_terms(terms: np.ndarray) -> float:
    """Each chunk of ``CHUNK`` consecutive terms is summed exactly rounded,
    then chunk sums are combined pairwise in index order."""
    return pairwise_sum([math.fsum(terms[i:i + CHUNK].tolist()) for i in range(0, len(terms), CHUNK)])
