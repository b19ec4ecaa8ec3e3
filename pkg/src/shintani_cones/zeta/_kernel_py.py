"""Pure-Python shell evaluation, bit-identical to the compiled kernel."""

from __future__ import annotations

import math

import numpy as np


def compositions(total: int, dim: int):
    """Vectors of ``dim`` nonnegative integers summing to ``total``, lexicographic."""
    if dim == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in compositions(total - head, dim - 1):
            yield (head, *tail)


def shell_terms(base, gens, shell: int, s: float) -> np.ndarray:
    base = [float(v) for v in base]
    rows = [[float(v) for v in row] for row in gens]
    dim, width = len(rows), len(base)
    out = []
    for n in compositions(shell, dim):
        re, im = base[0], base[1]
        for t in range(dim):
            re = re + n[t] * rows[t][0]
            im = im + n[t] * rows[t][1]
        norm = re * re + im * im
        for c in range(2, width):
            v = base[c]
            for t in range(dim):
                v = v + n[t] * rows[t][c]
            norm = norm * v
        out.append(math.pow(norm, -s))
    return np.array(out, dtype=np.float64)
