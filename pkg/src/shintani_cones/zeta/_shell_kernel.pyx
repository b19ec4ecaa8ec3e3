# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shell evaluation for Shintani series.

Must produce exactly the same doubles as ``_kernel_py.shell_terms``: same
enumeration order, same operation order, libm ``pow``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow

cnp.import_array()


def shell_terms(double[::1] base, double[:, ::1] gens, long shell, double s):
    """Terms ``Norm(x + sum n_t f_t)^(-s)`` for every ``n`` with ``sum n = shell``.

    ``base`` and each row of ``gens`` hold ``(Re, Im, real_1, ..., real_r)``.
    Vectors ``n`` run in lexicographic order.
    """
    cdef Py_ssize_t dim = gens.shape[0]
    cdef Py_ssize_t width = gens.shape[1]
    cdef Py_ssize_t count, i, t, c, k
    cdef long rest
    cdef double re, im, norm, v
    cdef long[::1] n = np.zeros(dim, dtype=np.int64)

    # C(shell + dim - 1, dim - 1) vectors
    count = 1
    for i in range(1, dim):
        count = count * (shell + i) // i
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] res = out

    n[dim - 1] = shell
    for k in range(count):
        re = base[0]
        im = base[1]
        for t in range(dim):
            re = re + n[t] * gens[t, 0]
            im = im + n[t] * gens[t, 1]
        norm = re * re + im * im
        for c in range(2, width):
            v = base[c]
            for t in range(dim):
                v = v + n[t] * gens[t, c]
            norm = norm * v
        res[k] = pow(norm, -s)

        # next composition: bump the slot left of the rightmost nonzero
        # entry and move what is left of that entry to the last slot
        if k + 1 == count:
            break
        i = dim - 1
        while n[i] == 0:
            i -= 1
        rest = n[i] - 1
        n[i] = 0
        n[i - 1] += 1
        n[dim - 1] = rest
    return out
