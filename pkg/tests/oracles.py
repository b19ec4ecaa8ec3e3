"""Independent reference computations used as test oracles.

Nothing here imports the package's arithmetic: the oracles use plain
Fractions, mpmath and numpy so that agreement is evidence rather than
self-consistency.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import mpmath
import numpy as np


# -- exact linear algebra over Q ---------------------------------------------

def solve_fractions(columns, target):
    """Solve ``sum c_j columns[j] = target`` by Gauss-Jordan over Fractions."""
    n = len(target)
    a = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def det_fractions(rows):
    m = [[Fraction(v) for v in row] for row in rows]
    n, det = len(m), Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def polymulmod(a, b, modulus):
    """Product of coefficient lists (ascending) modulo a monic ``modulus``."""
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += Fraction(x) * Fraction(y)
    n = len(modulus) - 1
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] -= c * modulus[i]
    return (prod + [Fraction(0)] * n)[:n]


def resultant(f, g):
    """Resultant of two ascending coefficient lists via the Sylvester matrix."""
    f = list(f)
    g = list(g)
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return Fraction(g[0]) ** m
    size = m + n
    rows = []
    fd, gd = f[::-1], g[::-1]
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return det_fractions(rows)


def norm_via_resultant(min_poly, coords):
    """``N(x) = Res(min_poly, x(T))`` for monic ``min_poly``."""
    return resultant(min_poly, coords)


def in_cone_fractions(generators, flags, y) -> bool:
    c = solve_fractions(generators, y)
    return all(v >= 0 if closed else v > 0 for v, closed in zip(c, flags))


# -- embeddings ----------------------------------------------------------------

def numpy_roots(min_poly):
    """Roots of an ascending coefficient list, complex root with Im < 0 first,
    then real roots ascending."""
    roots = np.roots(list(reversed(min_poly)))
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9)
    cplx = [complex(r) for r in roots if r.imag < -1e-9]
    return cplx, real


def mp_m(z: complex | mpmath.mpc, N: int) -> int:
    """``ceil(-N arg z / 2 pi)`` with ``arg`` in ``[-pi, pi)`` using mpmath.

    The working precision grows until ``-N arg / 2 pi`` is clearly away from
    an integer, unless ``z`` is exactly real.
    """
    dps = 60
    while True:
        with mpmath.workdps(dps):
            w = mpmath.mpc(z)
            if mpmath.im(w) == 0:
                return 0 if mpmath.re(w) > 0 else -(-N // 2)
            x = -N * mpmath.arg(w) / (2 * mpmath.pi)
            if abs(x - mpmath.nint(x)) > mpmath.mpf(10) ** (10 - dps):
                return int(mpmath.ceil(x))
        if dps > 4000:
            raise ArithmeticError(f"mp_m could not separate {z} from a breakpoint")
        dps *= 2


def mp_embed(min_poly, coords, dps: int = 60):
    """All embeddings of ``sum coords[i] g^i`` through mpmath polyroots, in the
    package's order (complex root with Im < 0, then reals ascending)."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(list(reversed(min_poly)), maxsteps=200, extraprec=200)
        cplx = [r for r in roots if mpmath.im(r) < -mpmath.mpf(10) ** (-dps // 2)]
        real = sorted((mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)))
        ev = lambda x: sum(mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator * x ** i
                           for i, c in enumerate(coords))
        return [ev(r) for r in cplx], [ev(r) for r in real]


# -- Dedekind zeta through the Euler product -------------------------------------

def primes_up_to(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0]


def cubic_splitting_types(coeffs, prime_bound: int):
    """For each prime ``p``, the number of distinct roots of the cubic mod ``p``."""
    return _splitting_types(tuple(int(c) for c in coeffs[:3]), prime_bound)


@functools.lru_cache(maxsize=None)
def _splitting_types(coeffs: tuple[int, int, int], prime_bound: int):
    c0, c1, c2 = coeffs
    out = []
    for p in primes_up_to(prime_bound):
        p = int(p)
        x = np.arange(p, dtype=np.int64)
        val = ((x * x % p) * x + c2 * (x * x % p) + c1 * x + c0) % p
        out.append((p, int(np.count_nonzero(val == 0))))
    return out


def dedekind_zeta_cubic(coeffs, s: float, prime_bound: int = 100_000, ramified=()) -> float:
    """Euler product for a cubic field whose order Z[g] is maximal.

    A prime with 3 distinct roots splits completely, with 1 root it is a
    degree-1 times a degree-2 prime, with none it is inert. Primes listed in
    ``ramified`` use one Euler factor per distinct root.
    """
    log_z = 0.0
    for p, k in cubic_splitting_types(coeffs, prime_bound):
        if p in ramified:
            log_z -= k * math.log1p(-p ** -s)
        elif k == 3:
            log_z -= 3 * math.log1p(-p ** -s)
        elif k == 1:
            log_z -= math.log1p(-p ** -s) + math.log1p(-p ** (-2 * s))
        elif k == 0:
            log_z -= math.log1p(-p ** (-3 * s))
        else:
            raise ValueError(f"prime {p} has {k} distinct roots but was not declared ramified")
    return math.exp(log_z)
