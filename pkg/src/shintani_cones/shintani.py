"""Signed cone domains for the action of totally positive units.

Given independent totally positive units ``eps_1..eps_r`` of a field with one
complex place, an integer ``N >= 3`` and anchors ``alpha_0..alpha_{N-1}`` in
``k_+``, this module builds one simplicial cone per index
``mu = (sigma, q, n)`` together with a weight in ``{-1, 0, +1}`` and, for
nonzero weights, the open/closed status of every generator's coefficient.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import flint

from . import __version__
from .errors import (
    InvalidAlpha,
    InvalidUnit,
    OrderViolation,
    PrecisionExhausted,
    SearchExhausted,
    ZeroCoefficient,
)
from .nf_core import (
    FieldElement,
    NumberField,
    Sign,
    certified_sign,
    embed,
    is_totally_positive,
    log_embedding,
    minkowski_coords,
    precision_ladder,
    rational_rank,
)
from .nf_core.precision import GUARD_BITS

log = logging.getLogger(__name__)

Permutation = tuple[int, ...]
Mu = tuple[Permutation, int, int]


# ---------------------------------------------------------------------------
# permutations


def permutations(r: int) -> list[Permutation]:
    """All permutations of ``1..r`` in one-line notation, lexicographic order."""
    return list(itertools.permutations(range(1, r + 1)))


def permutation_sign(sigma: Permutation) -> int:
    inversions = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j])
    return -1 if inversions % 2 else 1


def cycle_notation(sigma: Permutation) -> str:
    """``(1)`` for the identity, otherwise disjoint cycles such as ``(12)``."""
    seen, cycles = set(), []
    for start in range(1, len(sigma) + 1):
        if start in seen:
            continue
        cycle, i = [], start
        while i not in seen:
            seen.add(i)
            cycle.append(i)
            i = sigma[i - 1]
        if len(cycle) > 1:
            cycles.append(cycle)
    if not cycles:
        return "(1)"
    sep = "," if len(sigma) > 9 else ""
    return "".join("(" + sep.join(str(i) for i in c) + ")" for c in cycles)


def mu_enumeration(r: int, N: int) -> Iterator[Mu]:
    """Every ``(sigma, q, n)``: sigma lexicographic, then q, then n ascending."""
    for sigma in permutations(r):
        for q in range(1, r + 2):
            for n in range(N):
                yield sigma, q, n


# ---------------------------------------------------------------------------
# units and anchors


@dataclass(frozen=True)
class UnitSystem:
    field: NumberField
    units: tuple[FieldElement, ...]
    regulator_sign: int

    @classmethod
    def from_units(cls, units: Sequence[FieldElement], precision_bits: int | None = None,
                   max_precision_bits: int | None = None) -> UnitSystem:
        """Check that ``units`` are ``r`` independent totally positive units."""
        units = tuple(units)
        if not units:
            raise InvalidUnit("at least one unit is required")
        field = units[0].field
        if len(units) != field.r:
            raise InvalidUnit(f"expected r = {field.r} units, got {len(units)}", code="units.count")
        for i, u in enumerate(units, start=1):
            if abs(u.norm()) != 1:
                raise InvalidUnit(f"eps_{i} = {u} has norm {u.norm()}, not +-1", code="units.norm")
            if not is_totally_positive(u, precision_bits, max_precision_bits):
                raise InvalidUnit(f"eps_{i} = {u} is not totally positive", code="units.positive")
        try:
            sign = certified_sign(lambda prec: _log_det(units, prec),
                                  precision_bits=precision_bits or field.precision_bits,
                                  max_precision_bits=max_precision_bits or field.max_precision_bits)
        except PrecisionExhausted:
            raise InvalidUnit("units are not certified multiplicatively independent",
                              code="units.independent") from None
        return cls(field, units, int(sign))

    @property
    def r(self) -> int:
        return len(self.units)

    def log_det(self, precision_bits: int | None = None) -> flint.arb:
        """``det(Log eps_1, ..., Log eps_r)``; its modulus is half the regulator."""
        return _log_det(self.units, precision_bits or self.field.precision_bits)

    def projected_log_det(self, precision_bits: int | None = None) -> flint.arb:
        """``det(LOG l(eps_1), ..., LOG l(eps_r))`` of the projected units."""
        prec = precision_bits or self.field.precision_bits
        cols = [log_embedding(u, "LOG", prec) for u in self.units]
        return _det_from_columns(cols, prec)

    def prefix(self, sigma: Permutation, t: int) -> FieldElement:
        """``f_{t,sigma} = eps_{sigma(1)} ... eps_{sigma(t-1)}`` (``1`` for ``t = 1``)."""
        out = self.field.one
        for j in range(t - 1):
            out = out * self.units[sigma[j] - 1]
        return out


def _det_from_columns(cols: Sequence[Sequence[flint.arb]], prec: int) -> flint.arb:
    n = len(cols)
    with flint.ctx.workprec(prec + GUARD_BITS):
        m = flint.arb_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)])
        return m.det()


def _log_det(units: Sequence[FieldElement], prec: int) -> flint.arb:
    return _det_from_columns([log_embedding(u, "Log", prec) for u in units], prec)


@dataclass(frozen=True)
class AlphaTable:
    """Anchors ``alpha_t`` for ``t`` modulo ``N``."""

    N: int
    alphas: tuple[FieldElement, ...]

    @classmethod
    def from_alphas(cls, alphas: Sequence[FieldElement], N: int | None = None,
                    precision_bits: int | None = None) -> AlphaTable:
        alphas = tuple(alphas)
        N = len(alphas) if N is None else int(N)
        if N < 3:
            raise InvalidAlpha("N must be at least 3", code="N.range")
        if len(alphas) != N:
            raise InvalidAlpha(f"expected {N} anchors, got {len(alphas)}", code="alphas.count")
        for t, a in enumerate(alphas):
            if not validate_alpha(a, t, N, precision_bits):
                raise InvalidAlpha(f"alpha_{t} = {a} violates the argument window for t = {t}")
        return cls(N, alphas)

    def __call__(self, t: int) -> FieldElement:
        return self.alphas[t % self.N]


# ---------------------------------------------------------------------------
# the m-function


def _ceil_n_over_2(N: int) -> int:
    return -(-N // 2)


def _ceil_unique(x: flint.arb) -> int | None:
    """``ceil(x)`` when it is constant on the ball, else ``None``."""
    if x.contains_integer():
        return None
    return int(x.ceil().unique_fmpz())


def _m_of_ball(w: flint.acb, N: int) -> int | None:
    re, im = w.real, w.imag
    if im.is_zero():
        if re > 0:
            return 0
        if re < 0:
            return _ceil_n_over_2(N)
        return None
    if not (im > 0 or im < 0 or re > 0):
        # straddles the cut on the negative real axis (arg jumps from -pi to pi)
        return None
    # an exact ball reports unbounded accuracy; use the context precision then
    acc = max(flint.ctx.prec if w.is_exact() else w.rel_accuracy_bits(), 53)
    with flint.ctx.workprec(acc + GUARD_BITS):
        x = -N * w.arg() / (2 * flint.arb.pi())
    return _ceil_unique(x)


def m_from_turns(theta: Fraction, N: int) -> int:
    """Exact ``m`` of ``rho * exp(2 pi i theta)`` for rational ``theta`` and ``rho > 0``."""
    theta = Fraction(theta)
    reduced = theta - math.floor(theta + Fraction(1, 2))  # arg / 2 pi in [-1/2, 1/2)
    return math.ceil(-N * reduced)


def m_of(z, N: int, *, precision_bits: int | None = None, max_precision_bits: int | None = None) -> int:
    """``ceil(-N arg(z) / 2 pi)`` with ``arg`` in ``[-pi, pi)``.

    ``z`` is a field element (read through ``tau_1``), an ``acb`` ball or a
    Python complex. For field elements the ball is refined until the ceiling
    is certified; a value sitting exactly on a breakpoint is recognised
    exactly (``z^N`` rational and positive) and resolved without rounding.
    """
    if isinstance(z, FieldElement):
        return _m_of_element(z, N, precision_bits, max_precision_bits)
    if isinstance(z, (complex, float, int)):
        z = flint.acb(complex(z).real, complex(z).imag)
    if z.contains(0):
        raise ValueError("m is undefined at 0")
    m = _m_of_ball(z, N)
    if m is None:
        raise PrecisionExhausted(f"m_{N} not certified for ball {z}")
    return m


def _m_of_element(z: FieldElement, N: int, precision_bits, max_precision_bits) -> int:
    if z.is_zero():
        raise ValueError("m is undefined at 0")
    if z.is_rational():
        return 0 if z.rational_value() > 0 else _ceil_n_over_2(N)
    zn = z ** N
    on_breakpoint = zn.is_rational() and zn.rational_value() > 0
    field = z.field
    for prec in precision_ladder(precision_bits or field.precision_bits,
                                 max_precision_bits or field.max_precision_bits):
        w = embed(z, prec).complex_part
        m = _m_of_ball(w, N)
        if m is not None:
            return m
        if on_breakpoint:
            if w.real < 0 and w.imag.contains(0):
                return N // 2
            with flint.ctx.workprec(prec + GUARD_BITS):
                x = -N * w.arg() / (2 * flint.arb.pi())
            k = round(float(x.mid()))
            if x.contains(k) and not x.contains(k - 1) and not x.contains(k + 1):
                return k
    raise PrecisionExhausted(
        f"m_{N}(tau_1({z})) not certified below the precision cap; "
        "tau_1 of this element may be real without the element being rational")


# ---------------------------------------------------------------------------
# the order on {1, ..., r+1}


def xi(sigma: Permutation, t: int, tp: int, unit_system: UnitSystem) -> FieldElement:
    """Field element ``f_{t,sigma}^{-1} f_{t',sigma}``; ``tau_1`` of it is ``xi_sigma(t, t')``."""
    return unit_system.prefix(sigma, t).inverse() * unit_system.prefix(sigma, tp)


@dataclass(frozen=True)
class OrderContext:
    sigma: Permutation
    N: int
    m_single: tuple[int, ...]            # m(xi_sigma(t)) at index t-1
    m_pair: dict[tuple[int, int], int]   # m(xi_sigma(t, t'))
    order: tuple[int, ...]               # ascending: rho(r+1), ..., rho(1)

    @property
    def size(self) -> int:
        return len(self.m_single)

    def m(self, t: int) -> int:
        return self.m_single[t - 1]

    def rho(self, q: int) -> int:
        return self.order[self.size - q]


def _precedes(t: int, tp: int, m_single, m_pair, N: int) -> bool:
    if t == tp:
        return False
    m_t, m_tp = m_single[t - 1], m_single[tp - 1]
    if (m_pair[t, tp] - (m_tp - m_t)) % N != 0:
        return False
    return (m_pair[t, tp] + m_pair[tp, t]) % N == 1 or tp < t


def precedes(t: int, tp: int, order_context: OrderContext) -> bool:
    """Whether ``t`` comes strictly before ``t'`` for the context's permutation."""
    return _precedes(t, tp, order_context.m_single, order_context.m_pair, order_context.N)


def build_order(sigma: Permutation, unit_system: UnitSystem, N: int, *,
                precision_bits: int | None = None, max_precision_bits: int | None = None) -> OrderContext:
    size = unit_system.r + 1
    kw = dict(precision_bits=precision_bits, max_precision_bits=max_precision_bits)
    prefixes = [unit_system.prefix(sigma, t) for t in range(1, size + 1)]
    inverses = [f.inverse() for f in prefixes]
    m_pair = {}
    for t in range(1, size + 1):
        for tp in range(1, size + 1):
            m_pair[t, tp] = 0 if t == tp else m_of(inverses[t - 1] * prefixes[tp - 1], N, **kw)
    m_single = tuple(m_pair[size, t] for t in range(1, size + 1))

    elems = range(1, size + 1)
    rel = {(a, b): _precedes(a, b, m_single, m_pair, N) for a in elems for b in elems}
    for a in elems:
        for b in elems:
            if a != b and rel[a, b] == rel[b, a]:
                raise OrderViolation(f"sigma={sigma}: {a} and {b} are not strictly comparable")
            for c in elems:
                if rel[a, b] and rel[b, c] and not rel[a, c]:
                    raise OrderViolation(f"sigma={sigma}: transitivity fails on ({a}, {b}, {c})")
    order = tuple(sorted(elems, key=lambda a: sum(rel[b, a] for b in elems)))
    return OrderContext(tuple(sigma), N, m_single, m_pair, order)


# ---------------------------------------------------------------------------
# anchors


def validate_alpha(candidate: FieldElement, t: int, N: int, precision_bits: int | None = None,
                   max_precision_bits: int | None = None) -> bool:
    """True iff ``candidate`` is in ``k_+`` and ``arg(tau_1(candidate) e^{-2 pi i t/N})``
    lies strictly inside ``(-pi/2N, pi/2N)``."""
    if candidate.is_zero() or not is_totally_positive(candidate, precision_bits, max_precision_bits):
        return False
    field = candidate.field
    boundary_possible = None
    for prec in precision_ladder(precision_bits or field.precision_bits,
                                 max_precision_bits or field.max_precision_bits):
        with flint.ctx.workprec(prec + GUARD_BITS):
            rot = flint.acb(flint.arb(flint.fmpq(-2 * t, N))).exp_pi_i()
            w = embed(candidate, prec).complex_part * rot
            if w.real < 0:
                return False
            if not (w.real > 0 or w.imag > 0 or w.imag < 0):
                continue
            a = w.arg()
            bound = flint.arb.pi() / (2 * N)
            if a < bound and a > -bound:
                return True
            if a > bound or a < -bound:
                return False
        if boundary_possible is None:
            p = candidate ** (4 * N)
            boundary_possible = p.is_rational()
        if boundary_possible:
            return False
    raise PrecisionExhausted(f"argument window for {candidate} not certified")


def auto_select_alphas(field: NumberField, N: int = 3, search_bound: int = 4, *,
                       precision_bits: int | None = None) -> AlphaTable:
    """Deterministic anchor search.

    For each residue ``t``, scan integer coordinate vectors by increasing
    sup-norm ``B = 1, 2, ..., search_bound``, lexicographically within one
    ``B``, and keep the first vector that passes :func:`validate_alpha`.
    """
    if N < 3:
        raise InvalidAlpha("N must be at least 3", code="N.range")
    alphas = []
    for t in range(N):
        found = None
        for B in range(1, search_bound + 1):
            for coords in itertools.product(range(-B, B + 1), repeat=field.degree):
                if max(abs(c) for c in coords) != B:
                    continue
                cand = field.element(coords)
                if validate_alpha(cand, t, N, precision_bits):
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            raise SearchExhausted(f"no anchor for t = {t} with coordinates bounded by {search_bound}")
        alphas.append(found)
    return AlphaTable(N, tuple(alphas))


# ---------------------------------------------------------------------------
# cones


def build_generators(mu: Mu, order_context: OrderContext, alpha_table: AlphaTable,
                     unit_system: UnitSystem) -> tuple[FieldElement, ...]:
    sigma, q, n = mu
    ctx = order_context
    rq = ctx.rho(q)
    gens = []
    for t in range(1, ctx.size + 1):
        shift = 1 if precedes(t, rq, ctx) else 0
        gens.append(unit_system.prefix(sigma, t) * alpha_table(ctx.m(t) + n + shift))
    gens.append(unit_system.prefix(sigma, rq) * alpha_table(ctx.m(rq) + n + 1))
    return tuple(gens)


def psi_matrix(generators: Sequence[FieldElement], precision_bits: int) -> flint.arb_mat:
    """Real matrix whose columns are ``(Re, Im, x_1, ..., x_r)`` of each generator."""
    cols = [minkowski_coords(g, precision_bits) for g in generators]
    n = len(cols)
    with flint.ctx.workprec(precision_bits + GUARD_BITS):
        return flint.arb_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)])


def generator_det(generators: Sequence[FieldElement], precision_bits: int) -> flint.arb:
    with flint.ctx.workprec(precision_bits + GUARD_BITS):
        return psi_matrix(generators, precision_bits).det()


def compute_weight(generators: Sequence[FieldElement], sigma: Permutation, unit_system: UnitSystem, *,
                   precision_bits: int | None = None, max_precision_bits: int | None = None) -> int:
    """``sgn(sigma) * sign(det generators) / sign(det Log eps)``; zero iff Q-dependent."""
    field = unit_system.field
    if rational_rank(generators) < field.degree:
        return 0
    sign = certified_sign(lambda prec: generator_det(generators, prec), exact_zero_test=False,
                          precision_bits=precision_bits or field.precision_bits,
                          max_precision_bits=max_precision_bits or field.max_precision_bits)
    return permutation_sign(sigma) * int(sign) * unit_system.regulator_sign


def closure_coefficients(generators: Sequence[FieldElement], precision_bits: int) -> tuple[flint.arb, ...]:
    """Coefficients ``c`` with ``e_last = sum c_i * generator_i`` in real coordinates."""
    n = len(generators)
    with flint.ctx.workprec(precision_bits + GUARD_BITS):
        rhs = flint.arb_mat(n, 1, [0] * (n - 1) + [1])
        sol = psi_matrix(generators, precision_bits).solve(rhs)
        return tuple(sol[i, 0] for i in range(n))


def closure_flags(generators: Sequence[FieldElement], *, precision_bits: int | None = None,
                  max_precision_bits: int | None = None) -> tuple[bool, ...]:
    """``True`` (closed, ``[0, inf)``) where the coefficient of ``e_last`` is positive,
    ``False`` (open, ``(0, inf)``) where it is negative."""
    field = generators[0].field
    for prec in precision_ladder(precision_bits or field.precision_bits,
                                 max_precision_bits or field.max_precision_bits):
        try:
            coeffs = closure_coefficients(generators, prec)
        except ZeroDivisionError:
            continue
        if any(c.is_zero() for c in coeffs):
            raise ZeroCoefficient("a coefficient of e_last vanishes; generators are inconsistent")
        if all(c > 0 or c < 0 for c in coeffs):
            return tuple(bool(c > 0) for c in coeffs)
    raise PrecisionExhausted("signs of the e_last coefficients not certified")


@dataclass(frozen=True)
class SignedCone:
    mu: Mu
    generators: tuple[FieldElement, ...]
    weight: int
    closure_flags: tuple[bool, ...] | None = None

    @property
    def active(self) -> bool:
        return self.weight != 0

    @property
    def label(self) -> str:
        sigma, q, n = self.mu
        return f"{cycle_notation(sigma)},{q},{n}"


@dataclass(frozen=True)
class SignedDomain:
    field: NumberField
    unit_system: UnitSystem
    alpha_table: AlphaTable
    cones: tuple[SignedCone, ...]
    orders: dict[Permutation, OrderContext] = dc_field(default_factory=dict, compare=False)
    metadata: dict = dc_field(default_factory=dict, compare=False)

    @property
    def N(self) -> int:
        return self.alpha_table.N

    @property
    def regulator_sign(self) -> int:
        return self.unit_system.regulator_sign

    @property
    def active_cones(self) -> tuple[SignedCone, ...]:
        return tuple(c for c in self.cones if c.weight != 0)

    @property
    def is_true_domain(self) -> bool:
        return all(c.weight != -1 for c in self.cones)

    def cone(self, mu: Mu) -> SignedCone:
        sigma, q, n = mu
        key = (tuple(sigma), q, n)
        for c in self.cones:
            if c.mu == key:
                return c
        raise KeyError(mu)


def build_signed_domain(field: NumberField, unit_system: UnitSystem, alpha_table: AlphaTable, *,
                        precision_bits: int | None = None,
                        max_precision_bits: int | None = None) -> SignedDomain:
    """Run the full construction: one :class:`SignedCone` per ``mu``, in enumeration order."""
    prec = precision_bits or field.precision_bits
    cap = max_precision_bits or field.max_precision_bits
    kw = dict(precision_bits=prec, max_precision_bits=cap)
    N = alpha_table.N
    orders = {sigma: build_order(sigma, unit_system, N, **kw) for sigma in permutations(field.r)}
    cones = []
    for mu in mu_enumeration(field.r, N):
        gens = build_generators(mu, orders[mu[0]], alpha_table, unit_system)
        w = compute_weight(gens, mu[0], unit_system, **kw)
        flags = closure_flags(gens, **kw) if w else None
        cones.append(SignedCone(mu, gens, w, flags))
        log.debug("cone %s weight %+d", mu, w)
    metadata = {
        "precision_bits": prec,
        "max_precision_bits": cap,
        "tau1_convention": field.tau1_im_sign,
        "tool_version": __version__,
    }
    return SignedDomain(field, unit_system, alpha_table, tuple(cones), orders, metadata)
