"""Certified Minkowski embeddings and the sign-certification policy."""

from __future__ import annotations

import enum
from collections.abc import Callable
from dataclasses import dataclass

import flint

from ..errors import NotTotallyPositive, PrecisionExhausted, ZeroLastCoordinate
from .field import FieldElement
from .precision import GUARD_BITS, precision_ladder


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@dataclass(frozen=True)
class EmbeddingPoint:
    """A point of ``C x R^m`` as Arb balls: the complex coordinate then ``m`` reals."""

    complex_part: flint.acb
    real_parts: tuple[flint.arb, ...]
    precision_bits: int

    def __mul__(self, other: EmbeddingPoint) -> EmbeddingPoint:
        if len(self.real_parts) != len(other.real_parts):
            raise ValueError("embedding points of different shapes")
        prec = min(self.precision_bits, other.precision_bits)
        with flint.ctx.workprec(prec + GUARD_BITS):
            return EmbeddingPoint(self.complex_part * other.complex_part,
                                  tuple(a * b for a, b in zip(self.real_parts, other.real_parts)),
                                  prec)

    def contains(self, other: EmbeddingPoint) -> bool:
        return self.complex_part.contains(other.complex_part) and all(
            a.contains(b) for a, b in zip(self.real_parts, other.real_parts))

    def overlaps(self, other: EmbeddingPoint) -> bool:
        return self.complex_part.overlaps(other.complex_part) and all(
            a.overlaps(b) for a, b in zip(self.real_parts, other.real_parts))

    def midpoint(self) -> tuple[complex, ...]:
        z = self.complex_part
        return (complex(float(z.real.mid()), float(z.imag.mid())),
                *(float(x.mid()) for x in self.real_parts))


def embed(a: FieldElement, precision_bits: int | None = None) -> EmbeddingPoint:
    """``(tau_1(a), tau_2(a), ..., tau_{r+1}(a))`` as balls containing the true values."""
    field = a.field
    prec = field.precision_bits if precision_bits is None else int(precision_bits)
    roots = field.root_assignment(prec)
    with flint.ctx.workprec(prec + GUARD_BITS):
        if a.is_rational():
            c = flint.arb(a.fmpq_coords[0])
            return EmbeddingPoint(flint.acb(c), (c,) * field.r, prec)
        z = a.evaluate(roots[0])
        reals = tuple(a.evaluate(root).real for root in roots[1:field.r + 1])
    return EmbeddingPoint(z, reals, prec)


def _as_point(p, precision_bits: int | None) -> EmbeddingPoint:
    return embed(p, precision_bits) if isinstance(p, FieldElement) else p


def minkowski_coords(p, precision_bits: int | None = None) -> tuple[flint.arb, ...]:
    """``(Re z, Im z, x_1, ..., x_m)`` for a point ``(z, x_1, ..., x_m)``."""
    p = _as_point(p, precision_bits)
    return (p.complex_part.real, p.complex_part.imag, *p.real_parts)


def project_ell(p, precision_bits: int | None = None) -> EmbeddingPoint:
    """Divide every coordinate but the last real one by the last real one.

    A :class:`FieldElement` is embedded first; its last coordinate vanishes
    only for zero, which is decided exactly.
    """
    if isinstance(p, FieldElement):
        if p.is_zero():
            raise ZeroLastCoordinate("the zero element has no projection")
        p = embed(p, precision_bits)
    elif not p.real_parts or p.real_parts[-1].contains(0):
        raise ZeroLastCoordinate("last real coordinate is zero or not certified nonzero")
    last = p.real_parts[-1]
    with flint.ctx.workprec(p.precision_bits + GUARD_BITS):
        return EmbeddingPoint(p.complex_part / last,
                              tuple(x / last for x in p.real_parts[:-1]),
                              p.precision_bits)


def log_embedding(a, variant: str = "Log", precision_bits: int | None = None) -> tuple[flint.arb, ...]:
    """Logarithmic embedding with ``r`` coordinates.

    ``variant="Log"`` takes a point of ``C* x R_+^r`` and returns
    ``(log|z|, log x_1, ..., log x_{r-1})``, dropping the last real coordinate.
    ``variant="LOG"`` takes a projected point of ``C* x R_+^{r-1}`` (a
    field element is projected first) and returns all ``r`` log-moduli.
    """
    if variant not in ("Log", "LOG"):
        raise ValueError("variant must be 'Log' or 'LOG'")
    if isinstance(a, FieldElement):
        if not is_totally_positive(a, precision_bits):
            raise NotTotallyPositive(f"{a} is not totally positive")
        r = a.field.r
        point = embed(a, precision_bits) if variant == "Log" else project_ell(a, precision_bits)
    else:
        point = a
        r = len(point.real_parts) + (0 if variant == "Log" else 1)
        if any(not x > 0 for x in point.real_parts) or point.complex_part.contains(0):
            raise NotTotallyPositive("point is not certified to lie in C* x R_+^m")
    with flint.ctx.workprec(point.precision_bits + GUARD_BITS):
        logs = [abs(point.complex_part).log()] + [x.log() for x in point.real_parts]
    return tuple(logs[:r])


def certified_sign(value: flint.arb | Callable[[int], flint.arb],
                   exact_zero_test: bool | Callable[[], bool] | None = None, *,
                   precision_bits: int | None = None,
                   max_precision_bits: int | None = None) -> Sign:
    """Sign of a real quantity known through enclosing balls.

    ``value`` is a ball or a function ``precision_bits -> ball``; only the
    latter can be escalated. When a ball straddles zero, ``exact_zero_test``
    (if supplied) decides whether the quantity is exactly zero; a negative
    answer means the quantity is nonzero and precision is doubled until the
    ball separates from zero.
    """
    known_zero = None
    if callable(value):
        attempts = ((prec, value(prec)) for prec in precision_ladder(precision_bits, max_precision_bits))
    else:
        attempts = iter([(None, value)])
    for _, ball in attempts:
        if ball > 0:
            return Sign.POSITIVE
        if ball < 0:
            return Sign.NEGATIVE
        if ball.is_zero():
            return Sign.ZERO
        if exact_zero_test is not None:
            if known_zero is None:
                known_zero = bool(exact_zero_test() if callable(exact_zero_test) else exact_zero_test)
            if known_zero:
                return Sign.ZERO
    raise PrecisionExhausted("sign not certified below the precision cap")


def is_totally_positive(a: FieldElement, precision_bits: int | None = None,
                        max_precision_bits: int | None = None) -> bool:
    """True iff every real embedding of the nonzero element ``a`` is positive."""
    if a.is_zero():
        return False
    field = a.field
    start = field.precision_bits if precision_bits is None else precision_bits
    cap = field.max_precision_bits if max_precision_bits is None else max_precision_bits
    pending = list(range(field.r))
    for prec in precision_ladder(start, cap):
        reals = embed(a, prec).real_parts
        if any(reals[j] < 0 for j in pending):
            return False
        pending = [j for j in pending if not reals[j] > 0]
        if not pending:
            return True
    raise PrecisionExhausted(f"signs of the real embeddings of {a} not certified")
