"""Number fields with exactly one complex place, and exact elements in them.

Elements are stored as rational polynomials in the generator reduced modulo
the minimal polynomial, so arithmetic never rounds. Embeddings are Arb balls
evaluated at certified root enclosures.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from functools import cached_property

import flint

from ..errors import FieldDivisionByZero, NotIrreducible, PrecisionExhausted, ValidationError, WrongSignature
from .precision import DEFAULT_PRECISION_BITS, GUARD_BITS, MAX_PRECISION_BITS, precision_ladder

TAU1_SIGNS = ("negative", "positive")


def to_fmpq(value) -> flint.fmpq:
    """Coerce int, Fraction, fmpq or a ``"p/q"`` string to ``fmpq``."""
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, (int, flint.fmpz)):
        return flint.fmpq(value)
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    if isinstance(value, str):
        frac = Fraction(value.strip())
        return flint.fmpq(frac.numerator, frac.denominator)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def to_fraction(value: flint.fmpq) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def format_rational(value) -> str:
    """Serialise a rational as ``"p/q"`` (``"p"`` when integral)."""
    q = to_fmpq(value)
    return str(int(q.p)) if q.q == 1 else f"{int(q.p)}/{int(q.q)}"


class NumberField:
    """``Q(gamma)`` for a monic irreducible integer polynomial of degree >= 3
    with exactly one pair of complex-conjugate roots.

    ``min_poly`` lists coefficients in ascending degree, e.g. ``[-1, 0, 1, 1]``
    for ``x^3 + x^2 - 1``. Embedding ``tau_1`` sends gamma to the complex root
    whose imaginary part has sign ``tau1_im_sign``; embeddings ``tau_2..tau_{r+1}``
    send it to the real roots in ascending order.
    """

    def __init__(self, min_poly: Sequence[int], tau1_im_sign: str = "negative",
                 precision_bits: int = DEFAULT_PRECISION_BITS,
                 max_precision_bits: int = MAX_PRECISION_BITS):
        if any(isinstance(c, bool) or not isinstance(c, (int, flint.fmpz)) for c in min_poly):
            raise ValidationError("minimal polynomial must have integer coefficients",
                                  code="field.min_poly.integer")
        coeffs = tuple(int(c) for c in min_poly)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) < 4:
            raise ValidationError("minimal polynomial must have degree >= 3",
                                  code="field.min_poly.degree")
        if coeffs[-1] != 1:
            raise ValidationError("minimal polynomial must be monic", code="field.min_poly.monic")
        if tau1_im_sign not in TAU1_SIGNS:
            raise ValidationError(f"tau1_im_sign must be one of {TAU1_SIGNS}",
                                  code="field.tau1_im_sign")
        self.min_poly = coeffs
        self.degree = len(coeffs) - 1
        self.r = self.degree - 2
        self.tau1_im_sign = tau1_im_sign
        self.precision_bits = int(precision_bits)
        self.max_precision_bits = int(max_precision_bits)
        self._zpoly = flint.fmpz_poly(list(coeffs))
        self._modulus = flint.fmpq_poly(list(coeffs))
        self._root_cache: dict[int, tuple[flint.acb, ...]] = {}
        self._check_irreducible()
        self.root_assignment(self.precision_bits)

    # -- validation -------------------------------------------------------

    def _check_irreducible(self) -> None:
        _, factors = self._zpoly.factor()
        if len(factors) != 1 or factors[0][1] != 1 or factors[0][0].degree() != self.degree:
            raise NotIrreducible(f"{self.poly_str()} is not irreducible over Q")

    def root_assignment(self, precision_bits: int | None = None) -> tuple[flint.acb, ...]:
        """Certified root enclosures ordered ``(tau_1, real ascending..., conj tau_1)``.

        Enclosures are computed with a few guard bits above ``precision_bits``
        and escalated until realness and the sign of ``Im tau_1`` are certified.
        """
        prec = self.precision_bits if precision_bits is None else int(precision_bits)
        cached = self._root_cache.get(prec)
        if cached is not None:
            return cached
        for work in precision_ladder(prec + GUARD_BITS, max(self.max_precision_bits, prec) + GUARD_BITS):
            with flint.ctx.workprec(work):
                roots = [root for root, _ in self._zpoly.complex_roots()]
                real, upper, lower, unsure = [], [], [], False
                for root in roots:
                    if root.imag.is_zero():
                        real.append(root)
                    elif root.imag > 0:
                        upper.append(root)
                    elif root.imag < 0:
                        lower.append(root)
                    else:
                        unsure = True
                if unsure:
                    continue
                if len(upper) != 1 or len(lower) != 1 or len(real) != self.r:
                    raise WrongSignature(
                        f"{self.poly_str()} has {len(real)} real roots and "
                        f"{len(upper)} complex pairs; exactly one complex pair is required")
                real_sorted = self._sort_real(real)
                if real_sorted is None:
                    continue
                tau1, conj = (lower[0], upper[0]) if self.tau1_im_sign == "negative" else (upper[0], lower[0])
                assignment = (tau1, *real_sorted, conj)
                if not _pairwise_disjoint(assignment):
                    continue
            self._root_cache[prec] = assignment
            return assignment
        raise PrecisionExhausted(f"roots of {self.poly_str()} not separable below the precision cap")

    @staticmethod
    def _sort_real(real: list[flint.acb]) -> list[flint.acb] | None:
        ordered = sorted(real, key=lambda z: float(z.real.mid()))
        for a, b in zip(ordered, ordered[1:]):
            if not a.real < b.real:
                return None
        return ordered

    # -- elements ---------------------------------------------------------

    def __call__(self, coords: Iterable) -> FieldElement:
        return self.element(coords)

    def element(self, coords: Iterable) -> FieldElement:
        """Element with the given power-basis coordinates (shorter lists are zero-padded)."""
        values = [to_fmpq(c) for c in coords]
        if len(values) > self.degree:
            raise ValidationError(f"expected at most {self.degree} coordinates, got {len(values)}",
                                  code="element.coords.length")
        return FieldElement(self, flint.fmpq_poly(values) if values else flint.fmpq_poly(0))

    def from_rational(self, value) -> FieldElement:
        return FieldElement(self, flint.fmpq_poly([to_fmpq(value)]))

    @cached_property
    def one(self) -> FieldElement:
        return self.from_rational(1)

    @cached_property
    def zero(self) -> FieldElement:
        return self.from_rational(0)

    @cached_property
    def gen(self) -> FieldElement:
        return FieldElement(self, flint.fmpq_poly([0, 1]))

    def power_basis(self) -> list[FieldElement]:
        return [self.gen ** i for i in range(self.degree)]

    def poly_str(self) -> str:
        """``min_poly`` written out, e.g. ``x^3 + x^2 - 1``."""
        out = ""
        for i in range(self.degree, -1, -1):
            c = self.min_poly[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __repr__(self) -> str:
        return f"NumberField({self.poly_str()}, r={self.r}, tau1_im_sign={self.tau1_im_sign!r})"


def _pairwise_disjoint(balls: Sequence[flint.acb]) -> bool:
    for i, a in enumerate(balls):
        for b in balls[i + 1:]:
            if a.overlaps(b):
                return False
    return True


def construct_field(min_poly: Sequence[int], tau1_im_sign: str = "negative",
                    precision_bits: int = DEFAULT_PRECISION_BITS) -> NumberField:
    """Validate ``min_poly`` and return the field with its certified root assignment."""
    return NumberField(min_poly, tau1_im_sign=tau1_im_sign, precision_bits=precision_bits)


class FieldElement:
    """Exact element of a :class:`NumberField`, immutable."""

    __slots__ = ("field", "_poly", "__weakref__")

    def __init__(self, field: NumberField, poly: flint.fmpq_poly):
        self.field = field
        if poly.degree() >= field.degree:
            poly = poly % field._modulus
        self._poly = poly

    # -- coordinates ------------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(to_fraction(c) for c in self.fmpq_coords)

    @property
    def fmpq_coords(self) -> tuple[flint.fmpq, ...]:
        raw = self._poly.coeffs()
        return tuple(raw) + (flint.fmpq(0),) * (self.field.degree - len(raw))

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.fmpq_coords]

    @classmethod
    def from_strings(cls, field: NumberField, values: Sequence[str]) -> FieldElement:
        return field.element(values)

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return to_fraction(self.fmpq_coords[0])

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements belong to different fields")
            return other
        return self.field.from_rational(other)

    def __add__(self, other) -> FieldElement:
        return FieldElement(self.field, self._poly + self._coerce(other)._poly)

    __radd__ = __add__

    def __sub__(self, other) -> FieldElement:
        return FieldElement(self.field, self._poly - self._coerce(other)._poly)

    def __rsub__(self, other) -> FieldElement:
        return FieldElement(self.field, self._coerce(other)._poly - self._poly)

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, -self._poly)

    def __mul__(self, other) -> FieldElement:
        return FieldElement(self.field, self._poly * self._coerce(other)._poly)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise FieldDivisionByZero("inverse of zero")
        g, s, _ = self._poly.xgcd(self.field._modulus)
        # g is a nonzero constant because the modulus is irreducible
        return FieldElement(self.field, s / g.coeffs()[0])

    def __truediv__(self, other) -> FieldElement:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> FieldElement:
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> FieldElement:
        exponent = int(exponent)
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = FieldElement(self.field, flint.fmpq_poly([1]))
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self._poly == other._poly
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.min_poly, tuple(self.to_strings())))

    # -- invariants -------------------------------------------------------

    def multiplication_matrix(self) -> flint.fmpq_mat:
        """Matrix of ``x -> self * x`` on the power basis (columns are images)."""
        n = self.field.degree
        cols = [(self * b).fmpq_coords for b in self.field.power_basis()]
        return flint.fmpq_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)])

    def norm(self) -> Fraction:
        """Exact absolute norm ``N_{k/Q}``; for a monic modulus this is the resultant."""
        return to_fraction(self.multiplication_matrix().det())

    def trace(self) -> Fraction:
        m = self.multiplication_matrix()
        return to_fraction(sum((m[i, i] for i in range(self.field.degree)), flint.fmpq(0)))

    def evaluate(self, point: flint.acb) -> flint.acb:
        """Horner evaluation of the coordinate polynomial at ``point`` (current precision)."""
        acc = flint.acb(0)
        for c in reversed(self.fmpq_coords):
            acc = acc * point + flint.acb(flint.arb(c))
        return acc

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.fmpq_coords):
            if c == 0:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                terms.append(format_rational(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{format_rational(c)}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"
