"""Exact rational matrices (backed by FLINT's ``fmpq_mat``) and the cone-coordinate solver."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import flint

from ..errors import InconsistentSystem, SingularBasis
from .field import FieldElement, to_fmpq, to_fraction


class RationalMatrix:
    """Dense matrix of rationals with exact rank, determinant and solve."""

    __slots__ = ("_m",)

    def __init__(self, rows: Sequence[Sequence] | flint.fmpq_mat):
        if isinstance(rows, flint.fmpq_mat):
            self._m = rows
            return
        rows = [list(row) for row in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise ValueError("ragged matrix")
        self._m = flint.fmpq_mat(nrows, ncols, [to_fmpq(x) for row in rows for x in row])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> RationalMatrix:
        cols = [list(c) for c in columns]
        return cls([[col[i] for col in cols] for i in range(len(cols[0]))])

    @property
    def dims(self) -> tuple[int, int]:
        return self._m.nrows(), self._m.ncols()

    @property
    def fmpq_mat(self) -> flint.fmpq_mat:
        return self._m

    def rows(self) -> list[list[Fraction]]:
        nr, nc = self.dims
        return [[to_fraction(self._m[i, j]) for j in range(nc)] for i in range(nr)]

    def rank(self) -> int:
        return self._m.rank()

    def det(self) -> Fraction:
        nr, nc = self.dims
        if nr != nc:
            raise ValueError("determinant of a non-square matrix")
        return to_fraction(self._m.det())

    def inverse(self) -> RationalMatrix:
        if self.rank() < self.dims[0]:
            raise SingularBasis("matrix is singular")
        return RationalMatrix(self._m.inv())

    def solve(self, rhs: Sequence) -> list[Fraction]:
        """Exact solution ``x`` of ``self @ x = rhs`` for a nonsingular square matrix."""
        n, nc = self.dims
        if n != nc or self.rank() < n:
            raise SingularBasis("system matrix is singular")
        b = flint.fmpq_mat(n, 1, [to_fmpq(v) for v in rhs])
        x = self._m.solve(b)
        return [to_fraction(x[i, 0]) for i in range(n)]

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix(self._m * other._m)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self._m == other._m

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows()!r})"


def coordinate_matrix(elements: Sequence[FieldElement]) -> RationalMatrix:
    """Matrix whose columns are the power-basis coordinates of ``elements``."""
    n = elements[0].field.degree
    cols = [e.fmpq_coords for e in elements]
    return RationalMatrix(flint.fmpq_mat(n, len(cols), [cols[j][i] for i in range(n) for j in range(len(cols))]))


def rational_rank(elements: Sequence[FieldElement]) -> int:
    """Dimension of the Q-span of ``elements``."""
    return coordinate_matrix(elements).rank()


def solve_in_basis(basis: Sequence[FieldElement], target: FieldElement) -> list[Fraction]:
    """Rational ``c`` with ``target == sum(c[t] * basis[t])``; ``basis`` must be a Q-basis of k."""
    field = target.field
    if len(basis) != field.degree:
        raise SingularBasis(f"need {field.degree} basis elements, got {len(basis)}")
    m = coordinate_matrix(basis)
    if m.rank() < field.degree:
        raise SingularBasis("basis elements are Q-linearly dependent")
    coeffs = m.solve(target.fmpq_coords)
    recombined = field.zero
    for c, b in zip(coeffs, basis):
        recombined = recombined + b * c
    if recombined != target:
        raise InconsistentSystem("recombination does not reproduce the target")
    return coeffs
