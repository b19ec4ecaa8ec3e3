"""Residues of a shifted lattice in the half-open parallelepiped of a cone."""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import flint

from ..errors import ConfigError, SingularBasis
from ..nf_core import FieldElement, coordinate_matrix, rational_rank, solve_in_basis
from ..shintani import AlphaTable, SignedCone


@dataclass(frozen=True)
class IdealLattice:
    """The Z-module spanned by ``basis`` together with its ideal norm.

    ``basis`` spans the lattice that residues are drawn from (shifted by 1);
    ``norm_a`` is the absolute norm of the ideal class representative.
    """

    basis: tuple[FieldElement, ...]
    norm_a: Fraction

    def __post_init__(self):
        field = self.basis[0].field
        if len(self.basis) != field.degree or rational_rank(self.basis) < field.degree:
            raise SingularBasis("lattice basis must have full rank", code="zeta.lattice.rank")
        if Fraction(self.norm_a) <= 0:
            raise ConfigError("norm_a must be positive", code="zeta.lattice.norm")

    @property
    def field(self):
        return self.basis[0].field

    @property
    def shift(self) -> FieldElement:
        return self.field.one

    @classmethod
    def power_basis(cls, field, scale: Fraction | int = 1, norm_a: Fraction | int | None = None) -> IdealLattice:
        """``scale * Z[gen]``; ``norm_a`` defaults to ``scale^(-degree)``."""
        scale = Fraction(scale)
        basis = tuple(b * scale for b in field.power_basis())
        if norm_a is None:
            norm_a = 1 / scale ** field.degree
        return cls(basis, Fraction(norm_a))

    def coordinates(self, x: FieldElement) -> list[Fraction]:
        return solve_in_basis(self.basis, x)

    def contains(self, x: FieldElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def check_alphas(self, alpha_table: AlphaTable) -> None:
        for t, a in enumerate(alpha_table.alphas):
            if not self.contains(a):
                raise ConfigError(f"alpha_{t} = {a} is not in the lattice", code="zeta.lattice.alphas")


def residue_index(cone: SignedCone, lattice: IdealLattice) -> Fraction:
    """``[lattice : Z f_1 + ... + Z f_n]``, the expected number of residues."""
    g = coordinate_matrix(cone.generators).det()
    b = coordinate_matrix(lattice.basis).det()
    return abs(g / b)


def _in_interval(y: flint.fmpq, closed: bool) -> bool:
    return (0 <= y < 1) if closed else (0 < y <= 1)


def enumerate_residues(cone: SignedCone, lattice: IdealLattice) -> list[tuple[FieldElement, tuple[Fraction, ...]]]:
    """All ``x = 1 + sum m_i b_i`` with cone coordinates ``y`` in the half-open cube.

    Each ``y_t`` lies in ``[0, 1)`` for a closed flag and ``(0, 1]`` for an
    open one. The result is ordered lexicographically by ``m``.
    """
    if cone.weight == 0 or cone.closure_flags is None:
        raise ValueError(f"cone {cone.label} has weight 0; residues are defined only for active cones")
    n = len(cone.generators)
    gen_inv = coordinate_matrix(cone.generators).inverse().fmpq_mat
    basis_mat = coordinate_matrix(lattice.basis).fmpq_mat
    transform = gen_inv * basis_mat                       # y = y0 + transform * m
    shift = lattice.shift
    y0 = gen_inv * flint.fmpq_mat(n, 1, list(shift.fmpq_coords))
    back = transform.inv()                                 # m = back * (y - y0)

    lo, hi = [], []
    for i in range(n):
        vals = []
        for corner in itertools.product((0, 1), repeat=n):
            v = sum((back[i, j] * (corner[j] - y0[j, 0]) for j in range(n)), flint.fmpq(0))
            vals.append(v)
        lo.append(math.ceil(Fraction(int(min(vals).p), int(min(vals).q))))
        hi.append(math.floor(Fraction(int(max(vals).p), int(max(vals).q))))

    out = []
    flags = cone.closure_flags
    for m in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        mv = flint.fmpq_mat(n, 1, list(m))
        y = y0 + transform * mv
        ys = [y[i, 0] for i in range(n)]
        if all(_in_interval(v, c) for v, c in zip(ys, flags)):
            x = shift
            for mi, b in zip(m, lattice.basis):
                if mi:
                    x = x + b * mi
            out.append((x, tuple(Fraction(int(v.p), int(v.q)) for v in ys)))
    return out
