"""Partial zeta values from a signed cone domain."""

from .kernel import BACKEND
from .lattice import IdealLattice, enumerate_residues, residue_index
from .series import (
    ConeContribution,
    SeriesResult,
    ZetaJob,
    ZetaResult,
    partial_zeta,
    shintani_zeta_series,
)

__all__ = [
    "BACKEND",
    "ConeContribution",
    "IdealLattice",
    "SeriesResult",
    "ZetaJob",
    "ZetaResult",
    "enumerate_residues",
    "partial_zeta",
    "residue_index",
    "shintani_zeta_series",
]
