"""Exact arithmetic in k, certified embeddings, and exact linear algebra."""

from .embed import (
    EmbeddingPoint,
    Sign,
    certified_sign,
    embed,
    is_totally_positive,
    log_embedding,
    minkowski_coords,
    project_ell,
)
from .field import FieldElement, NumberField, construct_field, format_rational, to_fmpq, to_fraction
from .linalg import RationalMatrix, coordinate_matrix, rational_rank, solve_in_basis
from .precision import DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS, precision_ladder


def multiply(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def invert(a: FieldElement) -> FieldElement:
    return a.inverse()


__all__ = [
    "DEFAULT_PRECISION_BITS",
    "MAX_PRECISION_BITS",
    "EmbeddingPoint",
    "FieldElement",
    "NumberField",
    "RationalMatrix",
    "Sign",
    "certified_sign",
    "construct_field",
    "coordinate_matrix",
    "embed",
    "format_rational",
    "invert",
    "is_totally_positive",
    "log_embedding",
    "minkowski_coords",
    "multiply",
    "precision_ladder",
    "project_ell",
    "rational_rank",
    "solve_in_basis",
    "to_fmpq",
    "to_fraction",
]
