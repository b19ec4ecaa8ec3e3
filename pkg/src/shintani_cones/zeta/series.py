"""Shintani series by shells and the signed-domain formula for partial zeta values."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from ..errors import ShellCapReached, ValidationError
from ..nf_core import FieldElement, embed, minkowski_coords
from ..shintani import Mu, SignedCone, SignedDomain
from . import kernel
from .lattice import IdealLattice, enumerate_residues

log = logging.getLogger(__name__)

SAFETY = 10.0
MIN_SHELLS = 4
DEFAULT_SHELL_CAP = 400
REAL_PLACE_PRODUCT = "norm-consistent: product over the r real places"


@dataclass(frozen=True)
class SeriesResult:
    value: float
    error_estimate: float
    shells: int
    shell_sums: tuple[float, ...] = dc_field(repr=False)


def _float_coords(x: FieldElement) -> np.ndarray:
    return np.array([float(c.mid()) for c in minkowski_coords(embed(x))], dtype=np.float64)


def _decay_ratio(shell_sums: list[float]) -> float:
    """Geometric mean of the last three shell-to-shell ratios."""
    a, b, c, d = shell_sums[-4:]
    if min(a, b, c) <= 0:
        return 1.0
    return (d / a) ** (1.0 / 3.0)


def shintani_zeta_series(cone: SignedCone, x: FieldElement, s: float, tol: float = 1e-8,
                         shell_cap: int = DEFAULT_SHELL_CAP, backend: str | None = None) -> SeriesResult:
    """Sum of ``Norm(x + sum n_t f_t)^(-s)`` over ``n >= 0``, shell by shell.

    Shell ``M`` collects every ``n`` with ``sum n_t = M``. Summation stops once
    three consecutive shells each fall below ``tol * S * (1 - rho) / SAFETY``
    where ``rho`` is the fitted shell decay ratio; the returned error is the
    geometric tail ``SAFETY * c_M * rho / (1 - rho)``, a heuristic estimate.
    """
    if not s > 1:
        raise ValidationError("the series converges only for s > 1", code="zeta.s.range")
    base = _float_coords(x)
    gens = np.vstack([_float_coords(f) for f in cone.generators])
    shell_sums: list[float] = []
    for shell in range(shell_cap + 1):
        shell_sums.append(kernel.reduce_terms(kernel.shell_terms(base, gens, shell, s, backend)))
        if len(shell_sums) < MIN_SHELLS:
            continue
        rho = _decay_ratio(shell_sums)
        if rho >= 1.0:
            continue
        total = math.fsum(shell_sums)
        bound = tol * total * (1.0 - rho) / SAFETY
        if all(c < bound for c in shell_sums[-3:]):
            error = SAFETY * shell_sums[-1] * rho / (1.0 - rho)
            return SeriesResult(total, error, shell, tuple(shell_sums))
    total = math.fsum(shell_sums)
    rho = _decay_ratio(shell_sums) if len(shell_sums) >= MIN_SHELLS else 1.0
    error = SAFETY * shell_sums[-1] * rho / (1.0 - rho) if rho < 1.0 else math.inf
    raise ShellCapReached(f"tolerance {tol} not reached within {shell_cap} shells",
                          partial_value=total, error_estimate=error, shells=shell_cap)


@dataclass(frozen=True)
class ZetaJob:
    domain: SignedDomain
    lattice: IdealLattice
    s: float
    target_rel_tol: float = 1e-8
    shell_cap: int = DEFAULT_SHELL_CAP

    def __post_init__(self):
        if not float(self.s) > 1:
            raise ValidationError(f"s = {self.s} is outside the region s > 1", code="zeta.s.range")
        if not self.target_rel_tol > 0:
            raise ValidationError("tolerance must be positive", code="zeta.tol")
        if self.lattice.field != self.domain.field:
            raise ValidationError("lattice and domain live in different fields", code="zeta.lattice.field")


@dataclass(frozen=True)
class ConeContribution:
    mu: Mu
    weight: int
    residues: int
    value: float
    error_estimate: float
    shells: int


@dataclass(frozen=True)
class ZetaResult:
    value: float
    error_estimate: float
    shells: int
    cones: tuple[ConeContribution, ...]
    backend: str
    real_place_product: str = REAL_PLACE_PRODUCT


def partial_zeta(job: ZetaJob, backend: str | None = None) -> ZetaResult:
    """``Na^(-s) * sum_mu w_mu * sum_{x in R(cone)} series(cone, x, s)``.

    Summation runs over active cones in enumeration order and, inside a cone,
    over residues in lattice-coordinate order.
    """
    job.lattice.check_alphas(job.domain.alpha_table)
    s = float(job.s)
    scale = float(Fraction(job.lattice.norm_a)) ** (-s)
    contributions, signed, errors = [], [], []
    max_shells = 0
    for cone in job.domain.active_cones:
        residues = enumerate_residues(cone, job.lattice)
        values, errs, shells = [], [], 0
        for x, _ in residues:
            res = shintani_zeta_series(cone, x, s, job.target_rel_tol, job.shell_cap, backend)
            values.append(res.value)
            errs.append(res.error_estimate)
            shells = max(shells, res.shells)
        cone_value = math.fsum(values)
        cone_error = math.fsum(errs)
        contributions.append(ConeContribution(cone.mu, cone.weight, len(residues), cone_value, cone_error, shells))
        signed.append(cone.weight * cone_value)
        errors.append(cone_error)
        max_shells = max(max_shells, shells)
        log.debug("cone %s: %d residues, value %.12g", cone.label, len(residues), cone_value)
    return ZetaResult(scale * math.fsum(signed), scale * math.fsum(errors), max_shells,
                      tuple(contributions), backend or kernel.BACKEND)
