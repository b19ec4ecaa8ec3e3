"""Exact check that every unit orbit meets the signed cones with total weight 1.

Sample points are field elements, so the final membership decision is an
exact rational solve. Balls are used only to produce a finite superset of
candidate unit exponents.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import flint

from .errors import ExponentCapExceeded, NotTotallyPositive, PrecisionExhausted, SamplerStarved
from .nf_core import FieldElement, coordinate_matrix, is_totally_positive, log_embedding, project_ell
from .nf_core.precision import GUARD_BITS
from .shintani import Mu, SignedCone, SignedDomain

DEFAULT_MARGIN = 1e-6
EXPONENT_CAP = 64
SAMPLER_ALGORITHM = "MT19937 (Python random.Random)"


def is_true_domain(domain: SignedDomain) -> bool:
    """No cone carries weight -1."""
    return all(c.weight != -1 for c in domain.cones)


# ---------------------------------------------------------------------------
# exact membership


class _ConeSolver:
    """Inverse coordinate matrix of one cone, reused across many points."""

    def __init__(self, cone: SignedCone):
        if cone.weight == 0:
            raise ValueError(f"cone {cone.mu} has weight 0 and no closure flags")
        self.cone = cone
        self.inverse = coordinate_matrix(cone.generators).inverse().fmpq_mat
        self.n = len(cone.generators)

    def coefficients(self, y: FieldElement) -> list[flint.fmpq]:
        rhs = flint.fmpq_mat(self.n, 1, list(y.fmpq_coords))
        sol = self.inverse * rhs
        return [sol[i, 0] for i in range(self.n)]

    def contains(self, y: FieldElement) -> bool:
        return all(c >= 0 if closed else c > 0
                   for c, closed in zip(self.coefficients(y), self.cone.closure_flags))


def cone_contains_exact(cone: SignedCone, y: FieldElement) -> bool:
    """Whether ``y`` is a combination of the generators with admissible coefficients."""
    return _ConeSolver(cone).contains(y)


# ---------------------------------------------------------------------------
# candidate units


def _orientation(a: flint.acb, b: flint.acb) -> flint.arb:
    return a.real * b.imag - a.imag * b.real


def _origin_distance_lower(points: Sequence[flint.acb]) -> float | None:
    """Certified lower bound for the distance from 0 to the convex hull of
    ``points``, or ``None`` when 0 cannot be excluded from the hull."""
    for a, b, c in itertools.combinations(points, 3):
        signs = [_orientation(a, b), _orientation(b, c), _orientation(c, a)]
        if not (any(s > 0 for s in signs) and any(s < 0 for s in signs)):
            return None
    best = math.inf
    for p, q in itertools.combinations(points, 2):
        d = q - p
        dd = d.real ** 2 + d.imag ** 2
        t = -(p.real * d.real + p.imag * d.imag) / dd
        ends = min(float(abs(p).lower()), float(abs(q).lower()))
        perp = float((abs(_orientation(p, q)) / dd.sqrt()).lower())
        if t < 0 or t > 1:
            lower = ends
        elif t > 0 and t < 1:
            lower = perp
        else:
            lower = min(ends, perp)
        best = min(best, lower)
    return best if best > 0 else None


@dataclass
class _ConeGeometry:
    """Outer box of LOG(l(cone)) as float intervals (already margin-free)."""

    lower: list[float]
    upper: list[float]


class CoverageChecker:
    """Per-domain caches for repeated coverage counts."""

    def __init__(self, domain: SignedDomain, margin: float = DEFAULT_MARGIN,
                 exponent_cap: int = EXPONENT_CAP, precision_bits: int | None = None):
        self.domain = domain
        self.margin = float(margin)
        self.exponent_cap = exponent_cap
        self.prec = precision_bits or domain.field.precision_bits
        self.r = domain.field.r
        self.units = domain.unit_system.units
        self._solvers = {c.mu: _ConeSolver(c) for c in domain.active_cones}
        self._geometry: dict[Mu, _ConeGeometry] = {}
        self._unit_powers: dict[tuple[int, int], FieldElement] = {}
        cols = [log_embedding(u, "LOG", self.prec) for u in self.units]
        r = self.r
        with flint.ctx.workprec(self.prec + GUARD_BITS):
            lattice = flint.arb_mat(r, r, [cols[j][i] for i in range(r) for j in range(r)])
            if lattice.det().contains(0):
                raise PrecisionExhausted("projected log lattice of the units is not certified nonsingular")
            self._lattice_inverse = lattice.inv()

    def geometry(self, cone: SignedCone) -> _ConeGeometry:
        g = self._geometry.get(cone.mu)
        if g is None:
            g = self._geometry[cone.mu] = self._build_geometry(cone)
        return g

    def _build_geometry(self, cone: SignedCone) -> _ConeGeometry:
        pts = [project_ell(f, self.prec) for f in cone.generators]
        with flint.ctx.workprec(self.prec + GUARD_BITS):
            moduli = [abs(p.complex_part) for p in pts]
            dist = _origin_distance_lower([p.complex_part for p in pts])
            if dist is None:
                raise PrecisionExhausted(f"projected cone {cone.label} is not separated from the origin")
            lower = [math.log(dist)]
            upper = [max(float(m.log().upper()) for m in moduli)]
            for j in range(self.r - 1):
                logs = [p.real_parts[j].log() for p in pts]
                lower.append(min(float(x.lower()) for x in logs))
                upper.append(max(float(x.upper()) for x in logs))
        return _ConeGeometry(lower, upper)

    def unit_power(self, j: int, a: int) -> FieldElement:
        key = (j, a)
        out = self._unit_powers.get(key)
        if out is None:
            out = self._unit_powers[key] = self.units[j] ** a
        return out

    def unit(self, exponents: Sequence[int]) -> FieldElement:
        out = self.domain.field.one
        for j, a in enumerate(exponents):
            if a:
                out = out * self.unit_power(j, a)
        return out

    def candidate_units(self, cone: SignedCone, point: FieldElement,
                        margin: float | None = None) -> list[tuple[int, ...]]:
        margin = self.margin if margin is None else float(margin)
        geo = self.geometry(cone)
        shift = log_embedding(point, "LOG", self.prec)
        r = self.r
        with flint.ctx.workprec(self.prec + GUARD_BITS):
            box = []
            for i in range(r):
                lo, hi = geo.lower[i], geo.upper[i]
                pad = margin * max(1.0, abs(lo), abs(hi)) + 1e-12
                lo_b = flint.arb(lo - pad) - shift[i]
                hi_b = flint.arb(hi + pad) - shift[i]
                box.append(flint.arb((lo_b.lower() + hi_b.upper()) / 2, (hi_b.upper() - lo_b.lower()) / 2))
            ranges = []
            for i in range(r):
                acc = flint.arb(0)
                for j in range(r):
                    acc += self._lattice_inverse[i, j] * box[j]
                lo, hi = math.ceil(float(acc.lower())), math.floor(float(acc.upper()))
                if max(abs(lo), abs(hi)) > self.exponent_cap:
                    raise ExponentCapExceeded(
                        f"cone {cone.label}: exponent range [{lo}, {hi}] exceeds the cap {self.exponent_cap}")
                ranges.append(range(lo, hi + 1))
        return [tuple(a) for a in itertools.product(*ranges)]

    def count(self, point: FieldElement, margin: float | None = None) -> CoverageReport:
        start = time.perf_counter()
        hits: list[Hit] = []
        examined = 0
        for cone in self.domain.active_cones:
            solver = self._solvers[cone.mu]
            for a in self.candidate_units(cone, point, margin):
                examined += 1
                if solver.contains(self.unit(a) * point):
                    hits.append(Hit(cone.mu, a, cone.weight))
        return CoverageReport(point, tuple(hits), sum(h.weight for h in hits), examined,
                              time.perf_counter() - start)


@dataclass(frozen=True)
class Hit:
    mu: Mu
    exponents: tuple[int, ...]
    weight: int


@dataclass(frozen=True)
class CoverageReport:
    point: FieldElement
    hits: tuple[Hit, ...]
    signed_total: int
    candidates_examined: int
    elapsed: float = dc_field(compare=False)

    @property
    def unsigned_hits(self) -> int:
        return len(self.hits)

    def hit_set(self) -> frozenset[tuple[Mu, tuple[int, ...]]]:
        return frozenset((h.mu, h.exponents) for h in self.hits)


def candidate_units(cone: SignedCone, point: FieldElement, domain: SignedDomain,
                    margin: float = DEFAULT_MARGIN) -> list[tuple[int, ...]]:
    """Exponent vectors ``a`` that could put ``eps^a * point`` in ``cone`` (a superset)."""
    return CoverageChecker(domain, margin).candidate_units(cone, point)


def signed_coverage_count(point: FieldElement, domain: SignedDomain,
                          margin: float = DEFAULT_MARGIN) -> tuple[int, CoverageReport]:
    if not is_totally_positive(point):
        raise NotTotallyPositive(f"{point} is not totally positive")
    report = CoverageChecker(domain, margin).count(point)
    return report.signed_total, report


# ---------------------------------------------------------------------------
# batches


@dataclass(frozen=True)
class SamplerParams:
    numerator_bound: int = 50
    denominator_bound: int = 20
    max_attempts_per_sample: int = 1000


def sample_points(field, count: int, seed: int, params: SamplerParams = SamplerParams()) -> list[FieldElement]:
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > params.max_attempts_per_sample * max(count, 1):
            raise SamplerStarved(f"only {len(out)} of {count} totally positive points after {attempts - 1} draws")
        coords = [Fraction(rng.randint(-params.numerator_bound, params.numerator_bound),
                           rng.randint(1, params.denominator_bound)) for _ in range(field.degree)]
        x = field.element(coords)
        if not x.is_zero() and is_totally_positive(x):
            out.append(x)
    return out


def check_coverage_batch(domain: SignedDomain, sample_count: int, seed: int,
                         sampler_params: SamplerParams = SamplerParams(),
                         margin: float = DEFAULT_MARGIN) -> dict:
    """Signed counts for ``sample_count`` seeded random points; a plain summary dict."""
    checker = CoverageChecker(domain, margin)
    points = sample_points(domain.field, sample_count, seed, sampler_params)
    passed, failures = 0, []
    max_hits, weight_hist = 0, {"-1": 0, "+1": 0}
    single_positive = 0
    for index, x in enumerate(points):
        rep = checker.count(x)
        max_hits = max(max_hits, rep.unsigned_hits)
        for h in rep.hits:
            weight_hist["+1" if h.weight > 0 else "-1"] += 1
        if rep.unsigned_hits == 1 and rep.hits[0].weight == 1:
            single_positive += 1
        if rep.signed_total == 1:
            passed += 1
        else:
            failures.append({"index": index, "point": x.to_strings(), "signed_total": rep.signed_total})
    return {
        "samples": sample_count,
        "seed": seed,
        "sampler": {
            "algorithm": SAMPLER_ALGORITHM,
            "numerator_bound": sampler_params.numerator_bound,
            "denominator_bound": sampler_params.denominator_bound,
        },
        "margin": margin,
        "passed": passed,
        "failed": len(failures),
        "failures": failures,
        "max_unsigned_hits": max_hits,
        "single_positive_hit_points": single_positive,
        "hit_weights": weight_hist,
        "true_domain": is_true_domain(domain),
    }


__all__ = [
    "CoverageChecker",
    "CoverageReport",
    "Hit",
    "SamplerParams",
    "candidate_units",
    "check_coverage_batch",
    "cone_contains_exact",
    "is_true_domain",
    "sample_points",
    "signed_coverage_count",
]
