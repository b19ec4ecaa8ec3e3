import random
from fractions import Fraction

import pytest

from conftest import example1_alphas
from shintani_cones.errors import ExponentCapExceeded, NotTotallyPositive, SamplerStarved
from shintani_cones.shintani import AlphaTable, UnitSystem, build_signed_domain
from shintani_cones.verify import (
    CoverageChecker,
    SamplerParams,
    candidate_units,
    check_coverage_batch,
    cone_contains_exact,
    is_true_domain,
    sample_points,
    signed_coverage_count,
)
from oracles import in_cone_fractions

ID = (1,)


def test_membership_examples(example1):
    c = example1.cone((ID, 2, 1))          # flags open, closed, closed
    assert cone_contains_exact(c, c.generators[0])
    assert not cone_contains_exact(c, c.generators[1])
    c = example1.cone((ID, 1, 1))          # flags closed, open, closed
    assert cone_contains_exact(c, c.generators[1])
    assert not cone_contains_exact(c, c.generators[0] + c.generators[2])


def test_cones_never_contain_zero(example1, example2, example3):
    for dom in (example1, example2, example3):
        for c in dom.active_cones:
            assert not all(c.closure_flags)
            assert not cone_contains_exact(c, dom.field.zero)


def test_weight_zero_cone_rejected(example1):
    with pytest.raises(ValueError):
        cone_contains_exact(example1.cone((ID, 1, 0)), example1.field.one)


def test_membership_matches_fraction_oracle(example1, example3):
    rng = random.Random(3)
    for dom in (example1, example3):
        n = dom.field.degree
        for c in dom.active_cones:
            for _ in range(30):
                # mix generators with small rational coefficients, some zero, some negative
                t = [Fraction(rng.randint(-2, 4), rng.randint(1, 3)) * rng.randint(0, 1) for _ in range(n)]
                y = sum((ti * f for ti, f in zip(t, c.generators)), dom.field.zero)
                expected = in_cone_fractions([f.coords for f in c.generators], c.closure_flags, y.coords)
                assert cone_contains_exact(c, y) == expected


def test_true_domain_flags(example1, example2, example3):
    assert not is_true_domain(example1)
    assert is_true_domain(example2)
    assert is_true_domain(example3)
    assert example2.is_true_domain and not example1.is_true_domain


def test_candidates_contain_generator_identity(example1, example3):
    for dom in (example1, example3):
        checker = CoverageChecker(dom)
        for c in dom.active_cones:
            assert (0,) * dom.field.r in checker.candidate_units(c, c.generators[0])
            assert (0,) * dom.field.r in candidate_units(c, sum(c.generators[1:], c.generators[0]), dom)


def test_candidates_superset_of_brute_force(example1):
    one = example1.field.one
    g = example1.unit_system.units[0]
    checker = CoverageChecker(example1)
    for c in example1.active_cones:
        brute = {(a,) for a in range(-20, 21) if cone_contains_exact(c, g ** a * one)}
        assert brute <= set(checker.candidate_units(c, one))


def test_point_one_counts_once(example1):
    total, report = signed_coverage_count(example1.field.one, example1)
    assert total == 1
    g = example1.unit_system.units[0]
    brute = sum(c.weight for c in example1.active_cones for a in range(-20, 21)
                if cone_contains_exact(c, g ** a))
    assert brute == 1
    assert all(cone_contains_exact(example1.cone(h.mu), checker_unit(example1, h.exponents))
               for h in report.hits)


def checker_unit(dom, exps):
    out = dom.field.one
    for u, a in zip(dom.unit_system.units, exps):
        out = out * u ** a
    return out


def test_margin_monotone_and_irrelevant(example1):
    checker = CoverageChecker(example1)
    for x in sample_points(example1.field, 25, seed=1):
        for c in example1.active_cones:
            assert set(checker.candidate_units(c, x, 1e-6)) <= set(checker.candidate_units(c, x, 1e-3))
        assert checker.count(x, 1e-6).hit_set() == checker.count(x, 1e-3).hit_set()


def test_scale_and_orbit_invariance(example1, example3):
    rng = random.Random(8)
    for dom in (example1, example3):
        checker = CoverageChecker(dom)
        for x in sample_points(dom.field, 10, seed=2):
            base = checker.count(x).signed_total
            c = Fraction(rng.randint(1, 30), rng.randint(1, 30))
            assert checker.count(c * x).signed_total == base == 1
            for u in dom.unit_system.units:
                assert checker.count(u * x).signed_total == base
                assert checker.count(u.inverse() * x).signed_total == base


def test_example2_single_positive_hits(example2):
    summary = check_coverage_batch(example2, 100, seed=4)
    assert summary["passed"] == 100
    assert summary["single_positive_hit_points"] == 100
    assert summary["hit_weights"]["-1"] == 0


def test_inverse_unit_domain_covers(cubic):
    units = UnitSystem.from_units([cubic.gen.inverse()])
    dom = build_signed_domain(cubic, units, AlphaTable.from_alphas(example1_alphas(cubic)))
    summary = check_coverage_batch(dom, 50, seed=9)
    assert summary["failed"] == 0


def test_batch_is_deterministic(example1):
    a = check_coverage_batch(example1, 20, seed=5)
    b = check_coverage_batch(example1, 20, seed=5)
    assert a == b
    assert a["sampler"]["algorithm"].startswith("MT19937")
    assert sample_points(example1.field, 5, 1) != sample_points(example1.field, 5, 2)


def test_sampler_bounds(example1):
    params = SamplerParams(3, 2)
    for x in sample_points(example1.field, 30, seed=0, params=params):
        assert all(abs(c.numerator) <= 3 * 2 and c.denominator <= 2 for c in x.coords)


def test_sampler_starves():
    from shintani_cones.nf_core import construct_field
    # one draw per sample: the first rejection exhausts the budget
    k = construct_field([-1, 0, 1, 1])
    with pytest.raises(SamplerStarved):
        sample_points(k, 200, seed=0, params=SamplerParams(1, 1, max_attempts_per_sample=1))


def test_exponent_cap(example1):
    checker = CoverageChecker(example1, exponent_cap=2)
    g = example1.unit_system.units[0]
    with pytest.raises(ExponentCapExceeded):
        checker.count(g ** 40)


def test_lattice_nonsingular(example1, example3):
    for dom in (example1, example3):
        checker = CoverageChecker(dom)
        assert not checker._lattice_inverse.det().contains(0)


def test_rejects_non_positive_points(example1):
    with pytest.raises(NotTotallyPositive):
        signed_coverage_count(-example1.field.one, example1)
