import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import dedekind_zeta_cubic, mp_embed
from shintani_cones.errors import ConfigError, ShellCapReached, SingularBasis, ValidationError
from shintani_cones.zeta import (
    IdealLattice,
    ZetaJob,
    enumerate_residues,
    partial_zeta,
    residue_index,
    shintani_zeta_series,
)
from shintani_cones.zeta.lattice import _in_interval

ID = (1,)
CUBIC = [-1, 0, 1, 1]


@pytest.fixture(scope="module")
def zeta_disc23_s3():
    return dedekind_zeta_cubic(CUBIC, 3.0, ramified=(23,))


def test_lattice_validation(cubic, example1):
    g = cubic.gen
    with pytest.raises(SingularBasis):
        IdealLattice((cubic.one, g, g + 1), Fraction(1))
    with pytest.raises(ConfigError):
        IdealLattice.power_basis(cubic, norm_a=0)
    lat = IdealLattice.power_basis(cubic, 2)
    assert lat.norm_a == Fraction(1, 8)
    assert lat.contains(2 * g) and not lat.contains(g)
    with pytest.raises(ConfigError) as e:
        lat.check_alphas(example1.alpha_table)
    assert e.value.code == "zeta.lattice.alphas"


def test_example2_single_residue(example2):
    lat = IdealLattice.power_basis(example2.field)
    (cone,) = example2.active_cones
    res = enumerate_residues(cone, lat)
    assert len(res) == 1 == residue_index(cone, lat)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_residue_counts_match_index(example1, example3, M):
    for dom in (example1, example3):
        lat = IdealLattice.power_basis(dom.field, Fraction(1, M))
        for cone in dom.active_cones:
            res = enumerate_residues(cone, lat)
            assert len(res) == residue_index(cone, lat)
            base = residue_index(cone, IdealLattice.power_basis(dom.field))
            assert len(res) == base * M ** dom.field.degree
            for x, y in res:
                assert all(_in_interval(v, c) for v, c in zip(y, cone.closure_flags))
                rebuilt = sum((v * f for v, f in zip(y, cone.generators)), dom.field.zero)
                assert rebuilt == x
                assert lat.contains(x - dom.field.one)
            assert len({x for x, _ in res}) == len(res)


def test_residues_reject_weight_zero_cone(example1):
    with pytest.raises(ValueError):
        enumerate_residues(example1.cone((ID, 2, 0)), IdealLattice.power_basis(example1.field))


def test_first_shells_by_hand(example1):
    cone = example1.cone((ID, 1, 1))
    one = example1.field.one
    res = shintani_zeta_series(cone, one, 2.0, tol=1e-3)
    assert res.shell_sums[0] == 1.0
    # shell 1: one generator at a time, evaluated independently through mpmath roots
    expected = 0.0
    for f in cone.generators:
        (z,), (x,) = mp_embed(CUBIC, (one + f).coords)
        expected += float(abs(z) ** 2 * x) ** -2.0
    assert math.isclose(res.shell_sums[1], expected, rel_tol=1e-13)


def test_partial_sums_monotone_and_cap(example1):
    cone = example1.cone((ID, 2, 2))
    one = example1.field.one
    res = shintani_zeta_series(cone, one, 2.0, tol=1e-4, shell_cap=2000)
    assert all(c > 0 for c in res.shell_sums)
    partial = np.cumsum(res.shell_sums)
    assert np.all(np.diff(partial) > 0)
    with pytest.raises(ShellCapReached) as e:
        shintani_zeta_series(cone, one, 2.0, tol=1e-12, shell_cap=20)
    assert e.value.exit_code == 5 and e.value.shells == 20
    # more shells than the converged run, so a slightly larger partial sum
    assert res.shells < 20
    assert 0 <= e.value.partial_value - res.value <= res.error_estimate


def test_tighter_tolerance_within_estimate(example1):
    """Running further moves the value by less than the reported tail estimate."""
    one = example1.field.one
    for cone in example1.active_cones:
        coarse = shintani_zeta_series(cone, one, 2.0, tol=1e-4, shell_cap=2000)
        fine = shintani_zeta_series(cone, one, 2.0, tol=1e-6, shell_cap=4000)
        assert fine.shells > coarse.shells
        assert 0 <= fine.value - coarse.value <= coarse.error_estimate


def test_s_range():
    with pytest.raises(ValidationError) as e:
        ZetaJob(None, None, 1.0)
    assert e.value.code == "zeta.s.range"


def test_series_s_range(example1):
    with pytest.raises(ValidationError):
        shintani_zeta_series(example1.active_cones[0], example1.field.one, 0.5)


def test_oracle_s3(example1, example2, zeta_disc23_s3):
    for dom in (example1, example2):
        r = partial_zeta(ZetaJob(dom, IdealLattice.power_basis(dom.field), 3.0, 1e-7, 2000))
        assert abs(r.value - zeta_disc23_s3) < max(1e-6, 3 * r.error_estimate)


def test_scaled_lattice_same_value(example1):
    """a = M Z[g] is principal: Na^-s and the M^n-fold residue set cancel."""
    base = partial_zeta(ZetaJob(example1, IdealLattice.power_basis(example1.field), 3.0, 1e-6))
    for M in (2, 3):
        lat = IdealLattice.power_basis(example1.field, Fraction(1, M))
        assert lat.norm_a == M ** 3
        r = partial_zeta(ZetaJob(example1, lat, 3.0, 1e-6))
        assert [c.residues for c in r.cones] == [c.residues * M ** 3 for c in base.cones]
        assert abs(r.value - base.value) <= r.error_estimate + base.error_estimate + 1e-9


def test_result_metadata(example2):
    r = partial_zeta(ZetaJob(example2, IdealLattice.power_basis(example2.field), 3.0, 1e-6))
    assert r.real_place_product.startswith("norm-consistent")
    assert r.backend in ("cython", "python")
    assert len(r.cones) == 1 and r.cones[0].weight == 1


def test_backends_agree_bitwise(example1):
    job = ZetaJob(example1, IdealLattice.power_basis(example1.field), 3.0, 1e-6)
    a = partial_zeta(job, backend="python")
    try:
        b = partial_zeta(job, backend="cython")
    except ImportError:
        pytest.skip("compiled kernel not built")
    assert a.value == b.value and a.error_estimate == b.error_estimate
