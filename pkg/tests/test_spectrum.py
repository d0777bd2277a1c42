import numpy as np
import pytest

from rabispec import compute_spectrum, validate_params
from rabispec.model import Kind, Parity

ORACLE_07_04 = [-0.707805064098487, -0.4270436745661867, 0.37094976339069247,
                0.673603825027011, 1.3607568321317176, 1.6370103706443395,
                2.4666957020653966, 2.5452309655127765]


def test_regular_point_uses_gfunction():
    rows = compute_spectrum(validate_params(1.0, 0.7, 0.4), 8)
    assert [r.method for r in rows] == ["gfunction"] * 8
    assert np.max(np.abs([r.energy.value - e for r, e in zip(rows, ORACLE_07_04)])) < 1e-8
    assert [r.index for r in rows] == list(range(8))


def test_juddian_pair_is_merged_in():
    rows = compute_spectrum(validate_params(1.0, 0.3, 0.8), 6)
    judd = [r for r in rows if r.energy.kind is Kind.JUDDIAN]
    assert len(judd) == 2
    assert judd[0].energy.value == judd[1].energy.value == pytest.approx(0.91, abs=1e-15)
    assert {r.energy.parity for r in judd} == {Parity.PLUS, Parity.MINUS}
    vals = [r.energy.value for r in rows]
    assert vals == sorted(vals)


def test_nondegenerate_exceptional_level_is_found():
    from rabispec.exceptional import PlaneGrid, nondegenerate_points
    from rabispec.rootfinder import Branch
    p = nondegenerate_points(0, PlaneGrid((0.0, 2.5), (1e-3, 1.0), 200, 200), Branch.PLUS, 1)[0]
    rows = compute_spectrum(p, 4)
    ex = [r for r in rows if r.energy.kind is Kind.EXCEPTIONAL_NONDEGENERATE]
    assert len(ex) == 1 and ex[0].energy.value == pytest.approx(-p.shift)


def test_zero_coupling_falls_back():
    rows = compute_spectrum(validate_params(1.0, 0.0, 0.3), 4)
    assert [r.energy.value for r in rows] == [-0.3, 0.3, 0.7, 1.3]
    assert {r.method for r in rows} == {"oracle"}


def test_zero_splitting_falls_back():
    rows = compute_spectrum(validate_params(1.0, 0.5, 0.0), 4)
    assert [r.energy.value for r in rows] == [-0.25, -0.25, 0.75, 0.75]
    assert {r.method for r in rows} == {"oracle"}


def test_strong_coupling_uses_oracle():
    rows = compute_spectrum(validate_params(1.0, 2.0, 0.5), 5)
    assert {r.method for r in rows} == {"oracle"}
    assert all(r.residual < 1e-10 for r in rows)


def test_levels_must_be_positive():
    with pytest.raises(ValueError):
        compute_spectrum(validate_params(1.0, 0.7, 0.4), 0)
