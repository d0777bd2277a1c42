import numpy as np
import pytest

from rabispec import (FockTruncation, degeneracy_count, oracle_spectrum, residue_pair,
                      validate_params)
from rabispec.exceptional import (ExceptionalClass, PlaneGrid, axis_intercepts, classify_point,
                                  count_components, exceptional_energies, juddian_locus,
                                  juddian_points, nondegenerate_locus, nondegenerate_points)
from rabispec.gfunction import G_MIN
from rabispec.model import Kind
from rabispec.rootfinder import Branch


def oracle_near(p, e, tol=2e-6):
    return degeneracy_count(oracle_spectrum(p, FockTruncation(80), 12), e, tol)


def test_plane_grid_validation():
    with pytest.raises(ValueError):
        PlaneGrid((0.0, 1.0), (0.1, 1.0), 1, 5)
    with pytest.raises(ValueError):
        PlaneGrid((1.0, 1.0), (0.1, 1.0))
    g = PlaneGrid((0.0, 1.0), (0.1, 1.0), 5, 4).sample(lambda d, g: d + g)
    assert g.values.shape == (4, 5)


def test_classify_juddian_example():
    p = validate_params(1.0, 0.3, 0.8)
    assert classify_point(1, p) is ExceptionalClass.JUDDIAN
    assert oracle_near(p, 1.0 - 0.09, 1e-6) == 2


def test_classify_generic_point():
    p = validate_params(1.0, 0.5, 0.5)
    assert classify_point(0, p) is ExceptionalClass.NONE
    assert oracle_near(p, -0.25, 1e-6) == 0


def test_weak_coupling_approaches_nondegenerate_line():
    # the c_+ line of level 0 meets the g axis at delta = 1
    prev = np.inf
    for g in (0.1, 0.01, G_MIN):
        cp, cm = residue_pair(0, validate_params(1.0, g, 1.0)).normalized_cofactors
        assert abs(cp) < prev and abs(cm) > 0.99
        prev = abs(cp)
    assert prev < 1e-6


def test_classify_nondegenerate_point():
    grid = PlaneGrid((0.0, 2.5), (G_MIN, 1.0), 200, 200)
    p = nondegenerate_points(0, grid, Branch.PLUS, 1)[0]
    assert classify_point(0, p) is ExceptionalClass.NONDEGENERATE_PLUS
    q = nondegenerate_points(0, grid, Branch.MINUS, 1)[0]
    assert classify_point(0, q) is ExceptionalClass.NONDEGENERATE_MINUS


def test_level_zero_has_no_juddian_locus():
    cs = juddian_locus(0, PlaneGrid((0.0, 1.0), (0.02, 1.0), 50, 50))
    assert len(cs) == 0 and count_components(cs) == (0, 0)


def test_level_one_ellipse():
    cs = juddian_locus(1, PlaneGrid((0.0, 1.2), (0.02, 0.6), 200, 200))
    assert count_components(cs) == (1, 0)
    pts = np.vstack(cs.polylines)
    assert np.max(np.abs(4 * pts[:, 1] ** 2 + pts[:, 0] ** 2 - 1)) <= 1e-6


@pytest.mark.parametrize("n", [2, 3])
def test_level_n_has_n_loops(n):
    cs = juddian_locus(n, PlaneGrid((0.0, n + 0.5), (0.02, 1.5), 300, 300))
    assert len(cs) == n
    assert count_components(cs) == (n, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_juddian_points_are_oracle_degenerate(n):
    pts = juddian_points(n, PlaneGrid((0.0, n + 0.5), (0.02, 1.0), 200, 200), 6)
    assert len(pts) == 6
    for p in pts:
        assert oracle_near(p, n - p.shift) == 2
        rp, rm = residue_pair(n, p).normalized_residues
        assert abs(rp) < 1e-8 and abs(rm) < 1e-8


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("branch", list(Branch))
def test_nondegenerate_points_are_oracle_simple(n, branch):
    grid = PlaneGrid((0.0, n + 2.5), (G_MIN, 1.0), 200, 200)
    pts = nondegenerate_points(n, grid, branch, 4)
    assert len(pts) == 4
    for p in pts:
        assert oracle_near(p, n - p.shift) == 1
        rp, rm = residue_pair(n, p).normalized_residues
        lifted, other = (rp, rm) if branch is Branch.PLUS else (rm, rp)
        assert abs(lifted) < 1e-8 and abs(other) > 1e-3


@pytest.mark.parametrize("n", [0, 2])
def test_nondegenerate_lines_reach_axis_at_integers(n):
    grid = PlaneGrid((0.0, n + 2.5), (G_MIN, 1.0), 200, 200)
    cp, cm = nondegenerate_locus(n, grid)
    ints = axis_intercepts(cp, n, Branch.PLUS) + axis_intercepts(cm, n, Branch.MINUS)
    for target in (n + 1, n + 2):
        assert min(abs(np.array(ints) - target)) < 1e-3
    # the raw contour end on the lowest grid row is already within grid resolution
    ends = [pl[k, 0] for cs in (cp, cm) for pl in cs.polylines for k in (0, -1)
            if abs(pl[k, 1] - G_MIN) < 1e-12]
    for target in (n + 1, n + 2):
        assert min(abs(np.array(ends) - target)) < 2 * (n + 2.5) / 199


@pytest.mark.parametrize("n", [1, 2, 3])
def test_nondegenerate_lines_avoid_juddian_loops(n):
    # a crossing would be a triple-degenerate point; none shows up in the window
    from rabispec.gfunction import juddian_field
    cp, cm = nondegenerate_locus(n, PlaneGrid((0.0, n + 2.5), (G_MIN, 1.5), 200, 200))
    for cs in (cp, cm):
        assert cs.juddian_crossings == []
        for pl in cs.polylines:
            k = juddian_field(n, pl[:, 0], pl[:, 1])
            assert np.all(np.sign(k) == np.sign(k[0]))


def test_exceptional_energies_pair_juddian_levels():
    p = validate_params(1.0, 0.3, 0.8)
    es = exceptional_energies(p, 3)
    judd = [e for e in es if e.kind is Kind.JUDDIAN]
    assert len(judd) == 2 and judd[0].value == judd[1].value == pytest.approx(0.91)
    assert {e.parity for e in judd} == {e.parity for e in judd[:2]} and judd[0].parity != judd[1].parity
