import numpy as np
import pytest

from rabispec.contour import (ContourSet, count_components, mirror_full_plane,
                              refine_on_edges, zero_contours)


def circle(cx, cy, r):
    return lambda x, y: (x - cx) ** 2 + (y - cy) ** 2 - r * r


def sampled(fn, xs, ys):
    x, y = np.meshgrid(xs, ys)
    return fn(x, y)


XS = np.linspace(0.0, 2.0, 81)
YS = np.linspace(0.0, 2.0, 61)


def test_circle_is_one_closed_loop():
    fn = circle(1.0, 1.0, 0.5)
    cs = zero_contours(sampled(fn, XS, YS), XS, YS, fn)
    assert len(cs) == 1 and cs.closed_flags == [True]
    pl = cs.polylines[0]
    assert np.array_equal(pl[0], pl[-1])
    assert np.max(np.abs(np.hypot(pl[:, 0] - 1, pl[:, 1] - 1) - 0.5)) < 1e-9
    assert count_components(cs) == (1, 0)


def test_linear_interpolation_without_refinement():
    fn = lambda x, y: x - 0.7321
    cs = zero_contours(sampled(fn, XS, YS), XS, YS)
    assert cs.closed_flags == [False]
    assert np.allclose(cs.polylines[0][:, 0], 0.7321, atol=1e-12)
    assert count_components(cs) == (0, 1)


def test_quadrant_arc_counts_closed_with_mirrors():
    fn = circle(0.0, 0.0, 1.0)
    cs = zero_contours(sampled(fn, XS, YS), XS, YS, fn, mirror_edges=("x_lo", "y_lo"))
    assert cs.closed_flags == [False]
    assert set(cs.endpoint_edges(0)) == {"x_lo", "y_lo"}
    assert count_components(cs) == (1, 0)
    full = mirror_full_plane(cs)
    assert full.closed_flags == [True]
    loop = full.polylines[0]
    assert np.max(np.abs(np.hypot(loop[:, 0], loop[:, 1]) - 1.0)) < 1e-9
    assert full.bounds == (-2.0, 2.0, -2.0, 2.0)


def test_open_arc_without_mirrors_counts_open():
    fn = circle(0.0, 0.0, 1.0)
    cs = zero_contours(sampled(fn, XS, YS), XS, YS, fn)
    assert count_components(cs) == (0, 1)
    assert len(mirror_full_plane(cs)) == 4


def test_two_loops_and_deterministic_order():
    fn = lambda x, y: np.minimum(circle(0.5, 1.0, 0.3)(x, y), circle(1.5, 1.0, 0.3)(x, y))
    a = zero_contours(sampled(fn, XS, YS), XS, YS, fn)
    b = zero_contours(sampled(fn, XS, YS), XS, YS, fn)
    assert count_components(a) == (2, 0)
    assert a.polylines[0][0, 0] < a.polylines[1][0, 0]
    for p, q in zip(a.polylines, b.polylines):
        assert np.array_equal(p, q)


def test_saddle_cells_do_not_merge_components():
    fn = lambda x, y: (x - 1.0) * (y - 1.0) - 1e-4
    xs = np.linspace(0.0, 2.0, 21)
    cs = zero_contours(sampled(fn, xs, xs), xs, xs, fn)
    assert count_components(cs) == (0, 2)


def test_nan_samples_block_cells():
    fn = circle(1.0, 1.0, 0.5)
    v = sampled(fn, XS, YS)
    v[:, 40] = np.nan
    cs = zero_contours(v, XS, YS)
    assert count_components(cs) == (0, 2)


def test_empty_and_synthetic_sets():
    assert count_components(ContourSet([], [])) == (0, 0)
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
    assert count_components(ContourSet([square], [True])) == (1, 0)


def test_shape_validation():
    with pytest.raises(ValueError):
        zero_contours(np.zeros((3, 4)), np.arange(3.0), np.arange(4.0))
    with pytest.raises(ValueError):
        zero_contours(np.zeros((1, 1)), np.arange(1.0), np.arange(1.0))


def test_edge_refinement_converges():
    fn = lambda x, y: x ** 3 + y - 0.5
    p0 = np.array([[0.0, 0.0], [0.0, 0.25]])
    p1 = np.array([[1.0, 0.0], [1.0, 0.25]])
    v0 = fn(p0[:, 0], p0[:, 1])
    pts = refine_on_edges(fn, p0, p1, v0, 1e-12)
    assert np.allclose(pts[:, 0], [0.5 ** (1 / 3), 0.25 ** (1 / 3)], atol=1e-12)
