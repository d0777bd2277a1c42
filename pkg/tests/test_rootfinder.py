import numpy as np
import pytest

import rabispec.rootfinder as rf
from rabispec import (BRANCH_PARITY, Branch, Bracket, FockTruncation, LostBracket,
                      TruncationNotConverged, UnsupportedCoupling, ZeroSplitting,
                      oracle_spectrum, refine_root, regular_spectrum, scan_brackets,
                      validate_params)
from rabispec.model import Parity
from rabispec.gfunction import POLE_MARGIN, g_pair

# oracle, m_max = 80 (convergence-checked at 100)
ORACLE_07_04 = [-0.707805064098487, -0.4270436745661867, 0.37094976339069247,
                0.673603825027011, 1.3607568321317176, 1.6370103706443395,
                2.4666957020653966, 2.5452309655127765]


def test_bracket_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        Bracket(1.0, 0.5, Branch.PLUS)


def test_scan_finds_all_levels_in_window():
    p = validate_params(1.0, 0.7, 0.4)
    brackets = scan_brackets(p, -0.6, 4.0)
    # the oracle has 9 levels with x = E + g^2 in [-0.6, 4]
    assert len(brackets) >= 5
    assert len(brackets) == 9
    for b in brackets:
        assert b.lo < b.hi
        m = np.arange(-1, 6)
        assert not np.any((m > b.lo) & (m < b.hi))


def test_scan_below_spectrum_is_empty():
    assert scan_brackets(validate_params(1.0, 0.5, 0.5), -10.0, -5.0) == []


def test_scan_inside_pole_margin_is_empty():
    assert scan_brackets(validate_params(1.0, 0.5, 0.5), 1 - 1e-7, 1 + 1e-7) == []


def test_scan_step_precondition():
    p = validate_params(1.0, 0.5, 0.5)
    with pytest.raises(ValueError):
        scan_brackets(p, 0.0, 1.0, step=0.02)
    with pytest.raises(ValueError):
        scan_brackets(p, 1.0, 0.0)


def test_root_next_to_pole_margin_is_found():
    # a G_+ zero 2.3e-3 below the pole at x = 2, inside the last grid cell
    p = validate_params(1.0, 0.8126391763671942, 0.913214661137387)
    xs = [refine_root(b, p).x_star for b in scan_brackets(p, 1.0, 2.0)]
    assert any(abs(x - 1.99768771) < 1e-6 for x in xs)


def test_refine_root_next_to_juddian_level():
    p = validate_params(1.0, 0.3, 0.8)
    b = [b for b in scan_brackets(p, 1.5, 2.0) if b.branch is Branch.PLUS][0]
    r = refine_root(b, p)
    assert r.width <= 1e-12
    # oracle level 1.8235286205019452 plus g^2
    assert r.x_star == pytest.approx(1.8235286205019452 + 0.09, abs=1e-10)


def test_bisect_secant_synthetic_monotone():
    f = lambda x: x ** 3 - 0.3
    x, fx, width, it = rf.bisect_secant(f, 0.0, 1.0, f(0.0), f(1.0), 1e-12)
    assert width <= 1e-12 and it <= 60
    assert x == pytest.approx(0.3 ** (1 / 3), abs=1e-12)


def test_bisect_secant_stays_inside_bracket():
    seen = []

    def f(x):
        seen.append(x)
        return np.tanh(50 * (x - 0.123))

    rf.bisect_secant(f, -1.0, 2.0, f(-1.0), f(2.0), 1e-12)
    assert all(-1.0 <= s <= 2.0 for s in seen)


def test_refine_tiny_bracket_returns_midpoint():
    p = validate_params(1.0, 0.7, 0.4)
    r = refine_root(Bracket(0.5, 0.5 + 5e-13, Branch.PLUS), p)
    assert r.x_star == 0.5 + 2.5e-13
    assert r.evaluations == 1


def test_refine_without_sign_change_is_lost():
    p = validate_params(1.0, 0.5, 0.5)
    with pytest.raises(LostBracket):
        refine_root(Bracket(-6.0, -5.0, Branch.PLUS), p)


def test_refine_wraps_truncation_failure(monkeypatch):
    p = validate_params(1.0, 0.7, 0.4)
    b = scan_brackets(p, -0.6, 0.0)[0]

    def broken(x, p, t=None, pole_margin=None, n_terms=None):
        raise TruncationNotConverged("synthetic", None)

    monkeypatch.setattr(rf, "g_pair", broken)
    with pytest.raises(LostBracket) as info:
        refine_root(b, p)
    assert isinstance(info.value.__cause__, TruncationNotConverged)


def test_refinement_never_enters_pole_margin(monkeypatch):
    p = validate_params(1.0, 0.8126391763671942, 0.913214661137387)
    seen = []

    def spy(x, *a, **k):
        seen.append(x)
        return g_pair(x, *a, **k)

    monkeypatch.setattr(rf, "g_pair", spy)
    for b in scan_brackets(p, -1.0, 3.0):
        refine_root(b, p)
    d = np.abs(np.array(seen) - np.round(seen))
    assert np.all(d >= POLE_MARGIN)


def test_tangent_dip_flagged_as_suspected_double(monkeypatch):
    p = validate_params(1.0, 0.5, 0.5)

    def fake_values(xs, p, t=None, pole_margin=None):
        xs = np.asarray(xs, dtype=float)
        return (xs - 0.3) ** 2 + 1e-14, np.ones_like(xs)

    monkeypatch.setattr(rf, "g_values", fake_values)
    got = scan_brackets(p, 0.1, 0.6)
    assert len(got) == 1 and got[0].suspected_double and got[0].branch is Branch.PLUS

    class Fake:
        def __init__(self, x):
            self.g_plus, self.g_minus = (x - 0.3) ** 2 + 1e-14, 1.0

    monkeypatch.setattr(rf, "g_pair", lambda x, *a, **k: Fake(x))
    r = refine_root(got[0], p)
    assert r.suspected_double and abs(r.x_star - 0.3) < 1e-6


def test_regular_spectrum_matches_oracle():
    got = regular_spectrum(validate_params(1.0, 0.7, 0.4), 6)
    assert len(got) == 6
    assert np.max(np.abs(np.array([e.value for e in got]) - ORACLE_07_04[:6])) <= 1e-8


def test_regular_spectrum_decoupled_limit():
    p = validate_params(1.0, 1.001e-3, 0.3)
    xs = np.array([e.value + p.shift for e in regular_spectrum(p, 4)])
    assert np.max(np.abs(xs - np.array([-0.3, 0.3, 0.7, 1.3]))) < 10 * p.g ** 2


def test_regular_spectrum_rejects_bad_count():
    with pytest.raises(ValueError):
        regular_spectrum(validate_params(1.0, 0.7, 0.4), 0)


@pytest.mark.parametrize("g", [1e-4, 1.6])
def test_coupling_outside_window(g):
    with pytest.raises(UnsupportedCoupling):
        regular_spectrum(validate_params(1.0, g, 0.4), 3)


def test_zero_splitting_is_routed_elsewhere():
    with pytest.raises(ZeroSplitting):
        regular_spectrum(validate_params(1.0, 0.4, 0.0), 3)


@pytest.mark.parametrize("g, delta", [(0.7, 0.4), (0.3, 0.8), (0.95, 1.3), (0.15, 0.2), (1.2, 0.6)])
def test_branch_parity_mapping_is_global(g, delta):
    assert BRANCH_PARITY == {Branch.PLUS: Parity.PLUS, Branch.MINUS: Parity.MINUS}
    p = validate_params(1.0, g, delta)
    ref = oracle_spectrum(p, FockTruncation(80), 40)
    for e in regular_spectrum(p, 8):
        k = int(np.argmin(np.abs(ref.energies - e.value)))
        assert abs(ref.energies[k] - e.value) < 1e-8
        assert ref.parities[k] is e.parity


@pytest.mark.parametrize("g, delta", [(0.7, 0.4), (0.45, 1.1), (1.0, 0.9)])
def test_roots_bracket_sign_change_and_increase(g, delta):
    p = validate_params(1.0, g, delta)
    scan = rf.scan_regular(p, 10)
    for r in scan.roots:
        if r.suspected_double:
            continue
        if r.width == 0.0:
            assert r.residual == 0.0
            continue
        h = 10 * r.width
        a, b = g_pair(r.x_star - h, p), g_pair(r.x_star + h, p)
        pick = (lambda q: q.g_plus) if r.branch is Branch.PLUS else (lambda q: q.g_minus)
        assert pick(a) * pick(b) <= 0
    xs = [r.x_star for r in scan.roots]
    assert all(u < v for u, v in zip(xs, xs[1:]))
    assert scan.gaps and all(b - a == pytest.approx(2 * POLE_MARGIN) for a, b in scan.gaps)


def test_upper_coupling_window_matches_oracle():
    rng = np.random.default_rng(11)
    for _ in range(5):
        p = validate_params(1.0, rng.uniform(1.0, 1.5), rng.uniform(0.1, 2.0))
        ref = oracle_spectrum(p, FockTruncation(120), 8).energies
        got = np.array([e.value for e in regular_spectrum(p, 8)])
        assert np.max(np.abs(got - ref)) <= 1e-8
