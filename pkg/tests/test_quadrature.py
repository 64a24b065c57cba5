import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dlpgalerkin.quadrature import composite_rule, gauss_legendre, scaled_rule


def test_one_point_rule():
    rule = gauss_legendre(1)
    assert rule.nodes.tolist() == [0.0]
    assert rule.weights.tolist() == [2.0]


def test_two_point_rule_closed_form():
    rule = gauss_legendre(2)
    np.testing.assert_allclose(rule.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(rule.weights, [1.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("r", [1, 2, 3, 5, 8, 16, 24, 40, 64])
def test_matches_numpy_leggauss(r):
    x, w = np.polynomial.legendre.leggauss(r)
    rule = gauss_legendre(r)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-14)
    np.testing.assert_allclose(rule.weights, w, atol=1e-14)


@given(st.integers(min_value=1, max_value=48))
@settings(max_examples=30, deadline=None)
def test_structure_and_exactness(r):
    rule = gauss_legendre(r)
    assert abs(rule.weights.sum() - 2.0) < 1e-14
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
    for k in range(2 * r):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert abs(np.sum(rule.weights * rule.nodes ** k) - exact) < 1e-12


def test_degree_46_with_24_points():
    rule = gauss_legendre(24)
    assert abs(np.sum(rule.weights * rule.nodes ** 46) - 2 / 47) < 1e-12


def test_rule_is_read_only():
    rule = gauss_legendre(5)
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0


def test_invalid_point_count():
    with pytest.raises(ValueError):
        gauss_legendre(0)


def test_scaled_rule():
    x, w = scaled_rule(gauss_legendre(1), 0.0, 1.0)
    assert x.tolist() == [0.5] and w.tolist() == [1.0]
    n, d, j = 64, 2, 5
    _, w = scaled_rule(gauss_legendre(24), j / n, (j + d + 1) / n)
    assert abs(w.sum() - (d + 1) / n) < 1e-15
    x, w = scaled_rule(gauss_legendre(2), 0.0, 1.0)
    assert abs(np.sum(w * x ** 3) - 0.25) < 1e-15
    with pytest.raises(ValueError):
        scaled_rule(gauss_legendre(2), 1.0, 1.0)


def test_composite_defaults():
    s, w = composite_rule(40, 24)
    assert len(s) == 960
    assert abs(w.sum() - 1.0) < 1e-14
    assert abs(np.sum(w * np.sin(2 * np.pi * s))) < 1e-14


def test_composite_nodes_avoid_panel_ends():
    m = 40
    s, _ = composite_rule(m, 24)
    ends = np.arange(m + 1) / m
    assert np.min(np.abs(s[:, None] - ends[None, :])) > 0
    # hence no node sits on a corner parameter k/q for q | m
    for q in (1, 2, 4, 5, 8):
        assert not np.any(np.isclose(s * q, np.round(s * q), rtol=0, atol=1e-12))


def test_composite_exact_for_piecewise_polynomials():
    m, r = 8, 6
    s, w = composite_rule(m, r)
    rng = np.random.default_rng(1)
    coef = rng.normal(size=(m, 2 * r))  # degree 2r-1 on each panel
    panel = np.minimum((s * m).astype(int), m - 1)
    local = s * m - panel
    vals = np.array([np.polyval(coef[p], u) for p, u in zip(panel, local)])
    exact = 0.0
    for p in range(m):
        anti = np.polyint(coef[p])
        exact += (np.polyval(anti, 1.0) - np.polyval(anti, 0.0)) / m
    assert abs(np.sum(w * vals) - exact) < 1e-12
