import math

import pytest
from hypothesis import given, strategies as st

from ballbesov.fraccalc import D, frac_derivative, frac_integral, radial_derivative
from ballbesov.series import HoloSeries, multiply
from ballbesov.validation import (d_equals_i_plus_r_residual, inverse_residual, kernel_growth,
                                  leibniz_residual, product_rule_residual)

from conftest import polynomial_pairs, polynomials

alphas = st.floats(-3.0, 4.0, allow_nan=False)


def test_examples():
    one = HoloSeries.constant(2)
    assert frac_derivative(one, 2.7).allclose(one)
    z1z2 = HoloSeries.monomial((1, 1))
    assert frac_derivative(z1z2, 1.0).allclose(z1z2.scale(3))
    z1 = HoloSeries.monomial((1,))
    assert frac_derivative(z1, 0.5)[(1,)] == pytest.approx(math.sqrt(2), rel=1e-15)
    assert frac_integral(z1.scale(4), 2.0).allclose(z1)
    assert frac_integral(HoloSeries.constant(1), 7.0).allclose(HoloSeries.constant(1))


def test_radial_derivative_examples():
    assert radial_derivative(HoloSeries.constant(2)).degree < 0
    z1 = HoloSeries.monomial((1, 0))
    assert radial_derivative(z1).allclose(z1)
    m = HoloSeries.monomial((2, 1))
    assert radial_derivative(m).allclose(m.scale(3))


def test_inverse_law_on_small_example():
    f = HoloSeries(1, 2, {(0,): 1, (1,): 1, (2,): 1})
    for a in (0.5, 1.0, 2.0, 3.7):
        assert frac_integral(frac_derivative(f, a), a).distance(f, "max") <= 1e-12


def test_product_rule_hand_example():
    z1 = HoloSeries.monomial((1,))
    assert D(multiply(z1, z1, 2)).allclose(HoloSeries.monomial((2,), 3.0))
    assert product_rule_residual(z1, z1, 2) == 0


def test_product_rule_rejects_short_truncation():
    z1 = HoloSeries.monomial((1,))
    with pytest.raises(ValueError):
        product_rule_residual(z1, z1, 1)


@given(polynomials(), alphas, alphas)
def test_semigroup(f, a, b):
    lhs = frac_derivative(frac_derivative(f, a), b)
    scale = max([abs(c) for _, c in lhs] + [1.0])
    assert lhs.distance(frac_derivative(f, a + b), "max") <= 1e-12 * scale * 6 ** max(abs(a) + abs(b), 1)


@given(polynomials())
def test_d_equals_identity_plus_radial(f):
    assert d_equals_i_plus_r_residual(f) <= 1e-12 * max([abs(c) for _, c in f] + [1.0])


@given(polynomials(), st.sampled_from([0.5, 1.0, 2.0, 3.7]))
def test_inverse_law(f, a):
    assert inverse_residual(f, a) <= 1e-12 * max([abs(c) for _, c in f] + [1.0])


@given(polynomial_pairs())
def test_lemma5_product_rule(pair):
    f, g = pair
    K = max(f.degree, 0) + max(g.degree, 0)
    scale = max([abs(c) for _, c in multiply(f, g, K)] + [1.0]) * 16
    assert product_rule_residual(f, g, K) <= 1e-12 * scale


@given(polynomial_pairs())
def test_leibniz_for_radial_derivative(pair):
    f, g = pair
    K = max(f.degree, 0) + max(g.degree, 0)
    scale = max([abs(c) for _, c in multiply(f, g, K)] + [1.0]) * 16
    assert leibniz_residual(f, g, K) <= 1e-12 * scale


def test_kernel_derivative_growth_bounded():
    radii = [1 - 2.0 ** -j for j in range(1, 8)] + [0.99]
    for s, m in [(1.0, 1), (2.5, 2), (3.0, 0.5)]:
        rows = kernel_growth(s, m, radii)
        ratios = [r[3] for r in rows]
        assert max(ratios) < 2 * ratios[-1] + 1
        # the normalized ratio tends to 1/Gamma(s) times a power-law constant, so it settles
        assert abs(ratios[-1] - ratios[-2]) < 0.1 * ratios[-1]


def test_kernel_growth_matches_direct_derivative():
    rows = kernel_growth(2.0, 1.0, [0.5])
    # D (1 - r)^{-2} = sum (k+1)^2 r^k = (1 + r) / (1 - r)^3
    assert rows[0][1] == pytest.approx(1.5 / 0.125, rel=1e-13)
