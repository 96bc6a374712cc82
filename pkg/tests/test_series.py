import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ballbesov.series import (HoloSeries, evaluate, homogeneous_part, inner_product, kernel_series,
                              load_series, multiply, save_series, sphere_moment)

from conftest import ball_points, polynomial_pairs, polynomials

Z1 = HoloSeries.variable(2, 0)
Z2 = HoloSeries.variable(2, 1)
ONE2 = HoloSeries.constant(2)


def test_inner_product_examples():
    assert inner_product([1, 0], [1, 0]) == 1
    assert inner_product([1j, 0], [0, 1]) == 0
    assert inner_product([0.5, 0.5j], [0.5, 0.5j]) == pytest.approx(0.5)


def test_inner_product_conjugates_second_slot():
    assert inner_product([1j], [1]) == 1j
    assert inner_product([1], [1j]) == -1j


def test_evaluate_examples():
    assert evaluate(HoloSeries.constant(2), np.array([0.3, 0.4j])) == 1
    assert evaluate(HoloSeries.monomial((2, 0)), np.array([0.5, 0])) == pytest.approx(0.25)
    geo = kernel_series(np.array([0.5, 0.0]), 1.0, 50)
    assert abs(evaluate(geo, np.array([0.5, 0.0])) - 4 / 3) < 1e-6


def test_evaluate_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(Z1, np.array([0.1, 0.2, 0.3]))


def test_homogeneous_part_examples():
    f = ONE2 + Z1 + multiply(Z1, Z2, 2)
    assert homogeneous_part(f, 2).allclose(multiply(Z1, Z2, 2))
    assert homogeneous_part(ONE2 + multiply(Z1, Z2, 2), 1).degree < 0
    sq = multiply(ONE2 + Z1, ONE2 + Z1, 2)
    assert homogeneous_part(sq, 1).allclose(Z1.scale(2))


def test_multiply_examples():
    assert multiply(Z1, Z1, 2).allclose(HoloSeries.monomial((2, 0)))
    f = Z1 + Z2.scale(3j)
    assert multiply(f, ONE2, 1).allclose(f)
    prod = multiply(ONE2 + Z1, ONE2 - Z1, 2)
    assert prod.allclose(ONE2 - HoloSeries.monomial((2, 0)))


def test_multiply_truncates():
    p = multiply(Z1, Z1, 1)
    assert p.degree < 0 and p.max_degree == 1


def test_kernel_series_examples():
    assert kernel_series(np.zeros(3), 2.5, 10).allclose(HoloSeries.constant(3, max_degree=10))
    geo = kernel_series(np.array([0.5]), 1.0, 12)
    for k in range(13):
        assert geo[(k,)] == pytest.approx(0.5 ** k, rel=1e-15)
    t = 0.7
    d = kernel_series(np.array([t]), 2.0, 12)
    for k in range(13):
        assert d[(k,)] == pytest.approx((k + 1) * t ** k, rel=1e-14)


def test_kernel_series_conjugates_tau():
    tau = np.array([0.3j, 0.2])
    f = kernel_series(tau, 3.0, 30)
    z = np.array([0.5, -0.4j])
    assert abs(evaluate(f, z) - (1 - inner_product(z, tau)) ** -3) < 1e-12


def test_kernel_tail_decays_geometrically():
    tau, z = np.array([0.8, 0.0]), np.array([0.9, 0.0])
    exact = (1 - 0.72) ** -3
    errs = [abs(evaluate(kernel_series(tau, 3.0, K), z) - exact) for K in (20, 40, 60)]
    rho = 0.72
    for K, e in zip((20, 40, 60), errs):
        assert e <= 1e3 * K ** 2 * rho ** (K + 1)
    assert errs[0] > errs[1] > errs[2]


def test_sphere_moment_values():
    assert sphere_moment((0, 0)) == 1
    assert sphere_moment((1, 0, 0)) == pytest.approx(1 / 3)
    assert sphere_moment((1, 1)) == pytest.approx(1 / 6)


def test_series_construction_errors():
    with pytest.raises(ValueError):
        HoloSeries(2, 1, {(1, 1): 1.0})
    with pytest.raises(ValueError):
        HoloSeries(2, 3, {(1,): 1.0})
    with pytest.raises(ValueError):
        HoloSeries(2, 3, {(-1, 0): 1.0})


def test_iteration_order_is_degree_then_lex():
    f = HoloSeries(2, 2, {(0, 2): 1, (1, 0): 2, (0, 0): 3, (2, 0): 4, (0, 1): 5})
    assert list(f.coeffs) == [(0, 0), (0, 1), (1, 0), (0, 2), (2, 0)]


def test_json_round_trip(tmp_path):
    f = HoloSeries(2, 3, {(0, 0): 1 + 2j, (2, 1): -0.5, (0, 3): 1e-300})
    path = tmp_path / "f.json"
    save_series(f, path)
    g = load_series(path)
    assert g.max_degree == 3 and dict(g.coeffs) == dict(f.coeffs)
    assert HoloSeries.loads(f.dumps()).coeffs == f.coeffs


def test_json_rejects_duplicates():
    doc = {"dim": 1, "max_degree": 2, "terms": [{"m": [1], "re": 1}, {"m": [1], "re": 2}]}
    with pytest.raises(ValueError):
        HoloSeries.from_dict(doc)
    with pytest.raises(ValueError):
        HoloSeries.loads(json.dumps({"dim": 1}))


@given(polynomial_pairs())
def test_degree_additivity(pair):
    f, g = pair
    K = 7
    p = multiply(f, g, K)
    assert p.degree <= min(K, max(f.degree, 0) + max(g.degree, 0))


@given(polynomial_pairs(), st.complex_numbers(max_magnitude=5, allow_nan=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False))
def test_evaluation_is_linear(pair, a, b):
    f, g = pair
    Z = ball_points(f.dim, 5)
    lhs = evaluate(f.scale(a) + g.scale(b), Z)
    rhs = a * evaluate(f, Z) + b * evaluate(g, Z)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-11)


@given(polynomial_pairs())
def test_product_evaluates_to_product(pair):
    f, g = pair
    K = max(f.degree, 0) + max(g.degree, 0)
    Z = ball_points(f.dim, 5, seed=1)
    assert np.allclose(evaluate(multiply(f, g, K), Z), evaluate(f, Z) * evaluate(g, Z),
                       rtol=1e-11, atol=1e-10)


@given(polynomials(), st.floats(0, 6.3))
def test_rotation_matches_rotated_argument(f, theta):
    Z = ball_points(f.dim, 4, seed=2)
    assert np.allclose(evaluate(f.rotate(theta), Z), evaluate(f, np.exp(1j * theta) * Z),
                       rtol=1e-12, atol=1e-11)
