import numpy as np
import pytest
from hypothesis import given, strategies as st

from ballbesov.weights import (check_hypotheses, eval_weight, load_weight, piecewise_weight, power_weight,
                               weight_from_dict, weight_from_function, weight_star)

xs = np.geomspace(1e-4, 1.0, 100)


def test_eval_weight_examples():
    assert eval_weight(power_weight(0.0), 0.3) == 1.0
    assert eval_weight(power_weight(-1.0), 0.25) == pytest.approx(0.25)
    assert eval_weight(power_weight(2.0), 0.5) == pytest.approx(4.0)
    assert eval_weight(power_weight(0.5), 0.25) == pytest.approx(2.0)


def test_eval_weight_domain():
    for x in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            eval_weight(power_weight(1.0), x)
    assert eval_weight(power_weight(3.0), 1.0) == 1.0


def test_power_weight_bounds():
    w = power_weight(-1.0)
    assert (w.alpha_w, w.beta_w) == (1.0, 0.0)
    w = power_weight(2.0)
    assert (w.alpha_w, w.beta_w) == (0.0, 2.0)


def test_piecewise_examples():
    single = piecewise_weight([], [0.7])
    assert np.allclose(single(xs), power_weight(0.7)(xs), rtol=1e-14)
    w = piecewise_weight([0.5], [-1.0, 0.0])
    assert np.allclose(w(np.array([0.1, 0.25, 0.5, 0.75])), [0.2, 0.5, 1.0, 1.0], rtol=1e-14)
    assert w(0.5 - 1e-12) == pytest.approx(w(0.5), rel=1e-10)
    assert np.all(piecewise_weight([0.2, 0.6], [0, 0, 0])(xs) == 1.0)


def test_piecewise_validation():
    with pytest.raises(ValueError):
        piecewise_weight([0.5], [1.0])
    with pytest.raises(ValueError):
        piecewise_weight([0.6, 0.4], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        piecewise_weight([1.2], [1.0, 2.0])


def test_closed_form_matches_quadrature():
    for w in (power_weight(-0.5), power_weight(1.3), piecewise_weight([0.1, 0.5], [1.0, -0.5, 0.25])):
        assert np.allclose(w(xs), w.numeric(xs), rtol=1e-8, atol=0)


def test_function_weight():
    w = weight_from_function(lambda u: 0.5 * np.sin(10 * u), 0.5, 0.5)
    x = 0.3
    from scipy import integrate
    ref = np.exp(integrate.quad(lambda u: 0.5 * np.sin(10 * u) / u, x, 1)[0])
    assert w(x) == pytest.approx(ref, rel=1e-9)


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_multiplicativity(a, b):
    pw = piecewise_weight([0.3], [a, b])
    other = piecewise_weight([0.3], [b, -a])
    summed = piecewise_weight([0.3], [a + b, b - a])
    assert np.allclose(summed(xs), pw(xs) * other(xs), rtol=1e-8)


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_two_point_envelope(vals):
    w = piecewise_weight([0.05, 0.4], vals)
    x, y = np.meshgrid(xs, xs, indexing="ij")
    mask = x <= y
    ratio = w(x[mask]) / w(y[mask])
    q = y[mask] / x[mask]
    # omega(x)/omega(y) = exp(int_x^y eps(u)/u du) with -alpha_w <= eps <= beta_w
    assert np.all(ratio <= q ** w.beta_w * (1 + 1e-10))
    assert np.all(ratio >= q ** (-w.alpha_w) * (1 - 1e-10))


def test_check_hypotheses_examples():
    r = check_hypotheses(power_weight(0.0), 0.0, 1.0)
    assert r["alpha_condition"] and r["beta_condition"]
    assert not check_hypotheses(power_weight(2.0), 0.5, 3.0)["alpha_condition"]
    assert not check_hypotheses(power_weight(-1.0), 0.0, 0.5)["beta_condition"]
    r = check_hypotheses(power_weight(1.0), 0.0, 1.0, n=2, p=0.5, m=1)
    assert r["m_threshold"] == pytest.approx(-6.0) and r["m_condition"]


def test_weight_star():
    w = weight_star(power_weight(0.0), alpha=1.0, m=2, p=0.5)
    assert np.allclose(w(xs), xs ** 2.0)
    assert w.growth_exponent == pytest.approx(2.0)
    back = weight_from_dict(w.to_dict())
    assert np.allclose(back(xs), w(xs))


def test_weight_file(tmp_path):
    p = tmp_path / "w.json"
    p.write_text('{"type": "piecewise", "breaks": [0.5], "values": [-1, 0]}')
    assert load_weight(p)(0.25) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        weight_from_dict({"type": "exotic"})
