import numpy as np
from hypothesis import HealthCheck, settings, strategies as st

from ballbesov.series import HoloSeries, multi_indices

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coef = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def polynomials(draw, dims=(1, 2, 3), max_degree=5):
    n = draw(st.sampled_from(dims))
    deg = draw(st.integers(0, max_degree))
    idx = [m for k in range(deg + 1) for m in multi_indices(n, k)]
    chosen = draw(st.lists(st.sampled_from(idx), max_size=8, unique=True))
    coeffs = {m: draw(coef) for m in chosen}
    return HoloSeries(n, deg, coeffs)


@st.composite
def polynomial_pairs(draw, dims=(1, 2, 3), max_degree=5):
    f = draw(polynomials(dims=dims, max_degree=max_degree))
    g = draw(polynomials(dims=(f.dim,), max_degree=max_degree))
    return f, g


def ball_points(n, count, radius=0.9, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z * radius * rng.uniform(size=(count, 1)) ** (1 / (2 * n))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
