import math

import numpy as np
import pytest
from scipy import integrate as sci

from squeezed_qubits.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadratureError,
    gauss_kronrod_panel,
    integrate,
)


def test_rule_weights_sum_to_interval_length():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.all(np.diff(NODES) > 0)


@pytest.mark.parametrize("degree", range(0, 32))
def test_kronrod_exact_to_degree_31(degree):
    val, _ = gauss_kronrod_panel(lambda x: x**degree, -1.0, 1.0)
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert val == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("degree", range(0, 20))
def test_embedded_gauss_exact_to_degree_19(degree):
    g = np.dot(GAUSS_WEIGHTS, NODES**degree)
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert g == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("freq", [1.0, 20.0, 100.0])
def test_oscillatory_integrand_matches_scipy(freq):
    f = lambda w: w * np.exp(-w * w) * np.cos(freq * (1 - w))
    res = integrate(f, 0.0, 7.0, tol=1e-11, seed_width=min(1 / 8, math.pi / (4 * freq)))
    ref, _ = sci.quad(lambda w: w * math.exp(-w * w), 0, 7, weight="cos", wvar=freq, limit=500, epsabs=1e-13)
    # cos(freq (1 - w)) = cos(freq) cos(freq w) + sin(freq) sin(freq w)
    ref_s, _ = sci.quad(lambda w: w * math.exp(-w * w), 0, 7, weight="sin", wvar=freq, limit=500, epsabs=1e-13)
    expected = math.cos(freq) * ref + math.sin(freq) * ref_s
    assert res.value == pytest.approx(expected, abs=1e-10)
    assert res.error <= 1e-11


def test_vector_valued_components_share_panels():
    f = lambda x: np.stack([np.sin(x), np.exp(x), x**2], axis=-1)
    res = integrate(f, 0.0, 2.0, tol=1e-12)
    np.testing.assert_allclose(res.value, [1 - math.cos(2), math.e**2 - 1, 8 / 3], atol=1e-12)


def test_nonconvergence_reports_error_estimate():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.abs(x - 0.3) ** -0.9, 0.0, 1.0, tol=1e-14, max_subdivisions=50)
    assert info.value.error_estimate > 0


def test_rejects_empty_interval():
    with pytest.raises(ValueError):
        integrate(np.sin, 1.0, 1.0)
