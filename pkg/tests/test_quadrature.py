import cmath
import math

import numpy as np
import pytest

from stieltjes_inversion.errors import InvalidInputError, ToleranceNotMetError
from stieltjes_inversion.quadrature import (
    QuadResult,
    _pv_with_window,
    integrate_decaying,
    integrate_interval,
    integrate_pv,
    integrate_ray,
)
from stieltjes_inversion.special import e1, e1_scaled, ei


def test_decaying_basic():
    r = integrate_decaying(lambda x: np.exp(-x), 1.0)
    assert isinstance(r, QuadResult)
    assert r.value == pytest.approx(1, abs=1e-10)
    assert 0 <= r.error_estimate <= 1e-10
    assert r.panels_used >= 1
    assert integrate_decaying(lambda x: x * np.exp(-x), 1.0).value == pytest.approx(1, abs=1e-10)


def test_decaying_matches_scaled_e1():
    r = integrate_decaying(lambda x: np.exp(-x) / (1 + x), 1.0)
    assert r.value.real == pytest.approx(e1_scaled(1).real, abs=1e-10)


def test_decaying_rejects_bad_rate():
    with pytest.raises(InvalidInputError):
        integrate_decaying(lambda x: np.exp(-x), 0.0)


def test_budget_exhaustion_reports_best_estimate():
    with pytest.raises(ToleranceNotMetError) as info:
        integrate_interval(lambda x: np.sin(200 * x) ** 2, 0.0, 10.0, tol=1e-14, budget=4)
    assert info.value.result is not None
    assert info.value.result.panels_used == 4


def test_linearity():
    f = lambda x: np.exp(-x) * np.cos(3 * x)
    g = lambda x: np.exp(-2 * x) / (1 + x * x)
    a, b = 2.5, -1.25
    lhs = integrate_decaying(lambda x: a * f(x) + b * g(x), 1.0).value
    rhs = a * integrate_decaying(f, 1.0).value + b * integrate_decaying(g, 2.0).value
    assert abs(lhs - rhs) <= 5e-10


def test_tail_truncation_soundness():
    # halving the tolerance pushes X out by ln 2 / rate; the answer must not move by more than tol
    f = lambda x: np.exp(-0.3 * x) / (2 + x)
    a = integrate_decaying(f, 0.3, tol=1e-10).value
    b = integrate_decaying(f, 0.3, tol=1e-10 / 2 ** 10).value
    assert abs(a - b) < 1e-10


def test_ray_simple():
    r = integrate_ray(lambda x: np.exp(1j * x - x), math.pi / 4, math.sqrt(2))
    assert r.value == pytest.approx(0.5 + 0.5j, abs=1e-10)


def test_ray_against_e1():
    theta = math.pi / 4
    r = integrate_ray(lambda x: np.exp(1j * x) / (1 + x), theta, math.sin(theta))
    assert abs(r.value - cmath.exp(-1j) * e1(-1j)) <= 1e-10


@pytest.mark.parametrize("theta", [math.pi / 8, math.pi / 4, 3 * math.pi / 8])
def test_ray_angle_independence(theta):
    rate = math.cos(theta) + math.sin(theta)
    r = integrate_ray(lambda x: np.exp(1j * x - x), theta, rate)
    assert abs(r.value - (0.5 + 0.5j)) <= 1e-9


def test_ray_rejects_vertical():
    with pytest.raises(InvalidInputError):
        integrate_ray(lambda x: x, math.pi / 2, 1.0)


def test_pv_example():
    r = integrate_pv(lambda x: np.exp(-x), 1.0, 1.0)
    assert r.value.real == pytest.approx(-ei(1) / math.e, abs=1e-10)


@pytest.mark.parametrize("s", [0.5, 2.0, 5.0])
def test_pv_exponential_family(s):
    r = integrate_pv(lambda x: np.exp(-x), s, 1.0)
    assert r.value.real == pytest.approx(-math.exp(-s) * ei(s), abs=1e-10)


def test_pv_window_size_independence():
    g = lambda x: np.exp(-0.7 * x) * np.cos(x)
    s = 1.3
    a = _pv_with_window(g, s, min(s / 2, 1.0), 0.7, 1e-10, 2000).value
    b = _pv_with_window(g, s, min(s / 2, 1.0) / 2, 0.7, 1e-10, 2000).value
    assert abs(a - b) < 10 * 1e-10


def test_pv_rejects_nonpositive_point():
    with pytest.raises(InvalidInputError):
        integrate_pv(lambda x: np.exp(-x), 0.0, 1.0)
