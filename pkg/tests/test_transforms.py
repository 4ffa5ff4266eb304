import cmath
import math

import numpy as np
import pytest

from stieltjes_inversion import ExponentialSum
from stieltjes_inversion.errors import EvaluationAtPoleError, InvalidInputError
from stieltjes_inversion.quadrature import integrate_pv
from stieltjes_inversion.signal import eval_signal
from stieltjes_inversion.special import BranchSide, e1_boundary, ei
from stieltjes_inversion.transforms import (
    EvalMode,
    boundary_value,
    double_fourier,
    double_laplace,
    fourier_half,
    invert,
    iterated_double_laplace,
    laplace,
    mixed_transform_R,
)

ORACLE = EvalMode.QUADRATURE_ORACLE

# mpmath, 30 digits
E_E1_ONE = 0.59634736232319407434
EI_ONE = 1.89511781635593675547
TRIPLE_AT_ONE = 0.07349797153304044039
TRIPLE_R_AT_ONE = 0.06788693440103370

ZERO = ExponentialSum(())


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# laplace

def test_laplace_single_at_zero(single):
    assert laplace(single, 0) == pytest.approx(1, abs=1e-15)
    assert laplace(single, 0, ORACLE) == pytest.approx(1, abs=1e-10)


def test_laplace_triple_at_zero(triple):
    assert laplace(triple, 0) == pytest.approx(1 / 6, rel=1e-14)


def test_laplace_closed_vs_oracle(triple):
    p = 0.7 + 0.3j
    assert abs(laplace(triple, p) - laplace(triple, p, ORACLE)) <= 1e-9


def test_laplace_at_pole(single):
    with pytest.raises(EvaluationAtPoleError, match="evaluation at pole"):
        laplace(single, -1)


def test_laplace_oracle_needs_convergence(single):
    with pytest.raises(InvalidInputError):
        laplace(single, -1.5, ORACLE)
    # the closed form continues past the abscissa
    assert laplace(single, -1.5) == pytest.approx(-2)


# double_laplace

def test_double_laplace_single(single):
    assert double_laplace(single, 1).real == pytest.approx(E_E1_ONE, rel=1e-14)
    assert abs(double_laplace(single, 1, ORACLE) - E_E1_ONE) <= 1e-10


def test_double_laplace_triple(triple):
    closed = double_laplace(triple, 1)
    assert closed.real == pytest.approx(TRIPLE_R_AT_ONE, rel=1e-13)
    assert abs(closed - double_laplace(triple, 1, ORACLE)) <= 1e-9


def test_double_laplace_zero_model():
    assert double_laplace(ZERO, 2 + 1j) == 0


@pytest.mark.parametrize("p", [0, -1, complex(-2.5, 0.0)])
def test_double_laplace_refuses_cut(single, p):
    with pytest.raises(InvalidInputError, match="boundary_value"):
        double_laplace(single, p)


def test_stieltjes_iterated_equivalence(triple, cosine_pair):
    rng = np.random.default_rng(5)
    for model in (triple, cosine_pair):
        for _ in range(10):
            p = complex(rng.uniform(0.1, 5), rng.uniform(-5, 5))
            closed = double_laplace(model, p)
            assert rel(closed, double_laplace(model, p, ORACLE)) <= 1e-8
            assert rel(closed, iterated_double_laplace(model, p)) <= 1e-8


def test_schwarz_symmetry(cosine_pair, triple):
    rng = np.random.default_rng(6)
    for model in (triple, cosine_pair):
        for _ in range(20):
            p = complex(rng.uniform(-8, 8), rng.uniform(0.01, 8))
            a, b = double_laplace(model, p.conjugate()), double_laplace(model, p).conjugate()
            assert abs(a - b) <= 1e-12 * abs(b)


@pytest.mark.parametrize("s", [0.1, 1.0, 7.5, 60.0])
def test_real_on_positive_axis(cosine_pair, s):
    v = double_laplace(cosine_pair, s)
    assert abs(v.imag) <= 1e-12 * (1 + abs(v))


def test_continuation_across_left_half_plane(cosine_pair):
    # the closed form must stay analytic where -p lambda crosses the principal cut
    for y in np.linspace(0.05, 4, 40):
        a = double_laplace(cosine_pair, complex(-1.0, y))
        b = double_laplace(cosine_pair, complex(-1.0, y + 1e-7))
        assert abs(a - b) < 1e-5


# fourier_half

def test_fourier_half_examples(single, cosine_pair):
    assert fourier_half(single, 0) == pytest.approx(1)
    assert fourier_half(single, 1) == pytest.approx((1 + 1j) / 2, abs=1e-15)
    assert fourier_half(cosine_pair, -2.3) == pytest.approx(fourier_half(cosine_pair, 2.3).conjugate())
    out = fourier_half(single, np.array([0.0, 1.0]))
    assert out.shape == (2,)


# double_fourier

def test_double_fourier_theorem1_single(single):
    r_f = double_fourier(single, 1)
    assert abs(-1j * r_f - double_laplace(single, 1)) <= 1e-10
    assert abs(-1j * r_f - E_E1_ONE) <= 1e-10


@pytest.mark.parametrize("s", [0.2, 1.0, 9.0])
def test_double_fourier_imaginary_for_positive_s(single, triple, s):
    for model in (single, triple):
        assert abs(double_fourier(model, s).real) <= 1e-10


def test_double_fourier_negative_s(single):
    assert double_fourier(single, -1).real == pytest.approx(math.pi / math.e, abs=1e-12)


@pytest.mark.parametrize("s", [-3.0, -1.0, -0.3, 0.3, 1.0, 3.0])
def test_double_fourier_closed_vs_ray(triple, cosine_pair, s):
    for model in (triple, cosine_pair):
        closed = double_fourier(model, s)
        assert abs(closed - double_fourier(model, s, ORACLE)) <= 1e-8 * (1 + abs(closed))


def test_double_fourier_rejects_zero(single):
    with pytest.raises(InvalidInputError):
        double_fourier(single, 0)


# mixed_transform_R

def test_mixed_R_rotated_stieltjes(single, cosine_pair):
    # R(p) = i r(i p); on the positive axis that is i e^{i} E1(i) for the single pole
    assert abs(mixed_transform_R(single, 1.0) - (0.62144962423581336 + 0.34337796155642703j)) <= 1e-9
    for model in (single, cosine_pair):
        for p in (1.0, 0.3 - 0.8j):
            assert abs(mixed_transform_R(model, p) - 1j * double_laplace(model, 1j * p)) <= 1e-8


def test_mixed_R_meets_theorem1_identity(single):
    # -i R(-i s) = r(s), reached from inside the sector
    approx = -1j * mixed_transform_R(single, complex(1e-6, -1), EvalMode.CLOSED_FORM)
    assert abs(approx - double_laplace(single, 1)) <= 1e-5


def test_mixed_R_closed_vs_oracle_in_sector(cosine_pair):
    for p in (1 + 0.2j, 2 - 1j, 0.5 - 1.5j, 1 + 0.4j):
        closed = mixed_transform_R(cosine_pair, p, EvalMode.CLOSED_FORM)
        assert abs(closed - mixed_transform_R(cosine_pair, p)) <= 1e-8 * (1 + abs(closed))


def test_mixed_R_sector_violation(single, cosine_pair):
    with pytest.raises(InvalidInputError):
        mixed_transform_R(single, -1)
    with pytest.raises(InvalidInputError):
        mixed_transform_R(single, 0)
    # phi0 = atan(1/2) for the pair -1 +- 2i
    with pytest.raises(InvalidInputError):
        mixed_transform_R(cosine_pair, cmath.rect(1, 0.5))


def test_mixed_R_continuity_towards_axis(single):
    vals = [mixed_transform_R(single, complex(eps, -1)) for eps in (1e-2, 1e-3, 1e-4)]
    d1, d2 = abs(vals[0] - vals[1]), abs(vals[1] - vals[2])
    assert d2 < d1
    assert abs(vals[-1] - double_fourier(single, 1)) < 1e-3


# boundary_value / invert

def test_boundary_value_single(single):
    bv = boundary_value(single, 1)
    assert bv.side is BranchSide.FROM_ABOVE
    assert bv.s == 1
    expected = e1_boundary(1, BranchSide.FROM_ABOVE) / math.e
    assert abs(bv.value - expected) <= 1e-15
    assert bv.value.real == pytest.approx(-EI_ONE / math.e, rel=1e-14)


@pytest.mark.parametrize("s", [0.1, 1.0, 5.0, 40.0])
def test_boundary_imag_single_pole(s):
    m = ExponentialSum.from_poles([-0.7], [2.5])
    assert boundary_value(m, s).value.imag == pytest.approx(-math.pi * math.exp(-0.7 * s) * 2.5, rel=1e-14)


def test_boundary_value_triple(triple):
    v = boundary_value(triple, 1).value
    assert v.imag == pytest.approx(-math.pi * TRIPLE_AT_ONE, rel=1e-13)


def test_boundary_matches_small_eps_limit(triple, cosine_pair):
    for model in (triple, cosine_pair):
        for s in (0.5, 1.0, 2.0):
            bv = boundary_value(model, s).value
            errs = [abs(double_laplace(model, complex(-s, e)) - bv) for e in (1e-4, 1e-6)]
            assert errs[1] < errs[0]
            assert errs[1] <= 1e-4


def test_boundary_real_part_pv(triple):
    for s in (0.5, 1.0, 2.0):
        pv = integrate_pv(lambda x: eval_signal(triple, x).real, s, triple.alpha_min)
        assert abs(boundary_value(triple, s).value.real - pv.value) <= 1e-6


def test_boundary_rejects_nonpositive(single):
    with pytest.raises(InvalidInputError):
        boundary_value(single, 0)
    with pytest.raises(InvalidInputError):
        invert(single, -1)


def test_invert_examples(single, triple):
    assert invert(single, 1) == pytest.approx(1 / math.e, rel=1e-14)
    assert invert(ZERO, 1) == 0
    assert invert(triple, 1) == pytest.approx(TRIPLE_AT_ONE, rel=1e-12)


def test_invert_conjugate_pair(cosine_pair):
    for s in np.geomspace(0.1, 10, 25):
        expected = 2 * math.exp(-s) * math.cos(2 * s)
        assert abs(invert(cosine_pair, s) - expected) <= 1e-12 * (1 + abs(expected))


def test_invert_lower_half_plane_pole():
    # a single complex pole is not a real signal, yet the continuation still inverts it
    m = ExponentialSum.from_poles([-0.5 - 3j], [1.0])
    for s in (0.3, 1.0, 4.0):
        expected = -boundary_value(m, s).value.imag / math.pi
        assert expected == pytest.approx(invert(m, s))
