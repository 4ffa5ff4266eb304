import pytest

from stieltjes_inversion import ExponentialSum, Polynomial, RationalSpec, Strictness, build_model


@pytest.fixture
def single():
    """Z(x) = exp(-x)."""
    return ExponentialSum.from_poles([-1.0], [1.0])


@pytest.fixture
def triple_spec():
    return RationalSpec(Polynomial((1,)), Polynomial.from_roots([-1, -2, -3]))


@pytest.fixture
def triple(triple_spec):
    """Z(x) = e^-x / 2 - e^-2x + e^-3x / 2, from 1 / ((p+1)(p+2)(p+3))."""
    return build_model(triple_spec)


@pytest.fixture
def cosine_pair():
    """Z(x) = 2 e^-x cos 2x, from (2p + 2) / ((p+1)^2 + 4)."""
    spec = RationalSpec(Polynomial((2, 2)), Polynomial((5, 2, 1)), Strictness.RELAXED)
    return build_model(spec)
