"""Exponential integrals E1 and Ei with explicit branch-cut bookkeeping.

``e1`` is the principal branch, cut along (-inf, 0].  Values on the cut are
never produced implicitly; ask ``e1_boundary`` for the limit from a chosen side.
"""
from __future__ import annotations

import cmath
import enum
import math

from .errors import BranchAmbiguityError, InvalidInputError

EULER_GAMMA = 0.57721566490153286061
SERIES_RADIUS = 1.5
# Near the negative axis the continued fraction stalls; the power series is
# accurate there as long as |z| + Re z stays small (cancellation ~ e^(|z|+Re z)).
_LEFT_SERIES_SLACK = 4.0
_LEFT_SERIES_RADIUS = 40.0
_EI_SERIES_MAX = 40.0
_MAX_TERMS = 5000
_CF_MAX_ITER = 20000
_EPS = 2.220446049250313e-16


class BranchSide(enum.Enum):
    FROM_ABOVE = "from_above"
    FROM_BELOW = "from_below"


def _on_cut(z: complex) -> bool:
    return z.real <= 0 and abs(z.imag) <= 1e-300


def _series_e1(z: complex) -> complex:
    # E1(z) = -gamma - log z - sum_{n>=1} (-z)^n / (n n!)
    term = 1 + 0j
    total = 0j
    for n in range(1, _MAX_TERMS):
        term *= -z / n
        add = term / n
        total += add
        if abs(add) <= _EPS * 0.25 * abs(total) and n > abs(z):
            break
    return -EULER_GAMMA - cmath.log(z) - total


def _cf_scaled(z: complex) -> complex:
    # modified Lentz on e^z E1(z) = 1/(z+1- 1/(z+3- 4/(z+5- ...)))
    tiny = 1e-300
    b = z + 1
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, _CF_MAX_ITER):
        an = -i * i
        b += 2
        d = an * d + b
        if d == 0:
            d = tiny
        d = 1 / d
        c = b + an / c
        if c == 0:
            c = tiny
        delta = c * d
        h *= delta
        if abs(delta - 1) <= _EPS:
            return h
    return h


def _use_series(z: complex) -> bool:
    r = abs(z)
    if r <= SERIES_RADIUS:
        return True
    return z.real < 0 and r + z.real <= _LEFT_SERIES_SLACK and r <= _LEFT_SERIES_RADIUS


def e1(z: complex) -> complex:
    """Principal-branch exponential integral E1(z) = int_z^inf e^-t / t dt."""
    z = complex(z)
    if _on_cut(z):
        raise BranchAmbiguityError(
            f"E1 is ambiguous on the cut (-inf, 0] at z={z}; use e1_boundary with a BranchSide"
        )
    if _use_series(z):
        return _series_e1(z)
    return cmath.exp(-z) * _cf_scaled(z)


def e1_scaled(z: complex) -> complex:
    """``exp(z) * E1(z)`` without forming either factor when that would overflow."""
    z = complex(z)
    if _on_cut(z):
        raise BranchAmbiguityError(
            f"E1 is ambiguous on the cut (-inf, 0] at z={z}; use e1_boundary with a BranchSide"
        )
    if _use_series(z):
        return cmath.exp(z) * _series_e1(z)
    return _cf_scaled(z)


def _ei_series(x: float) -> float:
    term = 1.0
    total = 0.0
    for n in range(1, _MAX_TERMS):
        term *= x / n
        add = term / n
        total += add
        if add <= _EPS * 0.25 * total:
            break
    return EULER_GAMMA + math.log(x) + total


def _ei_asymptotic_scaled(x: float) -> float:
    # e^-x Ei(x) ~ (1/x) sum k!/x^k, truncated at the smallest term
    total = 1.0
    term = 1.0
    for k in range(1, int(x) + 1):
        nxt = term * k / x
        if nxt >= term:
            break
        term = nxt
        total += term
        if term <= _EPS * 0.25 * total:
            break
    return total / x


def ei(x: float) -> float:
    """Principal-value exponential integral Ei(x) for x > 0."""
    x = float(x)
    if not x > 0:
        raise InvalidInputError(f"ei requires x > 0, got {x}")
    if x <= _EI_SERIES_MAX:
        return _ei_series(x)
    return math.exp(x) * _ei_asymptotic_scaled(x)


def ei_scaled(x: float) -> float:
    """``exp(-x) * Ei(x)`` for x > 0."""
    x = float(x)
    if not x > 0:
        raise InvalidInputError(f"ei_scaled requires x > 0, got {x}")
    if x <= _EI_SERIES_MAX:
        return math.exp(-x) * _ei_series(x)
    return _ei_asymptotic_scaled(x)


def e1_boundary(x: float, side: BranchSide) -> complex:
    """Limit of E1 at -x (x > 0) taken from the upper or lower half-plane."""
    x = float(x)
    if not x > 0:
        raise InvalidInputError(f"e1_boundary requires x > 0, got {x}")
    jump = -math.pi if side is BranchSide.FROM_ABOVE else math.pi
    return complex(-ei(x), jump)


def e1_boundary_scaled(x: float, side: BranchSide) -> complex:
    """``exp(-x) * e1_boundary(x, side)``, safe for large x."""
    x = float(x)
    if not x > 0:
        raise InvalidInputError(f"e1_boundary requires x > 0, got {x}")
    jump = -math.pi if side is BranchSide.FROM_ABOVE else math.pi
    return complex(-ei_scaled(x), jump * math.exp(-x))
