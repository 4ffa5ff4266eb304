"""Adaptive Gauss-Kronrod quadrature used as an independent oracle.

Integrands must be vectorized: they receive a 1-D numpy array of abscissae
(real, or complex for ray integrals) and return an array of the same shape.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidInputError, ToleranceNotMetError

DEFAULT_TOL = 1e-10
PANEL_BUDGET = 2000

# 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded 7-point Gauss rule.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error_estimate: float
    panels_used: int


def _gk15(f: Integrand, a: float, b: float):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(f(mid + half * _NODES), dtype=complex)
    if fx.shape != (15,):
        raise InvalidInputError("integrand must be vectorized over a 1-D array")
    k = complex(np.dot(_WEIGHTS_K, fx) * half)
    g = complex(np.dot(_WEIGHTS_G, fx) * half)
    # QUADPACK-style scaling of the raw Kronrod-Gauss difference
    mean = k / (b - a) if b != a else 0j
    resasc = float(abs(half) * np.dot(_WEIGHTS_K, np.abs(fx - mean)))
    resabs = float(abs(half) * np.dot(_WEIGHTS_K, np.abs(fx)))
    err = abs(k - g)
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * np.finfo(float).eps):
        err = max(err, 50 * np.finfo(float).eps * resabs)
    return k, err


def _fsum_complex(values) -> complex:
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def integrate_interval(
    f: Integrand,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    breakpoints=(),
    budget: int = PANEL_BUDGET,
) -> QuadResult:
    """Adaptive GK15 on [a, b], bisecting the worst panel until the summed error <= tol."""
    if not b > a:
        raise InvalidInputError(f"empty interval [{a}, {b}]")
    pts = sorted({a, b, *(x for x in breakpoints if a < x < b)})
    heap = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        v, e = _gk15(f, lo, hi)
        heap.append((-e, lo, hi, v))
    heapq.heapify(heap)
    total_err = math.fsum(-h[0] for h in heap)
    while total_err > tol and len(heap) < budget:
        neg_e, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_e, lo, hi, _))
            break
        for x0, x1 in ((lo, mid), (mid, hi)):
            v, e = _gk15(f, x0, x1)
            heapq.heappush(heap, (-e, x0, x1, v))
        total_err = math.fsum(-h[0] for h in heap)
    panels = sorted(heap, key=lambda h: h[1])
    result = QuadResult(
        value=_fsum_complex(h[3] for h in panels),
        error_estimate=math.fsum(-h[0] for h in panels),
        panels_used=len(panels),
    )
    if result.error_estimate > tol:
        raise ToleranceNotMetError(
            f"tolerance {tol:.3e} not met on [{a}, {b}] "
            f"(estimate {result.error_estimate:.3e} after {result.panels_used} panels)",
            result=result,
        )
    return result


def _envelope(f: Integrand, decay_rate: float) -> float:
    # sampled bound C with |f(x)| <= C exp(-decay_rate x)
    xs = np.concatenate([[0.0], np.geomspace(1e-3, 60.0, 48) / decay_rate])
    vals = np.abs(np.asarray(f(xs), dtype=complex)) * np.exp(decay_rate * xs)
    c = float(np.max(vals[np.isfinite(vals)], initial=0.0))
    return max(c, 1e-300)


def _initial_breaks(x_end: float, decay_rate: float) -> list[float]:
    # geometric clustering toward 0 plus one panel per e-fold of decay
    geo = [x_end * 2.0 ** (-j) for j in range(1, 12)]
    n = int(min(200, max(4, math.ceil(x_end * decay_rate))))
    uni = list(np.linspace(0.0, x_end, n + 1)[1:-1])
    return geo + uni


def integrate_decaying(
    f: Integrand, decay_rate: float, tol: float = DEFAULT_TOL, budget: int = PANEL_BUDGET
) -> QuadResult:
    """Integral of ``f`` over [0, inf) for integrands that decay like exp(-decay_rate x)."""
    if not decay_rate > 0:
        raise InvalidInputError(f"decay_rate must be positive, got {decay_rate}")
    c = _envelope(f, decay_rate)
    x_end = max(math.log(10.0 * c / (decay_rate * tol)) / decay_rate, 1.0 / decay_rate)
    tail = c * math.exp(-decay_rate * x_end) / decay_rate
    body = integrate_interval(
        f, 0.0, x_end, tol=0.9 * tol, breakpoints=_initial_breaks(x_end, decay_rate), budget=budget
    )
    return QuadResult(body.value, body.error_estimate + tail, body.panels_used)


def integrate_ray(
    f: Integrand, theta: float, decay_rate: float, tol: float = DEFAULT_TOL, budget: int = PANEL_BUDGET
) -> QuadResult:
    """Integral of ``f`` over [0, inf) taken along the ray ``t * exp(i theta)``.

    Valid when ``f`` is analytic in the sector between the real axis and the
    ray and decays there; ``decay_rate`` is the rate along the ray.
    """
    if not abs(theta) < math.pi / 2:
        raise InvalidInputError(f"ray angle must satisfy |theta| < pi/2, got {theta}")
    rot = complex(math.cos(theta), math.sin(theta))

    def g(t):
        return np.asarray(f(t * rot), dtype=complex) * rot

    return integrate_decaying(g, decay_rate, tol=tol, budget=budget)


def integrate_pv(
    g: Integrand, s: float, decay_rate: float, tol: float = DEFAULT_TOL, budget: int = PANEL_BUDGET
) -> QuadResult:
    """Principal value of int_0^inf g(x) / (x - s) dx for s > 0.

    The window [s - d, s + d], d = min(s/2, 1), is folded onto [0, d] where the
    integrand (g(s+u) - g(s-u)) / u is smooth; the rest is ordinary quadrature.
    """
    if not s > 0:
        raise InvalidInputError(f"principal value point must be positive, got {s}")
    delta = min(s / 2.0, 1.0)
    return _pv_with_window(g, s, delta, decay_rate, tol, budget)


def _pv_with_window(g, s, delta, decay_rate, tol, budget):
    def folded(u):
        return (np.asarray(g(s + u), dtype=complex) - np.asarray(g(s - u), dtype=complex)) / u

    def left(x):
        return np.asarray(g(x), dtype=complex) / (x - s)

    def right(t):
        x = s + delta + t
        return np.asarray(g(x), dtype=complex) / (x - s)

    part_tol = tol / 3.0
    window = integrate_interval(folded, 0.0, delta, tol=part_tol, budget=budget)
    if s - delta > 0:
        lower = integrate_interval(left, 0.0, s - delta, tol=part_tol, budget=budget)
    else:
        lower = QuadResult(0j, 0.0, 1)
    upper = integrate_decaying(right, decay_rate, tol=part_tol, budget=budget)
    parts = (window, lower, upper)
    return QuadResult(
        value=_fsum_complex(p.value for p in parts),
        error_estimate=math.fsum(p.error_estimate for p in parts),
        panels_used=sum(p.panels_used for p in parts),
    )
