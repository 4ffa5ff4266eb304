"""Laplace, Stieltjes and half-line Fourier transforms of exponential sums.

Every closed form goes through the exponential integral.  For a term
``g exp(l x)`` the Stieltjes integral int_0^inf exp(l x) / (p + x) dx equals
``exp(w) E1(w)`` with ``w = -l p``, where E1 must be continued along with
``log(-l) + log(p)`` rather than taken on its principal branch; the
difference is a whole multiple of ``2 pi i`` (see ``_stieltjes_kernel``).
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .errors import EvaluationAtPoleError, InvalidInputError
from .signal import ExponentialSum, admissible_sector, eval_signal
from .special import BranchSide, e1_boundary_scaled, e1_scaled

ORACLE_TOL = 1e-12


class EvalMode(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE_ORACLE = "quadrature_oracle"


@dataclass(frozen=True)
class BoundaryValue:
    s: float
    value: complex
    side: BranchSide = BranchSide.FROM_ABOVE


def _stieltjes_kernel(lam: complex, p: complex, arg_p: float) -> complex:
    """exp(w) E1(w), w = -lam p, on the branch continued from p > 0.

    ``arg_p`` is passed explicitly so the caller decides which side of the
    cut a negative real ``p`` belongs to.
    """
    w = -lam * p
    theta = cmath.phase(-lam) + arg_p
    if w.imag == 0 and w.real < 0:
        base = e1_boundary_scaled(-w.real, BranchSide.FROM_ABOVE)
        return base + 1j * (math.pi - theta) * cmath.exp(w)
    k = round((cmath.phase(w) - theta) / (2 * math.pi))
    val = e1_scaled(w)
    if k:
        val += 2j * math.pi * k * cmath.exp(w)
    return val


def _fourier_kernel(lam: complex, s: float) -> complex:
    """int_0^inf exp(i s y) / (y + a) dy with a = -i lam, as exp(w) E1(w), w = -i s a.

    Continued in s from s > 0 (where the branch is principal) through the
    upper half-plane, so log w = log(-i s) + log(a) with arg(-i s) = -/+ pi/2.
    """
    a = -1j * lam
    w = -1j * s * a
    theta = cmath.phase(a) + (-math.pi / 2 if s > 0 else math.pi / 2)
    if w.imag == 0 and w.real < 0:
        base = e1_boundary_scaled(-w.real, BranchSide.FROM_ABOVE)
        return base + 1j * (math.pi - theta) * cmath.exp(w)
    k = round((cmath.phase(w) - theta) / (2 * math.pi))
    val = e1_scaled(w)
    if k:
        val += 2j * math.pi * k * cmath.exp(w)
    return val


def _oracle_tol(scale: float) -> float:
    return ORACLE_TOL * max(1.0, scale)


def _gamma_scale(model: ExponentialSum) -> float:
    return float(np.sum(np.abs(model.residues))) if model.terms else 0.0


def laplace(
    model: ExponentialSum,
    p: complex,
    mode: EvalMode = EvalMode.CLOSED_FORM,
    tol: float | None = None,
) -> complex:
    """L Z(p) = int_0^inf exp(-p x) Z(x) dx.

    ``tol`` is the absolute quadrature tolerance for the oracle mode; by default
    it scales with sum |g_k| / (alpha_min + Re p).
    """
    p = complex(p)
    for t in model.terms:
        if p == t.pole:
            raise EvaluationAtPoleError(f"evaluation at pole {p}")
    if not model.terms:
        return 0j
    if mode is EvalMode.CLOSED_FORM:
        return complex(sum(t.residue / (p - t.pole) for t in model.terms))
    rate = model.alpha_min + p.real
    if not rate > 0:
        raise InvalidInputError(
            f"quadrature oracle for L needs Re p > -alpha_min = {-model.alpha_min}"
        )
    res = quadrature.integrate_decaying(
        lambda x: np.exp(-p * x) * eval_signal(model, x),
        rate,
        tol=tol if tol is not None else _oracle_tol(_gamma_scale(model) / rate),
    )
    return res.value


def double_laplace(model: ExponentialSum, p: complex, mode: EvalMode = EvalMode.CLOSED_FORM) -> complex:
    """r(p) = L L Z(p) = int_0^inf Z(x) / (p + x) dx, continued to the cut plane."""
    p = complex(p)
    if p.imag == 0 and p.real <= 0:
        raise InvalidInputError(
            f"p = {p} lies on the cut (-inf, 0]; use boundary_value for values on the cut"
        )
    if not model.terms:
        return 0j
    if mode is EvalMode.CLOSED_FORM:
        arg_p = cmath.phase(p)
        return complex(sum(t.residue * _stieltjes_kernel(t.pole, p, arg_p) for t in model.terms))
    rate = model.alpha_min
    res = quadrature.integrate_decaying(
        lambda x: eval_signal(model, x) / (p + x),
        rate,
        tol=_oracle_tol(_gamma_scale(model) / (rate * max(abs(p), 1e-3))),
    )
    return res.value


def iterated_double_laplace(model: ExponentialSum, p: complex) -> complex:
    """Oracle for r(p) as int_0^inf exp(-p t) L Z(t) dt (Re p > 0)."""
    p = complex(p)
    if not p.real > 0:
        raise InvalidInputError("iterated Laplace oracle needs Re p > 0")
    if not model.terms:
        return 0j
    lam = model.poles
    g = model.residues

    def inner(t):
        return np.exp(-p * t) * (g / (np.subtract.outer(t, lam))).sum(axis=-1)

    res = quadrature.integrate_decaying(
        inner, p.real, tol=_oracle_tol(_gamma_scale(model) / model.alpha_min)
    )
    return res.value


def fourier_half(model: ExponentialSum, y):
    """F0 Z(y) = int_0^inf exp(i y x) Z(x) dx = sum -g / (l + i y); scalar or array."""
    ys = np.asarray(y, dtype=complex)
    if not model.terms:
        out = np.zeros(ys.shape, dtype=complex)
    else:
        out = (-model.residues / np.add.outer(1j * ys, model.poles)).sum(axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def boundary_value(model: ExponentialSum, s: float) -> BoundaryValue:
    """r_An(-s + i0): limit of the continued Stieltjes transform from the upper half-plane."""
    s = float(s)
    if not s > 0:
        raise InvalidInputError(f"boundary_value requires s > 0, got {s}")
    p = complex(-s, 0.0)
    value = sum(
        (t.residue * _stieltjes_kernel(t.pole, p, math.pi) for t in model.terms), 0j
    )
    return BoundaryValue(s, complex(value), BranchSide.FROM_ABOVE)


def invert(model: ExponentialSum, s: float) -> float:
    """Recover Z(s) = -Im r_An(-s) / pi."""
    return -boundary_value(model, s).value.imag / math.pi


def ray_angle(model: ExponentialSum, direction: int) -> float:
    """Rotation for the oscillatory oracles; the lower half-plane holds the poles of F0 Z."""
    if direction > 0:
        return math.pi / 4
    return -min(admissible_sector(model).phi0_sup / 2, math.pi / 4)


def double_fourier(model: ExponentialSum, s: float, mode: EvalMode = EvalMode.CLOSED_FORM) -> complex:
    """r_F(s) = F0 F0 Z(s); for s < 0 the boundary value of the function regular for Im p > 0."""
    s = float(s)
    if s == 0:
        raise InvalidInputError("double_fourier is undefined at s = 0")
    if not model.terms:
        return 0j
    if mode is EvalMode.CLOSED_FORM:
        # F0 Z(y) = sum i g / (y + a), a = -i lam
        return complex(sum(1j * t.residue * _fourier_kernel(t.pole, s) for t in model.terms))
    theta = ray_angle(model, 1 if s > 0 else -1)
    rate = abs(s) * abs(math.sin(theta))
    scale = _gamma_scale(model) / model.alpha_min
    res = quadrature.integrate_ray(
        lambda x: np.exp(1j * s * x) * fourier_half(model, x),
        theta,
        rate,
        tol=_oracle_tol(scale),
    )
    return res.value


def _check_sector(model: ExponentialSum, p: complex) -> float:
    if p == 0:
        raise InvalidInputError("R(p) is not defined at p = 0")
    arg_p = cmath.phase(p)
    phi0 = admissible_sector(model).phi0_sup
    if not -math.pi / 2 < arg_p < phi0:
        raise InvalidInputError(
            f"p = {p} (arg {arg_p:.6f}) outside the sector -pi/2 < arg p < {phi0:.6f}"
        )
    return arg_p


def mixed_transform_R(
    model: ExponentialSum, p: complex, mode: EvalMode = EvalMode.QUADRATURE_ORACLE
) -> complex:
    """R(p) = int_0^inf exp(-p x) F0 Z(x) dx on the sector -pi/2 < arg p < phi0_sup.

    R(-i s) equals r_F(s); the closed form is ``i r_An(i p)``.
    """
    p = complex(p)
    arg_p = _check_sector(model, p)
    if not model.terms:
        return 0j
    if mode is EvalMode.CLOSED_FORM:
        q = 1j * p
        return 1j * complex(
            sum(t.residue * _stieltjes_kernel(t.pole, q, arg_p + math.pi / 2) for t in model.terms)
        )
    phi0 = admissible_sector(model).phi0_sup
    # align the ray with conj(p) so exp(-p x) decays, staying clear of the poles of F0 Z
    theta = min(max(-arg_p, -phi0 / 2), 0.49 * math.pi)
    rate = abs(p) * math.cos(arg_p + theta)
    scale = _gamma_scale(model) / model.alpha_min
    res = quadrature.integrate_ray(
        lambda x: np.exp(-p * x) * fourier_half(model, x), theta, rate, tol=_oracle_tol(scale)
    )
    return res.value
