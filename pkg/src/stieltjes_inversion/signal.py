"""Exponential-sum signals Z(x) = sum_k g_k exp(l_k x) built from rational data."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, PoleOutsideHalfPlaneError
from .polynomial import (
    PoleResidue,
    Polynomial,
    ROOT_TOL,
    check_separation,
    compute_residues,
    conjugate_pairing,
    find_roots,
)

CONJUGATE_TOL = 1e-10
REALITY_TOL = 1e-12


class Strictness(enum.Enum):
    PAPER_STRICT = "paper_strict"
    RELAXED = "relaxed"


@dataclass(frozen=True)
class RationalSpec:
    numerator: Polynomial
    denominator: Polynomial
    strictness: Strictness = Strictness.PAPER_STRICT

    def check_degrees(self) -> None:
        n, l = self.numerator.degree, self.denominator.degree
        if l < 1:
            raise InvalidInputError("denominator must have degree >= 1")
        if self.numerator.degree < 0:
            return
        need = 3 if self.strictness is Strictness.PAPER_STRICT else 1
        if l < n + need:
            rule = "l > n + 2" if need == 3 else "l >= n + 1"
            raise InvalidInputError(
                f"degree condition {rule} violated for {self.strictness.value} "
                f"(deg Q = {n}, deg P = {l})"
            )


@dataclass(frozen=True)
class SectorInfo:
    phi0_sup: float


def _symmetrize(terms: list[PoleResidue], partner: list[int]) -> list[PoleResidue]:
    out = list(terms)
    for i, j in enumerate(partner):
        if j == i:
            t = terms[i]
            out[i] = PoleResidue(complex(t.pole.real, 0.0), complex(t.residue.real, 0.0))
        elif i < j:
            a, b = terms[i], terms[j]
            lam = 0.5 * (a.pole + b.pole.conjugate())
            g = 0.5 * (a.residue + b.residue.conjugate())
            out[i] = PoleResidue(lam, g)
            out[j] = PoleResidue(lam.conjugate(), g.conjugate())
    return out


@dataclass(frozen=True)
class ExponentialSum:
    """Z(x) = sum of ``residue * exp(pole * x)`` over ``terms``.

    Poles must lie in the open left half-plane and be pairwise separated.  When
    the terms are closed under simultaneous conjugation (within 1e-10) they are
    snapped to exact conjugate pairs and ``real_signal`` is set.
    """

    terms: tuple[PoleResidue, ...] = ()
    warnings: tuple[str, ...] = ()
    real_signal: bool = field(init=False, default=False)

    def __post_init__(self):
        terms = [PoleResidue(complex(t.pole), complex(t.residue)) for t in self.terms]
        for t in terms:
            if t.pole == 0 or not t.pole.real < 0:
                raise PoleOutsideHalfPlaneError(
                    f"pole outside admissible half-plane: {t.pole} (need Re < 0)"
                )
        check_separation([t.pole for t in terms])
        partner = conjugate_pairing([(t.pole, t.residue) for t in terms], CONJUGATE_TOL)
        if partner is not None:
            terms = _symmetrize(terms, partner)
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "real_signal", partner is not None)

    @classmethod
    def from_poles(cls, poles: Sequence[complex], residues: Sequence[complex]) -> "ExponentialSum":
        if len(poles) != len(residues):
            raise InvalidInputError(
                f"{len(poles)} poles but {len(residues)} residues"
            )
        return cls(tuple(PoleResidue(complex(l), complex(g)) for l, g in zip(poles, residues)))

    @property
    def poles(self) -> np.ndarray:
        return np.array([t.pole for t in self.terms], dtype=complex)

    @property
    def residues(self) -> np.ndarray:
        return np.array([t.residue for t in self.terms], dtype=complex)

    @property
    def alpha_min(self) -> float:
        """Slowest decay rate min(-Re pole); 1.0 for the empty model."""
        if not self.terms:
            return 1.0
        return min(-t.pole.real for t in self.terms)


def build_model(spec: RationalSpec, tol: float = ROOT_TOL) -> ExponentialSum:
    spec.check_degrees()
    roots = find_roots(spec.denominator, tol)
    terms = compute_residues(spec.numerator, spec.denominator, roots)
    n, l = spec.numerator.degree, spec.denominator.degree
    warnings = ()
    if spec.strictness is Strictness.RELAXED and l < n + 3:
        warnings = (
            f"relaxed degree condition: l={l}, n={n} lies outside the l > n + 2 hypothesis",
        )
    return ExponentialSum(tuple(terms), warnings=warnings)


def eval_signal(model: ExponentialSum, x):
    """Z(x) for scalar or array ``x``; real signals come back with zero imaginary part."""
    xs = np.asarray(x, dtype=float)
    if not model.terms:
        out = np.zeros(xs.shape, dtype=complex)
    else:
        lam = model.poles
        g = model.residues
        out = np.exp(np.multiply.outer(xs, lam)) @ g
    if model.real_signal:
        re = np.real(out)
        bad = np.abs(np.imag(out)) > REALITY_TOL * (1 + np.abs(out)) * max(1, len(model.terms))
        if np.any(bad):
            raise ArithmeticError("real signal evaluated with non-negligible imaginary part")
        out = re + 0j
    return complex(out) if np.ndim(out) == 0 else out


def plus_extension(model: ExponentialSum, x):
    """Half-line extension: 2 Z(x) for x > 0, 0 for x < 0 and Z(0) at the jump."""
    xs = np.asarray(x, dtype=float)
    z = np.asarray(eval_signal(model, xs), dtype=complex)
    out = np.where(xs > 0, 2 * z, np.where(xs < 0, 0j, z))
    return complex(out) if np.ndim(out) == 0 else out


def admissible_sector(model: ExponentialSum) -> SectorInfo:
    """Supremum of the angles phi0 for which the rotated transforms stay regular."""
    best = math.pi / 2
    for t in model.terms:
        alpha, beta = -t.pole.real, t.pole.imag
        angle = math.pi / 2 if beta == 0 else math.atan(alpha / abs(beta))
        best = min(best, angle)
    return SectorInfo(best)
