"""Polynomials over the complex field, root extraction and simple-pole residues.

Coefficients are stored in ascending degree order, so ``Polynomial((2, 3, 1))``
is ``p**2 + 3p + 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, IllConditionedPolesError, InvalidInputError

ROOT_TOL = 1e-12
ROOT_MAX_ITER = 200
POLE_SEPARATION = 1e-6
_ROOT_SEED = 20240601


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        c = [complex(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "Polynomial":
        c = [complex(leading)]
        for r in roots:
            # multiply by (p - r)
            nxt = [0j] * (len(c) + 1)
            for j, a in enumerate(c):
                nxt[j] -= r * a
                nxt[j + 1] += a
            c = nxt
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def is_real(self) -> bool:
        return all(a.imag == 0 for a in self.coeffs)

    def __call__(self, z):
        return poly_eval(self, z)


@dataclass(frozen=True)
class PoleResidue:
    pole: complex
    residue: complex


def poly_eval(p: Polynomial, z):
    """Horner evaluation; works for scalars and numpy arrays alike."""
    acc = 0j if np.isscalar(z) else np.zeros_like(np.asarray(z, dtype=complex))
    for a in reversed(p.coeffs):
        acc = acc * z + a
    return acc


def poly_derivative(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(j * a for j, a in enumerate(p.coeffs) if j > 0))


def _residual_scale(p: Polynomial, r: complex) -> float:
    cmax = max(abs(a) for a in p.coeffs)
    return cmax * max(1.0, abs(r)) ** p.degree


def find_roots(p: Polynomial, tol: float = ROOT_TOL, max_iter: int = ROOT_MAX_ITER) -> list[complex]:
    """All roots of ``p`` at once by Aberth-Ehrlich iteration, then Newton polishing.

    Starting points sit on a circle whose radius is the Cauchy bound, with a
    small seeded angular perturbation so results are reproducible.

    Raises ConvergenceError when a root fails the residual test
    ``|p(r)| <= tol * max|c| * max(1, |r|)**deg`` after ``max_iter`` sweeps.
    """
    n = p.degree
    if n < 1:
        raise InvalidInputError("find_roots needs a polynomial of degree >= 1")
    a = np.array(p.coeffs, dtype=complex)
    if n == 1:
        return [complex(-a[0] / a[1])]
    dp = poly_derivative(p)

    radius = 1.0 + float(np.max(np.abs(a[:-1] / a[-1])))
    rng = np.random.default_rng(_ROOT_SEED)
    angles = 2 * np.pi * np.arange(n) / n + 0.4 + 0.1 * rng.uniform(-1, 1, n)
    z = radius * np.exp(1j * angles)

    def converged(zs):
        res = np.abs(poly_eval(p, zs))
        scale = np.max(np.abs(a)) * np.maximum(1.0, np.abs(zs)) ** n
        return res <= tol * scale

    for _ in range(max_iter):
        pz = poly_eval(p, z)
        dpz = poly_eval(dp, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        sums = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            w = ratio / (1.0 - ratio * sums)
        w = np.where(np.isfinite(w) & (pz != 0), w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(z))):
            break

    roots = []
    for r in z:
        r = complex(r)
        best, best_res = r, abs(p(r))
        for _ in range(3):
            d = dp(r)
            if d == 0:
                break
            r = r - p(r) / d
            res = abs(p(r))
            if res < best_res:
                best, best_res = r, res
        roots.append(best)

    ok = converged(np.array(roots))
    if not np.all(ok):
        worst = max(abs(p(r)) / _residual_scale(p, r) for r in roots)
        raise ConvergenceError(
            f"root iteration did not converge; worst scaled residual {worst:.3e}",
            worst_residual=worst,
        )
    return sorted(roots, key=lambda r: (-round(r.real, 12), -r.imag))


def min_separation(points: Sequence[complex]) -> float:
    best = math.inf
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            best = min(best, abs(points[i] - points[j]))
    return best


def check_separation(poles: Sequence[complex], threshold: float = POLE_SEPARATION) -> None:
    if len(poles) < 2:
        return
    scale = max(abs(x) for x in poles)
    sep = min_separation(poles)
    if sep <= threshold * scale:
        raise IllConditionedPolesError(
            f"ill-conditioned poles: minimum separation {sep:.3e} "
            f"is below {threshold:g} * max|pole| = {threshold * scale:.3e}"
        )


def compute_residues(
    Q: Polynomial, P: Polynomial, roots: Sequence[complex], threshold: float = POLE_SEPARATION
) -> list[PoleResidue]:
    """Residues of ``Q/P`` at the simple roots of ``P``: ``Q(r) / P'(r)``.

    When ``roots`` is the full root set, ``P'(r_k)`` is taken in product form
    ``lead * prod_{j != k} (r_k - r_j)``.  That keeps the partial fractions an
    exact decomposition of ``Q / (lead * prod (p - r_j))``, which matters for
    clustered roots where Horner evaluation of ``P'`` loses digits.
    """
    if P.degree < 1:
        raise InvalidInputError("denominator must have degree >= 1")
    if Q.degree >= P.degree:
        raise InvalidInputError(
            f"Q/P must be strictly proper (deg Q = {Q.degree}, deg P = {P.degree})"
        )
    roots = [complex(r) for r in roots]
    check_separation(roots, threshold)
    lead = P.coeffs[-1]
    out = []
    if len(roots) == P.degree:
        for k, r in enumerate(roots):
            d = lead
            for j, other in enumerate(roots):
                if j != k:
                    d *= r - other
            out.append(PoleResidue(r, complex(Q(r) / d)))
    else:
        dP = poly_derivative(P)
        out = [PoleResidue(r, complex(Q(r) / dP(r))) for r in roots]
    return out


def conjugate_pairing(pairs: Sequence[tuple[complex, complex]], tol: float = 1e-10):
    """Match each ``(pole, weight)`` with its simultaneous conjugate.

    Returns a list ``partner`` with ``partner[i] = j`` (``i`` for self-conjugate
    entries), or ``None`` when the set is not closed under conjugation within
    ``tol`` relative to the largest pole and weight magnitudes.
    """
    if not pairs:
        return []
    lam_scale = max(abs(l) for l, _ in pairs) or 1.0
    g_scale = max(abs(g) for _, g in pairs) or 1.0
    free = set(range(len(pairs)))
    partner = [-1] * len(pairs)
    for i, (lam, g) in enumerate(pairs):
        if i not in free:
            continue
        best, best_d = None, math.inf
        for j in free:
            dl = abs(pairs[j][0] - lam.conjugate()) / lam_scale
            dg = abs(pairs[j][1] - g.conjugate()) / g_scale
            d = max(dl, dg)
            if d < best_d:
                best, best_d = j, d
        if best is None or best_d > tol:
            return None
        partner[i], partner[best] = best, i
        free.discard(i)
        free.discard(best)
    return partner
