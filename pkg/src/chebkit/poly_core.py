"""Monic polynomial arithmetic, evaluation and root finding.

Polynomials are stored in the power basis by their low-order coefficients
``a_0, ..., a_{n-1}``; the leading coefficient is always exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegreeError, NonConvergence, ValidationError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MonicPolynomial:
    """Degree-``n`` monic polynomial ``z^n + a_{n-1} z^{n-1} + ... + a_0``.

    Parameters
    ----------
    low_coeffs : tuple of complex
        Coefficients ``a_0 .. a_{n-1}``. The empty tuple is the constant 1.
    """

    low_coeffs: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        vals = tuple(complex(c) for c in self.low_coeffs)
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in vals):
            raise ValidationError("polynomial coefficients must be finite")
        object.__setattr__(self, "low_coeffs", vals)

    @property
    def degree(self) -> int:
        return len(self.low_coeffs)

    @property
    def coeffs(self) -> np.ndarray:
        """All coefficients, low order first, including the leading 1."""
        return np.array(self.low_coeffs + (1.0 + 0j,), dtype=complex)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0.0 for c in self.low_coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex]) -> "MonicPolynomial":
        """Build from a full low-to-high coefficient vector, dividing by the lead."""
        c = np.asarray(coeffs, dtype=complex)
        nz = np.flatnonzero(c)
        if nz.size == 0:
            raise DegreeError("zero polynomial has no monic normalization")
        c = c[: nz[-1] + 1] / c[nz[-1]]
        return cls(tuple(c[:-1]))

    @classmethod
    def from_roots(cls, zeros: Iterable[complex]) -> "MonicPolynomial":
        c = np.array([1.0 + 0j])
        for r in zeros:
            c = np.convolve(c, np.array([1.0, -complex(r)])[::-1])
        return cls.from_coeffs(c)

    @classmethod
    def monomial(cls, n: int) -> "MonicPolynomial":
        return cls((0j,) * n)

    def real_part(self) -> "MonicPolynomial":
        """Drop imaginary parts of the coefficients."""
        return MonicPolynomial(tuple(complex(c.real) for c in self.low_coeffs))

    def __call__(self, z):
        return evaluate(self, z)


def evaluate(p: MonicPolynomial, z):
    """Evaluate ``p`` at ``z`` (scalar or array) by Horner's scheme."""
    zz = np.asarray(z, dtype=complex)
    acc = np.ones_like(zz)
    for a in reversed(p.low_coeffs):
        acc = acc * zz + a
    if np.ndim(z) == 0:
        return complex(acc)
    return acc


def horner_general(coeffs: Sequence[complex], z):
    """Evaluate a (not necessarily monic) low-to-high coefficient vector."""
    zz = np.asarray(z, dtype=complex)
    acc = np.zeros_like(zz)
    for a in reversed(list(coeffs)):
        acc = acc * zz + a
    return acc


def derivative(p: MonicPolynomial) -> np.ndarray:
    """Coefficients (low order first) of ``p'``; degree 0 gives ``[0]``."""
    c = p.coeffs
    if c.size == 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, c.size)


def compose(p: MonicPolynomial, q: MonicPolynomial) -> MonicPolynomial:
    """Return ``p(q(z))``, monic of degree ``deg p * deg q``."""
    qc = q.coeffs
    acc = np.array([1.0 + 0j])
    for a in reversed(p.low_coeffs):
        acc = np.convolve(acc, qc)
        acc[0] += a
    acc[-1] = 1.0
    return MonicPolynomial(tuple(acc[:-1]))


def multiply(p: MonicPolynomial, q: MonicPolynomial) -> MonicPolynomial:
    return MonicPolynomial.from_coeffs(np.convolve(p.coeffs, q.coeffs))


def power(p: MonicPolynomial, k: int) -> MonicPolynomial:
    c = np.array([1.0 + 0j])
    for _ in range(k):
        c = np.convolve(c, p.coeffs)
    return MonicPolynomial.from_coeffs(c)


def affine_transform(p: MonicPolynomial, alpha: complex, b: complex) -> MonicPolynomial:
    """Return ``alpha^n p((z - b)/alpha)``, the monic polynomial on ``alpha E + b``."""
    n = p.degree
    inner = np.array([-b / alpha, 1.0 / alpha], dtype=complex)
    acc = np.array([1.0 + 0j])
    for a in reversed(p.low_coeffs):
        acc = np.convolve(acc, inner)
        acc[0] += a
    acc = acc * alpha**n
    acc[-1] = 1.0
    return MonicPolynomial(tuple(acc[:-1]))


def aberth(
    z0: np.ndarray,
    values: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]],
    max_iter: int = 500,
) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich iteration from starting points ``z0``.

    Parameters
    ----------
    z0 : ndarray of complex
        One starting point per root.
    values : callable
        Maps points to ``(f, f', noise)`` where ``noise`` bounds the rounding
        error of ``f``; a root stops moving once ``|f|`` is below it.
    max_iter : int
        Sweep cap.

    Returns
    -------
    ndarray of complex

    Raises
    ------
    NonConvergence
        If some root is still moving after ``max_iter`` sweeps.
    """
    z = np.array(z0, dtype=complex)
    n = z.size
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        za = z[idx]
        pz, dpz, noise = values(za)
        small = np.abs(pz) <= noise
        dpz = np.where(dpz == 0, _EPS * (1.0 + np.abs(za)), dpz)
        ratio = pz / dpz
        diff = za[:, None] - z[None, :]
        diff[np.arange(idx.size), idx] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(1.0 / diff, axis=1)
            delta = ratio / (1.0 - ratio * s)
        delta = np.where(np.isfinite(delta), delta, ratio)
        delta = np.where(small, 0.0, delta)
        z[idx] = za - delta
        done = small | (np.abs(delta) < 1e-12 * (1.0 + np.abs(za)))
        active[idx[done]] = False
        if not active.any():
            return z
    raise NonConvergence(f"Aberth iteration did not converge ({int(active.sum())} of {n} roots moving)")


def roots(p: MonicPolynomial, max_iter: int = 500) -> list[complex]:
    """All ``n`` roots of ``p`` with multiplicity, by Aberth-Ehrlich iteration.

    Exact zero roots are deflated first. The remaining roots start on a
    perturbed circle around the root centroid.

    Raises
    ------
    DegreeError
        If ``p`` has degree 0.
    NonConvergence
        If some root has not settled after ``max_iter`` sweeps.
    """
    if p.degree < 1:
        raise DegreeError("roots needs degree >= 1")
    c = p.coeffs
    k0 = 0
    while c[k0] == 0:
        k0 += 1
    found = [0j] * k0
    c = c[k0:]
    n = c.size - 1
    if n == 0:
        return found
    if n == 1:
        return found + [complex(-c[0])]

    absc = np.abs(c)
    dc = c[1:] * np.arange(1, n + 1)
    center = -c[n - 1] / n
    radius = max(abs(horner_general(c, center)) ** (1.0 / n), 1e-3 * (1.0 + abs(center)))
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z0 = center + radius * np.exp(1j * angles) * (1.0 + 0.01 * np.arange(n) / n)

    def values(z):
        return (
            horner_general(c, z),
            horner_general(dc, z),
            _EPS * horner_general(absc, np.abs(z)).real,
        )

    z = aberth(z0, values, max_iter)
    return found + [complex(v) for v in z]
