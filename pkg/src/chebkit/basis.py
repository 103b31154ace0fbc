"""Discretely orthonormal polynomial bases built by Arnoldi iteration.

Both solvers represent their iterates in a basis ``q_0, ..., q_n`` that is
orthonormal over the working grid (Vandermonde with Arnoldi). Evaluation off
the grid replays the Hessenberg recurrence, which stays well conditioned on
the set even when the power basis does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LSQFailure
from .poly_core import MonicPolynomial, aberth, roots

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class AffineFrame:
    """Local coordinate ``zeta = (z - center) / scale``."""

    center: complex
    scale: float

    @classmethod
    def fit(cls, points: np.ndarray) -> "AffineFrame":
        """Frame mapping the bounding box of ``points`` to diameter 2 around 0."""
        pts = np.asarray(points, dtype=complex)
        lo_re, hi_re = pts.real.min(), pts.real.max()
        lo_im, hi_im = pts.imag.min(), pts.imag.max()
        center = complex(0.5 * (lo_re + hi_re), 0.5 * (lo_im + hi_im))
        scale = 0.5 * float(np.hypot(hi_re - lo_re, hi_im - lo_im))
        if scale == 0.0:
            scale = 1.0
        if center.imag == 0.0:
            center = complex(center.real)
        return cls(center, scale)

    def to_local(self, z):
        if self.center.imag == 0.0 and np.isrealobj(z):
            return (np.asarray(z, dtype=float) - self.center.real) / self.scale
        return (np.asarray(z, dtype=complex) - self.center) / self.scale


class ArnoldiBasis:
    """Orthonormal basis of polynomials of degree ``<= n`` on a point set.

    Parameters
    ----------
    points : ndarray
        Points in local coordinates. A real array keeps all arithmetic real.
    n : int
        Highest degree.
    """

    def __init__(self, points: np.ndarray, n: int) -> None:
        z = np.asarray(points)
        if not np.isrealobj(z):
            z = z.astype(complex)
        N = z.size
        if N < n + 1:
            raise LSQFailure(f"{N} points cannot carry a degree-{n} basis")
        dtype = z.dtype
        Q = np.zeros((N, n + 1), dtype=dtype)
        H = np.zeros((n + 1, n), dtype=dtype)
        Q[:, 0] = 1.0
        for k in range(n):
            v = z * Q[:, k]
            for _ in range(2):
                h = Q[:, : k + 1].conj().T @ v / N
                v = v - Q[:, : k + 1] @ h
                H[: k + 1, k] += h
            nrm = np.linalg.norm(v) / np.sqrt(N)
            if not nrm > 1e-14 * (1.0 + abs(H[k, k])):
                raise LSQFailure(f"point set supports only degree {k} polynomials")
            H[k + 1, k] = nrm
            Q[:, k + 1] = v / nrm
        self.points = z
        self.n = n
        self.Q = Q
        self.H = H

    @property
    def is_real(self) -> bool:
        return np.isrealobj(self.Q)

    def lead(self, k: int | None = None) -> float:
        """Power-basis leading coefficient ratio: ``zeta^k = lead(k) q_k + ...``."""
        k = self.n if k is None else k
        return float(np.prod(np.real(np.diag(self.H, -1)[:k])))

    def evaluate(self, y, with_derivative: bool = False):
        """Basis matrix ``[q_0(y), ..., q_n(y)]`` (and its derivative)."""
        y = np.asarray(y)
        if not (self.is_real and np.isrealobj(y)):
            y = y.astype(complex)
        dtype = np.result_type(y, self.H)
        W = np.zeros((y.size, self.n + 1), dtype=dtype)
        W[:, 0] = 1.0
        D = np.zeros_like(W) if with_derivative else None
        H = self.H
        for k in range(self.n):
            W[:, k + 1] = (y * W[:, k] - W[:, : k + 1] @ H[: k + 1, k]) / H[k + 1, k]
            if D is not None:
                D[:, k + 1] = (W[:, k] + y * D[:, k] - D[:, : k + 1] @ H[: k + 1, k]) / H[k + 1, k]
        if with_derivative:
            return W, D
        return W

    def power_matrix(self) -> np.ndarray:
        """Column ``k`` holds the power coefficients (low first) of ``q_k``."""
        n = self.n
        P = np.zeros((n + 1, n + 1), dtype=self.H.dtype)
        P[0, 0] = 1.0
        for k in range(n):
            shifted = np.zeros(n + 1, dtype=P.dtype)
            shifted[1:] = P[:-1, k]
            P[:, k + 1] = (shifted - P[:, : k + 1] @ self.H[: k + 1, k]) / self.H[k + 1, k]
        return P


@dataclass
class StablePolynomial:
    """Monic polynomial held as a combination of an Arnoldi basis.

    ``T(z) = scale^n * sum_k coeffs[k] q_k((z - center)/scale)``, where the
    combination is monic in the local variable.
    """

    basis: ArnoldiBasis
    coeffs: np.ndarray
    frame: AffineFrame

    @property
    def degree(self) -> int:
        return self.basis.n

    def __call__(self, z):
        y = self.frame.to_local(np.atleast_1d(z))
        vals = self.basis.evaluate(y) @ self.coeffs * self.frame.scale**self.degree
        return vals if np.ndim(z) else vals[0]

    def values_and_derivative(self, z):
        y = self.frame.to_local(np.atleast_1d(z))
        W, D = self.basis.evaluate(y, with_derivative=True)
        s = self.frame.scale
        n = self.degree
        vals = W @ self.coeffs * s**n
        ders = D @ self.coeffs * s ** (n - 1)
        # evaluation rounding plus the backward error of the coefficients themselves
        noise = 4.0 * (n + 1) * _EPS * (np.abs(W) @ np.abs(self.coeffs) + np.sum(np.abs(self.coeffs))) * s**n
        return vals, ders, noise

    def to_monic(self) -> MonicPolynomial:
        """Power-basis coefficients in the original variable."""
        local = self.basis.power_matrix() @ self.coeffs
        local = local / local[-1]
        s, c = self.frame.scale, self.frame.center
        n = self.degree
        # substitute zeta = (z - c)/s by Horner in polynomial arithmetic, then scale by s^n
        inner = np.array([-c / s, 1.0 / s], dtype=complex)
        acc = np.array([local[-1]], dtype=complex)
        for a in local[-2::-1]:
            acc = np.convolve(acc, inner)
            acc[0] += a
        acc = acc * s**n
        if self.basis.is_real and c.imag == 0.0:
            acc = acc.real.astype(complex)
        acc[-1] = 1.0
        return MonicPolynomial(tuple(acc[:-1]))

    def roots(self, start: list[complex] | None = None) -> list[complex]:
        """Roots by Aberth iteration on the stable representation.

        Starts from the power-basis roots, so ill-conditioned power
        coefficients only affect the starting guess.
        """
        if self.degree == 0:
            return []
        z0 = np.array(start if start is not None else roots(self.to_monic()), dtype=complex)
        z = aberth(z0, self.values_and_derivative)
        z = self._merge_clusters(z)
        if self.basis.is_real and self.frame.center.imag == 0.0:
            z = np.where(np.abs(z.imag) <= 1e-14 * (1.0 + np.abs(z.real)), z.real + 0j, z)
        return [complex(v) for v in z]

    def _merge_clusters(self, z: np.ndarray) -> np.ndarray:
        """Replace clusters of a multiple root by their centroid.

        Two roots belong to one cluster when ``T`` is at rounding-noise level
        at the quarter points and the midpoint of the segment joining them;
        the centroid of a cluster is well conditioned even when its members
        are not.
        """
        n = z.size
        if n < 2:
            return z
        i, j = np.triu_indices(n, 1)
        close = np.ones(i.size, dtype=bool)
        # a lone root at the midpoint (e.g. 0 between +-x) must not merge the pair
        for t in (0.25, 0.5, 0.75):
            vals, _, noise = self.values_and_derivative((1 - t) * z[i] + t * z[j])
            close &= np.abs(vals) <= 8.0 * noise
        parent = np.arange(n)

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in zip(i[close], j[close]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        roots_of = np.array([find(a) for a in range(n)])
        out = z.copy()
        for r in np.unique(roots_of):
            members = roots_of == r
            if np.count_nonzero(members) > 1:
                out[members] = z[members].mean()
        return out
