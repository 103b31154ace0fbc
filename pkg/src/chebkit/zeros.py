"""Zero distributions of Chebyshev polynomials and partial sums."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UnsupportedSeries, ValidationError
from .poly_core import MonicPolynomial, roots
from .potential import DiscreteMeasure, green_function
from .sets_weights import (
    IntervalUnion,
    One,
    SetDescriptor,
    WeightDescriptor,
    convex_hull,
    discretize,
    hull_distance,
)

HULL_TOL = 1e-7


@dataclass
class ZeroReport:
    zeros: list[complex]
    counting_measure: DiscreteMeasure = field(repr=False)
    hull_violations: list[tuple[complex, float]]
    arcsine_KS: float | None
    exterior_green_mass: float


def arcsine_ks(x: Sequence[float]) -> float:
    """Kolmogorov distance between the empirical CDF of ``x`` and the arcsine law on [-1, 1].

    The sup is attained at a sample, so it is evaluated exactly from the
    sorted sample.
    """
    xs = np.sort(np.clip(np.asarray(x, dtype=float), -1.0, 1.0))
    n = xs.size
    F = 1.0 - np.arccos(xs) / math.pi
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def uniform_angle_ks(z: Sequence[complex]) -> float:
    """Kolmogorov distance of ``arg z`` in ``[0, 2 pi)`` from the uniform law."""
    t = np.sort(np.mod(np.angle(np.asarray(z, dtype=complex)), 2 * math.pi))
    n = t.size
    F = t / (2 * math.pi)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def _is_unit_interval(s: SetDescriptor) -> bool:
    return isinstance(s, IntervalUnion) and s.intervals == ((-1.0, 1.0),)


def support_hull(s: SetDescriptor, w: WeightDescriptor | None = None, m: int = 2048) -> list[complex]:
    """Convex hull of the grid points of ``s`` where ``w`` is positive."""
    g = discretize(s, m).with_weight(One() if w is None else w)
    return convex_hull(g.points[g.weights > 0])


def solution_zeros(solution) -> list[complex]:
    """Zeros of a real or complex solution, from its stable representation."""
    stable = getattr(solution, "stable", None)
    if stable is not None:
        return list(stable.roots())
    return list(roots(solution.poly))


def zero_report(solution, s: SetDescriptor, w: WeightDescriptor | None = None, green_degree: int = 32) -> ZeroReport:
    """Zeros with hull containment, arcsine distance and exterior Green mass.

    ``solution`` is anything with a ``poly`` attribute (and optionally
    ``stable``), or a bare :class:`MonicPolynomial`.
    """
    if isinstance(solution, MonicPolynomial):
        z = list(roots(solution))
    else:
        z = solution_zeros(solution)
    if not z:
        raise ValidationError("polynomial has no zeros")
    hull = support_hull(s, w)
    violations = []
    for zk in z:
        dist = hull_distance(zk, hull)
        if dist > HULL_TOL:
            violations.append((zk, dist))
    za = np.array(z, dtype=complex)
    ks = arcsine_ks(za.real) if _is_unit_interval(s) else None
    g = np.asarray(green_function(s, za, n=green_degree), dtype=float)
    return ZeroReport(z, DiscreteMeasure.uniform(za), violations, ks, float(g.mean()))


def potential_compare(nu: DiscreteMeasure, mu: DiscreteMeasure, testpoints) -> float:
    """Max over ``testpoints`` of the difference of the two log-potentials."""
    z = np.atleast_1d(np.asarray(testpoints, dtype=complex))
    return float(np.max(np.abs(nu.log_potential(z) - mu.log_potential(z))))


@dataclass
class JentzschSummary:
    zeros: list[complex]
    radius: float
    delta: float
    annulus_fraction: float
    angular_KS: float


def jentzsch_demo(series_coeffs: Sequence[complex], n: int, r: float, delta: float = 0.15) -> JentzschSummary:
    """Zeros of the degree-``n`` partial sum of a power series with radius ``r``.

    Raises
    ------
    UnsupportedSeries
        If ``r`` is not finite and positive.
    """
    if not (0.0 < r < math.inf):
        raise UnsupportedSeries("partial-sum zero theorem needs a finite positive radius")
    a = np.asarray(series_coeffs, dtype=complex)
    if a.size < n + 1:
        raise ValidationError(f"need {n + 1} coefficients, got {a.size}")
    if a[n] == 0:
        raise ValidationError("leading coefficient of the partial sum vanishes")
    p = MonicPolynomial.from_coeffs(a[: n + 1] / a[n])
    z = roots(p)
    mod = np.abs(np.asarray(z))
    inside = (mod >= r * (1 - delta)) & (mod <= r * (1 + delta))
    return JentzschSummary(list(z), r, delta, float(np.mean(inside)), uniform_angle_ks(z))
