"""Capacities, Green's functions, equilibrium densities and Widom factors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .closed_forms import closed_form_capacity
from .errors import DomainError, EstimateUnstable, QuadratureDiverged, ValidationError
from .joukowski import exterior_map
from .poly_core import MonicPolynomial, evaluate
from .sets_weights import (
    Circle,
    IntervalUnion,
    Lemniscate,
    Preimage,
    SetDescriptor,
    WeightDescriptor,
)

FFS_DEGREES = (8, 16, 32)


@dataclass(frozen=True)
class CapacityResult:
    value: float
    method: str
    degree_used: int | None = None

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise ValidationError("capacity must be positive")
        if self.method not in ("closed_form", "ffs_estimate"):
            raise ValidationError(f"unknown capacity method {self.method!r}")


@dataclass(frozen=True)
class WidomFactor:
    degree: int
    value: float
    set: SetDescriptor
    capacity_method: str = "closed_form"


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=complex).ravel()
        m = np.asarray(self.masses, dtype=float).ravel()
        if pts.shape != m.shape:
            raise ValidationError("measure points and masses differ in length")
        if np.any(m < 0) or abs(m.sum() - 1.0) > 1e-12:
            raise ValidationError("masses must be nonnegative and sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", m)

    @classmethod
    def uniform(cls, points) -> "DiscreteMeasure":
        pts = np.asarray(points, dtype=complex).ravel()
        return cls(pts, np.full(pts.size, 1.0 / pts.size))

    def log_potential(self, z) -> np.ndarray:
        """``sum m_i log(1/|z - p_i|)`` at each ``z``."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        return -(np.log(np.abs(zz[:, None] - self.points[None, :])) @ self.masses)


# ---------------------------------------------------------------- capacity


def _solver_norm(s: SetDescriptor, n: int, w: WeightDescriptor | None = None) -> float:
    if isinstance(s, IntervalUnion):
        from .remez import solve_real

        return solve_real(s, w, n).norm
    from .complex_solver import solve_complex

    return solve_complex(s, w, n).upper_norm


def ffs_estimate(s: SetDescriptor, degrees: Sequence[int] = FFS_DEGREES) -> CapacityResult:
    """Capacity from the growth ``t_n ~ W Cap^n`` of Chebyshev norms.

    Fits ``log t_n = n log c + log W`` on consecutive degree pairs and returns
    the estimate from the two largest degrees.

    Raises
    ------
    EstimateUnstable
        If the last two pairwise estimates differ by more than 2 %.
    """
    ns = sorted(degrees)
    if len(ns) < 3:
        raise ValidationError("ffs_estimate needs at least three degrees")
    logs = [math.log(_solver_norm(s, n)) for n in ns]
    est = [math.exp((logs[k + 1] - logs[k]) / (ns[k + 1] - ns[k])) for k in range(len(ns) - 1)]
    prev, last = est[-2], est[-1]
    if abs(prev - last) > 0.02 * last:
        raise EstimateUnstable(f"capacity estimates {prev:.6g} and {last:.6g} disagree")
    return CapacityResult(last, "ffs_estimate", ns[-1])


def capacity(s: SetDescriptor) -> CapacityResult:
    """Logarithmic capacity, closed form when available, else estimated."""
    value = closed_form_capacity(s)
    if value is not None:
        return CapacityResult(float(value), "closed_form")
    return ffs_estimate(s)


def widom_factor(s: SetDescriptor, n: int, t_n: float, cap: CapacityResult | None = None) -> WidomFactor:
    """``W_n = t_n / Cap^n``."""
    cap = capacity(s) if cap is None else cap
    return WidomFactor(n, float(t_n / cap.value**n), s, cap.method)


# ----------------------------------------------------------- interval forms


def green_interval(z):
    """Green's function of ``[-1, 1]`` with pole at infinity."""
    g = np.log(np.abs(exterior_map(z)))
    g = np.maximum(g, 0.0)
    return g if np.ndim(z) else float(g)


def log_potential_interval(z, mode: str = "closed", nodes: int = 4096):
    """Logarithmic potential ``int log|z - x| d mu(x)`` of the arcsine measure.

    ``mode="closed"`` returns ``log(|z + sqrt(z^2 - 1)| / 2)``; ``mode="quadrature"``
    evaluates the integral by Gauss-Chebyshev with ``nodes`` nodes.

    Raises
    ------
    QuadratureDiverged
        In quadrature mode for ``z`` on ``[-1, 1]``.
    """
    if mode == "closed":
        v = green_interval(z) - math.log(2.0)
        return v
    if mode != "quadrature":
        raise ValidationError(f"unknown mode {mode!r}")
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    on = (np.abs(zz.imag) <= 1e-14) & (np.abs(zz.real) <= 1.0)
    if np.any(on):
        raise QuadratureDiverged("log singularity on [-1, 1]; quadrature needs splitting")
    x = np.cos(np.pi * (np.arange(nodes) + 0.5) / nodes)
    v = np.log(np.abs(zz[:, None] - x[None, :])).mean(axis=1)
    return v if np.ndim(z) else float(v[0])


# ------------------------------------------------------ alternating preimages


def _as_polynomial(P) -> Polynomial:
    if isinstance(P, MonicPolynomial):
        c = np.asarray(P.coeffs)
        if np.any(c.imag != 0):
            raise ValidationError("polynomial must be real")
        return Polynomial(c.real)
    if isinstance(P, Polynomial):
        return P
    return Polynomial(np.asarray(P, dtype=float))


def _alternation_check(p: Polynomial) -> np.ndarray:
    n = p.degree()
    if n < 1:
        raise ValidationError("polynomial degree must be at least 1")
    if n == 1:
        return np.zeros(0)
    crit = p.deriv().roots()
    if np.any(np.abs(crit.imag) > 1e-8 * (1 + np.abs(crit.real))):
        raise DomainError("polynomial lacks n - 1 real critical points")
    crit = np.sort(crit.real)
    vals = p(crit)
    if crit.size != n - 1 or np.any(np.abs(vals) < 1.0 - 1e-9) or np.any(vals[1:] * vals[:-1] >= 0):
        raise DomainError("polynomial does not alternate between +1 and -1")
    return crit


def equilibrium_density_preimage(P, x):
    """Density ``|P'(x)| / (n pi sqrt(1 - P(x)^2))`` of the equilibrium measure of
    ``P^{-1}([-1, 1])`` at real ``x``.

    Raises
    ------
    DomainError
        If ``|P(x)| >= 1`` or ``P`` fails to alternate.
    """
    p = _as_polynomial(P)
    _alternation_check(p)
    xx = np.asarray(x, dtype=float)
    v = p(xx)
    if np.any(np.abs(v) >= 1.0):
        raise DomainError("density needs |P(x)| < 1")
    d = np.abs(p.deriv()(xx)) / (p.degree() * math.pi * np.sqrt(1.0 - v * v))
    return d if np.ndim(x) else float(d)


def band_edges(P) -> list[tuple[float, float]]:
    """Bands of ``P^{-1}([-1, 1])``, one per monotone piece of ``P``.

    Edges are bracketed between consecutive critical points, so touching
    bands (double roots of ``P^2 - 1``) are resolved at the critical point.
    """
    p = _as_polynomial(P)
    n = p.degree()
    crit = _alternation_check(p)
    # outer brackets from the Cauchy bound of P -+ 1
    c = p.coef
    R = 1.0 + np.max(np.abs(c[:-1]) + np.r_[1.0, np.zeros(n - 1)]) / abs(c[-1])
    knots = np.concatenate(([-R], crit, [R]))
    bands = []
    for a, b in zip(knots[:-1], knots[1:]):
        ends = []
        for s in (1.0, -1.0):
            f = lambda t, s=s: p(t) - s
            fa, fb = f(a), f(b)
            if fa == 0.0:
                ends.append(a)
            elif fb == 0.0:
                ends.append(b)
            elif fa * fb < 0:
                ends.append(brentq(f, a, b, xtol=1e-15, rtol=1e-15, maxiter=200))
            else:
                # |P| touches 1 at the critical point closest to the level
                ends.append(a if abs(fa) <= abs(fb) else b)
        bands.append((min(ends), max(ends)))
    return bands


def band_masses(P) -> list[float]:
    """Equilibrium mass of each band of an alternating polynomial.

    On a band ``P`` is monotone; with ``t = P(x) = cos(phi)`` the mass integral
    becomes ``|phi(b) - phi(a)| / (n pi)``.
    """
    p = _as_polynomial(P)
    n = p.degree()
    out = []
    for a, b in band_edges(p):
        ends = p(np.array([a, b]))
        # arccos is ill-conditioned at +-1, so edges on a level read as the level
        ends = np.where(np.abs(np.abs(ends) - 1.0) <= 1e-9, np.sign(ends), np.clip(ends, -1.0, 1.0))
        out.append(float(abs(math.acos(ends[1]) - math.acos(ends[0])) / (n * math.pi)))
    return out


# ----------------------------------------------------------- Green's function


def _real_green_estimator(s: IntervalUnion, n: int):
    """``G(z) ~ (1/n) G_{[-1,1]}(T_n(z) / t_n)`` from the real Chebyshev polynomial.

    Exact when ``s`` equals ``T_n^{-1}([-t_n, t_n])``; an underestimate inside
    gaps otherwise.
    """
    from .remez import solve_real

    sol = solve_real(s, None, n)
    t = sol.norm

    def g(z):
        return green_interval(np.asarray(sol(z)) / t) / n

    return g


def _complex_green_estimator(s: SetDescriptor, n: int):
    from .complex_solver import solve_complex

    sol = solve_complex(s, None, n)
    cap = capacity(s).value
    log_cap_n = n * math.log(cap)

    def g(z):
        with np.errstate(divide="ignore"):
            v = (np.log(np.abs(sol(z))) - log_cap_n) / n
        return np.maximum(v, 0.0)

    return g


def green_function(s: SetDescriptor, z, n: int = 32):
    """Green's function of ``s`` with pole at infinity.

    Closed forms cover single intervals, circles, lemniscates and preimages of
    those; other sets use Chebyshev asymptotics at degree ``n``.
    """
    zz = np.asarray(z, dtype=complex)
    g = _green_closed(s, zz)
    if g is None:
        est = _real_green_estimator(s, n) if isinstance(s, IntervalUnion) else _complex_green_estimator(s, n)
        g = est(zz)
    g = np.asarray(g, dtype=float)
    return g if np.ndim(z) else float(g)


def _green_closed(s: SetDescriptor, z: np.ndarray):
    if isinstance(s, IntervalUnion) and len(s.intervals) == 1:
        l, r = s.intervals[0]
        if r == l:
            return None
        return green_interval((2.0 * z - (l + r)) / (r - l))
    if isinstance(s, Circle):
        return np.maximum(np.log(np.abs(z - s.center) / s.radius), 0.0)
    if isinstance(s, Lemniscate):
        m = s.poly.degree
        return np.maximum(np.log(np.abs(evaluate(s.poly, z))) / m - math.log(s.level), 0.0)
    if isinstance(s, Preimage):
        inner = _green_closed(s.base, np.asarray(evaluate(s.poly, z), dtype=complex))
        return None if inner is None else inner / s.poly.degree
    return None


# --------------------------------------------------------- Parreau-Widom bound


def _golden_max(f, a: float, b: float, steps: int = 80) -> float:
    inv = 0.6180339887498949
    x1, x2 = b - inv * (b - a), a + inv * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(steps):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv * (b - a)
            f2 = f(x2)
    return max(f1, f2)


def gap_maxima(s: IntervalUnion, n: int, samples: int = 64) -> list[float]:
    """Maximum of the degree-``n`` Green estimate in each bounded gap."""
    g = _real_green_estimator(s, n)
    out = []
    for a, b in s.gaps:
        t = np.linspace(a, b, samples + 2)[1:-1]
        vals = g(t)
        k = int(np.argmax(vals))
        lo, hi = (t[k - 1] if k > 0 else a), (t[k + 1] if k < t.size - 1 else b)
        out.append(max(float(vals[k]), _golden_max(lambda x: float(g(x)), lo, hi)))
    return out


def pw_bound_real(s: IntervalUnion, degrees: tuple[int, int] = (24, 32)) -> float:
    """Upper bound ``2 exp(sum of gap maxima of G)`` for Widom factors of ``s``.

    Raises
    ------
    EstimateUnstable
        If the gap sums at the two degrees differ by more than 2 %.
    """
    if not isinstance(s, IntervalUnion):
        raise ValidationError("pw_bound_real needs an IntervalUnion")
    if not s.gaps:
        return 2.0
    lo, hi = (sum(gap_maxima(s, n)) for n in degrees)
    if abs(lo - hi) > 0.02 * max(abs(hi), 1e-300):
        raise EstimateUnstable(f"gap sums {lo:.6g} and {hi:.6g} disagree")
    return 2.0 * math.exp(hi)
