"""Closed-form Chebyshev polynomials and norms used as exact oracles.

Covers the interval, the Jacobi kinds two to four, Markov pole weights,
the symmetric two-interval norms, polynomial preimages, Bernstein's
asymptotic norm and the circular-arc Widom limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .errors import BranchError, DegreeError, IntegralDiverged, ValidationError
from .joukowski import exterior_map
from .poly_core import MonicPolynomial, compose
from .sets_weights import Jacobi, MarkovPoles, One, PowerZeros, WeightDescriptor, weight_values


@dataclass(frozen=True)
class ClosedFormResult:
    """Polynomial with its norm; ``exactness`` is ``"exact"`` or ``"asymptotic"``."""

    poly: MonicPolynomial
    norm: float
    exactness: str = "exact"
    degree: int | None = None

    def __post_init__(self) -> None:
        if not self.norm > 0:
            raise ValidationError("closed-form norm must be positive")
        if self.degree is None:
            object.__setattr__(self, "degree", self.poly.degree)


def _monic_recurrence(n: int, first: list[float]) -> np.ndarray:
    """``p_{k+1} = x p_k - p_{k-1}/4`` started from ``p_0 = 1`` and ``p_1 = first``."""
    prev = np.array([1.0])
    if n == 0:
        return prev
    cur = np.array(first, dtype=float)
    for _ in range(1, n):
        nxt = np.concatenate(([0.0], cur))
        nxt[: prev.size] -= 0.25 * prev
        prev, cur = cur, nxt
    return cur


def interval_cheb(n: int) -> ClosedFormResult:
    """Monic Chebyshev polynomial of ``[-1, 1]``, norm ``2^{1-n}``."""
    if n < 1:
        raise DegreeError("interval_cheb needs n >= 1")
    if n == 1:
        c = np.array([0.0, 1.0])
    else:
        # T_2 = x^2 - 1/2 breaks the one-quarter pattern once
        prev, cur = np.array([0.0, 1.0]), np.array([-0.5, 0.0, 1.0])
        for _ in range(2, n):
            nxt = np.concatenate(([0.0], cur))
            nxt[: prev.size] -= 0.25 * prev
            prev, cur = cur, nxt
        c = cur
    return ClosedFormResult(MonicPolynomial(tuple(c[:-1])), 2.0 ** (1 - n))


JACOBI_KINDS = {
    "second": (Jacobi(0.5, 0.5), [0.0, 1.0]),
    "third": (Jacobi(0.0, 0.5), [-0.5, 1.0]),
    "fourth": (Jacobi(0.5, 0.0), [0.5, 1.0]),
}


def jacobi_kind_cheb(kind: str, n: int) -> ClosedFormResult:
    """Weighted Chebyshev polynomials for the Jacobi weights of kinds two to four.

    Kind two is ``sin((n+1)t)/sin t`` with weight ``sqrt(1 - x^2)``; kinds
    three and four are ``cos((n+1/2)t)/cos(t/2)`` with ``sqrt(1 + x)`` and
    ``sin((n+1/2)t)/sin(t/2)`` with ``sqrt(1 - x)``, all scaled by ``2^{-n}``.
    The weighted sup is ``2^{-n}`` for kind two and ``sqrt(2) 2^{-n}`` for
    kinds three and four, since ``sqrt(1 + cos t) = sqrt(2) cos(t/2)``.
    """
    if kind not in JACOBI_KINDS:
        raise ValidationError(f"unknown Jacobi kind {kind!r}")
    if n < 1:
        raise DegreeError("jacobi_kind_cheb needs n >= 1")
    _, first = JACOBI_KINDS[kind]
    c = _monic_recurrence(n, first)
    norm = 2.0**-n if kind == "second" else math.sqrt(2.0) * 2.0**-n
    return ClosedFormResult(MonicPolynomial(tuple(c[:-1])), norm)


def jacobi_kind_weighted(kind: str, n: int, theta) -> np.ndarray:
    """Trigonometric form of ``w T_n`` at ``x = cos(theta)``."""
    t = np.asarray(theta, dtype=float)
    if kind == "second":
        return 2.0**-n * np.sin((n + 1) * t)
    if kind == "third":
        return math.sqrt(2.0) * 2.0**-n * np.cos((n + 0.5) * t)
    if kind == "fourth":
        return math.sqrt(2.0) * 2.0**-n * np.sin((n + 0.5) * t)
    raise ValidationError(f"unknown Jacobi kind {kind!r}")


def markov_rho(pole: complex) -> complex:
    """Root ``rho`` of ``pole = (rho + 1/rho)/2`` inside the unit disk.

    Raises
    ------
    BranchError
        If both roots lie on the unit circle (pole on ``[-1, 1]``).
    """
    a = complex(pole)
    if not np.isfinite(a):
        return 0j
    s = np.sqrt(a * a - 1.0)
    r1, r2 = a - s, a + s
    rho = r1 if abs(r1) <= abs(r2) else r2
    if abs(abs(rho) - 1.0) <= 1e-12:
        raise BranchError(f"pole {a} gives |rho| = 1")
    return complex(rho)


def markov_norm(n: int, poles: MarkovPoles) -> float:
    rhos = [markov_rho(a) for a in poles.poles]
    prod = np.prod([abs(1.0 + r * r) for r in rhos])
    return 2.0 ** (1 - n) * math.sqrt(prod)


def markov_values(n: int, poles: MarkovPoles, x) -> np.ndarray:
    """Markov's polynomial ``T_n`` at real ``x`` in ``[-1, 1]``.

    Uses ``T_n = 2^{-n} [z^{-n} prod(1 - z rho_k) + z^{n-2m} prod(z - rho_k)]``
    with ``x = (z + 1/z)/2`` on the unit circle; the bracket is symmetric under
    ``z -> 1/z``, so no square-root branch enters.
    """
    rhos = [markov_rho(a) for a in poles.poles]
    m = poles.m
    z = np.exp(1j * np.arccos(np.clip(np.asarray(x, dtype=float), -1.0, 1.0)))
    a = np.ones_like(z)
    b = np.ones_like(z)
    for r in rhos:
        a = a * (1.0 - z * r)
        b = b * (z - r)
    return (2.0**-n * (z ** (-n) * a + z ** (n - 2 * m) * b)).real


def markov_weighted_values(n: int, poles: MarkovPoles, x) -> np.ndarray:
    """The weighted error curve ``w T_n`` at real ``x`` in ``[-1, 1]``.

    On ``z = e^{i theta}`` the two terms of the square-root form are unit
    conjugates, so ``w T_n = 2^{1-n} prod |1 + rho_k^2|^{1/2} cos(phi)`` with
    ``phi = -n theta + sum_k [arg(1 - z rho_k) - arg(1 - rho_k / z)] / 2``;
    both arguments stay in the right half plane, so principal values give
    the continuous branch.
    """
    rhos = [markov_rho(a) for a in poles.poles]
    theta = np.arccos(np.clip(np.asarray(x, dtype=float), -1.0, 1.0))
    z = np.exp(1j * theta)
    phi = -n * theta
    for r in rhos:
        phi = phi + 0.5 * (np.angle(1.0 - z * r) - np.angle(1.0 - r / z))
    scale = math.sqrt(float(np.prod([abs(1.0 + r * r) for r in rhos])))
    return 2.0 ** (1 - n) * scale * np.cos(phi)


def markov_cheb(n: int, poles: MarkovPoles) -> ClosedFormResult:
    """Chebyshev polynomial for the Markov weight of ``poles`` at degree ``n > m``."""
    m = poles.m
    if n <= m:
        raise DegreeError(f"Markov closed form needs n > m = {m}")
    nodes = np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1))
    vals = markov_values(n, poles, nodes)
    cheb = npcheb.chebfit(nodes, vals, n)
    power = npcheb.cheb2poly(cheb)
    power = power / power[-1]
    return ClosedFormResult(MonicPolynomial(tuple(power[:-1])), markov_norm(n, poles))


def achieser_norms(a: float, n: int) -> tuple[float, float]:
    """Norms for ``[-1, -a] U [a, 1]`` at degrees ``2n`` (exact) and ``2n+1`` (asymptotic)."""
    if not 0.0 < a < 1.0:
        raise ValidationError("gap parameter must lie in (0, 1)")
    if n < 1:
        raise DegreeError("achieser_norms needs n >= 1")
    even = 2.0 ** (1 - 2 * n) * (1 - a * a) ** n
    odd = 2.0 ** (-2 * n) * (1 - a * a) ** (n + 0.5) * math.sqrt((1 + a) / (1 - a))
    return even, odd


def preimage_cheb(P: MonicPolynomial, base_solution) -> ClosedFormResult:
    """``T_n o P`` on ``P^{-1}(E)`` from the base solution ``T_n`` on ``E``."""
    poly = compose(base_solution.poly, P)
    return ClosedFormResult(poly, base_solution.norm)


def _log_integral_closed(w: WeightDescriptor) -> float | None:
    if isinstance(w, One):
        return 0.0
    if isinstance(w, Jacobi):
        return -(w.alpha + w.beta) * math.log(2.0)
    if isinstance(w, PowerZeros):
        base = _log_integral_closed(w.base)
        if base is None:
            base = _log_integral_quadrature(w.base)
        total = base
        for b, alpha in w.factors:
            total += alpha * math.log(abs(exterior_map(complex(b))) / 2.0)
        return total
    return None


def _log_integral_quadrature(w: WeightDescriptor) -> float:
    prev = None
    N = 64
    while N <= 2**17:
        x = np.cos(np.pi * (np.arange(N) + 0.5) / N)
        with np.errstate(divide="ignore"):
            val = float(np.mean(np.log(weight_values(w, x))))
        if not np.isfinite(val):
            break
        if prev is not None and abs(val - prev) <= 1e-9 * max(1.0, abs(val)):
            return val
        prev = val
        N *= 2
    raise IntegralDiverged("log-weight integral failed the doubling test")


def log_weight_integral(w: WeightDescriptor) -> float:
    """``(1/pi) int log w(x) / sqrt(1 - x^2) dx`` over ``[-1, 1]``."""
    closed = _log_integral_closed(w)
    return closed if closed is not None else _log_integral_quadrature(w)


def bernstein_rhs(w: WeightDescriptor, n: int) -> float:
    """Bernstein's asymptotic weighted norm ``2^{1-n} exp(log-integral of w)``."""
    return 2.0 ** (1 - n) * math.exp(log_weight_integral(w))


def thiran_detaille_limit(alpha: float) -> float:
    """Limit ``2 cos^2(alpha/4)`` of the Widom factors of a circular arc."""
    if not 0.0 < alpha <= math.pi:
        raise ValidationError("half-angle must lie in (0, pi]")
    return 2.0 * math.cos(alpha / 4.0) ** 2


def closed_form_capacity(s) -> float | None:
    """Logarithmic capacity when a closed form applies, else ``None``.

    Single intervals give a quarter of their length, circles their radius,
    arcs ``radius sin(half_angle/2)``, lemniscates their level, and a
    preimage under a monic degree-``m`` polynomial the ``m``-th root of the
    base capacity.
    """
    from .sets_weights import Circle, CircularArc, IntervalUnion, Lemniscate, Preimage

    if isinstance(s, IntervalUnion):
        if len(s.intervals) == 1:
            l, r = s.intervals[0]
            return (r - l) / 4.0
        return None
    if isinstance(s, Circle):
        return s.radius
    if isinstance(s, CircularArc):
        return s.radius * math.sin(s.half_angle / 2.0)
    if isinstance(s, Lemniscate):
        return s.level
    if isinstance(s, Preimage):
        base = closed_form_capacity(s.base)
        return None if base is None else base ** (1.0 / s.poly.degree)
    return None
