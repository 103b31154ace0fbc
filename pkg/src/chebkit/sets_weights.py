"""Compact sets, weights, their working grids, and small geometric helpers.

Sets and weights are immutable descriptors. ``parse_set`` and
``parse_weight`` read the JSON descriptor format used by the command line:

* sets: ``interval_union``, ``circle``, ``arc``, ``lemniscate``,
  ``preimage``, ``curve_samples``;
* weights: ``one``, ``jacobi``, ``markov``, ``power_zeros``, ``samples``.

Complex numbers are ``[re, im]`` pairs and polynomials are lists of low-order
coefficients with the leading one implied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DomainError, ParseError, TraceError, ValidationError
from .poly_core import MonicPolynomial, affine_transform, evaluate, roots

# ---------------------------------------------------------------- sets


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint closed real intervals, in increasing order."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        ivs = tuple((float(l), float(r)) for l, r in self.intervals)
        if not ivs:
            raise ValidationError("interval union needs at least one interval")
        for l, r in ivs:
            if not (math.isfinite(l) and math.isfinite(r)) or l > r:
                raise ValidationError(f"bad interval [{l}, {r}]")
        for (_, r0), (l1, _) in zip(ivs, ivs[1:]):
            if not r0 < l1:
                raise ValidationError("intervals must be strictly ordered and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @property
    def bounds(self) -> tuple[float, float]:
        return self.intervals[0][0], self.intervals[-1][1]

    def contains(self, x: np.ndarray, tol: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.zeros(x.shape, dtype=bool)
        for l, r in self.intervals:
            inside |= (x >= l - tol) & (x <= r + tol)
        return inside

    @property
    def gaps(self) -> list[tuple[float, float]]:
        return [(r0, l1) for (_, r0), (l1, _) in zip(self.intervals, self.intervals[1:])]


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", complex(self.center))
        if not float(self.radius) > 0:
            raise ValidationError("circle radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class CircularArc:
    """Arc ``{center + radius e^{it} : |t| <= half_angle}``."""

    center: complex
    radius: float
    half_angle: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", complex(self.center))
        if not float(self.radius) > 0:
            raise ValidationError("arc radius must be positive")
        if not 0.0 < float(self.half_angle) < math.pi:
            raise ValidationError("arc half-angle must lie in (0, pi)")
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "half_angle", float(self.half_angle))


@dataclass(frozen=True)
class Lemniscate:
    """Level set ``{z : |P(z)| = level^m}`` with ``m = deg P``."""

    poly: MonicPolynomial
    level: float

    def __post_init__(self) -> None:
        if self.poly.degree < 1:
            raise ValidationError("lemniscate generator needs degree >= 1")
        if not float(self.level) > 0:
            raise ValidationError("lemniscate level must be positive")
        object.__setattr__(self, "level", float(self.level))


@dataclass(frozen=True)
class Preimage:
    """Polynomial preimage ``P^{-1}(base)``."""

    poly: MonicPolynomial
    base: "SetDescriptor"

    def __post_init__(self) -> None:
        if self.poly.degree < 1:
            raise ValidationError("preimage polynomial needs degree >= 1")
        if nesting_depth(self) > 3:
            raise ValidationError("preimage nesting depth exceeds 3")


@dataclass(frozen=True)
class SampledCurve:
    points: tuple[complex, ...]
    closed: bool = True

    def __post_init__(self) -> None:
        pts = tuple(complex(p) for p in self.points)
        if len(pts) < 16:
            raise ValidationError("sampled curves need at least 16 points")
        if any(a == b for a, b in zip(pts, pts[1:])):
            raise ValidationError("sampled curve repeats a consecutive point")
        object.__setattr__(self, "points", pts)


SetDescriptor = Union[IntervalUnion, Circle, CircularArc, Lemniscate, Preimage, SampledCurve]


def nesting_depth(s: SetDescriptor) -> int:
    depth = 0
    while isinstance(s, Preimage):
        depth += 1
        s = s.base
    return depth


def is_real_set(s: SetDescriptor) -> bool:
    return isinstance(s, IntervalUnion)


# ---------------------------------------------------------------- weights


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Jacobi:
    """``(1 - x)^alpha (1 + x)^beta`` on ``[-1, 1]``."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (float(self.alpha) >= 0 and float(self.beta) >= 0):
            raise ValidationError("Jacobi exponents must be nonnegative")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class MarkovPoles:
    """``[prod_k (1 - x/a_k)]^{-1/2}`` on ``[-1, 1]``; ``inf`` is a pole at infinity."""

    poles: tuple[complex, ...]

    def __post_init__(self) -> None:
        poles = tuple(complex(p) for p in self.poles)
        object.__setattr__(self, "poles", poles)
        n_inf = sum(1 for p in poles if not np.isfinite(p))
        finite = [p for p in poles if np.isfinite(p)]
        if len(poles) == 0 or len(poles) % 2:
            raise ValidationError("Markov weights need an even, nonzero pole count")
        if n_inf > 1:
            raise ValidationError("at most one pole may sit at infinity")
        if not finite:
            raise ValidationError("a pole at infinity needs a finite partner")
        remaining = list(finite)
        while remaining:
            p = remaining.pop(0)
            if abs(p.imag) <= 1e-14 * (1 + abs(p)):
                continue
            match = [i for i, q in enumerate(remaining) if abs(q - p.conjugate()) <= 1e-12 * (1 + abs(p))]
            if not match:
                raise ValidationError("Markov poles must be closed under conjugation")
            remaining.pop(match[0])
        for p in finite:
            if abs(p.imag) <= 1e-14 and -1.0 <= p.real <= 1.0:
                raise ValidationError("Markov poles must avoid [-1, 1]")
        x = np.cos(np.pi * (np.arange(1000) + 0.5) / 1000)
        prod = _markov_product(finite, x)
        if not np.all(prod.real > 0) or np.max(np.abs(prod.imag)) > 1e-10 * np.max(np.abs(prod)):
            raise ValidationError("Markov product must be real and positive on [-1, 1]")

    @property
    def finite_poles(self) -> tuple[complex, ...]:
        return tuple(p for p in self.poles if np.isfinite(p))

    @property
    def m(self) -> int:
        return len(self.poles) // 2


@dataclass(frozen=True)
class PowerZeros:
    """``w0(x) prod_k |x - b_k|^{alpha_k}`` with ``1/M <= w0 <= M``."""

    base: "WeightDescriptor"
    factors: tuple[tuple[float, float], ...]
    bound: float = 1.0

    def __post_init__(self) -> None:
        facs = tuple((float(b), float(a)) for b, a in self.factors)
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "bound", float(self.bound))
        if not self.bound >= 1.0:
            raise ValidationError("PowerZeros bound M must be >= 1")
        if not isinstance(self.base, One):
            x = np.cos(np.pi * (np.arange(1000) + 0.5) / 1000)
            vals = weight_values(self.base, x)
            if np.any(vals < 1.0 / self.bound) or np.any(vals > self.bound):
                raise ValidationError("PowerZeros base weight leaves [1/M, M]")


@dataclass(frozen=True)
class Samples:
    """Nonnegative weight values attached to explicit points."""

    points: tuple[complex, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        pts = tuple(complex(p) for p in self.points)
        vals = tuple(float(v) for v in self.values)
        if len(pts) != len(vals) or not pts:
            raise ValidationError("sample points and values must have equal nonzero length")
        if any(not (math.isfinite(v) and v >= 0) for v in vals):
            raise ValidationError("sample weights must be finite and nonnegative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)


WeightDescriptor = Union[One, Jacobi, MarkovPoles, PowerZeros, Samples]


def _markov_product(finite_poles, x: np.ndarray) -> np.ndarray:
    prod = np.ones(np.shape(x), dtype=complex)
    for a in finite_poles:
        prod = prod * (1.0 - x / a)
    return prod


def interval_only(w: WeightDescriptor) -> bool:
    if isinstance(w, (Jacobi, MarkovPoles)):
        return True
    if isinstance(w, PowerZeros):
        return interval_only(w.base)
    return False


def weight_values(w: WeightDescriptor, x) -> np.ndarray:
    """Vectorized weight evaluation; see :func:`weight_eval`."""
    xa = np.atleast_1d(np.asarray(x))
    if isinstance(w, One):
        return np.ones(xa.shape)
    if isinstance(w, Samples):
        pts = np.array(w.points)
        vals = np.array(w.values)
        if np.all(pts.imag == 0) and np.all(np.imag(xa) == 0):
            order = np.argsort(pts.real)
            xr = np.real(xa)
            if np.any(xr < pts.real[order[0]] - 1e-12) or np.any(xr > pts.real[order[-1]] + 1e-12):
                raise DomainError("point outside the sampled weight's range")
            return np.interp(xr, pts.real[order], vals[order])
        d = np.abs(xa.astype(complex)[:, None] - pts[None, :])
        j = np.argmin(d, axis=1)
        if np.any(d[np.arange(xa.size), j] > 1e-9 * (1 + np.abs(xa))):
            raise DomainError("point is not one of the weight samples")
        return vals[j]
    if np.iscomplexobj(xa):
        if np.any(np.abs(xa.imag) > 1e-12):
            raise DomainError("this weight is defined on the real line only")
        xa = xa.real
    xa = xa.astype(float)
    if isinstance(w, PowerZeros):
        out = weight_values(w.base, xa)
        for b, a in w.factors:
            out = out * np.abs(xa - b) ** a
        return out
    if np.any(np.abs(xa) > 1.0 + 1e-12):
        raise DomainError("interval weight evaluated outside [-1, 1]")
    xc = np.clip(xa, -1.0, 1.0)
    if isinstance(w, Jacobi):
        return (1.0 - xc) ** w.alpha * (1.0 + xc) ** w.beta
    if isinstance(w, MarkovPoles):
        return _markov_product(w.finite_poles, xc).real ** -0.5
    raise ValidationError(f"unknown weight {w!r}")


def weight_eval(w: WeightDescriptor, x: complex) -> float:
    """Value of the weight at one point.

    Raises
    ------
    DomainError
        For interval weights evaluated off ``[-1, 1]`` or at non-real points.
    """
    return float(weight_values(w, np.array([x]))[0])


# ---------------------------------------------------------------- grids


@dataclass(frozen=True)
class Grid:
    points: np.ndarray
    weights: np.ndarray
    provenance: str = "uniform"

    def __post_init__(self) -> None:
        if self.points.shape != self.weights.shape:
            raise ValidationError("grid points and weights differ in length")
        if not np.all(np.isfinite(self.weights)):
            raise ValidationError("grid weights must be finite")

    def __len__(self) -> int:
        return self.points.size

    def with_weight(self, w: WeightDescriptor) -> "Grid":
        pts = self.points
        arg = pts.real if np.all(pts.imag == 0) else pts
        return Grid(pts, weight_values(w, arg), self.provenance)


def cheb_extrema(l: float, r: float, k: int) -> np.ndarray:
    """``k`` Chebyshev extrema of ``[l, r]`` in increasing order."""
    if k == 1 or l == r:
        return np.array([0.5 * (l + r)] if k == 1 else np.full(k, l))
    t = -np.cos(np.pi * np.arange(k) / (k - 1))
    x = 0.5 * (l + r) + 0.5 * (r - l) * t
    x[0], x[-1] = l, r
    return x


def interval_counts(s: IntervalUnion, m: int) -> list[int]:
    lengths = np.array([r - l for l, r in s.intervals])
    if len(lengths) == 1:
        return [m if lengths[0] > 0 else 1]
    total = lengths.sum()
    counts = []
    for L in lengths:
        counts.append(1 if L == 0 else max(8, int(round(m * L / total))))
    return counts


def _discretize_points(s: SetDescriptor, m: int) -> np.ndarray:
    if isinstance(s, IntervalUnion):
        parts = [cheb_extrema(l, r, k) for (l, r), k in zip(s.intervals, interval_counts(s, m))]
        return np.concatenate(parts).astype(complex)
    if isinstance(s, Circle):
        return s.center + s.radius * np.exp(2j * np.pi * np.arange(m) / m)
    if isinstance(s, CircularArc):
        t = np.linspace(-s.half_angle, s.half_angle, m)
        return s.center + s.radius * np.exp(1j * t)
    if isinstance(s, Lemniscate):
        return _trace_lemniscate(s, m)
    if isinstance(s, Preimage):
        deg = s.poly.degree
        base = _discretize_points(s.base, max(m // deg, 2))
        return _preimage_points(s.poly, base)
    if isinstance(s, SampledCurve):
        return _densify(np.array(s.points), s.closed, m)
    raise ValidationError(f"unknown set {s!r}")


def discretize(s: SetDescriptor, m: int) -> Grid:
    """Working grid of roughly ``m`` points on ``s`` (unit weights).

    Raises
    ------
    TraceError
        If root tracking for a lemniscate or preimage loses points.
    """
    if m < 1:
        raise ValidationError("grid budget must be positive")
    pts = _discretize_points(s, m)
    return Grid(pts, np.ones(pts.size), "uniform")


def _solve_level(p: MonicPolynomial, value: complex) -> np.ndarray:
    """Roots of ``p(z) = value``."""
    c = p.coeffs.copy()
    c[0] -= value
    if p.degree == 1:
        return np.array([-c[0]])
    if p.degree == 2:
        b, cc = c[1], c[0]
        disc = np.sqrt(complex(b * b - 4 * cc))
        q = -0.5 * (b + (disc if (b.conjugate() * disc).real >= 0 else -disc))
        if q == 0:
            return np.array([0j, 0j])
        return np.array([q, cc / q])
    return np.array(roots(MonicPolynomial(tuple(c[:-1]))))


def _preimage_points(p: MonicPolynomial, base: np.ndarray) -> np.ndarray:
    deg = p.degree
    out = np.empty(base.size * deg, dtype=complex)
    for i, s in enumerate(base):
        z = _solve_level(p, s)
        if z.size != deg:
            raise TraceError("preimage tracing lost roots")
        out[i * deg:(i + 1) * deg] = z
    if p.is_real and np.all(base.imag == 0):
        snap = np.abs(out.imag) <= 1e-13 * (1.0 + np.abs(out.real))
        out[snap] = out[snap].real
    return out


def _trace_lemniscate(s: Lemniscate, m: int) -> np.ndarray:
    deg = s.poly.degree
    target = s.level**deg
    k = max(int(math.ceil(m / deg)), 4)
    theta = 2.0 * np.pi * np.arange(k) / k
    branches = np.empty((k, deg), dtype=complex)
    prev = None
    for j, t in enumerate(theta):
        z = _solve_level(s.poly, target * np.exp(1j * t))
        if z.size != deg:
            raise TraceError("lemniscate tracing lost roots")
        if prev is not None:
            cost = np.abs(prev[:, None] - z[None, :])
            _, col = linear_sum_assignment(cost)
            z = z[col]
        branches[j] = z
        prev = z
    pts = branches.T.reshape(-1)
    resid = np.abs(np.abs(evaluate(s.poly, pts)) - target)
    if np.max(resid) > 1e-10 * target:
        raise TraceError("traced lemniscate points leave the level set")
    return pts


def _densify(pts: np.ndarray, closed: bool, m: int) -> np.ndarray:
    if pts.size >= m:
        return pts
    ends = np.roll(pts, -1) if closed else pts[1:]
    starts = pts if closed else pts[:-1]
    seg = np.abs(ends - starts)
    extra = m - pts.size
    counts = np.floor(extra * seg / seg.sum()).astype(int)
    out = []
    for a, b, c in zip(starts, ends, counts):
        out.append(a + (b - a) * np.arange(c + 1) / (c + 1))
    if not closed:
        out.append(pts[-1:])
    return np.concatenate(out)


def boundary_points(s: SetDescriptor, m: int = 400) -> list[np.ndarray]:
    """Ordered polylines tracing ``s`` for plotting."""
    if isinstance(s, IntervalUnion):
        return [np.array([l, r], dtype=complex) for l, r in s.intervals]
    if isinstance(s, Circle):
        pts = _discretize_points(s, m)
        return [np.append(pts, pts[:1])]
    if isinstance(s, CircularArc):
        return [_discretize_points(s, m)]
    if isinstance(s, Lemniscate):
        deg = s.poly.degree
        k = max(m // deg, 8)
        pts = _trace_lemniscate(s, k * deg).reshape(deg, k)
        return [np.append(row, row[:1]) for row in pts]
    if isinstance(s, SampledCurve):
        pts = np.array(s.points)
        return [np.append(pts, pts[:1]) if s.closed else pts]
    if isinstance(s, Preimage):
        lines = []
        for line in boundary_points(s.base, m):
            fine = np.concatenate([np.linspace(a, b, m // 4) for a, b in zip(line, line[1:])]) if len(line) == 2 else line
            roots_per = np.array([_solve_level(s.poly, v) for v in fine])
            if roots_per.shape[0] > 1:
                for j in range(1, roots_per.shape[0]):
                    cost = np.abs(roots_per[j - 1][:, None] - roots_per[j][None, :])
                    _, col = linear_sum_assignment(cost)
                    roots_per[j] = roots_per[j][col]
            lines.extend(roots_per.T)
        return lines
    raise ValidationError(f"unknown set {s!r}")


# ---------------------------------------------------------------- geometry


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points) -> list[complex]:
    """Counterclockwise hull vertices starting at the rightmost point.

    Collinear input returns its two extreme points in lexicographic order.
    """
    pts = sorted({(complex(p).real, complex(p).imag) for p in points})
    P = [complex(x, y) for x, y in pts]
    if len(P) <= 2:
        return P
    lower: list[complex] = []
    for p in P:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in reversed(P):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) <= 2:
        return [P[0], P[-1]]
    start = max(range(len(hull)), key=lambda i: (hull[i].real, -hull[i].imag))
    return hull[start:] + hull[:start]


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(z - a)
    t = ((z - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))


def hull_distance(z: complex, hull: list[complex]) -> float:
    """Euclidean distance from ``z`` to the polygon ``hull`` (0 inside)."""
    if len(hull) == 1:
        return abs(z - hull[0])
    if len(hull) == 2:
        return _segment_distance(z, hull[0], hull[1])
    edges = list(zip(hull, hull[1:] + hull[:1]))
    if all(_cross(a, b, z) >= 0 for a, b in edges):
        return 0.0
    return min(_segment_distance(z, a, b) for a, b in edges)


def affine_image(s: SetDescriptor, alpha: complex, b: complex) -> SetDescriptor:
    """Descriptor of ``alpha * s + b``, falling back to sampled curves."""
    alpha, b = complex(alpha), complex(b)
    if alpha == 0:
        raise ValidationError("affine factor must be nonzero")
    if isinstance(s, IntervalUnion):
        if alpha.imag != 0 or b.imag != 0:
            raise ValidationError("interval unions need a real affine map")
        a, c = alpha.real, b.real
        ivs = [(a * l + c, a * r + c) for l, r in s.intervals]
        ivs = [(min(u, v), max(u, v)) for u, v in ivs]
        return IntervalUnion(tuple(sorted(ivs)))
    if isinstance(s, Circle):
        return Circle(alpha * s.center + b, abs(alpha) * s.radius)
    if isinstance(s, CircularArc) and alpha.imag == 0 and alpha.real > 0:
        return CircularArc(alpha * s.center + b, alpha.real * s.radius, s.half_angle)
    if isinstance(s, Lemniscate):
        return Lemniscate(affine_transform(s.poly, alpha, b), abs(alpha) * s.level)
    if isinstance(s, Preimage):
        m = s.poly.degree
        scale = alpha**m
        base = s.base
        if isinstance(base, IntervalUnion) and scale.imag != 0:
            base = SampledCurve(tuple(_discretize_points(base, 64)), closed=False)
        return Preimage(affine_transform(s.poly, alpha, b), affine_image(base, scale, 0))
    if isinstance(s, SampledCurve):
        return SampledCurve(tuple(alpha * p + b for p in s.points), s.closed)
    pts = _discretize_points(s, 256)
    return SampledCurve(tuple(alpha * p + b for p in pts), closed=False)


# ---------------------------------------------------------------- documents


def _complex(v: Any) -> complex:
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity"):
            return complex(math.inf, 0)
        raise ParseError(f"cannot read complex number from {v!r}")
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise ParseError(f"cannot read complex number from {v!r}")


def _real(v: Any, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{name} must be a number")
    return float(v)


def _load(doc: Union[str, bytes, dict]) -> dict:
    if isinstance(doc, dict):
        return doc
    try:
        data = json.loads(doc)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed descriptor document: {exc}") from None
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("descriptor must be an object with a 'type' key")
    return data


def _poly(v: Any) -> MonicPolynomial:
    if not isinstance(v, list):
        raise ParseError("polynomial must be a list of low-order coefficients")
    return MonicPolynomial(tuple(_complex(c) for c in v))


def parse_set(doc: Union[str, bytes, dict]) -> SetDescriptor:
    """Read a set descriptor document.

    Raises
    ------
    ParseError
        Malformed document or missing fields.
    ValidationError
        Well-formed document violating a set invariant.
    """
    d = _load(doc)
    try:
        kind = d["type"]
        if kind == "interval_union":
            return IntervalUnion(tuple((_real(a, "endpoint"), _real(b, "endpoint")) for a, b in d["intervals"]))
        if kind == "circle":
            return Circle(_complex(d.get("center", 0)), _real(d["radius"], "radius"))
        if kind == "arc":
            return CircularArc(_complex(d.get("center", 0)), _real(d.get("radius", 1.0), "radius"),
                               _real(d["half_angle"], "half_angle"))
        if kind == "lemniscate":
            return Lemniscate(_poly(d["poly"]), _real(d["level"], "level"))
        if kind == "preimage":
            return Preimage(_poly(d["poly"]), parse_set(d["base"]))
        if kind == "curve_samples":
            return SampledCurve(tuple(_complex(p) for p in d["points"]), bool(d.get("closed", True)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError(f"bad {d.get('type')!r} descriptor: {exc!r}") from None
    raise ParseError(f"unknown set type {d.get('type')!r}")


def parse_weight(doc: Union[str, bytes, dict, None]) -> WeightDescriptor:
    """Read a weight descriptor document (``None`` means the constant one)."""
    if doc is None:
        return One()
    d = _load(doc)
    try:
        kind = d["type"]
        if kind == "one":
            return One()
        if kind == "jacobi":
            return Jacobi(_real(d["alpha"], "alpha"), _real(d["beta"], "beta"))
        if kind == "markov":
            return MarkovPoles(tuple(_complex(p) for p in d["poles"]))
        if kind == "power_zeros":
            base = parse_weight(d.get("base", {"type": "one"}))
            facs = tuple((_real(b, "zero"), _real(a, "exponent")) for b, a in d["factors"])
            return PowerZeros(base, facs, _real(d.get("M", 1.0), "M"))
        if kind == "samples":
            return Samples(tuple(_complex(p) for p in d["points"]), tuple(_real(v, "value") for v in d["values"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError(f"bad {d.get('type')!r} weight: {exc!r}") from None
    raise ParseError(f"unknown weight type {d.get('type')!r}")


def _pair(z: complex) -> Union[list, str]:
    if not np.isfinite(z):
        return "inf"
    return [float(z.real), float(z.imag)]


def set_to_dict(s: SetDescriptor) -> dict:
    if isinstance(s, IntervalUnion):
        return {"type": "interval_union", "intervals": [list(iv) for iv in s.intervals]}
    if isinstance(s, Circle):
        return {"type": "circle", "center": _pair(s.center), "radius": s.radius}
    if isinstance(s, CircularArc):
        return {"type": "arc", "center": _pair(s.center), "radius": s.radius, "half_angle": s.half_angle}
    if isinstance(s, Lemniscate):
        return {"type": "lemniscate", "poly": [_pair(c) for c in s.poly.low_coeffs], "level": s.level}
    if isinstance(s, Preimage):
        return {"type": "preimage", "poly": [_pair(c) for c in s.poly.low_coeffs], "base": set_to_dict(s.base)}
    if isinstance(s, SampledCurve):
        return {"type": "curve_samples", "points": [_pair(p) for p in s.points], "closed": s.closed}
    raise ValidationError(f"unknown set {s!r}")


def weight_to_dict(w: WeightDescriptor) -> dict:
    if isinstance(w, One):
        return {"type": "one"}
    if isinstance(w, Jacobi):
        return {"type": "jacobi", "alpha": w.alpha, "beta": w.beta}
    if isinstance(w, MarkovPoles):
        return {"type": "markov", "poles": [_pair(p) for p in w.poles]}
    if isinstance(w, PowerZeros):
        return {"type": "power_zeros", "base": weight_to_dict(w.base),
                "factors": [list(f) for f in w.factors], "M": w.bound}
    if isinstance(w, Samples):
        return {"type": "samples", "points": [_pair(p) for p in w.points], "values": list(w.values)}
    raise ValidationError(f"unknown weight {w!r}")
