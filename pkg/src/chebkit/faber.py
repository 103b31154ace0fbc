"""Faber polynomials of model domains given by exterior-map Laurent data.

The exterior map is ``Phi(z) = c z + a_0 + a_{-1}/z + ... + a_{-K}/z^K`` with
``c = Phi'(inf) > 0``. With ``y = 1/z`` we have ``Phi/c = z S(y)`` for the power
series ``S = 1 + b_0 y + b_1 y^2 + ...``, and ``F_n`` is the polynomial part of
``z^n S(y)^n``, i.e. the first ``n + 1`` coefficients of ``S^n`` read backwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegreeError, ParseError, SeriesUnstable, ValidationError
from .poly_core import MonicPolynomial, evaluate
from .sets_weights import Circle, SampledCurve, _complex, _load, _real

MAX_FABER_DEGREE = 40
MAX_TAIL = 64


@dataclass(frozen=True)
class JoukowskiEllipse:
    """Image of ``|w| = R`` under ``(w + 1/w)/2``; foci at ``+-1``."""

    R: float

    def __post_init__(self) -> None:
        if not float(self.R) > 1.0:
            raise ValidationError("ellipse parameter R must exceed 1")
        object.__setattr__(self, "R", float(self.R))


@dataclass(frozen=True)
class DiskImage:
    center: complex
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", complex(self.center))
        if not float(self.radius) > 0:
            raise ValidationError("disk radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class LaurentSeries:
    """``Phi(z) = cap z + coeffs[0] + coeffs[1]/z + ...``."""

    cap: float
    coeffs: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if not float(self.cap) > 0:
            raise ValidationError("Phi'(inf) must be positive")
        c = tuple(complex(a) for a in self.coeffs)
        if len(c) > MAX_TAIL + 1:
            raise ValidationError(f"Laurent tail is limited to {MAX_TAIL} terms")
        object.__setattr__(self, "cap", float(self.cap))
        object.__setattr__(self, "coeffs", c)


ExteriorMapModel = Union[JoukowskiEllipse, DiskImage, LaurentSeries]


def _joukowski_tail(K: int) -> np.ndarray:
    """Coefficients of ``(1 + sqrt(1 - y^2))/2`` up to ``y^{K+1}``."""
    # sqrt(1 - u) = sum binom(1/2, k) (-u)^k
    out = np.zeros(K + 2)
    term = 1.0
    for k in range(0, (K + 1) // 2 + 1):
        if 2 * k <= K + 1:
            out[2 * k] += 0.5 * term
        term *= (k - 0.5) / (k + 1)
    out[0] += 0.5
    return out


def series_data(model: ExteriorMapModel) -> tuple[float, np.ndarray]:
    """``(Phi'(inf), S)`` with ``S`` the coefficients of ``Phi/(Phi'(inf) z)`` in ``1/z``."""
    if isinstance(model, DiskImage):
        return 1.0 / model.radius, np.array([1.0, -model.center])
    if isinstance(model, JoukowskiEllipse):
        # Phi(z) = (z + sqrt(z^2 - 1))/R = (2/R) z (1 + sqrt(1 - y^2))/2
        return 2.0 / model.R, _joukowski_tail(MAX_TAIL).astype(complex)
    if isinstance(model, LaurentSeries):
        return model.cap, np.concatenate(([1.0], np.array(model.coeffs, dtype=complex) / model.cap))
    raise ValidationError(f"unsupported map model {type(model).__name__}")


def model_capacity(model: ExteriorMapModel) -> float:
    return 1.0 / series_data(model)[0]


def faber_poly(model: ExteriorMapModel, n: int) -> MonicPolynomial:
    """Faber polynomial ``F_n``, the polynomial part of ``(Phi/Phi'(inf))^n``.

    Raises
    ------
    SeriesUnstable
        If a coefficient of ``S^n`` exceeds ``1e12`` in modulus.
    """
    if not 1 <= n <= MAX_FABER_DEGREE:
        raise DegreeError(f"Faber degree must lie in 1..{MAX_FABER_DEGREE}")
    _, S = series_data(model)
    S = np.pad(S[: n + 1], (0, max(0, n + 1 - S.size)))
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = 1.0
    for _ in range(n):
        acc = np.convolve(acc, S)[: n + 1]
        if np.max(np.abs(acc)) > 1e12:
            raise SeriesUnstable("Laurent coefficients grow too fast for this degree")
    # coefficient of z^{n-k} is acc[k]
    low = acc[::-1][:-1]
    if np.all(low.imag == 0):
        low = low.real
    return MonicPolynomial(tuple(low))


def model_boundary(model: ExteriorMapModel, m: int = 512):
    """Set descriptor of the closed domain bounded by the model curve."""
    if isinstance(model, DiskImage):
        return Circle(model.center, model.radius)
    if isinstance(model, JoukowskiEllipse):
        t = 2 * np.pi * np.arange(m) / m
        w = model.R * np.exp(1j * t)
        return SampledCurve(tuple(0.5 * (w + 1.0 / w)), True)
    raise ValidationError("boundary sampling needs a closed-form inverse map")


@dataclass(frozen=True)
class FaberCheck:
    faber_sup: float
    scaled_sup: float
    bound: float
    satisfied: bool


def faber_norm_check(
    model: ExteriorMapModel,
    grid_points,
    n: int,
    convex: bool = True,
    smooth_constant: float | None = None,
) -> FaberCheck:
    """Compare ``Phi'(inf)^n sup|F_n|`` on a boundary grid with its bound.

    The bound is 2 for convex domains and ``1 + C log(n)/n`` otherwise, with
    ``C`` supplied by the caller (see :func:`fit_smooth_constant`).
    """
    cap_coeff, _ = series_data(model)
    z = np.asarray(grid_points, dtype=complex)
    sup = float(np.max(np.abs(evaluate(faber_poly(model, n), z))))
    scaled = sup * cap_coeff**n
    if convex:
        bound = 2.0
    else:
        if smooth_constant is None:
            raise ValidationError("non-convex check needs smooth_constant")
        bound = 1.0 + smooth_constant * math.log(max(n, 2)) / n
    return FaberCheck(sup, scaled, bound, scaled <= bound * (1.0 + 1e-12))


def fit_smooth_constant(model: ExteriorMapModel, grid_points, degrees=(4, 8, 16, 24)) -> float:
    """Smallest ``C`` with ``Phi'(inf)^n sup|F_n| <= 1 + C log(n)/n`` on ``degrees``."""
    cap_coeff, _ = series_data(model)
    z = np.asarray(grid_points, dtype=complex)
    c = 0.0
    for n in degrees:
        scaled = float(np.max(np.abs(evaluate(faber_poly(model, n), z)))) * cap_coeff**n
        c = max(c, (scaled - 1.0) * n / math.log(max(n, 2)))
    return c


def parse_model(doc) -> ExteriorMapModel:
    """Map model from ``{"type": "laurent", "cap": c, "coeffs": [a0, a_-1, ...]}``,
    ``{"type": "joukowski_ellipse", "R": R}`` or ``{"type": "disk", ...}``."""
    d = _load(doc)
    kind = d.get("type")
    if kind == "laurent":
        return LaurentSeries(_real(d.get("cap"), "cap"), tuple(_complex(a) for a in d.get("coeffs", [])))
    if kind == "joukowski_ellipse":
        return JoukowskiEllipse(_real(d.get("R"), "R"))
    if kind == "disk":
        return DiskImage(_complex(d.get("center", 0)), _real(d.get("radius", 1.0), "radius"))
    raise ParseError(f"unknown map model type {kind!r}")
