"""Weighted Chebyshev polynomials on real and complex sets, with potential-theory diagnostics."""

from __future__ import annotations

from .closed_forms import closed_form_capacity, interval_cheb, jacobi_kind_cheb, markov_cheb
from .complex_solver import ComplexChebSolution, LawsonConfig, solve_complex
from .errors import ChebkitError
from .faber import DiskImage, JoukowskiEllipse, LaurentSeries, faber_norm_check, faber_poly
from .poly_core import MonicPolynomial, compose, evaluate, roots
from .potential import band_masses, capacity, ffs_estimate, green_function, widom_factor
from .remez import ChebSolution, RemezConfig, solve_real
from .sets_weights import (
    Circle,
    CircularArc,
    IntervalUnion,
    Jacobi,
    Lemniscate,
    MarkovPoles,
    One,
    PowerZeros,
    Preimage,
    SampledCurve,
    Samples,
    parse_set,
    parse_weight,
)
from .zeros import jentzsch_demo, zero_report

__version__ = "0.1.0"

__all__ = [
    "ChebSolution",
    "ChebkitError",
    "Circle",
    "CircularArc",
    "ComplexChebSolution",
    "DiskImage",
    "IntervalUnion",
    "Jacobi",
    "JoukowskiEllipse",
    "LaurentSeries",
    "LawsonConfig",
    "Lemniscate",
    "MarkovPoles",
    "MonicPolynomial",
    "One",
    "PowerZeros",
    "Preimage",
    "RemezConfig",
    "SampledCurve",
    "Samples",
    "band_masses",
    "capacity",
    "closed_form_capacity",
    "compose",
    "evaluate",
    "faber_norm_check",
    "faber_poly",
    "ffs_estimate",
    "green_function",
    "interval_cheb",
    "jacobi_kind_cheb",
    "jentzsch_demo",
    "markov_cheb",
    "parse_set",
    "parse_weight",
    "roots",
    "solve_complex",
    "solve_real",
    "widom_factor",
    "zero_report",
]
