"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Two criteria contain parts whose stated target is out of reach for any
correct implementation; those parts run at the stated tolerance and are
marked as strict expected failures, so they stay visible as FAIL lines.
"""

from __future__ import annotations

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebkit.closed_forms import (
    achieser_norms,
    bernstein_rhs,
    closed_form_capacity,
    interval_cheb,
    markov_norm,
    markov_weighted_values,
)
from chebkit.complex_solver import solve_complex
from chebkit.faber import JoukowskiEllipse, model_boundary
from chebkit.poly_core import MonicPolynomial, compose
from chebkit.potential import DiscreteMeasure, band_masses, ffs_estimate, log_potential_interval
from chebkit.remez import solve_real
from chebkit.sets_weights import (
    Circle,
    CircularArc,
    IntervalUnion,
    Jacobi,
    Lemniscate,
    MarkovPoles,
    One,
    PowerZeros,
    Preimage,
    weight_values,
)
from chebkit.zeros import arcsine_ks, jentzsch_demo, potential_compare, zero_report

UNIT = IntervalUnion(((-1.0, 1.0),))


def E(a: float) -> IntervalUnion:
    return IntervalUnion(((-1.0, -a), (a, 1.0)))


def rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def test_c01_interval_exactness(criterion):
    t0 = time.perf_counter()
    worst_norm = worst_coef = 0.0
    for n in range(1, 31):
        sol = solve_real(UNIT, One(), n)
        worst_norm = max(worst_norm, rel(sol.norm, 2.0 ** (1 - n)))
        worst_coef = max(worst_coef, float(np.max(np.abs(sol.poly.coeffs - interval_cheb(n).poly.coeffs))))
    elapsed = time.perf_counter() - t0
    ok = worst_norm <= 1e-10 and worst_coef <= 1e-8 and elapsed < 5.0
    criterion(1, "interval exactness", ok, f"norm rel {worst_norm:.1e}, coeff {worst_coef:.1e}, {elapsed:.2f} s")
    assert ok


def _real_corpus():
    yield "unit", UNIT, One(), range(1, 21)
    yield "E(0.5)", E(0.5), One(), range(1, 21)
    yield "asymmetric", IntervalUnion(((-1.0, -0.2), (0.4, 1.0))), One(), range(1, 16)
    yield "three", IntervalUnion(((-1.0, -0.6), (-0.2, 0.3), (0.7, 1.0))), One(), range(1, 16)
    yield "jacobi", UNIT, Jacobi(0.5, 1.0), range(1, 16)
    yield "markov", UNIT, MarkovPoles((2j, -2j)), range(2, 16)
    yield "power_zeros", UNIT, PowerZeros(One(), ((0.0, 0.5),)), range(1, 16)


def test_c02_alternation_certificate(criterion):
    worst, bad = 0.0, []
    for name, s, w, degrees in _real_corpus():
        for n in degrees:
            sol = solve_real(s, w, n)
            x = sol.reference_values
            signs = np.array([sg for _, sg in sol.reference])
            vals = weight_values(w, x) * sol(x).real
            err = float(np.max(np.abs(vals - signs * sol.norm)) / sol.norm)
            alternates = len(x) >= n + 1 and np.all(signs[1:] == -signs[:-1]) and np.all(np.diff(x) > 0)
            worst = max(worst, err)
            if err > 1e-9 or not alternates:
                bad.append(f"{name} n={n}")
    ok = not bad
    criterion(2, "alternation certificate", ok, f"worst |wT - sign t_n|/t_n {worst:.1e}" + (f", bad {bad}" if bad else ""))
    assert ok


JACOBI_WEIGHTS = {"second": Jacobi(0.5, 0.5), "third": Jacobi(0.0, 0.5), "fourth": Jacobi(0.5, 0.0)}


@pytest.mark.parametrize(
    "kind",
    [
        "second",
        pytest.param("third", marks=pytest.mark.xfail(strict=True, reason="true norm is sqrt(2) 2^-n")),
        pytest.param("fourth", marks=pytest.mark.xfail(strict=True, reason="true norm is sqrt(2) 2^-n")),
    ],
)
def test_c03_jacobi_kinds(criterion, kind):
    worst = max(rel(solve_real(UNIT, JACOBI_WEIGHTS[kind], n).norm, 2.0**-n) for n in range(1, 21))
    ok = worst <= 1e-9
    criterion(3, "Jacobi kinds", ok, f"max rel deviation from 2^-n {worst:.2e}", part=kind)
    assert ok


@pytest.mark.parametrize("poles", [(2j, -2j), (3.0, -3.0, 2j, -2j)], ids=["pm2i", "pm3_pm2i"])
def test_c04_markov_oracle(criterion, poles):
    w = MarkovPoles(poles)
    x = np.linspace(-1.0, 1.0, 1000)
    worst_norm = worst_val = 0.0
    for n in range(w.m + 1, 21):
        sol = solve_real(UNIT, w, n)
        worst_norm = max(worst_norm, rel(sol.norm, markov_norm(n, w)))
        oracle = markov_weighted_values(n, w, x) / weight_values(w, x)
        worst_val = max(worst_val, float(np.max(np.abs(sol(x).real - oracle)) / np.max(np.abs(oracle))))
    ok = worst_norm <= 1e-7 and worst_val <= 1e-6
    criterion(4, "Markov oracle", ok, f"norm rel {worst_norm:.1e}, values rel {worst_val:.1e}", part=str(poles))
    assert ok


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7])
def test_c05_achieser(criterion, a):
    even = max(rel(solve_real(E(a), One(), 2 * k).norm, achieser_norms(a, k)[0]) for k in range(1, 21))
    ratios = [solve_real(E(a), One(), 2 * k + 1).norm / achieser_norms(a, k)[1] for k in range(10, 21)]
    odd = max(abs(r - 1.0) for r in ratios)
    ok = even <= 1e-8 and odd <= 0.03
    criterion(5, "Achieser even degrees", ok, f"even rel {even:.1e}, odd ratio dev {odd:.1e}", part=f"a={a}")
    assert ok


@pytest.mark.parametrize(
    "w", [Jacobi(1.0, 0.0), PowerZeros(One(), ((0.0, 0.5),))], ids=["jacobi10", "abs_sqrt"]
)
def test_c06_bernstein(criterion, w):
    r10 = solve_real(UNIT, w, 10).norm / bernstein_rhs(w, 10)
    r30 = solve_real(UNIT, w, 30).norm / bernstein_rhs(w, 30)
    ok = 0.95 <= r30 <= 1.05 and abs(r30 - 1) < abs(r10 - 1)
    criterion(6, "Bernstein convergence", ok, f"ratio n=10 {r10:.5f}, n=30 {r30:.5f}", part=type(w).__name__)
    assert ok


def test_c07_complex_exactness(criterion):
    t0 = time.perf_counter()
    circ = max(float(np.max(np.abs(solve_complex(Circle(0, 1), One(), n).poly.coeffs - MonicPolynomial.monomial(n).coeffs)))
               for n in range(1, 9))
    P = MonicPolynomial((-1.0, 0.0))
    lem = 0.0
    for n in (2, 4, 6):
        exact = MonicPolynomial.from_roots([1.0, -1.0] * (n // 2))
        lem = max(lem, float(np.max(np.abs(solve_complex(Lemniscate(P, 1.0), One(), n).poly.coeffs - exact.coeffs))))
    elapsed = time.perf_counter() - t0
    ok = circ <= 1e-8 and lem <= 1e-7 and elapsed < 30.0
    criterion(7, "complex exactness", ok, f"circle {circ:.1e}, lemniscate {lem:.1e}, {elapsed:.1f} s")
    assert ok


def test_c08_kamo_borodin(criterion):
    P = MonicPolynomial((-2.0, 0.0))
    base = IntervalUnion(((-2.0, 2.0),))
    worst = 0.0
    for n in range(1, 9):
        composed = compose(solve_real(base, One(), n).poly, P)
        direct = solve_complex(Preimage(P, base), One(), 2 * n, grid_points=1682)
        worst = max(worst, float(np.max(np.abs(direct.poly.coeffs - composed.coeffs))))
    ok = worst <= 1e-6
    criterion(8, "Kamo-Borodin consistency", ok, f"max coefficient difference {worst:.1e}")
    assert ok


def _ellipse():
    return model_boundary(JoukowskiEllipse(1.5), 512)


# (name, set, capacity, interval union, convex)
BOUND_CORPUS = [
    ("unit", UNIT, 0.5, True, True),
    ("shifted", IntervalUnion(((0.0, 3.0),)), 0.75, True, True),
    ("E(0.3)", E(0.3), math.sqrt(1 - 0.09) / 2, True, False),
    ("E(0.5)", E(0.5), math.sqrt(0.75) / 2, True, False),
    ("E(0.7)", E(0.7), math.sqrt(1 - 0.49) / 2, True, False),
    ("disk", Circle(0.5j, 2.0), 2.0, False, True),
    ("ellipse", _ellipse(), 0.75, False, True),
    ("arc", CircularArc(0, 1, math.pi / 2), math.sin(math.pi / 4), False, False),
    ("lemniscate", Lemniscate(MonicPolynomial((-1.0, 0.0)), 1.0), 1.0, False, False),
]


def _norm(s, n):
    if isinstance(s, IntervalUnion):
        return solve_real(s, One(), n).norm
    return solve_complex(s, One(), n).upper_norm


_bound_failures: list[str] = []
_bound_worst = {"szego": math.inf, "schiefermayr": math.inf, "kp": -math.inf}


@settings(max_examples=30, deadline=None, derandomize=True)
@given(entry=st.sampled_from(BOUND_CORPUS), n=st.integers(1, 12))
def _bound_property(entry, n):
    name, s, cap, real, convex = entry
    W = _norm(s, n) / cap**n
    _bound_worst["szego"] = min(_bound_worst["szego"], W)
    ok = W >= 1 - 1e-9
    if real:
        _bound_worst["schiefermayr"] = min(_bound_worst["schiefermayr"], W)
        ok = ok and W >= 2 - 1e-9
    if convex:
        _bound_worst["kp"] = max(_bound_worst["kp"], W)
        ok = ok and W <= 2 + 1e-6
    if not ok:
        _bound_failures.append(f"{name} n={n} W={W:.12g}")
    assert ok


def test_c09_bound_suite(criterion):
    try:
        _bound_property()
        ok = True
    except AssertionError:
        ok = False
    w = _bound_worst
    detail = f"min W {w['szego']:.10f}, min real W {w['schiefermayr']:.10f}, max convex W {w['kp']:.10f}"
    if _bound_failures:
        detail += f", failures {_bound_failures[:3]}"
    criterion(9, "bound suite", ok, detail)
    assert ok


def test_c10_thiran_detaille(criterion):
    arc = CircularArc(0, 1, math.pi / 2)
    target = 2 * math.cos(math.pi / 8) ** 2
    cap = closed_form_capacity(arc)
    W = {n: solve_complex(arc, One(), n).norm / cap**n for n in range(8, 33)}
    ok = abs(W[32] - 1.7071) <= 0.1 and abs(W[32] - target) <= abs(W[8] - target)
    criterion(10, "Thiran-Detaille trend", ok, f"W_8 {W[8]:.8f}, W_32 {W[32]:.8f}, target {target:.8f}")
    assert ok


def test_c11_capacity_formulas(criterion):
    P = MonicPolynomial((0.5, -1.0, 0.0))
    exact = [
        closed_form_capacity(UNIT) == 0.5,
        closed_form_capacity(Circle(1 + 1j, 2.5)) == 2.5,
        closed_form_capacity(Lemniscate(P, 0.8)) == 0.8,
        closed_form_capacity(Preimage(P, Circle(0, 8.0))) == 8.0 ** (1 / 3),
    ]
    est = ffs_estimate(E(0.5))
    err = rel(est.value, math.sqrt(0.75) / 2)
    ok = all(exact) and err <= 0.01
    criterion(11, "capacity formulas", ok, f"closed forms {exact}, FFS E(0.5) rel {err:.1e}")
    assert ok


def test_c12_equilibrium(criterion):
    worst_band = 0.0
    for n in range(1, 11):
        P = interval_cheb(n).poly.coeffs.real * 2.0 ** (n - 1)
        worst_band = max(worst_band, max(abs(m - 1 / n) for m in band_masses(list(P))))
    ang = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    z = 1.3 * np.cos(ang) + 0.4j * np.sin(ang)
    quad = log_potential_interval(z, mode="quadrature")
    closed = log_potential_interval(z, mode="closed")
    worst_pot = float(np.max(np.abs(quad - closed)))
    ok = worst_band <= 1e-8 and worst_pot <= 1e-9
    criterion(12, "equilibrium machinery", ok, f"band mass {worst_band:.1e}, potential {worst_pot:.1e}")
    assert ok


FEJER_CORPUS = [
    (UNIT, One(), range(1, 16)),
    (E(0.5), One(), range(1, 16)),
    (IntervalUnion(((-1.0, -0.2), (0.4, 1.0))), One(), range(1, 12)),
    (UNIT, Jacobi(0.5, 1.0), range(1, 12)),
    (UNIT, MarkovPoles((2j, -2j)), range(2, 12)),
    (Circle(0, 1), One(), range(1, 9)),
    (CircularArc(0, 1, math.pi / 2), One(), range(2, 11, 2)),
    (Lemniscate(MonicPolynomial((-1.0, 0.0)), 1.0), One(), (2, 4, 6)),
]


def test_c13_zero_diagnostics(criterion):
    violations = 0
    for s, w, degrees in FEJER_CORPUS:
        for n in degrees:
            sol = solve_real(s, w, n) if isinstance(s, IntervalUnion) else solve_complex(s, w, n)
            violations += len(zero_report(sol, s, w).hull_violations)
    ks = arcsine_ks(np.real(solve_real(UNIT, One(), 30).stable.roots()))
    ring = 2.0 * np.exp(2j * np.pi * np.arange(64) / 64)
    circle = DiscreteMeasure.uniform(np.exp(2j * np.pi * np.arange(256) / 256))
    balayage = potential_compare(DiscreteMeasure.uniform([0.0]), circle, ring)
    ok = violations == 0 and ks <= 0.05 and balayage <= 1e-3
    criterion(13, "zero diagnostics", ok, f"hull violations {violations}, arcsine KS {ks:.4f}, balayage {balayage:.1e}")
    assert ok


@pytest.mark.parametrize(
    "n",
    [
        pytest.param(7, marks=pytest.mark.xfail(strict=True, reason="7 zeros among 8 equispaced angles give KS 1/8")),
        15,
        31,
    ],
)
def test_c14_jentzsch(criterion, n):
    rep = jentzsch_demo([1.0] * (n + 1), n, 1.0, delta=0.15)
    ok = rep.annulus_fraction == 1.0 and rep.angular_KS <= 0.1
    criterion(14, "Jentzsch demo", ok, f"annulus fraction {rep.annulus_fraction}, angular KS {rep.angular_KS:.4f}", part=f"n={n}")
    assert ok


def _cli(workdir: Path, argv: list[str]) -> None:
    subprocess.run([sys.executable, "-m", "chebkit.cli", *argv], cwd=workdir, check=False,
                   stdout=subprocess.DEVNULL)


def test_c15_determinism(criterion, tmp_path):
    (tmp_path / "arc.json").write_text('{"type": "arc", "center": [0, 0], "radius": 1, "half_angle": 1.5707963267948966}')
    (tmp_path / "two.json").write_text('{"type": "interval_union", "intervals": [[-1, -0.5], [0.5, 1]]}')
    (tmp_path / "geo.json").write_text('{"kind": "geometric", "ratio": 1}')
    runs = {
        "solve.json": ["solve", "--set", "arc.json", "--degree", "6"],
        "sweep.csv": ["sweep", "--set", "two.json", "--degrees", "1..8"],
        "zeros.csv": ["zeros", "--set", "arc.json", "--degree", "6", "--svg", "{svg}"],
        "jentzsch.json": ["jentzsch", "--series", "geo.json", "--degree", "15", "--svg", "{svg}"],
    }
    outputs = []
    for rep in (0, 1):
        blobs = {}
        for out, argv in runs.items():
            svg = f"{out}.{rep}.svg"
            args = [a.format(svg=svg) for a in argv] + ["--out", f"{out}.{rep}"]
            _cli(tmp_path, args)
            blobs[out] = (tmp_path / f"{out}.{rep}").read_bytes()
            if "--svg" in argv:
                blobs[out + ".svg"] = (tmp_path / svg).read_bytes()
        outputs.append(blobs)
    same = [k for k in outputs[0] if outputs[0][k] == outputs[1][k] and outputs[0][k]]
    ok = len(same) == len(outputs[0]) == 6
    criterion(15, "determinism", ok, f"{len(same)}/{len(outputs[0])} artifacts byte-identical")
    assert ok
