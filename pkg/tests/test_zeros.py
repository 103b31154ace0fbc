from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebkit.complex_solver import solve_complex
from chebkit.errors import DegreeError, UnsupportedSeries, ValidationError
from chebkit.poly_core import MonicPolynomial
from chebkit.potential import DiscreteMeasure
from chebkit.remez import solve_real
from chebkit.sets_weights import Circle, IntervalUnion, Jacobi
from chebkit.zeros import (
    arcsine_ks,
    jentzsch_demo,
    potential_compare,
    uniform_angle_ks,
    zero_report,
)

UNIT = IntervalUnion(((-1.0, 1.0),))


def arcsine_points(m: int) -> np.ndarray:
    return np.cos(np.pi * (np.arange(m) + 0.5) / m)


def test_circle_zeros():
    rep = zero_report(solve_complex(Circle(0, 1), None, 5), Circle(0, 1))
    assert np.max(np.abs(rep.zeros)) <= 1e-6
    assert rep.hull_violations == [] and rep.exterior_green_mass == 0.0
    assert rep.arcsine_KS is None


def test_interval_zeros_and_ks():
    rep = zero_report(solve_real(UNIT, None, 8), UNIT)
    want = np.sort(np.cos((2 * np.arange(8) + 1) * np.pi / 16))
    assert np.allclose(np.sort(np.real(rep.zeros)), want, atol=1e-10)
    assert rep.arcsine_KS <= 0.13
    assert rep.exterior_green_mass <= 1e-12
    ks30 = zero_report(solve_real(UNIT, None, 30), UNIT).arcsine_KS
    assert ks30 <= 0.05 and ks30 < rep.arcsine_KS


def test_ks_exact_values():
    # Chebyshev nodes sit at the midpoints of the arcsine quantiles
    assert arcsine_ks(arcsine_points(8)) == pytest.approx(1 / 16, abs=1e-14)
    assert arcsine_ks([0.0]) == pytest.approx(0.5)
    assert uniform_angle_ks(np.exp(2j * np.pi * (np.arange(10) + 0.5) / 10)) == pytest.approx(0.05, abs=1e-14)


@settings(max_examples=40)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=50))
def test_ks_in_unit_range(x):
    assert 0 < arcsine_ks(x) <= 1


def test_counting_measure_masses():
    for n in (3, 7, 12):
        rep = zero_report(solve_real(UNIT, None, n), UNIT)
        m = rep.counting_measure.masses
        assert np.all(m == 1.0 / n) and m.size == n


def test_potential_compare_examples():
    mu = DiscreteMeasure.uniform(np.exp(2j * np.pi * np.arange(256) / 256))
    assert potential_compare(mu, mu, [2.0, 3j]) == 0.0
    ring2 = 2 * np.exp(2j * np.pi * np.arange(64) / 64)
    assert potential_compare(DiscreteMeasure.uniform([0.0]), mu, ring2) <= 1e-3
    z = solve_real(UNIT, None, 30).stable.roots()
    ring3 = 3 * np.exp(2j * np.pi * np.arange(64) / 64)
    nu = DiscreteMeasure.uniform(z)
    assert potential_compare(nu, DiscreteMeasure.uniform(arcsine_points(256)), ring3) <= 0.02


def test_fejer_weighted():
    s = UNIT
    w = Jacobi(2.0, 0.5)
    for n in (4, 9, 15):
        assert zero_report(solve_real(s, w, n), s, w).hull_violations == []


def test_exterior_mass_two_intervals():
    s = IntervalUnion(((-1.0, -0.5), (0.5, 1.0)))
    even = [zero_report(solve_real(s, None, n), s).exterior_green_mass for n in range(4, 41, 4)]
    assert all(b <= a * 1.1 + 1e-12 for a, b in zip(even, even[1:]))
    # E(1/2) is the preimage of [-1, 1] under (8x^2 - 5)/3, which maps 0 to -5/3
    g0 = math.log(3.0) / 2
    for n in (5, 11, 21):
        # one zero at the gap centre carries G(0) / n
        mass = zero_report(solve_real(s, None, n), s).exterior_green_mass
        assert mass == pytest.approx(g0 / n, rel=1e-6)


def test_report_accepts_bare_polynomial():
    rep = zero_report(MonicPolynomial((-0.25, 0.0)), UNIT)
    assert sorted(np.real(rep.zeros)) == pytest.approx([-0.5, 0.5])
    with pytest.raises(DegreeError):
        zero_report(MonicPolynomial(()), UNIT)


def test_symmetric_pairs_are_not_merged():
    # odd degree: a zero at the gap centre sits at the midpoint of every +-x pair
    s = IntervalUnion(((-1.0, -0.5), (0.5, 1.0)))
    for n in (5, 11):
        z = np.sort(np.real(zero_report(solve_real(s, None, n), s).zeros))
        assert np.allclose(z, -z[::-1], atol=1e-12)
        assert np.sum(np.abs(z) <= 1e-9) == 1


def test_jentzsch_examples():
    g = jentzsch_demo(np.ones(8), 7, 1.0)
    assert np.allclose(np.abs(g.zeros), 1.0, atol=1e-12) and g.annulus_fraction == 1.0
    g2 = jentzsch_demo(0.5 ** np.arange(8), 7, 2.0)
    want = 2 * np.exp(2j * np.pi * np.arange(1, 8) / 8)
    got = np.array(g2.zeros)
    assert max(np.min(np.abs(got - w)) for w in want) <= 1e-10
    assert g2.annulus_fraction == 1.0
    with pytest.raises(UnsupportedSeries):
        jentzsch_demo([1 / math.factorial(k) for k in range(8)], 7, math.inf)
    with pytest.raises(ValidationError):
        jentzsch_demo(np.ones(4), 7, 1.0)
