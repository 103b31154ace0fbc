from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebkit.errors import DomainError, QuadratureDiverged, ValidationError
from chebkit.poly_core import MonicPolynomial
from chebkit.potential import (
    CapacityResult,
    DiscreteMeasure,
    band_masses,
    capacity,
    equilibrium_density_preimage,
    green_function,
    green_interval,
    log_potential_interval,
    pw_bound_real,
    widom_factor,
)
from chebkit.remez import solve_real
from chebkit.sets_weights import Circle, IntervalUnion, Lemniscate, Preimage, affine_image

UNIT = IntervalUnion(((-1.0, 1.0),))
LEM = Lemniscate(MonicPolynomial((-1.0, 0.0)), 1.0)


def two_bands(a: float) -> IntervalUnion:
    return IntervalUnion(((-1.0, -a), (a, 1.0)))


def test_capacity_examples():
    c = capacity(UNIT)
    assert c.value == 0.5 and c.method == "closed_form"
    assert capacity(LEM).value == 1.0
    assert capacity(Circle(3j, 2.5)).value == 2.5
    est = capacity(two_bands(0.5))
    assert est.method == "ffs_estimate"
    assert est.value == pytest.approx(math.sqrt(0.75) / 2, rel=1e-2)


def test_capacity_of_preimage():
    # x^2 - 1/2 maps [-1, 1] onto [-1/2, 1/2] twice
    pre = Preimage(MonicPolynomial((-0.5, 0.0)), IntervalUnion(((-0.5, 0.5),)))
    assert capacity(pre).value == pytest.approx(0.5, rel=1e-14)


def test_capacity_result_guards():
    with pytest.raises(ValidationError):
        CapacityResult(0.0, "closed_form")
    with pytest.raises(ValidationError):
        CapacityResult(1.0, "guess")


def test_green_interval_examples():
    assert green_interval(1.0) == 0.0
    assert green_interval(0.3) == 0.0
    assert green_interval(1.25) == pytest.approx(math.log(2.0), abs=1e-15)
    assert green_interval(1j) == pytest.approx(math.log(1 + math.sqrt(2)), abs=1e-15)


def test_green_asymptotics():
    z = 1e6 * np.exp(1j * np.linspace(0, 2 * np.pi, 9))
    assert np.max(np.abs(green_interval(z) - np.log(np.abs(z)) - math.log(2))) <= 1e-5


def test_log_potential_examples():
    x = np.linspace(-1, 1, 21)
    assert np.allclose(log_potential_interval(x), -math.log(2), atol=1e-15)
    assert log_potential_interval(1.25) == pytest.approx(0.0, abs=1e-15)
    assert log_potential_interval(2j, mode="quadrature") == pytest.approx(log_potential_interval(2j), abs=1e-9)
    with pytest.raises(QuadratureDiverged):
        log_potential_interval(0.2, mode="quadrature")


@settings(max_examples=40)
@given(st.complex_numbers(min_magnitude=1.05, max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_log_potential_quadrature_agrees(z):
    assert log_potential_interval(z, mode="quadrature") == pytest.approx(log_potential_interval(z), abs=1e-9)


def test_equilibrium_density_examples():
    assert equilibrium_density_preimage([0.0, 1.0], 0.0) == pytest.approx(1 / math.pi)
    assert equilibrium_density_preimage([-1.0, 0.0, 2.0], 0.5) == pytest.approx(2 / (math.pi * math.sqrt(3)))
    with pytest.raises(DomainError):
        equilibrium_density_preimage([-1.0, 0.0, 2.0], 0.0)
    with pytest.raises(DomainError):
        equilibrium_density_preimage([0.0, 0.0, 1.0], 0.5)


def test_density_integrates_to_one():
    P = [0.0, -3.0, 0.0, 4.0]
    x = np.cos(np.pi * (np.arange(20000) + 0.5) / 20000)
    # total mass against the arcsine weight: density * pi sqrt(1 - x^2)
    mass = np.mean(equilibrium_density_preimage(P, x) * math.pi * np.sqrt(1 - x**2))
    assert mass == pytest.approx(1.0, abs=1e-6)


def test_band_masses_examples():
    assert band_masses([0.0, 1.0]) == pytest.approx([1.0])
    assert band_masses([-1.0, 0.0, 2.0]) == pytest.approx([0.5, 0.5])
    assert band_masses([0.0, -3.0, 0.0, 4.0]) == pytest.approx([1 / 3] * 3)
    # two bands separated by a gap
    assert band_masses([-1.5, 0.0, 2.5]) == pytest.approx([0.5, 0.5])


def test_widom_examples():
    for n in (1, 5, 30):
        assert widom_factor(UNIT, n, 2.0 ** (1 - n)).value == pytest.approx(2.0, rel=1e-15)
    assert widom_factor(Circle(0, 1), 7, 1.0).value == 1.0
    for k in (1, 2, 4):
        assert widom_factor(LEM, 2 * k, 1.0).value == 1.0


def test_widom_lower_bounds():
    s = two_bands(0.4)
    cap = CapacityResult(math.sqrt(1 - 0.16) / 2, "closed_form")
    for n in range(2, 13):
        W = widom_factor(s, n, solve_real(s, None, n).norm, cap).value
        assert W >= 2 - 1e-9


def test_saturation_spot_check():
    pre = Preimage(MonicPolynomial((-0.5, 0.0)), IntervalUnion(((-0.5, 0.5),)))
    assert widom_factor(pre, 2, 0.5).value == pytest.approx(2.0, rel=1e-14)


@settings(max_examples=30)
@given(
    st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False),
    st.complex_numbers(max_magnitude=10, allow_nan=False),
    st.integers(1, 20),
)
def test_widom_affine_invariance(alpha, b, n):
    s = Circle(0.5, 1.5)
    t = 1.5**n
    moved = affine_image(s, alpha, b)
    assert widom_factor(moved, n, t * abs(alpha) ** n).value == pytest.approx(widom_factor(s, n, t).value, rel=1e-8)


def test_green_closed_forms():
    z = np.array([2.0, 3j, -1.5 + 0.5j])
    assert np.allclose(green_function(Circle(0, 1), z), np.log(np.abs(z)))
    assert np.allclose(green_function(LEM, z), 0.5 * np.log(np.abs(z**2 - 1)))
    lo = IntervalUnion(((0.0, 4.0),))
    assert np.allclose(green_function(lo, 2 + 2 * z), green_interval(z))


def test_green_estimator_two_intervals():
    s = two_bands(0.5)
    # E(a) is the preimage of [-1, 1] under (2x^2 - 1 - a^2)/(1 - a^2)
    pre = Preimage(MonicPolynomial((-(1 + 0.25) / 2, 0.0)), IntervalUnion(((-0.375, 0.375),)))
    z = np.array([1.5, 2j, 0.2 + 0.3j])
    assert np.allclose(green_function(s, z), green_function(pre, z), atol=1e-3)


def test_pw_bound_examples():
    assert pw_bound_real(UNIT) == 2.0
    s = two_bands(0.5)
    bound = pw_bound_real(s)
    cap = CapacityResult(math.sqrt(0.75) / 2, "closed_form")
    sup = max(widom_factor(s, n, solve_real(s, None, n).norm, cap).value for n in range(2, 41, 3))
    # the bound is attained along odd degrees, so allow rounding
    assert bound >= sup * (1 - 1e-12)
    assert pw_bound_real(two_bands(1e-3)) == pytest.approx(2.0, abs=1e-2)
    with pytest.raises(ValidationError):
        pw_bound_real(Circle(0, 1))


def test_discrete_measure():
    m = DiscreteMeasure.uniform([0.0, 1.0])
    assert np.allclose(m.masses, 0.5)
    assert m.log_potential(2.0)[0] == pytest.approx(-0.5 * math.log(2))
    with pytest.raises(ValidationError):
        DiscreteMeasure(np.zeros(2), np.array([0.7, 0.7]))
