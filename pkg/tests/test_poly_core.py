from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chebkit.errors import DegreeError, ValidationError
from chebkit.poly_core import MonicPolynomial, affine_transform, compose, derivative, evaluate, power, roots

T3 = MonicPolynomial((0.0, -0.75, 0.0))


def test_eval_examples():
    assert evaluate(MonicPolynomial((0.0, 0.0)), 2) == 4
    assert evaluate(T3, 1.0) == pytest.approx(0.25, abs=1e-15)
    assert evaluate(MonicPolynomial(()), 3.7 + 1j) == 1


def test_eval_vectorized_shape():
    z = np.linspace(-1, 1, 7).reshape(7, 1)
    assert evaluate(T3, z).shape == (7, 1)


def test_roots_examples():
    assert sorted(r.real for r in roots(MonicPolynomial((-1.0, 0.0)))) == pytest.approx([-1.0, 1.0], abs=1e-14)
    r = sorted(roots(T3), key=lambda v: v.real)
    assert np.allclose(r, [-math.sqrt(3) / 2, 0.0, math.sqrt(3) / 2], atol=1e-13)
    assert roots(MonicPolynomial.monomial(4)) == [0j] * 4


def test_roots_degree_zero():
    with pytest.raises(DegreeError):
        roots(MonicPolynomial(()))


def test_compose_examples():
    q = MonicPolynomial((-2.0, 0.0))
    assert np.allclose(compose(MonicPolynomial((0.0, 0.0)), q).coeffs, [4, 0, -4, 0, 1])
    assert np.allclose(compose(MonicPolynomial((0.0,)), q).coeffs, q.coeffs)
    assert np.allclose(compose(q, q).coeffs, [2, 0, -4, 0, 1])


def test_derivative_examples():
    assert np.allclose(derivative(T3), [-0.75, 0, 3])
    assert np.allclose(derivative(MonicPolynomial((0.0,))), [1])
    assert np.allclose(derivative(MonicPolynomial((-2.0, 0.0))), [0, 2])


def test_nonfinite_coefficients_rejected():
    with pytest.raises(ValidationError):
        MonicPolynomial((float("nan"),))


def test_power_and_from_roots():
    p = power(MonicPolynomial((-1.0, 0.0)), 3)
    assert np.allclose(p.coeffs, MonicPolynomial.from_roots([1, 1, 1, -1, -1, -1]).coeffs)


def test_affine_transform_moves_roots():
    p = MonicPolynomial.from_roots([0.5, -0.25j])
    q = affine_transform(p, 2.0 - 1j, 1j)
    want = MonicPolynomial.from_roots([(2 - 1j) * 0.5 + 1j, (2 - 1j) * (-0.25j) + 1j])
    assert np.allclose(q.coeffs, want.coeffs, atol=1e-14)


unit_disk = st.builds(
    lambda r, t: r * complex(math.cos(t), math.sin(t)),
    st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi),
)
bounded_coeffs = st.lists(
    st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False), min_size=1, max_size=40
)


@given(st.lists(unit_disk, min_size=1, max_size=40))
def test_root_residual_small(zs):
    p = MonicPolynomial.from_roots(zs)
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    for r in roots(p):
        assert abs(evaluate(p, r)) <= 1e-8 * scale


@given(bounded_coeffs)
def test_vieta(low):
    # relative to max(1, |r|) per root: roots below the rounding floor carry absolute error only
    p = MonicPolynomial(tuple(low))
    r = np.array(roots(p))
    n = p.degree
    a = p.coeffs
    assert abs(r.sum() + a[n - 1]) <= 1e-6 * max(1.0, float(np.abs(r).sum()))
    assert abs(np.prod(r) - (-1) ** n * a[0]) <= 1e-6 * float(np.prod(np.maximum(np.abs(r), 1.0)))


@given(
    st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False), min_size=0, max_size=5),
    st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False), min_size=1, max_size=5),
)
def test_compose_matches_nested_eval(pc, qc):
    p, q = MonicPolynomial(tuple(pc)), MonicPolynomial(tuple(qc))
    z = np.exp(2j * np.pi * np.arange(100) / 100) * np.linspace(0.2, 1.5, 100)
    direct = evaluate(p, evaluate(q, z))
    comp = evaluate(compose(p, q), z)
    assert np.all(np.abs(comp - direct) <= 1e-10 * np.maximum(1.0, np.abs(direct)) * 10 ** (len(pc) * len(qc) / 8))
