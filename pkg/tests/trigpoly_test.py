import json
import math

import numpy as np
import pytest
from scipy.integrate import simpson

from test_utils.systems import random_mat_poly, random_vec_poly, rng, table_rotor

from geomint.densecore import SymplecticForm
from geomint.rotor import build_rotor
from geomint.trigpoly import (
    FrequencyMismatchError, MatTrigPoly, SYMPLECTIC, TrigPolyFormatError, VecTrigPoly, trig_apply,
    trig_derivative, trig_eval, trig_integral_over_step, trig_linear_combo, trig_mat_product
)

OMEGA = 1.3
SAMPLE_COUNT = 20
POINTWISE = 1e-12

def naive_eval(p, t):
    value = np.array(p.a0)
    for i in range(p.order):
        value = value + p.cos[i] * math.cos((i + 1) * p.omega * t) + p.sin[i] * math.sin((i + 1) * p.omega * t)
    return value

def test_layout_and_degrees_of_freedom(rng):
    p = random_vec_poly(rng, 3, 2, OMEGA)
    assert p.order == 2
    assert p.slot_count == 5
    assert p.degrees_of_freedom == 15
    assert p.n == 3

def test_zero_polynomial_is_canonical():
    p = VecTrigPoly(OMEGA, [0.0, 0.0], [[0.0, 0.0]], [[0.0, 0.0]])
    assert p.order == 0
    assert p == VecTrigPoly.zero(OMEGA, 2)

def test_coefficients_are_read_only(rng):
    p = random_vec_poly(rng, 2, 1, OMEGA)
    with pytest.raises(ValueError):
        p.a0[0] = 1.0

@pytest.mark.parametrize("omega", [0.0, -1.0, math.inf])
def test_rejects_bad_frequency(omega):
    try:
        VecTrigPoly(omega, [1.0])
        assert False, f"Accepted base frequency {omega}"
    except ValueError as e:
        assert 'Base frequency' in str(e)

def test_eval_rotor_forcing_at_zero():
    f = build_rotor(table_rotor()).f
    assert np.allclose(trig_eval(f, 0.0), [0.0, 0.0, -0.10404, 0.0], rtol=0, atol=1e-15)

def test_eval_constant(rng):
    a0 = rng.uniform(-1, 1, 3)
    p = VecTrigPoly.constant(OMEGA, a0)
    for t in rng.uniform(-10, 10, 5):
        assert np.array_equal(trig_eval(p, t), a0)

@pytest.mark.parametrize("order", [1, 2, 4])
def test_eval_matches_naive_sum(rng, order):
    p = random_mat_poly(rng, 3, order, OMEGA)
    for t in rng.uniform(-10, 10, SAMPLE_COUNT):
        assert np.allclose(trig_eval(p, t), naive_eval(p, t), rtol=0, atol=1e-14)

def test_derivative_of_constant_is_zero():
    assert trig_derivative(VecTrigPoly.constant(OMEGA, [1.0, 2.0])).is_zero()

def test_derivative_of_sine_term():
    b1 = np.array([0.5, -2.0])
    p = VecTrigPoly(OMEGA, np.zeros(2), [np.zeros(2)], [b1])
    derivative = trig_derivative(p)
    assert np.allclose(derivative.cos[0], OMEGA * b1)
    assert not derivative.sin.any()

def test_derivative_keeps_order_and_matches_central_differences(rng):
    p = random_vec_poly(rng, 2, 3, OMEGA)
    derivative = trig_derivative(p)
    assert derivative.order == p.order
    t = 0.7
    errors = []
    for delta in (1e-2, 5e-3):
        central = (trig_eval(p, t + delta) - trig_eval(p, t - delta)) / (2 * delta)
        errors.append(np.linalg.norm(central - trig_eval(derivative, t)))
    assert 3.5 < errors[0] / errors[1] < 4.5

def test_linear_combo_identities(rng):
    p = random_vec_poly(rng, 3, 2, OMEGA)
    q = random_vec_poly(rng, 3, 1, OMEGA)
    assert trig_linear_combo(1.0, p, 0.0, q) == p
    assert trig_linear_combo(1.0, p, -1.0, p).is_zero()
    combo = trig_linear_combo(2.0, p, -0.5, q)
    assert combo.order == 2
    for t in rng.uniform(-5, 5, 10):
        expected = 2.0 * trig_eval(p, t) - 0.5 * trig_eval(q, t)
        assert np.allclose(trig_eval(combo, t), expected, rtol=0, atol=1e-14)

def test_linear_combo_rejects_frequency_mismatch(rng):
    try:
        trig_linear_combo(1.0, random_vec_poly(rng, 2, 1, OMEGA), 1.0, random_vec_poly(rng, 2, 1, 2 * OMEGA))
        assert False, "Combined polynomials of different base frequency"
    except FrequencyMismatchError as e:
        assert e.omega_a == OMEGA
        assert e.omega_b == 2 * OMEGA

def test_symplectic_tag_survives_linear_combination():
    rotor_a = build_rotor(table_rotor()).A
    other = build_rotor(table_rotor(k_stiff=3.0, m=2.0)).A
    combo = trig_linear_combo(0.3, rotor_a, -1.7, other)
    assert combo.algebra == SYMPLECTIC
    combo.validate()

def test_symplectic_validate_rejects_non_hamiltonian():
    p = MatTrigPoly.constant(OMEGA, np.eye(2), algebra=SYMPLECTIC)
    try:
        p.validate()
        assert False, "Validated the identity as a Hamiltonian matrix"
    except ValueError as e:
        assert 'outside sp(2)' in str(e)

def test_apply_constant_matrix_keeps_order(rng):
    a = MatTrigPoly.constant(OMEGA, rng.uniform(-1, 1, (3, 3)))
    f = random_vec_poly(rng, 3, 2, OMEGA)
    product = trig_apply(a, f)
    assert product.order == 2
    assert np.allclose(product.a0, a.a0 @ f.a0, rtol=0, atol=1e-15)
    assert np.allclose(product.cos, f.cos @ a.a0.T, rtol=0, atol=1e-15)
    assert np.allclose(product.sin, f.sin @ a.a0.T, rtol=0, atol=1e-15)

def test_cosine_squared_product_to_sum():
    cosine = MatTrigPoly(OMEGA, [[0.0]], [[[1.0]]], [[[0.0]]])
    square = trig_mat_product(cosine, cosine)
    assert square.order == 2
    assert np.allclose(square.a0, [[0.5]], rtol=0, atol=1e-16)
    assert np.allclose(square.cos, [[[0.0]], [[0.5]]], rtol=0, atol=1e-16)
    assert np.allclose(square.sin, 0.0, rtol=0, atol=1e-16)

@pytest.mark.parametrize("l, k", [(0, 2), (1, 1), (2, 3)])
def test_apply_matches_pointwise_product(rng, l, k):
    a = random_mat_poly(rng, 3, l, OMEGA)
    f = random_vec_poly(rng, 3, k, OMEGA)
    product = trig_apply(a, f)
    assert product.order == l + k
    for t in rng.uniform(-10, 10, SAMPLE_COUNT):
        assert np.allclose(trig_eval(product, t), trig_eval(a, t) @ trig_eval(f, t), rtol=0, atol=1e-13)

def test_mat_product_matches_pointwise_product(rng):
    a = random_mat_poly(rng, 2, 2, OMEGA)
    b = random_mat_poly(rng, 2, 1, OMEGA)
    product = trig_mat_product(a, b)
    assert product.order == 3
    for t in rng.uniform(-10, 10, SAMPLE_COUNT):
        assert np.allclose(trig_eval(product, t), trig_eval(a, t) @ trig_eval(b, t), rtol=0, atol=1e-13)

def test_mat_product_identity_and_constants(rng):
    a = random_mat_poly(rng, 3, 2, OMEGA)
    assert np.allclose(trig_mat_product(a, MatTrigPoly.identity(OMEGA, 3)).a0, a.a0, rtol=0, atol=1e-15)
    c = MatTrigPoly.constant(OMEGA, rng.uniform(-1, 1, (3, 3)))
    d = MatTrigPoly.constant(OMEGA, rng.uniform(-1, 1, (3, 3)))
    product = trig_mat_product(c, d)
    assert product.order == 0
    assert np.allclose(product.a0, c.a0 @ d.a0, rtol=0, atol=1e-15)

def test_integral_of_constant(rng):
    a0 = rng.uniform(-1, 1, 3)
    assert np.allclose(trig_integral_over_step(VecTrigPoly.constant(OMEGA, a0), 2.5, 0.3), 0.3 * a0, rtol=0, atol=1e-16)

def test_integral_over_full_period_cancels():
    f = VecTrigPoly(OMEGA, [0.0, 0.0], [[1.0, 0.0]], [[0.0, 0.0]])
    assert np.allclose(trig_integral_over_step(f, 0.4, 2 * math.pi / OMEGA), 0.0, rtol=0, atol=1e-15)

@pytest.mark.parametrize("t0, h", [(0.0, 0.5), (3.1, 2.0), (-1.0, 0.01), (2.0, -0.7)])
def test_integral_matches_simpson_quadrature(rng, t0, h):
    f = random_vec_poly(rng, 2, 3, OMEGA)
    grid = np.linspace(t0, t0 + h, 20001)
    values = np.array([trig_eval(f, t) for t in grid])
    assert np.allclose(trig_integral_over_step(f, t0, h), simpson(values, x=grid, axis=0), rtol=0, atol=1e-12)

def test_json_round_trip_keeps_algebra_tag():
    a = build_rotor(table_rotor()).A
    reloaded = MatTrigPoly.from_json(json.loads(json.dumps(a.to_json())))
    assert reloaded == a
    assert reloaded.algebra == SYMPLECTIC

def test_json_reports_location_of_bad_block(rng):
    data = random_vec_poly(rng, 2, 2, OMEGA).to_json()
    data['sin'][1] = [1.0, 2.0, 3.0]
    try:
        VecTrigPoly.from_json(data)
        assert False, "Parsed a coefficient block of the wrong shape"
    except TrigPolyFormatError as e:
        assert e.location == 'f.sin[1]'

def test_json_reports_missing_key():
    with pytest.raises(TrigPolyFormatError) as e:
        MatTrigPoly.from_json({'omega': 1.0, 'order': 0, 'n': 2, 'a0': [[0.0, 0.0], [0.0, 0.0]], 'cos': []})
    assert "missing key 'sin'" in str(e.value)

def test_form_matches_dimension():
    assert build_rotor(table_rotor()).A.form == SymplecticForm(4)
