import math

import numpy as np
import pytest

from test_utils.systems import rotor_params

from geomint.integrators.sdirk import GAMMA, stability_function
from geomint.rotor import beat_amplitude, envelope_amplitude, exact_envelope, simulate_rotor

COARSE_STEP = 0.5
LONG_RUN = 1000.0
STEPS = int(LONG_RUN / COARSE_STEP)
DISCRETE_RESPONSE_TOLERANCE = 1e-8
TAIL_START = 0.75 * LONG_RUN

"""
The q1, p1 pair of the rotor is the scalar oscillator u' = -i w u + g(t) with
u = q1 + i p1 / (m w), w the natural frequency and
g(t) = -i F / (2 m w) (exp(i W t) + exp(-i W t)), F = eps W^2.  A one-step
method turns it into u+ = R u + sum_nu G_nu exp(i nu t), whose solution from
rest is

    u_n = sum_nu P_nu (exp(i nu t_n) - R^n),    P_nu = G_nu / (exp(i nu h) - R)

These helpers return (R, {nu: G_nu}) for the two implicit methods.
"""
def scalar_oscillator(p, h):
    natural = p.natural_frequency
    z = -1j * natural * h
    forcing = -1j * p.forcing_amplitude / (2 * p.m * natural)
    return z, forcing, (p.omega, -p.omega)

def midpoint_recurrence(p, h):
    z, forcing, frequencies = scalar_oscillator(p, h)
    R = (1 + z / 2) / (1 - z / 2)
    gains = {nu: h * forcing * np.exp(0.5j * nu * h) / (1 - z / 2) for nu in frequencies}
    return R, gains

def sdirk_recurrence(p, h):
    z, forcing, frequencies = scalar_oscillator(p, h)
    d = 1 - GAMMA * z
    gains = {
        nu: h * forcing * ((1 - GAMMA) * np.exp(1j * nu * GAMMA * h) / d ** 2 + GAMMA * np.exp(1j * nu * h) / d)
        for nu in frequencies
    }
    return stability_function(z), gains

def particular_coefficients(R, gains, h):
    return {nu: gain / (np.exp(1j * nu * h) - R) for nu, gain in gains.items()}

def discrete_q1(R, gains, h, steps):
    n = np.arange(steps + 1)
    t = n * h
    u = sum(coeff * (np.exp(1j * nu * t) - R ** n) for nu, coeff in particular_coefficients(R, gains, h).items())
    return u.real

def forced_q1_amplitude(R, gains, h):
    coeffs = particular_coefficients(R, gains, h)
    positive, negative = (coeffs[nu] for nu in sorted(coeffs, reverse=True))
    return abs(positive + np.conj(negative))

@pytest.fixture
def coarse_runs(rotor_params):
    return {method: simulate_rotor(rotor_params, method, COARSE_STEP, LONG_RUN) for method in ('exact', 'strang', 'midpoint', 'heun', 'sdirk2')}

def test_exact_flow_keeps_the_beat_envelope(coarse_runs, rotor_params):
    ratio = envelope_amplitude(coarse_runs['exact'], 0) / exact_envelope(rotor_params)
    assert 0.95 <= ratio <= 1.0 + 1e-9

def test_strang_keeps_the_beat_envelope(coarse_runs, rotor_params):
    ratio = envelope_amplitude(coarse_runs['strang'], 0) / exact_envelope(rotor_params)
    assert 0.95 <= ratio <= 1.05

def test_midpoint_follows_its_discrete_response(coarse_runs, rotor_params):
    R, gains = midpoint_recurrence(rotor_params, COARSE_STEP)
    assert math.isclose(abs(R), 1.0, abs_tol=1e-15)
    q1 = coarse_runs['midpoint'].component(0)
    assert np.max(np.abs(q1 - discrete_q1(R, gains, COARSE_STEP, STEPS))) <= DISCRETE_RESPONSE_TOLERANCE

def test_midpoint_detunes_the_resonance(coarse_runs, rotor_params):
    # Cayley rotation 2 atan(h/2) per step doubles the detuning from W and halves the forced amplitude
    R, gains = midpoint_recurrence(rotor_params, COARSE_STEP)
    beat = forced_q1_amplitude(R, gains, COARSE_STEP) / abs(beat_amplitude(rotor_params))
    assert 0.475 <= beat <= 0.482
    ratio = envelope_amplitude(coarse_runs['midpoint'], 0) / exact_envelope(rotor_params)
    assert 0.97 * beat <= ratio <= beat + 1e-9

def test_strang_is_closer_than_midpoint(coarse_runs, rotor_params):
    target = exact_envelope(rotor_params)
    strang = abs(envelope_amplitude(coarse_runs['strang'], 0) - target)
    midpoint = abs(envelope_amplitude(coarse_runs['midpoint'], 0) - target)
    assert strang < midpoint

def test_heun_blows_up(coarse_runs, rotor_params):
    assert envelope_amplitude(coarse_runs['heun'], 0) > 10 * exact_envelope(rotor_params)

def test_sdirk_follows_its_discrete_response(coarse_runs, rotor_params):
    R, gains = sdirk_recurrence(rotor_params, COARSE_STEP)
    q1 = coarse_runs['sdirk2'].component(0)
    assert np.max(np.abs(q1 - discrete_q1(R, gains, COARSE_STEP, STEPS))) <= DISCRETE_RESPONSE_TOLERANCE

def test_sdirk_forced_response_survives_the_damping(rotor_params):
    R, gains = sdirk_recurrence(rotor_params, COARSE_STEP)
    floor = forced_q1_amplitude(R, gains, COARSE_STEP) / exact_envelope(rotor_params)
    assert 0.31 <= floor <= 0.34
    assert 0.64 <= abs(R) ** STEPS <= 0.65

def test_sdirk_damps_the_tail(coarse_runs, rotor_params):
    traj = coarse_runs['sdirk2']
    tail = traj.times >= TAIL_START
    ratio = np.max(np.abs(traj.component(0)[tail])) / exact_envelope(rotor_params)
    assert 0.52 <= ratio <= 0.56
    assert ratio < envelope_amplitude(traj, 0) / exact_envelope(rotor_params)

def test_all_runs_share_the_grid(coarse_runs):
    grids = [traj.times for traj in coarse_runs.values()]
    for grid in grids:
        assert len(grid) == STEPS + 1
        assert np.array_equal(grid, grids[0])
    assert math.isclose(grids[0][-1], LONG_RUN)
