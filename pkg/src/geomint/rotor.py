import json
import logging
import math

import numpy as np

from geomint.integrators.driver import integrate
from geomint.integrators.system import LinearSystem
from geomint.liealg.algebra import AlgebraSpec
from geomint.trigpoly import SYMPLECTIC, MatTrigPoly, VecTrigPoly

# Relative distance |omega - natural| below which the beat closed form is refused
RESONANCE_GUARD = 1e-9
# Sampling slack when comparing a trajectory span with the beat period
SPAN_TOLERANCE = 1e-9


class NearResonanceError(ValueError):

    def __init__(self, omega, natural):
        super().__init__(f"Shaft speed {omega} is within {RESONANCE_GUARD:g} relative of the natural frequency {natural}, the secular solution is not supported")
        self.omega = omega
        self.natural = natural


class SpanTooShortError(ValueError):

    def __init__(self, span, required_span):
        super().__init__(f"Trajectory spans {span:g} s but the envelope needs at least one beat period of {required_span:g} s")
        self.span = span
        self.required_span = required_span


"""
Data of the unbalanced Jeffcott-style rotor: a disc of mass m on a shaft of
stiffness k_stiff, spinning at omega with unbalance eps, released from x0 =
(q1, q2, p1, p2).  Defaults are the resonant benchmark configuration.
"""
class RotorParams(object):

    def __init__(self, m=1.0, k_stiff=1.0, omega=1.02, eps=0.1, x0=(0.0, 0.0, 0.0, 0.0)):
        self.m = float(m)
        self.k_stiff = float(k_stiff)
        self.omega = float(omega)
        self.eps = float(eps)
        self.x0 = [float(value) for value in x0]

    @property
    def natural_frequency(self):
        return math.sqrt(self.k_stiff / self.m)

    @property
    def beat_period(self):
        detuning = abs(self.omega - self.natural_frequency)
        return 2 * math.pi / detuning if detuning else math.inf

    @property
    def forcing_amplitude(self):
        return self.eps * self.omega ** 2

    def with_omega(self, omega):
        return RotorParams(self.m, self.k_stiff, omega, self.eps, self.x0)

    def validate(self):
        if not self.m > 0:
            raise ValueError(f"Rotor mass must be positive, got {self.m}")
        if not self.k_stiff > 0:
            raise ValueError(f"Shaft stiffness must be positive, got {self.k_stiff}")
        if not self.omega > 0:
            raise ValueError(f"Shaft speed must be positive, got {self.omega}")
        if not self.eps >= 0:
            raise ValueError(f"Unbalance must be non-negative, got {self.eps}")
        if len(self.x0) != 4 or not all(math.isfinite(value) for value in self.x0):
            raise ValueError(f"Initial state must hold four finite values (q1, q2, p1, p2), got {self.x0}")

    def metadata(self):
        return {
            'rotor': self.to_json(),
            'natural_frequency': self.natural_frequency,
            'beat_period': self.beat_period
        }

    def to_json(self):
        return {'m': self.m, 'k': self.k_stiff, 'omega': self.omega, 'eps': self.eps, 'x0': list(self.x0)}

    def as_json(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=4)

    @staticmethod
    def is_rotor_json(data):
        return isinstance(data, dict) and 'omega' in data and 'eps' in data and not 'A' in data

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise ValueError(f"Rotor parameters must be an object, found {type(data).__name__}")
        missing = [key for key in ('m', 'k', 'omega', 'eps') if not key in data]
        if missing:
            raise ValueError(f"Rotor parameters are missing {missing}")
        try:
            params = cls(data['m'], data['k'], data['omega'], data['eps'], data.get('x0', (0.0, 0.0, 0.0, 0.0)))
        except (TypeError, ValueError) as e:
            raise ValueError(f"Rotor parameters are not numeric: {e}")
        params.validate()
        return params

    def __repr__(self):
        return f"RotorParams(m={self.m}, k={self.k_stiff}, omega={self.omega}, eps={self.eps}, x0={self.x0})"


def rotor_matrix(p):
    return np.array([
        [0.0, 0.0, 1.0 / p.m, 0.0],
        [0.0, 0.0, 0.0, 1.0 / p.m],
        [-p.k_stiff, 0.0, 0.0, 0.0],
        [0.0, -p.k_stiff, 0.0, 0.0]
    ])


def build_rotor(p):
    """
    Constant Hamiltonian matrix part and first harmonic forcing
    f(t) = eps omega^2 (0, 0, -cos omega t, sin omega t).

    :param p: RotorParams
    :return: LinearSystem tagged symplectic on R^4
    """
    p.validate()
    amplitude = p.forcing_amplitude
    A = MatTrigPoly.constant(p.omega, rotor_matrix(p), algebra=SYMPLECTIC)
    f = VecTrigPoly(p.omega, np.zeros(4), [[0.0, 0.0, -amplitude, 0.0]], [[0.0, 0.0, 0.0, amplitude]])
    system = LinearSystem(A, f)
    system.validate()
    logging.getLogger(__name__).debug(f"Built rotor system from {p}")
    return system


def rotor_algebra_spec(p):
    return AlgebraSpec(SYMPLECTIC, p.omega, 4, 1, 0)


def rotor_element(p):
    return build_rotor(p).element()


def beat_amplitude(p):
    natural = p.natural_frequency
    if abs(p.omega - natural) < RESONANCE_GUARD * natural:
        raise NearResonanceError(p.omega, natural)
    return (p.eps / p.m) * p.omega ** 2 / (p.omega ** 2 - natural ** 2)


def exact_envelope(p):
    return 2 * abs(beat_amplitude(p))


def closed_form_solution(p, t):
    """
    State of the rotor at time t from the variation of constants formula for
    two uncoupled forced oscillators, with the free oscillation from x0
    superposed.

    :raises NearResonanceError: When omega is too close to the natural frequency
    """
    p.validate()
    c = beat_amplitude(p)
    m, omega, natural = p.m, p.omega, p.natural_frequency
    q1_0, q2_0, p1_0, p2_0 = p.x0
    cos_n, sin_n = math.cos(natural * t), math.sin(natural * t)
    cos_f, sin_f = math.cos(omega * t), math.sin(omega * t)
    q1 = c * (cos_f - cos_n) + q1_0 * cos_n + p1_0 / (m * natural) * sin_n
    q2 = c * ((omega / natural) * sin_n - sin_f) + q2_0 * cos_n + p2_0 / (m * natural) * sin_n
    p1 = m * c * (natural * sin_n - omega * sin_f) - m * natural * q1_0 * sin_n + p1_0 * cos_n
    p2 = m * c * omega * (cos_n - cos_f) - m * natural * q2_0 * sin_n + p2_0 * cos_n
    return np.array([q1, q2, p1, p2])


def simulate_rotor(p, method, h, t_end, t0=0.0):
    return integrate(method, build_rotor(p), p.x0, t0, t_end, h, metadata=p.metadata())


def envelope_amplitude(traj, component, min_span=None):
    """
    Largest |x_component| over a trajectory that covers at least one beat
    period.

    :param traj: Trajectory to measure
    :param component: Index into the state vector (0 is q1)
    :param min_span: Required span; defaults to the beat period in the trajectory metadata
    """
    required = min_span if min_span is not None else traj.metadata.get('beat_period')
    if required is not None and traj.span < required * (1 - SPAN_TOLERANCE):
        raise SpanTooShortError(traj.span, required)
    return float(np.max(np.abs(traj.component(component))))


def resonance_sweep(base, omega_grid, methods, h, t_end):
    """
    Envelope of q1 per method for each shaft speed, next to the closed form
    envelope.  A failing point is recorded and the sweep moves on.

    :return: List of rows {'omega', 'exact_envelope', 'envelopes', 'failures'}
    """
    logger = logging.getLogger(__name__)
    rows = []
    for omega in omega_grid:
        params = base.with_omega(omega)
        row = {'omega': float(omega), 'exact_envelope': None, 'envelopes': {}, 'failures': {}}
        try:
            row['exact_envelope'] = exact_envelope(params)
        except ValueError as e:
            row['failures']['closed_form'] = str(e)
        for method in methods:
            try:
                row['envelopes'][method] = envelope_amplitude(simulate_rotor(params, method, h, t_end), 0)
            except (ArithmeticError, ValueError) as e:
                logger.warning(f"Sweep point omega={omega} failed for {method}: {e}")
                row['envelopes'][method] = None
                row['failures'][method] = str(e)
        logger.info(f"Sweep point omega={omega}: {row['envelopes']}")
        rows.append(row)
    return rows
