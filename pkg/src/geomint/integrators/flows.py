import numpy as np

from geomint.integrators.trajectory import ExtState
from geomint.trigpoly import trig_integral_over_step


def flow_A_exact(system, s, state):
    """
    Exact flow of the frozen-time field (A x, 0): x <- expm(s A) x.
    """
    system.require_constant_matrix('Exact matrix flow')
    if s == 0:
        return state
    return ExtState(system.propagator(s) @ state.x, state.t)


def flow_f_exact(system, s, state):
    """
    Exact flow of the forcing field (f(t), 1): x <- x + int_t^{t+s} f.
    """
    return ExtState(state.x + trig_integral_over_step(system.f, state.t, s), state.t + s)


def initial_augmented(system, state):
    harmonics = system.omega * np.arange(1, system.f.order + 1) * state.t
    trig = np.column_stack([np.cos(harmonics), np.sin(harmonics)]).ravel()
    return np.concatenate([state.x, trig, [1.0]])


def exact_reference(system, state, s):
    """
    Exact solution for a constant matrix part and a finite order forcing,
    via the matrix exponential of the augmented autonomous system.

    :param system: LinearSystem with constant A
    :param state: ExtState to start from
    :param s: Duration to flow for
    :return: ExtState at state.t + s
    """
    system.require_constant_matrix('Exact reference flow')
    z = system.augmented_propagator(s) @ initial_augmented(system, state)
    return ExtState(z[:system.n], state.t + s)
