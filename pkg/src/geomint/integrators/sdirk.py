import math

import numpy as np

from geomint.densecore import lin_solve
from geomint.integrators.stepper import Stepper
from geomint.integrators.trajectory import ExtState
from geomint.trigpoly import trig_eval

# L-stable two stage SDIRK of order 2
GAMMA = 1.0 - 1.0 / math.sqrt(2.0)


def stability_function(z):
    """
    R(z) = (1 + (1 - 2 gamma) z) / (1 - gamma z)^2, the step map on x' = lambda x
    with z = h lambda.  |R(z)| -> 0 as z -> infinity.
    """
    return (1 + (1 - 2 * GAMMA) * z) / (1 - GAMMA * z) ** 2


def dissipative_irk2_step(system, h, state):
    """
    Butcher tableau c = (gamma, 1), a = [[gamma, 0], [1 - gamma, gamma]],
    b = (1 - gamma, gamma).  Each stage solves one n x n linear system.

    :raises SingularMatrixError: When a stage matrix I - h gamma A is singular
    """
    t, x = state.t, state.x
    identity = np.eye(system.n)
    a1 = trig_eval(system.A, t + GAMMA * h)
    k1 = lin_solve(identity - h * GAMMA * a1, a1 @ x + trig_eval(system.f, t + GAMMA * h))
    a2 = trig_eval(system.A, t + h)
    k2 = lin_solve(identity - h * GAMMA * a2, a2 @ (x + h * (1 - GAMMA) * k1) + trig_eval(system.f, t + h))
    return ExtState(x + h * ((1 - GAMMA) * k1 + GAMMA * k2), t + h)


class DissipativeIrk2(Stepper):

    NAME = 'sdirk2'

    def step(self, system, h, state):
        return dissipative_irk2_step(system, h, state)
