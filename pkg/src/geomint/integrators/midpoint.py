import numpy as np

from geomint.densecore import lin_solve
from geomint.integrators.stepper import Stepper
from geomint.integrators.trajectory import ExtState
from geomint.trigpoly import trig_eval


def implicit_midpoint_step(system, h, state):
    """
    Non-autonomous implicit midpoint rule with A and f frozen at t + h/2:

        (I - h/2 A_m) x+ = (I + h/2 A_m) x + h f_m

    :raises SingularMatrixError: When I - h/2 A_m is singular, i.e. h is too large
    """
    t_mid = state.t + h / 2
    a_mid = trig_eval(system.A, t_mid)
    identity = np.eye(system.n)
    rhs = (identity + (h / 2) * a_mid) @ state.x + h * trig_eval(system.f, t_mid)
    return ExtState(lin_solve(identity - (h / 2) * a_mid, rhs), state.t + h)


class ImplicitMidpoint(Stepper):

    NAME = 'midpoint'
    GEOMETRIC = True

    def step(self, system, h, state):
        return implicit_midpoint_step(system, h, state)
