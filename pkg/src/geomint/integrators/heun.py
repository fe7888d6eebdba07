from geomint.integrators.stepper import Stepper
from geomint.integrators.trajectory import ExtState
from geomint.trigpoly import trig_eval


def heun_step(system, h, state):
    """
    Explicit trapezoidal RK2 on the extended system; the time component moves
    with unit speed so the second stage sees t + h.
    """
    t, x = state.t, state.x
    k1 = trig_eval(system.A, t) @ x + trig_eval(system.f, t)
    k2 = trig_eval(system.A, t + h) @ (x + h * k1) + trig_eval(system.f, t + h)
    return ExtState(x + (h / 2) * (k1 + k2), t + h)


class Heun(Stepper):

    NAME = 'heun'

    def step(self, system, h, state):
        return heun_step(system, h, state)
