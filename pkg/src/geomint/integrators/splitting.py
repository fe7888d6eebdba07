from deprecated import deprecated

from geomint.integrators.flows import flow_A_exact, flow_f_exact
from geomint.integrators.stepper import Stepper


def strang_step(system, h, state):
    """
    Symmetric splitting phi_Y^{h/2} o phi_Z^h o phi_Y^{h/2} with Y = (A x, 0)
    and Z = (f(t), 1).  Both sub-flows are exact, so the step is the exact
    flow of the modified field returned by bch_modified_element().
    """
    half = flow_A_exact(system, h / 2, state)
    return flow_A_exact(system, h / 2, flow_f_exact(system, h, half))


@deprecated(version='0.2.0', reason="Use strang_step, the splitting is the same map")
def stormer_verlet_step(system, h, state):
    return strang_step(system, h, state)


class StrangSplitting(Stepper):

    NAME = 'strang'
    GEOMETRIC = True

    def step(self, system, h, state):
        return strang_step(system, h, state)

    def validate(self, system):
        system.require_constant_matrix('Strang splitting')
