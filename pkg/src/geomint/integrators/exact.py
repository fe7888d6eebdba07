from geomint.integrators.flows import exact_reference
from geomint.integrators.stepper import Stepper


class ExactFlow(Stepper):

    NAME = 'exact'
    GEOMETRIC = True

    def step(self, system, h, state):
        return exact_reference(system, state, h)

    def validate(self, system):
        system.require_constant_matrix('Exact reference flow')
