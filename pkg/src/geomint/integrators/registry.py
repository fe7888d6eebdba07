from geomint.integrators.exact import ExactFlow
from geomint.integrators.heun import Heun
from geomint.integrators.midpoint import ImplicitMidpoint
from geomint.integrators.sdirk import DissipativeIrk2
from geomint.integrators.splitting import StrangSplitting

METHODS = {
    stepper.NAME: stepper for stepper in (ExactFlow, StrangSplitting, ImplicitMidpoint, Heun, DissipativeIrk2)
}
EXACT = ExactFlow.NAME


class UnknownMethodError(ValueError):

    def __init__(self, name):
        super().__init__(f"Unknown method '{name}', expected one of: {', '.join(METHODS)}")
        self.name = name


def get_stepper(name):
    if isinstance(name, str) and name in METHODS:
        return METHODS[name]()
    raise UnknownMethodError(name)
