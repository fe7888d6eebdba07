"""
Common shape of the one-step methods.  Subclasses provide NAME, whether the
method is GEOMETRIC (stays in the symplectic/affine structure group) and the
step() map on extended states.
"""
class Stepper(object):

    NAME = None
    GEOMETRIC = False

    def step(self, system, h, state):
        """
        Advance an extended state by one step.

        :param system: LinearSystem being integrated
        :param h: Step size (may be negative for the reversible methods)
        :param state: ExtState at the start of the step
        :return: ExtState at time state.t + h
        """
        raise NotImplementedError(f"{self.__class__.__name__} does not implement step()")

    def validate(self, system):
        """
        Reject systems the method cannot integrate.  The default accepts any
        system.
        """
        pass

    def __repr__(self):
        return f"{self.__class__.__name__}({self.NAME})"
