import logging

from geomint.liealg.element import LieElement, bracket, lie_linear_combo
from geomint.trigpoly import MatTrigPoly, VecTrigPoly

# Second order coefficients of the symmetric composition phi_Y^{h/2} o phi_Z^h o phi_Y^{h/2}
ZZY_COEFFICIENT = 1.0 / 12.0
YYZ_COEFFICIENT = -1.0 / 24.0


def split_system(system):
    """
    The two splitting fields of a linear system: Y = (A, 0, 0) moves x with
    time frozen, Z = (0, f, 1) advances time and adds the forcing.
    """
    omega, n = system.A.omega, system.A.n
    Y = LieElement(system.A, VecTrigPoly.zero(omega, n), 0.0)
    Z = LieElement(MatTrigPoly.zero(omega, n, algebra=system.A.algebra), system.f, 1.0)
    return Y, Z


def bch_modified_element(Y, Z, h):
    """
    Truncated h-series of the modified field of the symmetric Strang
    composition.  Each term is already multiplied by h^order, so the modified
    field is the plain sum of the returned elements.

    :param Y: Field flowed for half steps on both sides
    :param Z: Field flowed for the full step in the middle
    :param h: Step size
    :return: List of (order, element) pairs for orders 0 and 2
    """
    leading = Y + Z
    zzy = bracket(Z, bracket(Z, Y))
    yyz = bracket(Y, bracket(Y, Z))
    second = lie_linear_combo(h * h * ZZY_COEFFICIENT, zzy, h * h * YYZ_COEFFICIENT, yyz)
    logging.getLogger(__name__).debug(f"Modified field for h={h}: second order term {second}")
    return [(0, leading), (2, second)]


def modified_element(Y, Z, h):
    terms = bch_modified_element(Y, Z, h)
    total = terms[0][1]
    for _, term in terms[1:]:
        total = total + term
    return total
