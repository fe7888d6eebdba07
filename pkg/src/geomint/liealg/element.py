import logging

import numpy as np
from scipy.integrate import solve_ivp

from geomint.trigpoly import (
    MatTrigPoly, VecTrigPoly, check_frequencies, trig_apply, trig_derivative,
    trig_eval, trig_linear_combo, trig_mat_product
)

"""
An element (A, f, alpha) of the Lie algebra of affine, periodic, time dependent
vector fields X(x, t) = (A(t) x + f(t), alpha) on the extended phase space.
"""
class LieElement(object):

    def __init__(self, A, f, alpha):
        if not isinstance(A, MatTrigPoly) or not isinstance(f, VecTrigPoly):
            raise ValueError(f"Lie elements need a matrix and a vector polynomial, got {type(A).__name__} and {type(f).__name__}")
        check_frequencies(A, f)
        if A.n != f.n:
            raise ValueError(f"Matrix part acts on dimension {A.n} but vector part has dimension {f.n}")
        self.A = A
        self.f = f
        self.alpha = float(alpha)

    @property
    def n(self):
        return self.f.n

    @property
    def omega(self):
        return self.A.omega

    @classmethod
    def zero(cls, omega, n, algebra=None):
        A = MatTrigPoly.zero(omega, n) if algebra is None else MatTrigPoly.zero(omega, n, algebra=algebra)
        return cls(A, VecTrigPoly.zero(omega, n), 0.0)

    def is_zero(self):
        return self.A.is_zero() and self.f.is_zero() and self.alpha == 0.0

    def __add__(self, other):
        return lie_linear_combo(1.0, self, 1.0, other)

    def __sub__(self, other):
        return lie_linear_combo(1.0, self, -1.0, other)

    def __neg__(self):
        return lie_linear_combo(-1.0, self, 0.0, self)

    def __rmul__(self, scalar):
        return lie_linear_combo(float(scalar), self, 0.0, self)

    def __eq__(self, other):
        return isinstance(other, LieElement) and self.A == other.A and self.f == other.f and self.alpha == other.alpha

    def __hash__(self):
        return hash((self.A, self.f, self.alpha))

    def __repr__(self):
        return f"LieElement(A order {self.A.order}, f order {self.f.order}, alpha={self.alpha})"

    def to_json(self):
        return {'A': self.A.to_json(), 'f': self.f.to_json(), 'alpha': self.alpha}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or not 'alpha' in data:
            raise ValueError("Lie element JSON needs 'A', 'f' and 'alpha' keys")
        return cls(MatTrigPoly.from_json(data.get('A'), 'A'), VecTrigPoly.from_json(data.get('f'), 'f'), data['alpha'])


def eval_field(el, x, t):
    x = np.asarray(x, dtype=float)
    if x.shape != (el.n,):
        raise ValueError(f"State of shape {x.shape} does not match element dimension {el.n}")
    return trig_eval(el.A, t) @ x + trig_eval(el.f, t), el.alpha


def lie_linear_combo(a, X, b, Y):
    return LieElement(
        trig_linear_combo(a, X.A, b, Y.A),
        trig_linear_combo(a, X.f, b, Y.f),
        a * X.alpha + b * Y.alpha
    )


def bracket(X, Y):
    """
    Commutator of vector fields DX.Y - DY.X expressed on triples:

        [(A, f, a), (B, g, b)] = (AB - BA + b A' - a B', A g - B f + b f' - a g', 0)

    :param X: Left element (A, f, alpha)
    :param Y: Right element (B, g, beta)
    :return: The bracket, whose alpha part is always 0
    """
    check_frequencies(X.A, Y.A)
    if X.n != Y.n:
        raise ValueError(f"Cannot bracket elements of dimensions {X.n} and {Y.n}")
    commutator = trig_linear_combo(1.0, trig_mat_product(X.A, Y.A), -1.0, trig_mat_product(Y.A, X.A))
    matrix_part = trig_linear_combo(
        1.0, commutator,
        1.0, trig_linear_combo(Y.alpha, trig_derivative(X.A), -X.alpha, trig_derivative(Y.A))
    )
    if X.A.algebra == Y.A.algebra:
        matrix_part = matrix_part.with_algebra(X.A.algebra)
    vector_part = trig_linear_combo(
        1.0, trig_linear_combo(1.0, trig_apply(X.A, Y.f), -1.0, trig_apply(Y.A, X.f)),
        1.0, trig_linear_combo(Y.alpha, trig_derivative(X.f), -X.alpha, trig_derivative(Y.f))
    )
    return LieElement(matrix_part, vector_part, 0.0)


def element_norm(el):
    blocks = el.A.coefficient_blocks() + el.f.coefficient_blocks()
    return max(float(np.linalg.norm(block)) for block in blocks) + abs(el.alpha)


def jacobi_defect(X, Y, Z):
    cyclic = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    return element_norm(cyclic)


def element_flow(el, s, x, t, rtol=1e-12, atol=1e-14):
    """
    Flow of an arbitrary element over a duration s (which may be negative),
    integrated numerically with an 8th order Dormand-Prince scheme.

    :return: The pair (x, t) after the flow
    """
    x = np.asarray(x, dtype=float)
    if s == 0:
        return x.copy(), t
    def rhs(tau, z):
        velocity, speed = eval_field(el, z[:-1], z[-1])
        return np.append(velocity, speed)
    solution = solve_ivp(rhs, (0.0, s), np.append(x, t), method='DOP853', rtol=rtol, atol=atol)
    if not solution.success:
        raise ValueError(f"Flow integration failed over duration {s}: {solution.message}")
    end = solution.y[:, -1]
    logging.getLogger(__name__).debug(f"Flowed {el} over {s} in {solution.nfev} evaluations")
    return end[:-1], end[-1]


def flow_commutator(X, Y, s, x, t):
    """
    Four-flow commutator phi_X^s o phi_Y^s o phi_X^-s o phi_Y^-s applied to
    (x, t); its displacement is s^2 [X, Y](x, t) + O(s^3).
    """
    z = (x, t)
    for el, duration in ((Y, -s), (X, -s), (Y, s), (X, s)):
        z = element_flow(el, duration, z[0], z[1])
    return z
