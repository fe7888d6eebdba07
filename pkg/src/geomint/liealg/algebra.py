import json
import logging
import math

import numpy as np

from geomint.densecore import SymplecticForm, hamiltonian_defect
from geomint.liealg.element import LieElement, bracket
from geomint.trigpoly import GENERAL_LINEAR, SYMPLECTIC, MatTrigPoly, VecTrigPoly, trig_eval

ZERO_ALGEBRA = 'zero'
MATRIX_ALGEBRAS = (GENERAL_LINEAR, SYMPLECTIC, ZERO_ALGEBRA)
UNBOUNDED = None

MEMBERSHIP_SAMPLES = 16
MEMBERSHIP_TOLERANCE = 1e-11
# A trig polynomial of order <= 7 vanishing at 16 equispaced points vanishes identically
MAX_SAMPLED_ORDER = 7

"""
Identifies the finite frequency subspace l_{omega,k,l} = C_{omega,l}(g) x
C_{omega,k}(R^n) x R.  A matrix order bound of 0 or UNBOUNDED names one of the
two sub-algebras; any other finite bound names a subspace that in general is
not closed under the bracket.
"""
class AlgebraSpec(object):

    def __init__(self, algebra, omega, n, vector_order, matrix_order=0):
        self.algebra = algebra
        self.omega = float(omega)
        self.n = n
        self.vector_order = vector_order
        self.matrix_order = matrix_order

    @property
    def form(self):
        return SymplecticForm(self.n) if self.algebra == SYMPLECTIC else None

    @property
    def is_subalgebra(self):
        return self.matrix_order in (0, UNBOUNDED)

    def validate(self):
        if not self.algebra in MATRIX_ALGEBRAS:
            raise ValueError(f"Unknown matrix algebra '{self.algebra}', expected one of {MATRIX_ALGEBRAS}")
        if self.n < 1:
            raise ValueError(f"Phase space dimension must be positive, got {self.n}")
        if self.algebra == SYMPLECTIC and self.n % 2:
            raise ValueError(f"Symplectic algebra needs an even dimension, got {self.n}")
        if self.vector_order < 0:
            raise ValueError(f"Vector order bound must be non-negative, got {self.vector_order}")
        if self.matrix_order is not UNBOUNDED and self.matrix_order < 0:
            raise ValueError(f"Matrix order bound must be non-negative, got {self.matrix_order}")
        if not self.omega > 0:
            raise ValueError(f"Base frequency must be positive, got {self.omega}")

    def as_json(self):
        return json.dumps({
            'algebra': self.algebra,
            'omega': self.omega,
            'n': self.n,
            'vector_order': self.vector_order,
            'matrix_order': 'unbounded' if self.matrix_order is UNBOUNDED else self.matrix_order
        }, sort_keys=True)

    def __repr__(self):
        return f"AlgebraSpec({self.as_json()})"


"""
Outcome of closure_check: four boolean sub-checks with the magnitudes behind
them, plus whether the inputs themselves conformed to the spec.
"""
class ClosureReport(object):

    def __init__(self, matrix_defect, matrix_in_algebra, matrix_order, matrix_order_ok, vector_order, vector_order_ok, alpha, alpha_zero, inputs_conform):
        self.matrix_defect = matrix_defect
        self.matrix_in_algebra = matrix_in_algebra
        self.matrix_order = matrix_order
        self.matrix_order_ok = matrix_order_ok
        self.vector_order = vector_order
        self.vector_order_ok = vector_order_ok
        self.alpha = alpha
        self.alpha_zero = alpha_zero
        self.inputs_conform = inputs_conform

    @property
    def passed(self):
        return self.matrix_in_algebra and self.matrix_order_ok and self.vector_order_ok and self.alpha_zero

    def to_json(self):
        return {
            'passed': self.passed,
            'matrix_in_algebra': self.matrix_in_algebra,
            'matrix_defect': self.matrix_defect,
            'matrix_order': self.matrix_order,
            'matrix_order_ok': self.matrix_order_ok,
            'vector_order': self.vector_order,
            'vector_order_ok': self.vector_order_ok,
            'alpha': self.alpha,
            'alpha_zero': self.alpha_zero,
            'inputs_conform': self.inputs_conform
        }

    def __repr__(self):
        return f"ClosureReport({json.dumps(self.to_json(), sort_keys=True)})"


def matrix_algebra_defect(A, algebra):
    """
    Distance of a matrix polynomial from C_omega(g).

    Symplectic membership is sampled at 16 equispaced times over one period
    when the order allows it, otherwise checked coefficient by coefficient.
    """
    if algebra == GENERAL_LINEAR:
        return 0.0
    if algebra == ZERO_ALGEBRA:
        return max(float(np.linalg.norm(block)) for block in A.coefficient_blocks())
    form = SymplecticForm(A.n)
    if A.order <= MAX_SAMPLED_ORDER:
        times = A.period * np.arange(MEMBERSHIP_SAMPLES) / MEMBERSHIP_SAMPLES
        return max(hamiltonian_defect(trig_eval(A, t), form) for t in times)
    return max(hamiltonian_defect(block, form) for block in A.coefficient_blocks())


def conforms(el, spec):
    if el.n != spec.n:
        return False
    if spec.matrix_order is not UNBOUNDED and el.A.order > spec.matrix_order:
        return False
    if el.f.order > spec.vector_order:
        return False
    return matrix_algebra_defect(el.A, spec.algebra) <= MEMBERSHIP_TOLERANCE


def closure_check(X, Y, spec):
    logger = logging.getLogger(__name__)
    inputs_conform = conforms(X, spec) and conforms(Y, spec)
    if not inputs_conform:
        logger.warning(f"Closure check inputs do not conform to {spec}")
    Z = bracket(X, Y)
    matrix_defect = matrix_algebra_defect(Z.A, spec.algebra)
    report = ClosureReport(
        matrix_defect=matrix_defect,
        matrix_in_algebra=matrix_defect <= MEMBERSHIP_TOLERANCE,
        matrix_order=Z.A.order,
        matrix_order_ok=spec.matrix_order is UNBOUNDED or Z.A.order <= spec.matrix_order,
        vector_order=Z.f.order,
        vector_order_ok=Z.f.order <= spec.vector_order,
        alpha=Z.alpha,
        alpha_zero=Z.alpha == 0.0,
        inputs_conform=inputs_conform
    )
    logger.debug(f"Closure check: {report}")
    return report


def matrix_algebra_dimension(algebra, n):
    if algebra == SYMPLECTIC:
        d = n // 2
        return d * (2 * d + 1)
    if algebra == GENERAL_LINEAR:
        return n * n
    return 0


def dimension(spec):
    """
    Dimension dim g + (2k + 1) n + 1 of l_{omega,k,0}.

    :return: The dimension, or math.inf for an unbounded matrix order
    """
    spec.validate()
    if spec.matrix_order is UNBOUNDED:
        return math.inf
    if spec.matrix_order != 0:
        raise ValueError(f"Matrix order bound {spec.matrix_order} does not define a sub-algebra, only 0 or unbounded do")
    return matrix_algebra_dimension(spec.algebra, spec.n) + (2 * spec.vector_order + 1) * spec.n + 1


def random_matrix(algebra, n, rng, scale=1.0):
    if algebra == ZERO_ALGEBRA:
        return np.zeros((n, n))
    if algebra == SYMPLECTIC:
        symmetric = rng.uniform(-scale, scale, (n, n))
        return SymplecticForm(n).matrix @ ((symmetric + symmetric.T) / 2)
    return rng.uniform(-scale, scale, (n, n))


def random_element(spec, rng, matrix_order=None, scale=1.0):
    """
    Random member of the subspace named by spec.

    :param spec: AlgebraSpec to draw from
    :param rng: numpy Generator
    :param matrix_order: Order of the matrix part (defaults to the spec bound, or 0 when unbounded)
    :param scale: Coefficient entries are drawn uniformly from [-scale, scale]
    """
    if matrix_order is None:
        matrix_order = 0 if spec.matrix_order is UNBOUNDED else spec.matrix_order
    algebra = GENERAL_LINEAR if spec.algebra == ZERO_ALGEBRA else spec.algebra
    blocks = [random_matrix(spec.algebra, spec.n, rng, scale) for _ in range(2 * matrix_order + 1)]
    A = MatTrigPoly(spec.omega, blocks[0], blocks[1:matrix_order + 1], blocks[matrix_order + 1:], algebra=algebra)
    f = VecTrigPoly(
        spec.omega,
        rng.uniform(-scale, scale, spec.n),
        rng.uniform(-scale, scale, (spec.vector_order, spec.n)),
        rng.uniform(-scale, scale, (spec.vector_order, spec.n))
    )
    return LieElement(A, f, rng.uniform(-scale, scale))
