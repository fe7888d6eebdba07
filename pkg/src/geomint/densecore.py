import logging
import math
import warnings

import numpy as np
import scipy.linalg

"""
Small dense linear algebra (n up to a few dozen) used by the steppers, the
exact reference flows and the structure checks.  Matrices are plain numpy
arrays; every operation validates its inputs through as_matrix().
"""

PIVOT_TOLERANCE = 1e-13


class NumericalError(ArithmeticError):
    pass


class SingularMatrixError(NumericalError):

    def __init__(self, pivot, message):
        super().__init__(message)
        self.pivot = pivot


class ConvergenceError(NumericalError):
    pass


def as_matrix(a, name='matrix'):
    matrix = np.array(a, dtype=float)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-d {name}, got shape {matrix.shape}")
    if matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise ValueError(f"Empty {name} of shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"Non-finite entries in {name}")
    return matrix


def as_square(a, name='matrix'):
    matrix = as_matrix(a, name)
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square {name}, got shape {matrix.shape}")
    return matrix


"""
The canonical symplectic structure J = [[0, I_d], [-I_d, 0]] on R^{2d}.
"""
class SymplecticForm(object):

    def __init__(self, dimension):
        if dimension < 2 or dimension % 2:
            raise ValueError(f"Symplectic forms need an even dimension, got {dimension}")
        self.dimension = dimension
        half = dimension // 2
        j = np.zeros((dimension, dimension))
        j[:half, half:] = np.eye(half)
        j[half:, :half] = -np.eye(half)
        j.flags.writeable = False
        self.matrix = j

    def __eq__(self, other):
        return isinstance(other, SymplecticForm) and self.dimension == other.dimension

    def __hash__(self):
        return hash(('symplectic', self.dimension))

    def __repr__(self):
        return f"SymplecticForm({self.dimension})"


def mat_mul(a, b):
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"Cannot multiply {a.shape} by {b.shape}")
    return a @ b


def lin_solve(a, b):
    """
    Solve a.X = b with partial pivoting.

    :param a: Square coefficient matrix
    :param b: Right hand side, a vector or a matrix with a.rows rows
    :return: X with the same shape as b
    """
    a = as_square(a)
    rhs = np.array(b, dtype=float)
    if rhs.shape[0] != a.shape[0]:
        raise ValueError(f"Right hand side has {rhs.shape[0]} rows, expected {a.shape[0]}")
    scale = max(np.max(np.linalg.norm(a, axis=0)), np.finfo(float).tiny)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivot = np.min(np.abs(np.diag(lu)))
    if pivot < PIVOT_TOLERANCE * scale:
        raise SingularMatrixError(pivot, f"Matrix is numerically singular (pivot {pivot:.3e}, scale {scale:.3e})")
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def expm(a):
    return scipy.linalg.expm(as_square(a))


def mat_commutator(a, b):
    a = as_square(a)
    b = as_square(b)
    if a.shape != b.shape:
        raise ValueError(f"Commutator of mismatched shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def _check_form(m, j):
    if m.shape[0] != j.dimension:
        raise ValueError(f"Matrix of size {m.shape[0]} does not match symplectic form of dimension {j.dimension}")


def symplectic_defect(m, j):
    m = as_square(m)
    _check_form(m, j)
    return float(np.linalg.norm(m.T @ j.matrix @ m - j.matrix, 'fro'))


def hamiltonian_defect(a, j):
    a = as_square(a)
    _check_form(a, j)
    return float(np.linalg.norm(a.T @ j.matrix + j.matrix @ a, 'fro'))


def spectral_radius(m):
    m = as_square(m)
    try:
        eigenvalues = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Eigenvalue iteration did not converge for {m.shape} matrix: {e}")
    radius = float(np.max(np.abs(eigenvalues)))
    if not math.isfinite(radius):
        raise ConvergenceError(f"Spectral radius is not finite for {m.shape} matrix")
    logging.getLogger(__name__).debug(f"Spectral radius {radius:.16g} for {m.shape} matrix")
    return radius
