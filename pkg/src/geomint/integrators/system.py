import functools
import json
import logging

import numpy as np

from geomint.densecore import expm
from geomint.liealg.element import LieElement
from geomint.trigpoly import MatTrigPoly, TrigPolyFormatError, VecTrigPoly, check_frequencies


# Distinct (system, duration) pairs kept per propagator cache
PROPAGATOR_CACHE_SIZE = 64


class SystemFileError(ValueError):

    def __init__(self, location, message):
        super().__init__(f"{location}: {message}")
        self.location = location


"""
The periodic, non-autonomous linear system x' = A(t) x + f(t).  Propagators of
the constant matrix part are memoized per (system, step size) in bounded
module level caches and returned read-only, so instances stay immutable.
"""
class LinearSystem(object):

    def __init__(self, A, f):
        if not isinstance(A, MatTrigPoly) or not isinstance(f, VecTrigPoly):
            raise ValueError(f"A linear system needs a matrix and a vector polynomial, got {type(A).__name__} and {type(f).__name__}")
        check_frequencies(A, f)
        if A.n != f.n:
            raise ValueError(f"Matrix part acts on dimension {A.n} but forcing has dimension {f.n}")
        self.A = A
        self.f = f

    @property
    def omega(self):
        return self.A.omega

    @property
    def n(self):
        return self.A.n

    @property
    def algebra(self):
        return self.A.algebra

    @property
    def constant_matrix(self):
        return self.A.order == 0

    def validate(self):
        self.A.validate()

    def homogeneous(self):
        return LinearSystem(self.A, VecTrigPoly.zero(self.omega, self.n))

    def element(self):
        return LieElement(self.A, self.f, 1.0)

    def require_constant_matrix(self, operation):
        if not self.constant_matrix:
            raise ValueError(f"{operation} needs a constant matrix part, got A of order {self.A.order}")

    def propagator(self, s):
        """
        expm(s A) for a constant matrix part, cached per duration.
        """
        self.require_constant_matrix('Exact matrix flow')
        return _cached_propagator(self, s)

    def augmented_generator(self):
        """
        Generator M of the autonomous system z' = M z on
        z = (x, c_1, s_1, ..., c_k, s_k, 1) with c_i = cos(i omega t) and
        s_i = sin(i omega t).
        """
        self.require_constant_matrix('Augmented generator')
        n, k = self.n, self.f.order
        size = n + 2 * k + 1
        generator = np.zeros((size, size))
        generator[:n, :n] = self.A.a0
        generator[:n, -1] = self.f.a0
        for i in range(k):
            c, s = n + 2 * i, n + 2 * i + 1
            rate = (i + 1) * self.omega
            generator[:n, c] = self.f.cos[i]
            generator[:n, s] = self.f.sin[i]
            generator[c, s] = -rate
            generator[s, c] = rate
        return generator

    def augmented_propagator(self, s):
        self.require_constant_matrix('Augmented propagator')
        return _cached_augmented_propagator(self, s)

    def __eq__(self, other):
        return isinstance(other, LinearSystem) and self.A == other.A and self.f == other.f

    def __hash__(self):
        return hash((self.A, self.f))

    def __repr__(self):
        return f"LinearSystem(n={self.n}, omega={self.omega}, algebra={self.algebra}, A order {self.A.order}, f order {self.f.order})"

    def to_json(self):
        return {'A': self.A.to_json(), 'f': self.f.to_json()}

    def as_json(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=4)

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise TrigPolyFormatError('$', f"expected an object, found {type(data).__name__}")
        for key in ('A', 'f'):
            if not key in data:
                raise TrigPolyFormatError('$', f"missing key '{key}'")
        return cls(MatTrigPoly.from_json(data['A'], 'A'), VecTrigPoly.from_json(data['f'], 'f'))


@functools.lru_cache(maxsize=PROPAGATOR_CACHE_SIZE)
def _cached_propagator(system, s):
    logging.getLogger(__name__).debug(f"Propagator cache miss for s={s!r}")
    return _read_only(expm(s * system.A.a0))


@functools.lru_cache(maxsize=PROPAGATOR_CACHE_SIZE)
def _cached_augmented_propagator(system, s):
    logging.getLogger(__name__).debug(f"Augmented propagator cache miss for s={s!r}")
    return _read_only(expm(s * system.augmented_generator()))


def _read_only(matrix):
    matrix.flags.writeable = False
    return matrix

def read_json_file(path):
    """
    Load a JSON document, reporting parse failures with their line and column.

    :param path: Location of the file on disk
    :return: The decoded document
    """
    try:
        with open(path, 'r') as json_file:
            return json.load(json_file)
    except json.JSONDecodeError as e:
        raise SystemFileError(f"{path}:{e.lineno}:{e.colno}", e.msg)
    except OSError as e:
        raise SystemFileError(path, f"cannot read file ({e.strerror})")


def load_system_file(path):
    data = read_json_file(path)
    try:
        system = LinearSystem.from_json(data)
    except TrigPolyFormatError as e:
        raise SystemFileError(f"{path}:{e.location}", str(e))
    except ValueError as e:
        raise SystemFileError(path, str(e))
    logging.getLogger(__name__).info(f"Loaded {system} from {path}")
    return system
