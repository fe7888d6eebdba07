import logging

import numpy as np

from geomint.densecore import SymplecticForm, hamiltonian_defect

"""
Exact algebra of real trigonometric polynomials with a fixed base frequency

    p(t) = a0 + sum_{i=1..k} a_i cos(i omega t) + b_i sin(i omega t)

whose coefficients are vectors (VecTrigPoly) or square matrices (MatTrigPoly).
Products are computed exactly (no truncation, no sampling), so the order of a
product is the sum of the orders of its factors.
"""

GENERAL_LINEAR = 'gl'
SYMPLECTIC = 'sp'
ALGEBRAS = (GENERAL_LINEAR, SYMPLECTIC)

FREQUENCY_TOLERANCE = 1e-12
SYMPLECTIC_TOLERANCE = 1e-12


class FrequencyMismatchError(ValueError):

    def __init__(self, omega_a, omega_b):
        super().__init__(f"Base frequencies {omega_a!r} and {omega_b!r} differ, no implicit resampling is done")
        self.omega_a = omega_a
        self.omega_b = omega_b


class TrigPolyFormatError(ValueError):

    def __init__(self, location, message):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class TrigPoly(object):

    _NDIM = None

    def __init__(self, omega, a0, cos=None, sin=None):
        omega = float(omega)
        if not np.isfinite(omega) or omega <= 0:
            raise ValueError(f"Base frequency must be positive and finite, got {omega}")
        a0 = np.array(a0, dtype=float)
        if a0.ndim != self._NDIM:
            raise ValueError(f"{self.__class__.__name__} needs {self._NDIM}-d coefficients, got shape {a0.shape}")
        empty = np.zeros((0,) + a0.shape)
        cos = empty if cos is None else np.array(cos, dtype=float).reshape((-1,) + a0.shape)
        sin = empty if sin is None else np.array(sin, dtype=float).reshape((-1,) + a0.shape)
        if len(cos) != len(sin):
            raise ValueError(f"Got {len(cos)} cosine but {len(sin)} sine coefficients")
        if not (np.all(np.isfinite(a0)) and np.all(np.isfinite(cos)) and np.all(np.isfinite(sin))):
            raise ValueError("Non-finite trigonometric polynomial coefficient")
        if not (a0.any() or cos.any() or sin.any()):
            cos, sin = empty, empty
        for coeffs in (a0, cos, sin):
            coeffs.flags.writeable = False
        self.omega = omega
        self.a0 = a0
        self.cos = cos
        self.sin = sin

    @property
    def order(self):
        return len(self.cos)

    @property
    def coeff_shape(self):
        return self.a0.shape

    @property
    def n(self):
        return self.a0.shape[0]

    @property
    def slot_count(self):
        return 2 * self.order + 1

    @property
    def degrees_of_freedom(self):
        return self.slot_count * self.a0.size

    @property
    def period(self):
        return 2 * np.pi / self.omega

    def is_zero(self):
        return self.order == 0 and not self.a0.any()

    def coefficient_blocks(self):
        return [self.a0] + list(self.cos) + list(self.sin)

    def exponential_coeffs(self):
        """
        Complex coefficients c_m, m = -k..k, of p(t) = sum c_m exp(i m omega t),
        stored at index m + k.
        """
        k = self.order
        coeffs = np.zeros((2 * k + 1,) + self.coeff_shape, dtype=complex)
        coeffs[k] = self.a0
        for m in range(1, k + 1):
            coeffs[k + m] = (self.cos[m - 1] - 1j * self.sin[m - 1]) / 2
            coeffs[k - m] = (self.cos[m - 1] + 1j * self.sin[m - 1]) / 2
        return coeffs

    def _with_coeffs(self, omega, a0, cos, sin):
        return self.__class__(omega, a0, cos, sin)

    def __call__(self, t):
        return trig_eval(self, t)

    def __eq__(self, other):
        return (
            isinstance(other, self.__class__)
            and self.omega == other.omega
            and np.array_equal(self.a0, other.a0)
            and np.array_equal(self.cos, other.cos)
            and np.array_equal(self.sin, other.sin)
        )

    def __hash__(self):
        return hash((self.__class__.__name__, self.omega, self.order, self.a0.tobytes()))

    def __repr__(self):
        return f"{self.__class__.__name__}(omega={self.omega}, order={self.order}, shape={self.coeff_shape})"

    def to_json(self):
        return {
            'omega': self.omega,
            'order': self.order,
            'n': self.n,
            'a0': self.a0.tolist(),
            'cos': self.cos.tolist(),
            'sin': self.sin.tolist()
        }

    @classmethod
    def _parse_json(cls, data, location):
        if not isinstance(data, dict):
            raise TrigPolyFormatError(location, f"expected an object, found {type(data).__name__}")
        for key in ('omega', 'order', 'n', 'a0', 'cos', 'sin'):
            if not key in data:
                raise TrigPolyFormatError(location, f"missing key '{key}'")
        order = data['order']
        n = data['n']
        if not isinstance(order, int) or order < 0:
            raise TrigPolyFormatError(f"{location}.order", f"expected a non-negative integer, found {order!r}")
        if not isinstance(n, int) or n < 1:
            raise TrigPolyFormatError(f"{location}.n", f"expected a positive integer, found {n!r}")
        shape = (n,) * cls._NDIM
        a0 = cls.__parse_block(data['a0'], shape, f"{location}.a0")
        blocks = {}
        for key in ('cos', 'sin'):
            if not isinstance(data[key], list) or len(data[key]) != order:
                raise TrigPolyFormatError(f"{location}.{key}", f"expected a list of {order} coefficients")
            blocks[key] = [cls.__parse_block(block, shape, f"{location}.{key}[{idx}]") for idx, block in enumerate(data[key])]
        try:
            omega = float(data['omega'])
        except (TypeError, ValueError):
            raise TrigPolyFormatError(f"{location}.omega", f"expected a number, found {data['omega']!r}")
        return omega, a0, np.array(blocks['cos']).reshape((order,) + shape), np.array(blocks['sin']).reshape((order,) + shape)

    @staticmethod
    def __parse_block(block, shape, location):
        try:
            parsed = np.array(block, dtype=float)
        except (TypeError, ValueError):
            raise TrigPolyFormatError(location, f"expected numbers, found {block!r}")
        if parsed.shape != shape:
            raise TrigPolyFormatError(location, f"expected shape {shape}, found {parsed.shape}")
        return parsed


"""
Vector valued trigonometric polynomial, an element of C_{omega,k}(R^n).
"""
class VecTrigPoly(TrigPoly):

    _NDIM = 1

    @classmethod
    def constant(cls, omega, vector):
        return cls(omega, vector)

    @classmethod
    def zero(cls, omega, n):
        return cls(omega, np.zeros(n))

    @classmethod
    def from_json(cls, data, location='f'):
        omega, a0, cos, sin = cls._parse_json(data, location)
        try:
            return cls(omega, a0, cos, sin)
        except ValueError as e:
            raise TrigPolyFormatError(location, str(e))


"""
Square matrix valued trigonometric polynomial, an element of C_{omega,l}(g).
The algebra tag names the matrix Lie algebra g the coefficients should live in;
validate() enforces it for the symplectic algebra.
"""
class MatTrigPoly(TrigPoly):

    _NDIM = 2

    def __init__(self, omega, a0, cos=None, sin=None, algebra=GENERAL_LINEAR):
        super().__init__(omega, a0, cos, sin)
        if self.a0.shape[0] != self.a0.shape[1]:
            raise ValueError(f"Matrix coefficients must be square, got {self.a0.shape}")
        if not algebra in ALGEBRAS:
            raise ValueError(f"Unknown matrix algebra '{algebra}', expected one of {ALGEBRAS}")
        if algebra == SYMPLECTIC and self.n % 2:
            raise ValueError(f"Symplectic tag requires an even dimension, got {self.n}")
        self.algebra = algebra

    @classmethod
    def constant(cls, omega, matrix, algebra=GENERAL_LINEAR):
        return cls(omega, matrix, algebra=algebra)

    @classmethod
    def zero(cls, omega, n, algebra=GENERAL_LINEAR):
        return cls(omega, np.zeros((n, n)), algebra=algebra)

    @classmethod
    def identity(cls, omega, n):
        return cls(omega, np.eye(n))

    @property
    def form(self):
        return SymplecticForm(self.n) if self.algebra == SYMPLECTIC else None

    def _with_coeffs(self, omega, a0, cos, sin):
        return MatTrigPoly(omega, a0, cos, sin, algebra=self.algebra)

    def with_algebra(self, algebra):
        return MatTrigPoly(self.omega, self.a0, self.cos, self.sin, algebra=algebra)

    def algebra_defect(self):
        if self.algebra != SYMPLECTIC:
            return 0.0
        form = self.form
        return max(hamiltonian_defect(block, form) for block in self.coefficient_blocks())

    def validate(self):
        defect = self.algebra_defect()
        if defect > SYMPLECTIC_TOLERANCE:
            raise ValueError(f"Matrix polynomial tagged '{SYMPLECTIC}' has a coefficient outside sp({self.n}) (defect {defect:.3e})")

    def __eq__(self, other):
        return super().__eq__(other) and self.algebra == other.algebra

    def __hash__(self):
        return super().__hash__()

    def to_json(self):
        data = super().to_json()
        data['algebra'] = self.algebra
        return data

    @classmethod
    def from_json(cls, data, location='A'):
        omega, a0, cos, sin = cls._parse_json(data, location)
        algebra = data.get('algebra', GENERAL_LINEAR)
        try:
            return cls(omega, a0, cos, sin, algebra=algebra)
        except ValueError as e:
            raise TrigPolyFormatError(location, str(e))


def check_frequencies(p, q):
    if abs(p.omega - q.omega) > FREQUENCY_TOLERANCE * max(p.omega, q.omega):
        raise FrequencyMismatchError(p.omega, q.omega)


def trig_eval(p, t):
    angles = p.omega * t * np.arange(1, p.order + 1)
    return p.a0 + np.tensordot(np.cos(angles), p.cos, axes=1) + np.tensordot(np.sin(angles), p.sin, axes=1)


def _harmonics(p):
    return (p.omega * np.arange(1, p.order + 1)).reshape((-1,) + (1,) * len(p.coeff_shape))


def trig_derivative(p):
    harmonics = _harmonics(p)
    return p._with_coeffs(p.omega, np.zeros(p.coeff_shape), harmonics * p.sin, -harmonics * p.cos)


def _padded(coeffs, order):
    padding = np.zeros((order - len(coeffs),) + coeffs.shape[1:])
    return np.concatenate([coeffs, padding])


def trig_linear_combo(alpha, p, beta, q):
    if type(p) is not type(q):
        raise ValueError(f"Cannot combine {type(p).__name__} with {type(q).__name__}")
    check_frequencies(p, q)
    if p.coeff_shape != q.coeff_shape:
        raise ValueError(f"Cannot combine coefficient shapes {p.coeff_shape} and {q.coeff_shape}")
    order = max(p.order, q.order)
    a0 = alpha * p.a0 + beta * q.a0
    cos = alpha * _padded(p.cos, order) + beta * _padded(q.cos, order)
    sin = alpha * _padded(p.sin, order) + beta * _padded(q.sin, order)
    if isinstance(p, MatTrigPoly):
        algebra = SYMPLECTIC if p.algebra == q.algebra == SYMPLECTIC else GENERAL_LINEAR
        return MatTrigPoly(p.omega, a0, cos, sin, algebra=algebra)
    return p._with_coeffs(p.omega, a0, cos, sin)


def trig_scale(alpha, p):
    return trig_linear_combo(alpha, p, 0.0, p)


def _product(p, q, result_cls):
    check_frequencies(p, q)
    cp = p.exponential_coeffs()
    cq = q.exponential_coeffs()
    result = None
    for i in range(len(cp)):
        for j in range(len(cq)):
            term = cp[i] @ cq[j]
            if result is None:
                result = np.zeros((len(cp) + len(cq) - 1,) + term.shape, dtype=complex)
            result[i + j] += term
    order = p.order + q.order
    logging.getLogger(__name__).debug(f"Exact product of orders {p.order} and {q.order} has order {order}")
    positive = result[order + 1:]
    negative = result[order - 1::-1] if order else result[:0]
    cos = (positive + negative).real
    sin = (1j * (positive - negative)).real
    return result_cls(p.omega, result[order].real, cos, sin)


def trig_apply(a, f):
    if a.n != f.n:
        raise ValueError(f"Cannot apply {a.coeff_shape} matrix polynomial to dimension {f.n} vector polynomial")
    return _product(a, f, VecTrigPoly)


def trig_mat_product(a, b):
    if a.coeff_shape != b.coeff_shape:
        raise ValueError(f"Cannot multiply matrix polynomials of shapes {a.coeff_shape} and {b.coeff_shape}")
    return _product(a, b, MatTrigPoly)


def trig_integral_over_step(f, t0, h):
    """
    Exact integral of f over [t0, t0 + h] (h may be negative).

    The differences of the antiderivatives are formed with product identities.
    """
    harmonics = f.omega * np.arange(1, f.order + 1)
    half_step = np.sin(harmonics * h / 2)
    midpoint = harmonics * (t0 + h / 2)
    sin_diff = 2 * np.cos(midpoint) * half_step / harmonics
    cos_diff = -2 * np.sin(midpoint) * half_step / harmonics
    integral = f.a0 * h + np.tensordot(sin_diff, f.cos, axes=1) - np.tensordot(cos_diff, f.sin, axes=1)
    return integral
