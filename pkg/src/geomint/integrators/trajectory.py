import json

import numpy as np

"""
A point (x, t) of the extended phase space P x R.
"""
class ExtState(object):

    def __init__(self, x, t):
        x = np.array(x, dtype=float)
        if x.ndim != 1:
            raise ValueError(f"State must be a vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError(f"State at t={t} has non-finite entries")
        x.flags.writeable = False
        self.x = x
        self.t = float(t)

    @property
    def n(self):
        return len(self.x)

    def __eq__(self, other):
        return isinstance(other, ExtState) and self.t == other.t and np.array_equal(self.x, other.x)

    def __hash__(self):
        return hash((self.t, self.x.tobytes()))

    def __repr__(self):
        return f"ExtState(x={self.x.tolist()}, t={self.t})"


"""
Time-indexed samples of one integration run plus the method, the nominal step
and free-form metadata describing the system.
"""
class Trajectory(object):

    def __init__(self, times, states, method, h, metadata=None):
        times = np.array(times, dtype=float)
        states = np.array(states, dtype=float)
        if times.ndim != 1 or len(times) < 1:
            raise ValueError(f"Trajectory needs at least one sample time, got shape {times.shape}")
        if states.ndim != 2 or len(states) != len(times):
            raise ValueError(f"Trajectory has {len(times)} times but states of shape {states.shape}")
        if np.any(np.diff(times) <= 0):
            raise ValueError("Trajectory sample times must be strictly increasing")
        times.flags.writeable = False
        states.flags.writeable = False
        self.times = times
        self.states = states
        self.method = method
        self.h = h
        self.metadata = dict(metadata) if metadata else {}

    def __len__(self):
        return len(self.times)

    @property
    def n(self):
        return self.states.shape[1]

    @property
    def span(self):
        return self.times[-1] - self.times[0]

    @property
    def final(self):
        return ExtState(self.states[-1], self.times[-1])

    def component(self, index):
        if not 0 <= index < self.n:
            raise ValueError(f"Component {index} out of range for dimension {self.n}")
        return self.states[:, index]

    def __repr__(self):
        return f"Trajectory(method={self.method}, h={self.h}, samples={len(self)}, t=[{self.times[0]}, {self.times[-1]}])"


"""
Per-step diagnostics of a stepper: the homogeneous transfer matrix together
with its symplectic defect (when a form is known) and spectral radius.
"""
class StepReport(object):

    def __init__(self, method, t, h, transfer, symplectic_defect, spectral_radius):
        self.method = method
        self.t = t
        self.h = h
        self.transfer = transfer
        self.symplectic_defect = symplectic_defect
        self.spectral_radius = spectral_radius

    def to_json(self):
        return {
            'method': self.method,
            't': self.t,
            'h': self.h,
            'transfer': self.transfer.tolist(),
            'symplectic_defect': self.symplectic_defect,
            'spectral_radius': self.spectral_radius
        }

    def as_json(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=4)
