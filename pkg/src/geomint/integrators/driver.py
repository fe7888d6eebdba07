import logging
import math

import numpy as np

from geomint.densecore import NumericalError, spectral_radius, symplectic_defect
from geomint.integrators.flows import exact_reference
from geomint.integrators.registry import get_stepper
from geomint.integrators.stepper import Stepper
from geomint.integrators.trajectory import ExtState, StepReport, Trajectory
from geomint.trigpoly import SYMPLECTIC

MAX_STEPS = 10 ** 8
# Remainders below this fraction of h are treated as landing on the grid
GRID_TOLERANCE = 1e-9
ERROR_FLOOR = 1e-12
HALVING_TOLERANCE = 1e-9
MIN_STEP_SIZES = 3


class StepFailureError(NumericalError):

    def __init__(self, step_index, t, message):
        super().__init__(f"Step {step_index} from t={t} failed: {message}")
        self.step_index = step_index
        self.t = t


def as_stepper(method):
    return method if isinstance(method, Stepper) else get_stepper(method)


def time_grid(t0, t_end, h):
    """
    Sample times t0, t0 + h, ..., ending exactly on t_end; the last step is
    shortened when (t_end - t0) is not a multiple of h.
    """
    if not h > 0:
        raise ValueError(f"Step size must be positive, got {h}")
    if t_end < t0:
        raise ValueError(f"End time {t_end} precedes start time {t0}")
    ratio = (t_end - t0) / h
    if ratio > MAX_STEPS:
        raise ValueError(f"Integration over [{t0}, {t_end}] with h={h} needs {ratio:.3g} steps, more than the limit of {MAX_STEPS}")
    full = int(math.floor(ratio + GRID_TOLERANCE))
    times = t0 + h * np.arange(full + 1)
    if ratio - full > GRID_TOLERANCE:
        times = np.append(times, t_end)
    else:
        times[-1] = t_end if full else t0
    return times


def integrate(method, system, x0, t0, t_end, h, metadata=None):
    """
    Step a system from (x0, t0) to t_end on the uniform grid of step h.

    :param method: Registry name or Stepper instance
    :param system: LinearSystem to integrate
    :param x0: Initial state vector
    :param t0: Initial time
    :param t_end: Final time (t_end == t0 gives a single sample)
    :param h: Nominal step size
    :param metadata: Extra entries for the trajectory metadata
    :return: Trajectory with one sample per grid point
    """
    logger = logging.getLogger(__name__)
    stepper = as_stepper(method)
    stepper.validate(system)
    state = ExtState(x0, t0)
    if state.n != system.n:
        raise ValueError(f"Initial state has dimension {state.n}, system has dimension {system.n}")
    times = time_grid(t0, t_end, h)
    states = np.empty((len(times), system.n))
    states[0] = state.x
    logger.info(f"Integrating {system} with {stepper.NAME}, h={h}, {len(times) - 1} steps")
    for index in range(1, len(times)):
        step = times[index] - state.t
        if abs(step - h) <= GRID_TOLERANCE * h:
            step = h
        try:
            advanced = stepper.step(system, step, state)
        except (NumericalError, ValueError) as e:
            raise StepFailureError(index - 1, state.t, str(e))
        state = ExtState(advanced.x, times[index])
        states[index] = state.x
    logger.debug(f"Finished {stepper.NAME} at t={state.t} with |x|={np.linalg.norm(state.x):.6g}")
    details = {'system': repr(system)}
    details.update(metadata or {})
    return Trajectory(times, states, stepper.NAME, h, details)


def transfer_matrix(method, system, t, h):
    """
    Linear part M of one step x -> M x + b from time t, built column by
    column from the basis vectors with the forcing switched off.
    """
    stepper = as_stepper(method)
    homogeneous = system.homogeneous()
    stepper.validate(homogeneous)
    columns = [stepper.step(homogeneous, h, ExtState(basis, t)).x for basis in np.eye(system.n)]
    return np.column_stack(columns)


def step_report(method, system, t, h):
    stepper = as_stepper(method)
    transfer = transfer_matrix(stepper, system, t, h)
    defect = symplectic_defect(transfer, system.A.form) if system.algebra == SYMPLECTIC else None
    return StepReport(stepper.NAME, t, h, transfer, defect, spectral_radius(transfer))


def check_halving(h_list):
    if len(h_list) < MIN_STEP_SIZES:
        raise ValueError(f"Convergence study needs at least {MIN_STEP_SIZES} step sizes, got {len(h_list)}")
    for coarse, fine in zip(h_list, h_list[1:]):
        if abs(coarse / 2 - fine) > HALVING_TOLERANCE * coarse:
            raise ValueError(f"Step sizes must halve successively, got {fine} after {coarse}")


def global_errors(method, system, x0, t0, t_end, h_list):
    """
    Euclidean error at t_end against exact_reference for each step size.
    """
    check_halving(h_list)
    reference = exact_reference(system, ExtState(x0, t0), t_end - t0).x
    return [float(np.linalg.norm(integrate(method, system, x0, t0, t_end, h).final.x - reference)) for h in h_list]


def observed_order(h_list, errors):
    """
    Least squares slope of log(error) against log(h).  Errors under the
    roundoff floor are excluded.

    :return: The slope, or None when fewer than two points remain
    """
    logger = logging.getLogger(__name__)
    kept = [(h, error) for h, error in zip(h_list, errors) if error >= ERROR_FLOOR]
    if len(kept) < len(errors):
        logger.warning(f"Excluded {len(errors) - len(kept)} step size(s) with error below {ERROR_FLOOR}")
    if len(kept) < 2:
        return None
    log_h, log_error = np.log(np.array(kept)).T
    return float(np.polyfit(log_h, log_error, 1)[0])


def convergence_order(method, system, x0, t0, t_end, h_list):
    errors = global_errors(method, system, x0, t0, t_end, h_list)
    slope = observed_order(h_list, errors)
    logging.getLogger(__name__).info(f"Observed order of {as_stepper(method).NAME}: {slope}")
    return slope
