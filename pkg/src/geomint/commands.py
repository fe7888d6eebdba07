import csv
import json
import logging
import math
import os
import sys

import numpy as np

from geomint.integrators.driver import global_errors, integrate, observed_order, step_report
from geomint.integrators.flows import exact_reference
from geomint.integrators.registry import EXACT, get_stepper
from geomint.integrators.system import LinearSystem, SystemFileError, read_json_file
from geomint.integrators.trajectory import ExtState
from geomint.liealg.algebra import UNBOUNDED, AlgebraSpec, closure_check, dimension, matrix_algebra_defect, random_element
from geomint.liealg.bch import YYZ_COEFFICIENT, ZZY_COEFFICIENT, bch_modified_element, split_system
from geomint.liealg.element import element_norm, jacobi_defect
from geomint.rotor import RotorParams, build_rotor, envelope_amplitude
from geomint.trigpoly import SYMPLECTIC, TrigPolyFormatError

DEFAULT_H_LIST = [0.1, 0.05, 0.025, 0.0125]
JACOBI_TRIPLES = 20
JACOBI_MATRIX_ORDER = 2
CLOSURE_PAIRS = 5
# Times per period at which transfer matrices are sampled for the compare summary
REPORT_SAMPLES = 16
ROTOR_COLUMNS = ['q1', 'q2', 'p1', 'p2']

"""
Everything a command needs to run: where the system comes from (a JSON file
or the built-in rotor), the methods, the time grid and the output locations.
"""
class RunConfig(object):

    def as_json(self):
        return json.dumps(self, default=lambda o: o.__dict__, sort_keys=True, indent=4)

    def __init__(self, rotor=None, system_file=None, methods=None, h=0.05, t0=0.0, t_end=100.0, h_list=None, out=None, summary=None, seed=0, x0=None):
        self.rotor = rotor if rotor else RotorParams()
        self.system_file = system_file
        self.methods = methods if methods else ['strang']
        self.h = h
        self.t0 = t0
        self.t_end = t_end
        self.h_list = h_list if h_list else list(DEFAULT_H_LIST)
        self.out = out
        self.summary = summary
        self.seed = seed
        self.x0 = x0

    def validate(self):
        for method in self.methods:
            get_stepper(method)
        repeated = sorted({method for method in self.methods if self.methods.count(method) > 1})
        if repeated:
            raise ValueError(f"Method(s) {repeated} given more than once")
        if not self.h > 0:
            raise ValueError(f"Step size must be positive, got {self.h}")
        if self.t_end < self.t0:
            raise ValueError(f"End time {self.t_end} precedes start time {self.t0}")
        if any(not h > 0 for h in self.h_list):
            raise ValueError(f"Step sizes must be positive, got {self.h_list}")
        if not self.system_file:
            self.rotor.validate()


"""
A system resolved from a RunConfig together with its initial state and the
metadata attached to every trajectory.
"""
class RunSetup(object):

    def __init__(self, system, x0, metadata, rotor=None):
        self.system = system
        self.x0 = np.array(x0, dtype=float)
        self.metadata = metadata
        self.rotor = rotor


def resolve_system(cfg):
    """
    Build the system a command runs on.  A system file holds either a system
    ({"A": ..., "f": ...}) or rotor parameters ({"m", "k", "omega", "eps", "x0"}).
    """
    logger = logging.getLogger(__name__)
    if not cfg.system_file:
        return RunSetup(build_rotor(cfg.rotor), cfg.rotor.x0, cfg.rotor.metadata(), cfg.rotor)
    data = read_json_file(cfg.system_file)
    if RotorParams.is_rotor_json(data):
        try:
            rotor = RotorParams.from_json(data)
        except ValueError as e:
            raise SystemFileError(cfg.system_file, str(e))
        logger.info(f"Loaded {rotor} from {cfg.system_file}")
        return RunSetup(build_rotor(rotor), rotor.x0, rotor.metadata(), rotor)
    try:
        system = LinearSystem.from_json(data)
    except TrigPolyFormatError as e:
        raise SystemFileError(f"{cfg.system_file}:{e.location}", str(e))
    except ValueError as e:
        raise SystemFileError(cfg.system_file, str(e))
    logger.info(f"Loaded {system} from {cfg.system_file}")
    x0 = cfg.x0 if cfg.x0 is not None else np.zeros(system.n)
    if len(x0) != system.n:
        raise ValueError(f"Initial state has {len(x0)} entries, the system has dimension {system.n}")
    return RunSetup(system, x0, {'system_file': cfg.system_file})


def column_names(n):
    return ROTOR_COLUMNS if n == len(ROTOR_COLUMNS) else [f"x{index + 1}" for index in range(n)]


def format_value(value):
    return f"{value:.17g}"


def write_rows(out, header, rows):
    """
    Write CSV rows to a file (or stdout when out is None), removing the file
    if writing fails part way.
    """
    if out is None:
        writer = csv.writer(sys.stdout, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        return
    try:
        with open(out, 'w', newline='') as csv_file:
            writer = csv.writer(csv_file, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
    except BaseException:
        if os.path.exists(out):
            os.remove(out)
        raise


def write_json(path, document):
    payload = json.dumps(document, sort_keys=True, indent=4)
    if path is None:
        print(payload)
        return
    with open(path, 'w') as json_file:
        json_file.write(payload + '\n')


def cmd_simulate(cfg):
    logger = logging.getLogger(__name__)
    cfg.validate()
    if len(cfg.methods) != 1:
        raise ValueError(f"simulate runs exactly one method, got {cfg.methods}")
    setup = resolve_system(cfg)
    traj = integrate(cfg.methods[0], setup.system, setup.x0, cfg.t0, cfg.t_end, cfg.h, setup.metadata)
    rows = ([format_value(t)] + [format_value(value) for value in state] for t, state in zip(traj.times, traj.states))
    write_rows(cfg.out, ['t'] + column_names(setup.system.n), rows)
    logger.info(f"Wrote {len(traj)} samples of {traj.method} to {cfg.out or 'stdout'}")
    return traj


def sample_times(system, t0):
    return t0 + system.A.period * np.arange(REPORT_SAMPLES) / REPORT_SAMPLES if system.A.order else [t0]


def method_summary(method, traj, setup, cfg, reference):
    reports = [step_report(method, setup.system, t, cfg.h) for t in sample_times(setup.system, cfg.t0)]
    defects = [report.symplectic_defect for report in reports if report.symplectic_defect is not None]
    return {
        'envelope': envelope_amplitude(traj, 0, min_span=0.0),
        'final_error': None if reference is None else float(np.linalg.norm(traj.final.x - reference)),
        'max_symplectic_defect': max(defects) if defects else None,
        'spectral_radius': max(report.spectral_radius for report in reports)
    }


def cmd_compare(cfg):
    """
    Run several methods on the same grid, write a wide CSV of the first state
    component per method and a JSON summary next to it.

    :return: The summary document keyed by method
    """
    logger = logging.getLogger(__name__)
    cfg.validate()
    if len(cfg.methods) < 2:
        raise ValueError(f"compare needs at least two methods, got {cfg.methods}")
    if not cfg.out:
        raise ValueError("compare needs an output path (--out)")
    setup = resolve_system(cfg)
    reference = None
    if setup.system.constant_matrix:
        reference = exact_reference(setup.system, ExtState(setup.x0, cfg.t0), cfg.t_end - cfg.t0).x
    trajectories = [integrate(method, setup.system, setup.x0, cfg.t0, cfg.t_end, cfg.h, setup.metadata) for method in cfg.methods]
    first = column_names(setup.system.n)[0]
    header = ['t'] + [f"{first}_{traj.method}" for traj in trajectories]
    columns = np.column_stack([trajectories[0].times] + [traj.states[:, 0] for traj in trajectories])
    write_rows(cfg.out, header, ([format_value(value) for value in row] for row in columns))
    summary = {}
    for method, traj in zip(cfg.methods, trajectories):
        summary[method] = method_summary(method, traj, setup, cfg, reference)
    summary_path = cfg.summary if cfg.summary else f"{cfg.out}.summary.json"
    write_json(summary_path, summary)
    logger.info(f"Compared {cfg.methods}, summary in {summary_path}")
    return summary


def cmd_convergence(cfg):
    logger = logging.getLogger(__name__)
    cfg.validate()
    if EXACT in cfg.methods:
        raise ValueError(f"The '{EXACT}' method has no order to measure")
    setup = resolve_system(cfg)
    report = {}
    for method in cfg.methods:
        errors = global_errors(method, setup.system, setup.x0, cfg.t0, cfg.t_end, cfg.h_list)
        entry = {f"{h:g}": error for h, error in zip(cfg.h_list, errors)}
        entry['slope'] = observed_order(cfg.h_list, errors)
        report[method] = entry
        logger.info(f"{method}: observed order {entry['slope']}")
    write_json(cfg.out, report)
    return report


def system_algebra_spec(system):
    matrix_order = 0 if system.constant_matrix else UNBOUNDED
    return AlgebraSpec(system.algebra, system.omega, system.n, system.f.order, matrix_order)


def bch_summary(system, h):
    Y, Z = split_system(system)
    summary = {'h': h, 'coefficients': {'zzy': ZZY_COEFFICIENT, 'yyz': YYZ_COEFFICIENT}}
    for order, term in bch_modified_element(Y, Z, h):
        summary[f"order_{order}"] = {
            'norm': element_norm(term),
            'matrix_order': term.A.order,
            'vector_order': term.f.order,
            'alpha': term.alpha
        }
    return summary


def cmd_algebra_check(cfg):
    """
    Structure report of a system: membership of A in its declared matrix
    algebra, closure of the bracket inside the sub-algebra the system spans,
    its dimension, a Jacobi identity sweep and the second order modified
    field of the splitting.
    """
    logger = logging.getLogger(__name__)
    cfg.validate()
    setup = resolve_system(cfg)
    system = setup.system
    spec = system_algebra_spec(system)
    rng = np.random.default_rng(cfg.seed)
    report = {'algebra': system.algebra}
    if system.algebra == SYMPLECTIC:
        report['hamiltonian_defect'] = matrix_algebra_defect(system.A, SYMPLECTIC)
    else:
        report['hamiltonian_defect'] = None
        report['hamiltonian_note'] = f"skipped, matrix algebra '{system.algebra}' carries no symplectic form"
    element = system.element()
    closures = [closure_check(element, element, spec)]
    closures += [closure_check(element, random_element(spec, rng), spec) for _ in range(CLOSURE_PAIRS)]
    failed = [closure for closure in closures if not (closure.passed and closure.inputs_conform)]
    report['closure'] = 'fail' if failed else 'pass'
    report['closure_details'] = (max(failed, key=lambda closure: closure.matrix_defect) if failed else closures[-1]).to_json()
    size = dimension(spec)
    report['dimension'] = size if math.isfinite(size) else 'infinite'
    jacobi_spec = AlgebraSpec(spec.algebra, spec.omega, spec.n, max(spec.vector_order, 2), 0)
    report['jacobi_max'] = max(
        jacobi_defect(*(random_element(jacobi_spec, rng, matrix_order=JACOBI_MATRIX_ORDER) for _ in range(3)))
        for _ in range(JACOBI_TRIPLES)
    )
    report['jacobi_matrix_order'] = JACOBI_MATRIX_ORDER
    if system.constant_matrix:
        report['bch'] = bch_summary(system, cfg.h)
    logger.info(f"Algebra check: closure {report['closure']}, dimension {report['dimension']}, jacobi {report['jacobi_max']:.3e}")
    write_json(cfg.out, report)
    return report
