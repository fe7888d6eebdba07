#!/usr/bin/env python3

import argparse
import csv
import sys

import numpy as np

from geomint.rotor import RotorParams, resonance_sweep

EXACT_COLUMN = 'exact_envelope'
OMEGA_COLUMN = 'omega'

def write_table(rows, methods, out_file):
    header = [OMEGA_COLUMN, EXACT_COLUMN] + methods
    handle = open(out_file, 'w', newline='') if out_file else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            envelopes = [row['envelopes'][method] for method in methods]
            writer.writerow([row[OMEGA_COLUMN], row[EXACT_COLUMN]] + ['' if value is None else f"{value:.17g}" for value in envelopes])
    finally:
        if out_file:
            handle.close()

def get_parser():
    defaults = RotorParams()
    parser = argparse.ArgumentParser(description='Tabulate the q1 beat envelope of the rotor against the shaft speed')
    parser.add_argument('--omega-min', type=float, required=True, help='Smallest shaft speed in rad/s')
    parser.add_argument('--omega-max', type=float, required=True, help='Largest shaft speed in rad/s')
    parser.add_argument('--points', type=int, default=11, help='Number of equispaced shaft speeds (default: 11)')
    parser.add_argument('--method', action='append', required=True, help='Integrator name (repeat for several)')
    parser.add_argument('--h', type=float, default=0.05, help='Step size in seconds (default: 0.05)')
    parser.add_argument('--t-end', type=float, required=True, help='End time, at least one beat period for every shaft speed')
    parser.add_argument('--m', type=float, default=defaults.m, help='Rotor mass in kg')
    parser.add_argument('--k', type=float, default=defaults.k_stiff, help='Shaft stiffness in N/m')
    parser.add_argument('--eps', type=float, default=defaults.eps, help='Unbalance in m.kg')
    parser.add_argument('--out-file', required=False, help='CSV destination (default stdout)')
    return parser

if __name__ == "__main__":
    args = get_parser().parse_args()
    base = RotorParams(args.m, args.k, args.omega_min, args.eps)
    grid = np.linspace(args.omega_min, args.omega_max, args.points)
    rows = resonance_sweep(base, grid, args.method, args.h, args.t_end)
    write_table(rows, args.method, args.out_file)
    failures = sum(len(row['failures']) for row in rows)
    if failures:
        print(f"{failures} sweep point(s) failed, see the empty cells", file=sys.stderr)
