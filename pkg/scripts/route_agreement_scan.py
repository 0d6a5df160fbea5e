#!/usr/bin/env python3
"""Sweep levels and report the worst system residual and cross-route
pointwise disagreement for each, normalized solutions compared in sup norm.

Usage: python scripts/route_agreement_scan.py [n_max] [nu_max]
"""

import sys

import numpy as np

from heundirac import (SystemParams, normalize, residual, solve_heun_full,
                       solve_mixed_case1, solve_mixed_case2, solve_standard)

SOLVERS = (solve_standard, solve_mixed_case1, solve_mixed_case2, solve_heun_full)


def main():
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    nu_max = int(sys.argv[2]) if len(sys.argv) > 2 else 3

    print(f"{'nu':>3} {'e':>5} {'n':>3} {'parity':>6} "
          f"{'worst residual':>15} {'cross-route dev':>16}")
    for nu in range(1, nu_max + 1):
        for e in (0.2, 0.5, 0.9 * nu):
            for n in range(n_max + 1):
                p = SystemParams(e, nu, parity=1 if n >= 1 else -1)
                sols = [normalize(s(p, n)) for s in SOLVERS]
                worst_res = max(residual(s) for s in sols)
                ref = sols[0]
                fs, gs = np.max(np.abs(ref.f)), np.max(np.abs(ref.g))
                dev = max(max(np.max(np.abs(s.f - ref.f)) / fs,
                              np.max(np.abs(s.g - ref.g)) / gs) for s in sols)
                print(f"{nu:>3} {e:>5.2f} {n:>3} {p.parity:>+6d} "
                      f"{worst_res:>15.3e} {dev:>16.3e}")


if __name__ == "__main__":
    main()
