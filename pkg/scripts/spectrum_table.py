#!/usr/bin/env python3
"""Print a bound-state table: closed form, four analytic routes, shooting.

Usage: python scripts/spectrum_table.py [coupling] [nu] [n_max]
"""

import sys

from heundirac import (ANALYTIC_ROUTES, SystemParams, energy_closed_form,
                       shoot_energy, solve_quantization)


def main():
    e = float(sys.argv[1]) if len(sys.argv) > 1 else 0.5
    nu = int(sys.argv[2]) if len(sys.argv) > 2 else 1
    n_max = int(sys.argv[3]) if len(sys.argv) > 3 else 4

    print(f"coupling e = {e}, nu = {nu} (j = {nu - 0.5})")
    header = ["n", "closed form"] + list(ANALYTIC_ROUTES) + ["oracle", "worst dev"]
    print("  ".join(f"{h:>22}" if i else f"{h:>3}" for i, h in enumerate(header)))

    for n in range(n_max + 1):
        # quantization conditions are cleanest in the kappa > 0 channel;
        # the shooting check needs kappa < 0 for the nodeless level
        p = SystemParams(e, nu)
        p_shoot = SystemParams(e, nu, parity=1 if n >= 1 else -1)
        ref = energy_closed_form(n, p).E
        row = [ref]
        for route in ANALYTIC_ROUTES:
            row.append(solve_quantization(p, n, route).E)
        below = energy_closed_form(n - 1, p).E if n >= 1 else 0.2 * p.m
        above = energy_closed_form(n + 1, p).E
        row.append(shoot_energy(p_shoot, 0.5 * (below + ref), 0.5 * (ref + above)).E)
        dev = max(abs(x - ref) / ref for x in row[1:])
        cells = [f"{n:>3}"] + [f"{x:>22.16f}" for x in row] + [f"{dev:>22.3e}"]
        print("  ".join(cells))


if __name__ == "__main__":
    main()
