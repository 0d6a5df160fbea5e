#!/usr/bin/env python3
"""Report whether the confluent-Heun series of each parameter map truly
terminates at the quantized levels.

The degree condition is one of two requirements for a polynomial
solution; this audit measures the raw coefficients past the degree.

Usage: python scripts/truncation_audit.py [coupling] [nu] [n_max]
"""

import sys

from heundirac import SystemParams, energy_closed_form
from heundirac.verify import truncation_audit


def main():
    e = float(sys.argv[1]) if len(sys.argv) > 1 else 0.5
    nu = int(sys.argv[2]) if len(sys.argv) > 2 else 1
    n_max = int(sys.argv[3]) if len(sys.argv) > 3 else 4

    print(f"coupling e = {e}, nu = {nu}")
    print(f"{'n':>3} {'map':>8} {'E':>20} {'max |c| beyond degree / head':>30} "
          f"{'collapsed':>10}")
    for n in range(n_max + 1):
        p = SystemParams(e, nu, parity=1 if n >= 1 else -1)
        E = energy_closed_form(n, p).E
        for name, entry in truncation_audit(p, n).items():
            rel = entry["max_beyond_degree"] / entry["max_coefficient"]
            print(f"{n:>3} {name:>8} {E:>20.14f} {rel:>30.3e} "
                  f"{str(entry['collapsed']):>10}")


if __name__ == "__main__":
    main()
