"""Critical spacing of linear chains versus atom number, both polarizations.

The last crossing approaches 21/80 (perpendicular) and 3/10 (parallel)
wavelengths as N grows.
"""

import argparse

import numpy as np

from superradiance import finite, infinite, output
from superradiance.greens import Polarization
from superradiance.lattice import LatticeSpec, displacement_table

POLS = {"perpendicular": (1.0, 0.0, 0.0), "parallel": (0.0, 0.0, 1.0)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 50, 100, 200, 500, 1000])
    ap.add_argument("--out", default="chain_critical_distance.csv")
    args = ap.parse_args()
    rows = []
    for n in args.n:
        spec = LatticeSpec.from_geometry("chain", n, 0.2)
        table = displacement_table(spec)
        for name, vec in POLS.items():
            res = finite.critical_distance_scan(spec, Polarization.linear(vec), table=table)
            rows.append((n, name, res.d_max, float(infinite.critical_distance_1d(name))))
            print(f"N={n:5d} {name:13s} d_max={res.d_max:.5f}")
    header = output.make_header("chain_critical_distance", vars(args), ("N", "pol", "d_max", "infinite_limit"))
    output.write(args.out, header, rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
