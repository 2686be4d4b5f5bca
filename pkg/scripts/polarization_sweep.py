"""Critical spacing of a square array as the linear polarization tilts out of plane."""

import argparse

import numpy as np

from superradiance import finite, output
from superradiance.lattice import LatticeSpec, displacement_table, polarization_from_angles


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n1d", type=int, default=20)
    ap.add_argument("--lattice-angle", type=float, default=90.0, help="degrees")
    ap.add_argument("--steps", type=int, default=19)
    ap.add_argument("--out", default="polarization_sweep.csv")
    args = ap.parse_args()
    spec = LatticeSpec(2, (args.n1d, args.n1d), 0.3, lattice_angle=np.deg2rad(args.lattice_angle))
    table = displacement_table(spec)
    rows = []
    for theta in np.linspace(0.0, 90.0, args.steps):
        res = finite.critical_distance_scan(spec, polarization_from_angles(np.deg2rad(theta)), table=table)
        rows.append((float(theta), res.d_max, res.crossings))
        print(f"theta={theta:5.1f} deg  d_max={res.d_max:.4f}")
    header = output.make_header("polarization_sweep", vars(args), ("theta_deg", "d_max", "crossings"))
    output.write(args.out, header, rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
