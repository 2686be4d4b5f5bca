"""Critical spacing of square arrays for the three polarization classes.

Also prints the sqrt(alpha + beta ln N) fit and the large-N model curve
(transcendental solution with the default sampling constant).
"""

import argparse

import numpy as np

from superradiance import finite, fitting, infinite, output
from superradiance.greens import Polarization
from superradiance.lattice import LatticeSpec, displacement_table

POLS = {
    "out_of_plane": Polarization.linear((1.0, 0.0, 0.0)),
    "in_plane_linear": Polarization.linear((0.0, 0.0, 1.0)),
    "in_plane_circular": Polarization.circular((0.0, 0.0, 1.0), (0.0, 1.0, 0.0)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n1d", type=int, nargs="+", default=[10, 16, 24, 32, 40])
    ap.add_argument("--pol", choices=list(POLS), nargs="+", default=list(POLS))
    ap.add_argument("--out", default="square_critical_distance.csv")
    args = ap.parse_args()
    rows = []
    for name in args.pol:
        d_max = []
        for n in args.n1d:
            spec = LatticeSpec.from_geometry("square", n, 0.3)
            res = finite.critical_distance_scan(spec, POLS[name], table=displacement_table(spec))
            model = infinite.dcrit_2d_model(n * n, infinite.TwoDModelParams.for_polarization(name))
            d_max.append(res.d_max)
            rows.append((n * n, n, name, res.d_max, model, res.crossings))
        fit = fitting.fit_sqrt_log(np.array(args.n1d) ** 2, d_max)
        print(f"{name}: d_max={np.round(d_max, 4).tolist()} alpha={fit.params['alpha']:.4f} "
              f"beta={fit.params['beta']:.4f} R^2={fit.r_squared:.3f}")
    cols = ("N", "n_1d", "pol", "d_max", "model_d_crit", "crossings")
    output.write(args.out, output.make_header("square_critical_distance", vars(args), cols), rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
