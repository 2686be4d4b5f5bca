"""Critical spacing of cubic (and optionally tetrahedral) arrays with a power-law fit."""

import argparse

import numpy as np

from superradiance import finite, fitting, infinite, output
from superradiance.greens import Polarization
from superradiance.lattice import LatticeSpec, main_axis


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--geometry", choices=("cubic", "tetrahedral"), default="cubic")
    ap.add_argument("--n1d", type=int, nargs="+", default=[6, 8, 10, 12, 16, 20])
    ap.add_argument("--step", type=float, default=finite.DEFAULT_STEP)
    ap.add_argument("--out", default="cubic_critical_distance.csv")
    args = ap.parse_args()
    rows, d_max = [], []
    for n in args.n1d:
        spec = LatticeSpec.from_geometry(args.geometry, n, 1.0)
        res = finite.critical_distance_scan(spec, Polarization.linear(main_axis(spec)), coarse_step=args.step)
        d_max.append(res.d_max)
        rows.append((n**3, n, res.d_max, infinite.dcrit_3d_model(n**3)))
        print(f"N={n**3:7d} d_max={res.d_max:.4f}")
    if len(d_max) >= fitting.MIN_POINTS:
        fit = fitting.fit_power_law(np.array(args.n1d) ** 3, d_max)
        print(f"d = {fit.params['q']:.4f} N^{fit.params['p']:.4f}  (R^2={fit.r_squared:.3f})")
    header = output.make_header("cubic_critical_distance", vars(args), ("N", "n_1d", "d_max", "model_d_crit"))
    output.write(args.out, header, rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
