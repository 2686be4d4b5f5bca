"""Largest collective decay rate at half-wavelength spacing versus array size."""

import argparse

from superradiance import finite, fitting, output
from superradiance.greens import Polarization
from superradiance.lattice import LatticeSpec, build_lattice

CASES = {
    "chain": ([50, 100, 200, 400, 800], (0.0, 0.0, 1.0)),
    "square": ([10, 20, 30, 40, 60], (1.0, 0.0, 0.0)),
    "cubic": ([4, 6, 8, 10, 12], (0.0, 0.0, 1.0)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=float, default=0.5)
    ap.add_argument("--out", default="max_decay_rate.csv")
    args = ap.parse_args()
    rows = []
    for geometry, (sizes, pol) in CASES.items():
        rates = []
        for n in sizes:
            spec = LatticeSpec.from_geometry(geometry, n, args.d)
            rates.append(finite.max_decay_rate(build_lattice(spec), Polarization.linear(pol)))
            rows.append((geometry, n, spec.n_atoms, rates[-1]))
        if geometry == "chain":
            fit = fitting.fit_saturation(sizes, rates)
            print(f"chain: {rates[0]:.5f} -> {rates[-1]:.5f}, c={fit.params['c']:.3f}")
        else:
            fit = fitting.fit_power_law(sizes, rates)
            print(f"{geometry}: log-log slope {fit.params['p']:.3f}")
    header = output.make_header("max_decay_rate", vars(args), ("geometry", "n_1d", "N", "gamma_max"))
    output.write(args.out, header, rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
