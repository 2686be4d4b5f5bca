"""Acceptance criteria, one test each, at their stated tolerances.

Every test records a PASS/FAIL line (printed in the pytest terminal summary
and when this file is run as a script) before asserting.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, LONG_RUNS, X, Y, Z
from superradiance import finite, fitting, infinite
from superradiance.greens import Polarization
from superradiance.lattice import (
    GEOMETRIES,
    LatticeSpec,
    build_lattice,
    displacement_table,
    main_axis,
    polarization_from_angles,
)


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_01_chain_critical_distances():
    t0 = time.perf_counter()
    spec = LatticeSpec.from_geometry("chain", 400, 0.2)
    table = displacement_table(spec)
    got, errs = {}, {}
    for name, vec in (("parallel", Z), ("perpendicular", X)):
        got[name] = finite.critical_distance_scan(spec, Polarization.linear(vec), table=table).d_max
        errs[name] = abs(got[name] / float(infinite.critical_distance_1d(name)) - 1)
    elapsed = time.perf_counter() - t0
    ok = max(errs.values()) < 0.01 and elapsed < 10
    detail = ", ".join(f"{k} d_max={got[k]:.5f} (rel.err {errs[k]:.2%})" for k in got)
    assert report(1, ok, f"{detail}; {elapsed:.1f}s"), detail


def random_pol(rng):
    kind = rng.integers(3)
    if kind == 0:
        return Polarization.linear(rng.normal(size=3))
    if kind == 1:
        return polarization_from_angles(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), "circular")
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    return Polarization(v / np.linalg.norm(v))


def random_spec(rng, max_atoms):
    geometry = str(rng.choice(GEOMETRIES))
    d = float(rng.uniform(0.05, 2.0))
    if geometry == "chain":
        counts = int(rng.integers(2, max_atoms + 1))
    elif geometry in ("cubic", "tetrahedral"):
        top = int(round(max_atoms ** (1 / 3)))
        counts = tuple(int(c) for c in rng.integers(2, top + 1, size=3))
    else:
        top = int(np.sqrt(max_atoms))
        counts = tuple(int(c) for c in rng.integers(2, top + 1, size=2))
    return LatticeSpec.from_geometry(geometry, counts, d)


def test_02_fast_equals_dense():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst, sizes = 0.0, []
    for _ in range(50):
        spec = random_spec(rng, 500)
        pol = random_pol(rng)
        fast = finite.variance_fast(displacement_table(spec), pol).variance
        dense = finite.variance_dense(build_lattice(spec), pol).variance
        worst = max(worst, abs(fast - dense) / abs(dense))
        sizes.append(spec.n_atoms)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 60
    assert report(2, ok, f"max rel.diff {worst:.2e} over 50 configs (N {min(sizes)}..{max(sizes)}); "
                         f"{elapsed:.1f}s")


def test_03_trace_and_positivity():
    rng = np.random.default_rng(3)
    worst_mean, worst_min = 0.0, np.inf
    for _ in range(20):
        spec = random_spec(rng, 1000)
        w = finite.decay_spectrum(build_lattice(spec), random_pol(rng))
        worst_mean = max(worst_mean, abs(w.mean() - 1))
        worst_min = min(worst_min, w.min())
    ok = worst_mean < 1e-9 and worst_min >= -1e-8
    assert report(3, ok, f"max |mean-1| {worst_mean:.1e}, min eigenvalue {worst_min:.1e} over 20 configs")


def test_04_dicke_limit():
    worst, cases = 0.0, 0
    for geometry in ("chain", "square", "cubic"):
        for n_1d in (2, 5, 10):
            spec = LatticeSpec.from_geometry(geometry, n_1d, 1e-4)
            n = spec.n_atoms
            for vec in (X, Z):
                var = finite.variance_fast(displacement_table(spec), Polarization.linear(vec)).variance
                worst = max(worst, abs(var / (n - 1) - 1))
                cases += 1
    assert report(4, worst < 1e-3, f"max rel.err {worst:.1e} over {cases} cases (N_1D in 2,5,10; 1D/2D/3D)")


def test_05_sum_rules():
    parts = []
    ok = True
    for dim, d, pol in ((1, 0.2, "perpendicular"), (1, 0.2, "parallel"), (1, 0.3, "parallel"),
                        (2, 0.2, "out_of_plane"), (2, 0.3, "out_of_plane"), (2, 0.3, "in_plane_linear"),
                        (2, 0.3, "in_plane_circular")):
        err = infinite.sum_rule_check(dim, d, pol).rel_error
        ok &= err < 1e-6
        parts.append(f"{dim}D d={d} {pol} {err:.1e}")
    err3 = infinite.sum_rule_check(3, 0.4, Z).rel_error
    ok &= err3 < 1e-3
    parts.append(f"3D d=0.4 extrapolated {err3:.1e}")
    assert report(5, ok, "; ".join(parts))


def test_06_chain_closed_forms():
    rng = np.random.default_rng(6)
    worst_low = worst_high = max_ratio = 0.0
    for d in rng.uniform(0.02, 0.5, 20):
        for pol in infinite.POL_1D:
            quad = infinite.integral_gamma_1d(d, pol, power=2)
            worst_low = max(worst_low, abs(quad / infinite.closed_form_gamma_sq_1d(d, pol) - 1))
    for d in rng.uniform(0.5, 1.0, 20):
        for pol in infinite.POL_1D:
            quad = infinite.integral_gamma_1d(d, pol, power=2)
            worst_high = max(worst_high, abs(quad / infinite.closed_form_gamma_sq_1d(d, pol) - 1))
    for pol in infinite.POL_1D:
        dc = float(infinite.critical_distance_1d(pol))
        for d in np.linspace(dc + 1e-4, 1.0, 400):
            max_ratio = max(max_ratio, infinite.burst_measure_1d(d, pol).ratio)
    ok = worst_low < 1e-8 and worst_high < 1e-6 and max_ratio < 1
    assert report(6, ok, f"d<0.5 rel.err {worst_low:.1e}; 0.5<d<1 rel.err {worst_high:.1e}; "
                         f"max burst ratio beyond d_c {max_ratio:.4f}")


def test_07_square_scaling():
    t0 = time.perf_counter()
    n1d = [10, 16, 24, 32, 40]
    d_max = []
    for n in n1d:
        spec = LatticeSpec.from_geometry("square", n, 0.3)
        d_max.append(finite.critical_distance_scan(spec, Polarization.linear(X)).d_max)
    elapsed = time.perf_counter() - t0
    res = fitting.fit_sqrt_log(np.array(n1d) ** 2, d_max)
    beta_ref = 9 / (64 * np.pi)
    beta = res.params["beta"]
    monotone = all(b >= a for a, b in zip(d_max, d_max[1:]))
    ok = res.r_squared > 0.98 and abs(beta / beta_ref - 1) <= 0.5 and elapsed < 600
    detail = (f"d_max={[round(x, 4) for x in d_max]} (non-decreasing: {monotone}); "
              f"beta={beta:.4f} vs {beta_ref:.4f}, R^2={res.r_squared:.3f}; {elapsed:.0f}s")
    assert report(7, ok, detail), detail


def test_08_cubic_scaling():
    n1d = [6, 8, 10, 12, 16, 20]
    d_max = []
    for n in n1d:
        spec = LatticeSpec.from_geometry("cubic", n, 1.0)
        d_max.append(finite.critical_distance_scan(spec, Polarization.linear(Z)).d_max)
    res = fitting.fit_power_law(np.array(n1d) ** 3, d_max)
    p = res.params["p"]
    ok = 0.14 <= p <= 0.22
    assert report(8, ok, f"d_max={[round(x, 4) for x in d_max]}; p={p:.4f}, q={res.params['q']:.4f}")


@pytest.mark.slow
@pytest.mark.skipif(not LONG_RUNS, reason="SUPERRADIANCE_LONG=0 skips the 50^3 tetrahedral run")
def test_08b_tetrahedral_spot_check():
    t0 = time.perf_counter()
    spec = LatticeSpec.from_geometry("tetrahedral", 50, 1.0)
    res = finite.critical_distance_scan(spec, Polarization.linear(main_axis(spec)), 0.5, 3.5, coarse_step=0.01)
    elapsed = time.perf_counter() - t0
    ok = abs(res.d_max / 2.3 - 1) <= 0.05 and elapsed < 1800
    assert report("8b", ok, f"tetrahedral 50^3 d_max={res.d_max:.4f} vs 2.3; {elapsed:.0f}s")


def gamma_max(geometry, n, pol):
    return finite.max_decay_rate(build_lattice(LatticeSpec.from_geometry(geometry, n, 0.5)), pol)


def test_09_max_rate_scalings():
    n2 = [10, 20, 30, 40, 60]
    g2 = [gamma_max("square", n, Polarization.linear(X)) for n in n2]
    s2 = fitting.fit_power_law(n2, g2).params["p"]
    n3 = [4, 6, 8, 10, 12]
    g3 = [gamma_max("cubic", n, Polarization.linear(Z)) for n in n3]
    s3 = fitting.fit_power_law(n3, g3).params["p"]
    g200 = gamma_max("chain", 200, Polarization.linear(Z))
    g800 = gamma_max("chain", 800, Polarization.linear(Z))
    change = abs(g800 / g200 - 1)
    ok = abs(s2 - 0.5) <= 0.1 and abs(s3 - 1.0) <= 0.15 and change < 0.02
    assert report(9, ok, f"2D slope {s2:.3f}, 3D slope {s3:.3f}, 1D Gamma_max {g200:.5f} -> {g800:.5f} "
                         f"({change:.2%})")


def test_10_model_solvers():
    params = infinite.TwoDModelParams.for_polarization("out_of_plane")
    trans = infinite.dcrit_2d_model(1e8, params)
    asym = infinite.dcrit_2d_model(1e8, params, "asymptotic")
    ratios = [infinite.dcrit_3d_model(2 * n) / infinite.dcrit_3d_model(n) for n in (1e3, 1e5, 1e9)]
    step_err = max(abs(r - 2 ** (1 / 6)) for r in ratios)
    ok = abs(trans / asym - 1) < 0.02 and step_err < 1e-9
    assert report(10, ok, f"2D transcendental {trans:.5f} vs asymptotic {asym:.5f} "
                          f"({abs(trans / asym - 1):.2%}); 3D step error {step_err:.1e}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            if name == "test_08b_tetrahedral_spot_check" and not LONG_RUNS:
                print("[SKIP] criterion 8b: disabled by SUPERRADIANCE_LONG=0")
                continue
            try:
                fn()
            except AssertionError:
                pass
