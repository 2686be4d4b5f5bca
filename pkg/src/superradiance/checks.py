"""Fast self-checks run by ``superradiance check``.

Each check compares two independent routes (or an exact known value) and
reports one pass/fail line. The full-tolerance versions live in the test
suite; these are sized to finish in well under a minute.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import finite, infinite
from .lattice import LatticeSpec, build_lattice, displacement_table, main_axis
from .greens import Polarization

X = (1.0, 0.0, 0.0)
Z = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_1d_bounds() -> CheckResult:
    spec = LatticeSpec.from_geometry("chain", 400, 0.2)
    got = {}
    for name, pol in (("parallel", Z), ("perpendicular", X)):
        res = finite.critical_distance_scan(spec, Polarization.linear(pol), 0.05, 1.0)
        got[name] = res.d_max
    errs = {k: abs(v / float(infinite.critical_distance_1d(k)) - 1) for k, v in got.items()}
    return CheckResult("1D critical distance (N=400)", max(errs.values()) < 0.01,
                       ", ".join(f"{k} d_max={got[k]:.5f} rel.err={errs[k]:.2e}" for k in got))


def check_oracle(n_configs: int = 10, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_configs):
        geometry = rng.choice(["chain", "square", "triangular", "rhombic", "cubic", "tetrahedral"])
        n = {"chain": rng.integers(2, 60)}.get(geometry, rng.integers(2, 6 if geometry in ("cubic", "tetrahedral") else 10))
        spec = LatticeSpec.from_geometry(str(geometry), int(n), float(rng.uniform(0.05, 1.5)))
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        pol = Polarization(v / np.linalg.norm(v))
        fast = finite.variance_fast(displacement_table(spec), pol).variance
        dense = finite.variance_dense(build_lattice(spec), pol).variance
        worst = max(worst, abs(fast - dense) / max(abs(dense), 1e-300))
    return CheckResult("fast vs dense variance", worst < 1e-10, f"max rel.diff={worst:.2e} over {n_configs} configs")


def check_trace_psd() -> CheckResult:
    worst_mean, worst_min = 0.0, np.inf
    for geometry, n, d in (("chain", 40, 0.2), ("square", 6, 0.4), ("cubic", 4, 0.6), ("tetrahedral", 3, 0.3)):
        spec = LatticeSpec.from_geometry(geometry, n, d)
        w = finite.decay_spectrum(build_lattice(spec), Polarization.linear(main_axis(spec)))
        worst_mean = max(worst_mean, abs(w.mean() - 1))
        worst_min = min(worst_min, w.min())
    return CheckResult("trace and positivity", worst_mean < 1e-9 and worst_min >= -1e-8,
                       f"|mean-1|={worst_mean:.1e}, min eig={worst_min:.1e}")


def check_dicke_limit() -> CheckResult:
    worst = 0.0
    for geometry in ("chain", "square", "cubic"):
        for n_1d in (2, 5, 10) if geometry == "chain" else (2, 3):
            spec = LatticeSpec.from_geometry(geometry, n_1d, 1e-4)
            n = spec.n_atoms
            v = finite.variance_fast(displacement_table(spec), Polarization.linear(Z)).variance
            worst = max(worst, abs(v / (n - 1) - 1))
    return CheckResult("Dicke limit", worst < 1e-3, f"max rel.err={worst:.1e}")


def check_sum_rules() -> CheckResult:
    results = [infinite.sum_rule_check(1, 0.2, "perpendicular"),
               infinite.sum_rule_check(1, 0.3, "parallel"),
               infinite.sum_rule_check(2, 0.3, "out_of_plane"),
               infinite.sum_rule_check(3, 0.4, Z)]
    ok = all(r.rel_error < 1e-6 for r in results[:3]) and results[3].rel_error < 1e-3
    return CheckResult("Brillouin-zone sum rules", ok,
                       ", ".join(f"{r.dimensionality}D err={r.rel_error:.1e}" for r in results))


def check_closed_forms() -> CheckResult:
    worst = 0.0
    for d in (0.15, 0.3, 0.45, 0.6, 0.8, 0.95):
        for pol in infinite.POL_1D:
            quad = infinite.integral_gamma_1d(d, pol, power=2)
            worst = max(worst, abs(quad / infinite.closed_form_gamma_sq_1d(d, pol) - 1))
    return CheckResult("1D closed forms vs quadrature", worst < 1e-8, f"max rel.err={worst:.1e}")


def check_models() -> CheckResult:
    p2 = infinite.TwoDModelParams.for_polarization("out_of_plane")
    t = infinite.dcrit_2d_model(1e8, p2)
    a = infinite.dcrit_2d_model(1e8, p2, "asymptotic")
    r = infinite.dcrit_3d_model(2000) / infinite.dcrit_3d_model(1000)
    ok = abs(t / a - 1) < 0.02 and abs(r - 2 ** (1 / 6)) < 1e-9
    return CheckResult("model solvers", ok, f"2D trans/asym={t / a:.4f}, 3D step={r:.12f}")


ALL_CHECKS = (check_1d_bounds, check_oracle, check_trace_psd, check_dicke_limit,
              check_sum_rules, check_closed_forms, check_models)


def run_checks() -> list:
    return [check() for check in ALL_CHECKS]
