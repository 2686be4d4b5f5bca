"""Command-line front end: spectrum | scan | infinite | fit | check.

Angles on the command line are in degrees. Every output file starts with a
JSON header holding the fully resolved configuration, which ``--config``
accepts back to reproduce a run.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import checks, finite, fitting, infinite, output
from .errors import NumericalError, SuperradianceError, ValidationError
from .greens import Polarization
from .lattice import (
    GEOMETRIES,
    LatticeSpec,
    X_HAT,
    Y_HAT,
    Z_HAT,
    build_lattice,
    displacement_table,
    main_axis,
    polarization_from_angles,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str = ""
    geometry: str = "chain"
    n: list | None = None
    nx: int | None = None
    ny: int | None = None
    nz: int | None = None
    d: float | None = None
    d_range: list | None = None
    d_step: float | None = None
    pol: str | None = None
    lattice_angle: float | None = None
    pol_angles: list | None = None
    lattice_angles: list | None = None
    quantity: str = "d-max"
    dim: int | None = None
    k_points: int = 201
    delta: float = infinite.DEFAULT_DELTA
    model: str = "power_law"
    input: str | None = None
    x_column: str | None = None
    y_column: str | None = None
    out: str | None = None
    format: str = "csv"
    threads: int | None = None

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _floats(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file or a previous output file")
    common.add_argument("--geometry", choices=GEOMETRIES)
    common.add_argument("--n", type=_ints, help="atoms per axis; comma list for scans")
    common.add_argument("--nx", type=int)
    common.add_argument("--ny", type=int)
    common.add_argument("--nz", type=int)
    common.add_argument("--d", type=float, help="lattice spacing in wavelengths")
    common.add_argument("--d-range", type=_floats, help="lo,hi in wavelengths")
    common.add_argument("--d-step", type=float)
    common.add_argument("--pol", help="perp | par | out-of-plane | in-plane-linear | "
                        "in-plane-circular | x | y | z | angle=THETA,PHI[,circular] (degrees)")
    common.add_argument("--lattice-angle", type=float, help="2D lattice angle in degrees")
    common.add_argument("--delta", type=float, help="3D regularization")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--threads", type=int)

    parser = _Parser(prog="superradiance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    # unset flags stay out of the namespace so config-file values survive
    kw = {"parents": [common], "argument_default": argparse.SUPPRESS}
    sub.add_parser("spectrum", **kw, help="decay-rate spectra and variance vs d")
    scan = sub.add_parser("scan", **kw, help="critical distance vs N or angle")
    scan.add_argument("--pol-angles", type=_floats, help="polar angles (deg) for a polarization sweep")
    scan.add_argument("--lattice-angles", type=_floats, help="2D lattice angles (deg) to sweep")
    scan.add_argument("--quantity", choices=("d-max", "gamma-max"))
    inf = sub.add_parser("infinite", **kw, help="infinite-array band and sum rule")
    inf.add_argument("--dim", type=int, choices=(1, 2, 3))
    inf.add_argument("--k-points", type=int)
    fit = sub.add_parser("fit", **kw, help="least-squares scaling fit of a scan file")
    fit.add_argument("input")
    fit.add_argument("--model", choices=fitting.MODELS)
    fit.add_argument("--x-column")
    fit.add_argument("--y-column")
    sub.add_parser("check", **kw, help="run the invariant self-checks")
    return parser


def resolve_config(argv) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    data = {}
    path = args.pop("config", None)
    if path:
        text = Path(path).read_text()
        try:
            blob = json.loads(text)
            data = blob.get("header", {}).get("config", blob) if "header" in blob else blob
        except json.JSONDecodeError:
            data = output.read_header(path)["config"]
        data = {k: v for k, v in data.items() if v is not None}
    data.update(args)
    return RunConfig.from_mapping(data)


def _dimension(geometry: str) -> int:
    return 1 if geometry == "chain" else 3 if geometry in ("cubic", "tetrahedral") else 2


def lattice_spec(cfg: RunConfig, n=None, d: float | None = None, lattice_angle=None) -> LatticeSpec:
    dim = _dimension(cfg.geometry)
    if n is None:
        per_axis = [cfg.nx, cfg.ny, cfg.nz][:dim]
        if all(c is not None for c in per_axis):
            n = tuple(per_axis)
        elif cfg.n:
            n = cfg.n[0]
        else:
            raise ValidationError("atom count missing: give --n or --nx/--ny/--nz")
    angle = lattice_angle if lattice_angle is not None else cfg.lattice_angle
    angle = None if angle is None else np.deg2rad(angle)
    return LatticeSpec.from_geometry(cfg.geometry, n, 1.0 if d is None else d, angle)


def resolve_polarization(name: str | None, spec: LatticeSpec) -> Polarization:
    dim = spec.dimensionality
    if name is None:
        name = {1: "perp", 2: "out-of-plane", 3: "par"}[dim]
    if name.startswith("angle="):
        parts = name[len("angle="):].split(",")
        kind = "circular" if parts[-1].strip() == "circular" else "linear"
        nums = [float(p) for p in parts if p.strip() != "circular"]
        theta, phi = np.deg2rad(nums[0]), np.deg2rad(nums[1] if len(nums) > 1 else 0.0)
        return polarization_from_angles(theta, phi, kind)
    axes = {"x": X_HAT, "y": Y_HAT, "z": Z_HAT}
    if name in axes:
        return Polarization.linear(axes[name])
    if dim == 1:
        table = {"perp": X_HAT, "perpendicular": X_HAT, "par": Z_HAT, "parallel": Z_HAT}
    elif dim == 2:
        if name == "in-plane-circular":
            return Polarization.circular(Z_HAT, Y_HAT)
        table = {"perp": X_HAT, "out-of-plane": X_HAT, "par": Z_HAT, "in-plane-linear": Z_HAT}
    else:
        table = {"par": main_axis(spec), "axis": main_axis(spec)}
    if name not in table:
        raise ValidationError(f"polarization {name!r} not available for {spec.geometry} arrays")
    return Polarization.linear(table[name])


def infinite_pol_class(name: str | None, dim: int):
    if dim == 1:
        table = {None: "perpendicular", "perp": "perpendicular", "perpendicular": "perpendicular",
                 "par": "parallel", "parallel": "parallel"}
    elif dim == 2:
        table = {None: "out_of_plane", "perp": "out_of_plane", "out-of-plane": "out_of_plane",
                 "par": "in_plane_linear", "in-plane-linear": "in_plane_linear",
                 "in-plane-circular": "in_plane_circular"}
    else:
        table = {None: Z_HAT, "par": Z_HAT, "axis": Z_HAT, "x": X_HAT, "y": Y_HAT, "z": Z_HAT}
    if name not in table:
        raise ValidationError(f"polarization {name!r} not available for infinite {dim}D arrays")
    return table[name]


def _emit(cfg: RunConfig, header: dict, rows, path: str | None = None):
    path = path or cfg.out
    if path is None:
        sys.stdout.write(output.dumps(header, rows, cfg.format))
        return None
    return output.write(path, header, rows, cfg.format)


def _d_grid(cfg: RunConfig, default):
    lo, hi = cfg.d_range or default
    step = cfg.d_step or 0.01
    if not 0 < lo < hi:
        raise ValidationError("--d-range needs 0 < lo < hi")
    return np.linspace(lo, hi, int(np.ceil((hi - lo) / step - 1e-9)) + 1)


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = lattice_spec(cfg)
    if spec.n_atoms > finite.SPECTRUM_CAP:
        raise ValidationError(f"spectrum limited to {finite.SPECTRUM_CAP} atoms")
    pol = resolve_polarization(cfg.pol, spec)
    rows, var_rows = [], []
    for d in _d_grid(cfg, (0.05, 1.0)):
        w = finite.decay_spectrum(build_lattice(spec.with_d(float(d))), pol)
        rows.extend((float(d), i, float(x)) for i, x in enumerate(w))
        var_rows.append((float(d), float(np.sum(w * w)) / len(w) - 1.0))
    conf = cfg.to_dict()
    extra = {"lattice": {k: v for k, v in spec.to_dict().items() if k != "d"}, "polarization": pol.to_list()}
    _emit(cfg, output.make_header("spectrum", conf, ("d", "eigenvalue_index", "gamma_over_gamma0"), extra), rows)
    companion = None
    if cfg.out:
        p = Path(cfg.out)
        companion = str(p.with_name(p.stem + "_variance" + p.suffix))
    _emit(cfg, output.make_header("spectrum", conf, ("d", "variance"), extra), var_rows, companion)
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    threads = cfg.threads or os.cpu_count() or 1
    dim = _dimension(cfg.geometry)
    lo, hi = cfg.d_range or finite.DEFAULT_WINDOWS[dim]
    step = cfg.d_step or finite.DEFAULT_STEP
    conf = cfg.to_dict()
    rows = []
    if cfg.quantity == "gamma-max":
        if cfg.d is None:
            raise ValidationError("--quantity gamma-max needs --d")
        for n in cfg.n or []:
            spec = lattice_spec(cfg, n=n, d=cfg.d)
            g = finite.max_decay_rate(build_lattice(spec), resolve_polarization(cfg.pol, spec))
            rows.append((spec.n_atoms, n, g))
        cols = ("N", "n_1d", "gamma_max")
    elif cfg.pol_angles:
        spec = lattice_spec(cfg)
        table = displacement_table(spec)
        phi = 0.0
        for theta in cfg.pol_angles:
            pol = polarization_from_angles(np.deg2rad(theta), phi)
            res = finite.critical_distance_scan(spec, pol, lo, hi, step, threads=threads, table=table)
            rows.append((theta, phi, res.d_max, res.crossings))
        cols = ("theta_deg", "phi_deg", "d_max", "crossings")
    elif cfg.lattice_angles:
        if dim != 2:
            raise ValidationError("lattice-angle sweep needs a 2D geometry")
        for angle in cfg.lattice_angles:
            spec = lattice_spec(cfg, lattice_angle=angle)
            res = finite.critical_distance_scan(spec, resolve_polarization(cfg.pol, spec), lo, hi, step,
                                                threads=threads)
            rows.append((angle, spec.n_atoms, res.d_max, res.crossings))
        cols = ("lattice_angle_deg", "N", "d_max", "crossings")
    else:
        for n in cfg.n or []:
            spec = lattice_spec(cfg, n=n)
            res = finite.critical_distance_scan(spec, resolve_polarization(cfg.pol, spec), lo, hi, step,
                                                threads=threads)
            rows.append((spec.n_atoms, n, res.d_max, res.crossings))
        cols = ("N", "n_1d", "d_max", "crossings")
    if not rows:
        raise ValidationError("nothing to scan: give --n values or an angle sweep")
    _emit(cfg, output.make_header("scan", conf, cols, {"scan_range": [lo, hi], "coarse_step": step}), rows)
    return EXIT_OK


def cmd_infinite(cfg: RunConfig) -> int:
    dim = cfg.dim or _dimension(cfg.geometry)
    if cfg.d is None:
        raise ValidationError("infinite needs --d")
    d = cfg.d
    pol = infinite_pol_class(cfg.pol, dim)
    ks = np.linspace(-np.pi / d, np.pi / d, cfg.k_points)
    grid = np.stack(np.meshgrid(*([ks] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    if dim == 1:
        vals = infinite.gamma_k_1d(grid[:, 0], d, pol)
    elif dim == 2:
        vals = infinite.gamma_k_2d(grid, d, pol, strict=False)
    else:
        vals = infinite.gamma_k_3d(grid, d, cfg.delta, pol)
    flags = np.where(np.isfinite(vals), "", "light_cone")
    names = {1: ["kz"], 2: ["kz", "ky"], 3: ["kx", "ky", "kz"]}[dim]
    rows = [tuple(float(c) for c in k) + (float(v) if np.isfinite(v) else "nan", f)
            for k, v, f in zip(grid, vals, flags)]
    extra = {}
    if d < 0.5:
        rule = infinite.sum_rule_check(dim, d, pol)
        extra["sum_rule"] = rule.to_dict()
        print(f"sum rule: integral={rule.integral!r} expected={rule.expected!r} "
              f"rel.err={rule.rel_error:.2e}", file=sys.stderr)
    else:
        extra["sum_rule"] = "skipped (implemented for d < 0.5)"
    cfg_dict = cfg.to_dict()
    cfg_dict["pol"] = cfg.pol
    _emit(cfg, output.make_header("infinite", cfg_dict, names + ["gamma_over_gamma0", "flag"], extra), rows)
    return EXIT_OK


_FIT_COLUMNS = {"power_law": ("N", "d_max"), "sqrt_log": ("N", "d_max"), "saturation": ("n_1d", "gamma_max")}


def cmd_fit(cfg: RunConfig) -> int:
    _, rows = output.read(cfg.input)
    xc, yc = _FIT_COLUMNS[cfg.model]
    xc, yc = cfg.x_column or xc, cfg.y_column or yc
    try:
        pts = [(float(r[xc]), float(r[yc])) for r in rows if r.get(yc) not in (None, "", "None")]
    except KeyError as exc:
        raise ValidationError(f"column {exc} not found in {cfg.input}") from exc
    x, y = (np.array(v) for v in zip(*pts)) if pts else (np.array([]), np.array([]))
    result = fitting.fit(cfg.model, x, y)
    blob = {"header": output.make_header("fit", cfg.to_dict(), ()), "fit": result.to_dict()}
    text = json.dumps(blob, indent=1) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    results = checks.run_checks()
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


COMMANDS = {"spectrum": cmd_spectrum, "scan": cmd_scan, "infinite": cmd_infinite,
            "fit": cmd_fit, "check": cmd_check}


def main(argv=None) -> int:
    try:
        cfg = resolve_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidationError, ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SuperradianceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
