"""Variance of collective decay rates, spectra and critical-distance scans."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, LinearOperator, eigsh

from .errors import ConvergenceError, NumericalError, SizeLimitError, ValidationError
from .greens import pair_gamma
from .lattice import DisplacementTable, Lattice, LatticeSpec, displacement_table, unit_cell

DENSE_VARIANCE_CAP = 5000
SPECTRUM_CAP = 2000
MAX_RATE_CAP = 10**5

DEFAULT_STEP = 1.0 / 200.0
DEFAULT_WINDOWS = {1: (0.05, 1.2), 2: (0.05, 1.2), 3: (0.5, 3.5)}

_CHUNK = 1 << 16


@dataclass(frozen=True)
class DecaySummary:
    n_atoms: int
    d: float
    variance: float
    largest_rate: float | None = None

    @property
    def burst(self) -> bool:
        # strict inequality: variance == 1 is not a burst
        return self.variance > 1.0

    def to_dict(self) -> dict:
        return {
            "n_atoms": self.n_atoms,
            "d": self.d,
            "variance": self.variance,
            "burst": self.burst,
            "largest_rate": self.largest_rate,
        }


@dataclass(frozen=True)
class CriticalDistanceResult:
    crossings: list
    scan_range: tuple
    resolution: float
    coarse_step: float = DEFAULT_STEP
    grid: np.ndarray | None = field(default=None, repr=False, compare=False)
    variances: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def d_max(self) -> float | None:
        return self.crossings[-1] if self.crossings else None

    def to_dict(self) -> dict:
        return {
            "crossings": list(self.crossings),
            "d_max": self.d_max,
            "scan_range": list(self.scan_range),
            "resolution": self.resolution,
            "coarse_step": self.coarse_step,
        }


def _sum_sq_chunk(vectors, mult, pol):
    g = pair_gamma(vectors, pol)
    return float(np.dot(mult, g * g))


def sum_squared_rates(table: DisplacementTable, pol, d: float | None = None,
                      threads: int | None = None) -> float:
    """Sum over channels of (Gamma_nu/Gamma_0)^2 from the displacement table."""
    vectors = table.vectors(d)
    mult = table.multiplicities.astype(float)
    bounds = range(0, len(mult), _CHUNK)
    if threads and threads > 1 and len(mult) > _CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda i: _sum_sq_chunk(vectors[i:i + _CHUNK], mult[i:i + _CHUNK], pol), bounds))
    else:
        parts = [_sum_sq_chunk(vectors[i:i + _CHUNK], mult[i:i + _CHUNK], pol) for i in bounds]
    return table.n_atoms + 2.0 * float(np.sum(parts))


def variance_fast(table: DisplacementTable, pol, d: float | None = None,
                  threads: int | None = None) -> DecaySummary:
    """Variance of the decay rates in O(len(table)) operations.

    Uses Tr(A^2) = N + 2 sum_beta n_beta Gamma_beta^2, so no matrix is built.
    ``d`` rescales the table; it defaults to the spacing the table was made for.
    """
    d = table.d if d is None else float(d)
    n = table.n_atoms
    total = sum_squared_rates(table, pol, d, threads)
    return DecaySummary(n_atoms=n, d=d, variance=total / n - 1.0)


def gamma_matrix(lattice: Lattice, pol, block: int = 512) -> np.ndarray:
    """Dense N x N dissipative matrix Gamma_ij / Gamma_0."""
    pos = lattice.positions
    n = len(pos)
    out = np.empty((n, n))
    for i in range(0, n, block):
        diff = pos[i:i + block, None, :] - pos[None, :, :]
        out[i:i + block] = pair_gamma(diff, pol)
    return out


def variance_dense(lattice: Lattice, pol, max_atoms: int = DENSE_VARIANCE_CAP) -> DecaySummary:
    """Reference variance from the Frobenius norm of the full matrix."""
    n = lattice.n_atoms
    if n > max_atoms:
        raise SizeLimitError(f"dense variance limited to {max_atoms} atoms, got {n}")
    a = gamma_matrix(lattice, pol)
    return DecaySummary(n_atoms=n, d=lattice.spec.d, variance=float(np.sum(a * a)) / n - 1.0)


def decay_spectrum(lattice: Lattice, pol, max_atoms: int = SPECTRUM_CAP) -> np.ndarray:
    """All collective decay rates, in descending order."""
    n = lattice.n_atoms
    if n > max_atoms:
        raise SizeLimitError(f"spectrum limited to {max_atoms} atoms, got {n}")
    try:
        w = np.linalg.eigvalsh(gamma_matrix(lattice, pol))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    return w[::-1]


def toeplitz_operator(spec: LatticeSpec, pol, shift: float = 0.0) -> LinearOperator:
    """Matrix-free product with Gamma/Gamma_0 (+ shift) on a Bravais grid.

    Gamma_ij depends only on the integer offset between sites, so the matrix
    is multilevel Toeplitz; it is embedded in a circulant of twice the size
    and applied with FFTs in O(N log N).
    """
    counts = spec.counts
    dim = len(counts)
    axes = [np.arange(-c + 1, c) for c in counts]
    offs = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    kernel = pair_gamma(offs @ (unit_cell(spec) * spec.d), pol)
    shape = tuple(2 * c for c in counts)
    padded = np.zeros(shape)
    padded[tuple(slice(0, 2 * c - 1) for c in counts)] = kernel
    padded = np.roll(padded, [-(c - 1) for c in counts], axis=tuple(range(dim)))
    kf = np.fft.rfftn(padded)
    n = spec.n_atoms
    inner = tuple(slice(0, c) for c in counts)
    ax = tuple(range(dim))

    def matvec(v):
        v = np.asarray(v, dtype=float).reshape(counts)
        vp = np.zeros(shape)
        vp[inner] = v
        out = np.fft.irfftn(np.fft.rfftn(vp) * kf, s=shape, axes=ax)[inner]
        return (out + shift * v).ravel()

    return LinearOperator((n, n), matvec=matvec, rmatvec=matvec, dtype=float)


def max_decay_rate(lattice: Lattice, pol, tol: float = 1e-8, maxiter: int | None = None,
                   max_atoms: int = MAX_RATE_CAP) -> float:
    """Largest collective decay rate by Lanczos iteration on A + N*1.

    The shift makes the top of the spectrum strictly dominant in magnitude
    even when dark eigenvalues round slightly negative.
    """
    spec = lattice.spec
    n = spec.n_atoms
    if n > max_atoms:
        raise SizeLimitError(f"max_decay_rate limited to {max_atoms} atoms, got {n}")
    if n == 1:
        return 1.0
    if n <= 3:
        return float(decay_spectrum(lattice, pol)[0])
    op = toeplitz_operator(spec, pol, shift=float(n))
    # a uniform start vector is lattice-symmetric and would never reach an
    # antisymmetric top mode; a fixed random vector keeps runs reproducible
    v0 = np.random.default_rng(0).standard_normal(n)
    try:
        w = eigsh(op, k=1, which="LM", tol=tol * 1e-2, maxiter=maxiter, v0=v0,
                  return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge: {exc}") from exc
    except ArpackError as exc:
        raise NumericalError(str(exc)) from exc
    return float(w[0]) - n


def _variance_on_grid(table, pol, ds, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return np.array(list(pool.map(lambda d: variance_fast(table, pol, d).variance, ds)))
    return np.array([variance_fast(table, pol, d).variance for d in ds])


def critical_distance_scan(spec: LatticeSpec, pol, d_lo: float | None = None,
                           d_hi: float | None = None, coarse_step: float = DEFAULT_STEP,
                           xtol: float = 1e-5, threads: int | None = None,
                           table: DisplacementTable | None = None) -> CriticalDistanceResult:
    """All spacings in [d_lo, d_hi] where the variance crosses 1.

    A coarse grid locates every change of burst status; each bracket is then
    refined to ``xtol``. The spacing stored in ``spec`` is ignored.
    """
    lo_default, hi_default = DEFAULT_WINDOWS[spec.dimensionality]
    d_lo = lo_default if d_lo is None else float(d_lo)
    d_hi = hi_default if d_hi is None else float(d_hi)
    if not d_lo < d_hi:
        raise ValidationError(f"need d_lo < d_hi, got [{d_lo}, {d_hi}]")
    if d_lo <= 0 or coarse_step <= 0:
        raise ValidationError("scan range and step must be positive")
    if table is None:
        table = displacement_table(spec)
    n_pts = int(np.ceil((d_hi - d_lo) / coarse_step - 1e-9)) + 1
    ds = np.linspace(d_lo, d_hi, n_pts)
    var = _variance_on_grid(table, pol, ds, threads)
    burst = var > 1.0

    def excess(d):
        return variance_fast(table, pol, d).variance - 1.0

    crossings = []
    for i in np.flatnonzero(burst[:-1] != burst[1:]):
        a, b = ds[i], ds[i + 1]
        if var[i] == 1.0:
            crossings.append(float(a))
            continue
        crossings.append(float(brentq(excess, a, b, xtol=xtol)))
    return CriticalDistanceResult(
        crossings=crossings,
        scan_range=(d_lo, d_hi),
        resolution=xtol,
        coarse_step=float(ds[1] - ds[0]) if len(ds) > 1 else coarse_step,
        grid=ds,
        variances=var,
    )
