"""Free-space dyadic propagator and normalized pair interaction rates.

Lengths are in units of the transition wavelength and rates in units of the
single-atom decay rate, so the resonant wavenumber is ``K0 = 2*pi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularDisplacementError, ValidationError

K0 = 2.0 * np.pi

# below this xi the cos/xi^2 - sin/xi^3 combination is taken from its series
SERIES_CUTOFF = 1e-3


@dataclass(frozen=True)
class Polarization:
    """Unit complex 3-vector for the transition dipole orientation."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(3)
        norm = np.sqrt(np.vdot(v, v).real)
        if not np.isfinite(norm) or abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"polarization must have unit norm, got |p| = {norm!r}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    @classmethod
    def linear(cls, direction) -> "Polarization":
        v = np.asarray(direction, dtype=float).reshape(3)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValidationError("zero polarization direction")
        return cls(v / n)

    @classmethod
    def circular(cls, first, second) -> "Polarization":
        """(first + i*second)/sqrt(2) for two orthogonal real directions."""
        e1 = np.asarray(first, dtype=float).reshape(3)
        e2 = np.asarray(second, dtype=float).reshape(3)
        e1 = e1 / np.linalg.norm(e1)
        e2 = e2 / np.linalg.norm(e2)
        if abs(e1 @ e2) > 1e-12:
            raise ValidationError("circular polarization needs orthogonal directions")
        return cls((e1 + 1j * e2) / np.sqrt(2.0))

    @property
    def is_linear(self) -> bool:
        # real up to a global phase
        v = self.vector
        i = int(np.argmax(np.abs(v)))
        w = v * np.conj(v[i]) / abs(v[i])
        return bool(np.allclose(w.imag, 0.0, atol=1e-12))

    def to_list(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.vector]


@dataclass(frozen=True)
class PairRates:
    j_over_gamma0: float
    gamma_over_gamma0: float


def _as_pol(pol) -> np.ndarray:
    if isinstance(pol, Polarization):
        return pol.vector
    return Polarization(pol).vector


def _radial_imag(xi):
    """sin(xi)/xi and cos(xi)/xi**2 - sin(xi)/xi**3, stable down to xi = 0."""
    xi = np.asarray(xi, dtype=float)
    sinc = np.sinc(xi / np.pi)
    small = xi < SERIES_CUTOFF
    x2 = xi * xi
    series = -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0 + x2 * x2 * x2 / 45360.0
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.cos(xi) / x2 - np.sin(xi) / (x2 * xi)
    return sinc, np.where(small, series, direct)


def _radial_real(xi):
    """cos(xi)/xi and sin(xi)/xi**2 + cos(xi)/xi**3 (divergent at 0)."""
    xi = np.asarray(xi, dtype=float)
    return np.cos(xi) / xi, np.sin(xi) / xi**2 + np.cos(xi) / xi**3


def free_space_green(r, k0: float = K0, imag_only: bool = False) -> np.ndarray:
    """Dyadic propagator G0(r) between two points separated by ``r``.

    Returns a complex 3x3 tensor, or the real tensor Im G0 when
    ``imag_only`` is set (the only form defined at r = 0).
    """
    r = np.asarray(r, dtype=float).reshape(3)
    dist = float(np.linalg.norm(r))
    if dist == 0.0:
        if not imag_only:
            raise SingularDisplacementError("real part of G0 diverges at zero displacement")
        return np.eye(3) * k0 / (6.0 * np.pi)
    xi = k0 * dist
    rhat = r / dist
    rr = np.outer(rhat, rhat)
    sinc, f2 = _radial_imag(xi)
    pref = k0 / (4.0 * np.pi)
    # Im[e^{i xi}(P I + Q rr)] / xi with P = 1 + (i xi - 1)/xi^2, Q = (3 - 3i xi - xi^2)/xi^2
    im_iso = sinc + f2
    im_rr = -sinc - 3.0 * f2
    imag = pref * (im_iso * np.eye(3) + im_rr * rr)
    if imag_only:
        return imag
    c1, c2 = _radial_real(xi)
    re_iso = c1 - c2
    re_rr = -c1 + 3.0 * c2
    real = pref * (re_iso * np.eye(3) + re_rr * rr)
    return real + 1j * imag


def pair_gamma(disp, pol) -> np.ndarray:
    """Dissipative pair rate Gamma_ij/Gamma_0 for displacements of shape (..., 3).

    Vectorized hot path used by the variance and matrix builders; equals 1 at
    zero displacement.
    """
    p = _as_pol(pol)
    disp = np.asarray(disp, dtype=float)
    dist = np.linalg.norm(disp, axis=-1)
    safe = np.where(dist > 0.0, dist, 1.0)
    rhat = disp / safe[..., None]
    proj = rhat @ p
    c2 = proj.real**2 + proj.imag**2
    sinc, f2 = _radial_imag(K0 * dist)
    return 1.5 * ((1.0 - c2) * sinc + (1.0 - 3.0 * c2) * f2)


def pair_coherent(disp, pol) -> np.ndarray:
    """Coherent pair rate J_ij/Gamma_0; raises on zero displacement."""
    p = _as_pol(pol)
    disp = np.asarray(disp, dtype=float)
    dist = np.linalg.norm(disp, axis=-1)
    if np.any(dist == 0.0):
        raise SingularDisplacementError("coherent rate diverges at zero displacement")
    rhat = disp / dist[..., None]
    proj = rhat @ p
    c2 = proj.real**2 + proj.imag**2
    c1, c3 = _radial_real(K0 * dist)
    return -0.75 * ((1.0 - c2) * c1 - (1.0 - 3.0 * c2) * c3)


def pair_interaction(disp, pol, coherent: bool = True) -> PairRates:
    """Coherent and dissipative rates for a single displacement.

    With ``coherent=False`` only the dissipative part is evaluated and the
    coherent field is reported as NaN, which makes zero displacement legal.
    """
    disp = np.asarray(disp, dtype=float).reshape(3)
    gamma = float(pair_gamma(disp, pol))
    j = float(pair_coherent(disp, pol)) if coherent else float("nan")
    return PairRates(j_over_gamma0=j, gamma_over_gamma0=gamma)
