"""Decay rates of infinite arrays and the resulting critical-distance laws.

Wavevectors are in the same units as K0 (lengths in wavelengths), so the
light cone is |k| <= 2*pi and the first Brillouin zone of spacing d is
[-pi/d, pi/d]^n. Rates are normalized to the single-atom rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.optimize import brentq

from .errors import ConvergenceError, DivergenceError, NumericalError, ValidationError
from .greens import K0

POL_1D = ("parallel", "perpendicular")
POL_2D = ("out_of_plane", "in_plane_linear", "in_plane_circular")

# (a, b) coefficients of the 2D squared-rate integral
TWO_D_COEFFS = {
    "out_of_plane": (0.0, 0.5),
    "in_plane_linear": (1.0, 3.0 / 16.0),
    "in_plane_circular": (1.0, 1.0 / 8.0),
}

DEFAULT_C = 2.0 / 15.0
DEFAULT_DELTA = 1e-4
RICHARDSON_DELTAS = (4e-4, 2e-4, 1e-4)
LIGHT_CONE_TOL = 1e-12


def _check_pol(pol: str, allowed) -> str:
    if pol not in allowed:
        raise ValidationError(f"polarization class must be one of {allowed}, got {pol!r}")
    return pol


def _orders(d: float, reach: float) -> np.ndarray:
    """Reciprocal-lattice indices n with |2 pi n / d| possibly within ``reach``."""
    m = int(np.ceil(reach * d / (2.0 * np.pi))) + 1
    return np.arange(-m, m + 1)


def _reciprocal_vectors(d: float, reach: float, dim: int) -> np.ndarray:
    """Reciprocal vectors of the simple (hyper)cubic lattice with |g| <= reach."""
    n = _orders(d, reach)
    grid = np.stack(np.meshgrid(*([n] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    g = grid * (2.0 * np.pi / d)
    return g[np.linalg.norm(g, axis=1) <= reach * (1.0 + 1e-12)]


# ---------------------------------------------------------------- 1D


def light_cone_term_1d(q, d: float, pol: str) -> np.ndarray:
    """Contribution of one folded wavevector q = kz + g_z (zero outside the light cone)."""
    _check_pol(pol, POL_1D)
    q = np.asarray(q, dtype=float)
    x2 = (q / K0) ** 2
    if pol == "parallel":
        val = 3.0 * np.pi / (2.0 * K0 * d) * (1.0 - x2)
    else:
        val = 3.0 * np.pi / (4.0 * K0 * d) * (1.0 + x2)
    return np.where(np.abs(q) <= K0, val, 0.0)


def gamma_k_1d(kz, d: float, pol: str) -> np.ndarray:
    """Decay rate of the spin wave with wavevector ``kz`` on an infinite chain."""
    kz = np.asarray(kz, dtype=float)
    reach = K0 + (float(np.max(np.abs(kz))) if kz.size else 0.0)
    out = np.zeros_like(kz)
    for n in _orders(d, reach):
        out = out + light_cone_term_1d(kz + 2.0 * np.pi * n / d, d, pol)
    return out


def _breakpoints_1d(d: float) -> list:
    half = np.pi / d
    pts = set()
    for n in _orders(d, K0 + half):
        for edge in (-K0, K0):
            x = edge - 2.0 * np.pi * n / d
            if -half < x < half:
                pts.add(float(x))
    return sorted(pts)


def integral_gamma_1d(d: float, pol: str, power: int = 1) -> float:
    """Adaptive quadrature of Gamma(kz)**power over the first Brillouin zone."""
    half = np.pi / d
    pts = _breakpoints_1d(d)
    val, err = integrate.quad(lambda k: float(gamma_k_1d(k, d, pol)) ** power, -half, half,
                              points=pts or None, limit=500, epsabs=0.0, epsrel=1e-13)
    if not np.isfinite(val):
        raise ConvergenceError("1D Brillouin-zone quadrature failed")
    return val


def closed_form_gamma_sq_1d(d: float, pol: str) -> float:
    """Exact integral of Gamma^2 over the first zone for d <= 1.

    For d <= 1/2 only g_z = 0 contributes. For 1/2 < d <= 1 the neighbours
    g_z = +-2 pi/d add the polynomial corrections in 1/d.
    """
    _check_pol(pol, POL_1D)
    if d <= 0:
        raise ValidationError("d must be positive")
    if d <= 0.5:
        c = 21.0 / 40.0 if pol == "perpendicular" else 3.0 / 5.0
        return c / K0 * (2.0 * np.pi / d) ** 2
    if d <= 1.0:
        u = 1.0 / d
        if pol == "perpendicular":
            poly = 63.0 / 20.0 - 9.0 / 4.0 * u + 1.5 * u**2 - 3.0 / 8.0 * u**3 - 3.0 / 160.0 * u**5
        else:
            poly = 18.0 / 5.0 - 3.0 * u**2 + 1.5 * u**3 - 3.0 / 40.0 * u**5
        return 2.0 * np.pi**2 / (K0 * d**2) * poly
    raise ValidationError("closed form only available for d <= 1")


def upper_bound_gamma_sq_1d(d: float, pol: str) -> float:
    """Stated analytic upper bounds on the squared-rate integral for d > 1."""
    _check_pol(pol, POL_1D)
    if pol == "perpendicular":
        return 21.0 * np.pi**2 / (5.0 * K0 * d**2) + 63.0 * np.pi / (48.0 * d)
    return 24.0 * np.pi**2 / (5.0 * K0 * d**2) + 3.0 * np.pi / (4.0 * d)


@dataclass(frozen=True)
class BurstMeasure1D:
    d: float
    pol: str
    integral: float
    threshold: float
    method: str
    upper_bound: float | None = None

    @property
    def ratio(self) -> float:
        return self.integral / self.threshold

    @property
    def burst(self) -> bool:
        return self.ratio > 1.0


def burst_measure_1d(d: float, pol: str) -> BurstMeasure1D:
    """Integral of Gamma^2 against the burst threshold 4 pi / d."""
    _check_pol(pol, POL_1D)
    if not d > 0:
        raise ValidationError("d must be positive")
    threshold = 4.0 * np.pi / d
    if d <= 0.5:
        return BurstMeasure1D(d, pol, closed_form_gamma_sq_1d(d, pol), threshold, "closed")
    if d <= 1.0:
        return BurstMeasure1D(d, pol, closed_form_gamma_sq_1d(d, pol), threshold, "polynomial")
    return BurstMeasure1D(d, pol, integral_gamma_1d(d, pol, power=2), threshold, "quadrature",
                          upper_bound=upper_bound_gamma_sq_1d(d, pol))


def mean_square_rate_1d(d: float, pol: str) -> float:
    """Infinite-chain limit of (1/N) sum_nu (Gamma_nu/Gamma_0)^2."""
    return d / (2.0 * np.pi) * integral_gamma_1d(d, pol, power=2)


def critical_distance_1d(pol: str) -> Fraction:
    _check_pol(pol, POL_1D)
    return Fraction(3, 10) if pol == "parallel" else Fraction(21, 80)


# ---------------------------------------------------------------- 2D


def gamma_k_2d(k, d: float, pol: str, strict: bool = True) -> np.ndarray:
    """Decay rate on an infinite square array in the y-z plane.

    ``k`` has shape (..., 2) with components along z and y; in-plane linear
    polarization points along z. Points touching the light cone raise
    ``DivergenceError`` unless ``strict`` is false, in which case they are inf.
    """
    _check_pol(pol, POL_2D)
    k = np.asarray(k, dtype=float)
    if k.shape[-1] != 2:
        raise ValidationError("2D wavevectors need two components")
    reach = K0 + (float(np.max(np.linalg.norm(k, axis=-1))) if k.size else 0.0)
    out = np.zeros(k.shape[:-1])
    for g in _reciprocal_vectors(d, reach, 2):
        q = k + g
        q2 = np.sum(q * q, axis=-1)
        qn = np.sqrt(q2)
        touch = np.abs(qn - K0) <= LIGHT_CONE_TOL * K0
        if strict and np.any(touch):
            raise DivergenceError("decay rate diverges on the light cone |k + g| = k0")
        inside = (qn <= K0) & ~touch
        if not np.any(inside | touch):
            continue
        if pol == "out_of_plane":
            num = q2
        elif pol == "in_plane_linear":
            num = K0**2 - q[..., 0] ** 2
        else:
            num = K0**2 - 0.5 * q2
        with np.errstate(divide="ignore", invalid="ignore"):
            term = num / np.sqrt(np.where(inside, K0**2 - q2, 1.0))
        out = out + np.where(inside, term, 0.0) + np.where(touch, np.inf, 0.0)
    return 3.0 * np.pi / (K0**3 * d**2) * out


def integral_gamma_sq_2d(d: float, pol: str, eps: float) -> float:
    """Integral of Gamma^2 over the disc |k| <= k0 (1 - eps), for d < 1/2.

    The radial variable t = -ln(1 - k/k0) flattens the 1/(k0 - k) growth.
    """
    if d >= 0.5:
        raise ValidationError("truncated 2D integral implemented for d < 0.5")
    t_max = -np.log(eps)

    def radial(t, phi):
        kk = K0 * (1.0 - np.exp(-t))
        jac = K0 * np.exp(-t)
        g = gamma_k_2d(np.array([kk * np.cos(phi), kk * np.sin(phi)]), d, pol)
        return float(g) ** 2 * kk * jac

    val, _ = integrate.dblquad(radial, 0.0, 2.0 * np.pi, 0.0, t_max, epsabs=0.0, epsrel=1e-10)
    return val


# ---------------------------------------------------------------- 3D


def gamma_k_3d(k, d: float, delta: float = DEFAULT_DELTA, pol_axis=(0.0, 0.0, 1.0),
               shell_cutoff: float = 2.0) -> np.ndarray:
    """Lorentzian-regularized decay rate of an infinite cubic array.

    Reciprocal vectors with |k + g| <= shell_cutoff * k0 are summed, so the
    whole resonance around |k + g| = k0 is kept; ``shell_cutoff=1`` keeps only
    the inner half. Values are finite for any ``delta > 0``.
    """
    if not delta > 0:
        raise ValidationError(f"regularization delta must be positive, got {delta}")
    p = np.asarray(pol_axis, dtype=float).reshape(3)
    p = p / np.linalg.norm(p)
    k = np.asarray(k, dtype=float)
    if k.shape[-1] != 3:
        raise ValidationError("3D wavevectors need three components")
    cut = shell_cutoff * K0
    reach = cut + (float(np.max(np.linalg.norm(k, axis=-1))) if k.size else 0.0)
    out = np.zeros(k.shape[:-1])
    k02 = K0 * K0
    for g in _reciprocal_vectors(d, reach, 3):
        q = k + g
        q2 = np.sum(q * q, axis=-1)
        inside = q2 <= cut * cut
        if not np.any(inside):
            continue
        proj = q @ p
        term = delta * (k02 - proj * proj) / ((k02 - q2) ** 2 + delta**2 * k02 * k02)
        out = out + np.where(inside, term, 0.0)
    return 6.0 * np.pi / (K0 * d**3) * out


def _radial_panels(center: float, width: float, r_hi: float, order: int = 20):
    """Gauss-Legendre nodes on [0, r_hi], refined geometrically toward ``center``."""
    edges = {0.0, r_hi}
    h = width
    while h < center:
        edges.add(center - h)
        if center + h < r_hi:
            edges.add(center + h)
        h *= 2.0
    edges = np.array(sorted(edges))
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w
    return nodes.ravel(), weights.ravel()


def integral_gamma_3d(d: float, delta: float, pol_axis=(0.0, 0.0, 1.0),
                      n_theta: int = 24, n_phi: int = 48, shell_cutoff: float = 2.0) -> float:
    """Integral of the regularized 3D rate over the cubic first Brillouin zone.

    Spherical coordinates about k = 0: inside the inscribed ball the radial
    rule is refined around the resonant shell k = k0 on the scale of the
    Lorentzian width; the cube corners are covered by an outer panel.
    """
    if d >= 0.5:
        raise ValidationError("3D zone integral implemented for d < 0.5")
    half = np.pi / d
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * np.pi / n_phi
    st = np.sqrt(1.0 - ct**2)
    dirs = np.stack(
        [st[:, None] * np.cos(phi)[None, :], st[:, None] * np.sin(phi)[None, :],
         np.repeat(ct[:, None], n_phi, axis=1)], axis=-1).reshape(-1, 3)
    ang_w = (wt[:, None] * wphi * np.ones(n_phi)[None, :]).ravel()
    r_in, w_in = _radial_panels(K0, 0.25 * delta * K0, half)
    x, w = np.polynomial.legendre.leggauss(20)
    total = 0.0
    for direction, aw in zip(dirs, ang_w):
        r_max = half / np.max(np.abs(direction))
        r_out = half + (r_max - half) * 0.5 * (x + 1.0)
        w_out = (r_max - half) * 0.5 * w
        r = np.concatenate([r_in, r_out])
        wr = np.concatenate([w_in, w_out])
        vals = gamma_k_3d(r[:, None] * direction[None, :], d, delta, pol_axis, shell_cutoff)
        total += aw * float(np.sum(wr * r * r * vals))
    return total


def richardson_zero(hs, values) -> float:
    """Extrapolate values(h) to h = 0 with a polynomial through all samples."""
    hs = np.asarray(hs, dtype=float)
    values = np.asarray(values, dtype=float)
    coef = np.polyfit(hs, values, len(hs) - 1)
    return float(coef[-1])


# ---------------------------------------------------------------- sum rules


@dataclass(frozen=True)
class SumRuleResult:
    dimensionality: int
    d: float
    pol: str
    integral: float
    expected: float

    @property
    def rel_error(self) -> float:
        return abs(self.integral - self.expected) / self.expected

    def to_dict(self) -> dict:
        return {
            "dimensionality": self.dimensionality,
            "d": self.d,
            "pol": self.pol,
            "integral": self.integral,
            "expected": self.expected,
            "rel_error": self.rel_error,
        }


def sum_rule_check(dimensionality: int, d: float, pol="perpendicular",
                   deltas=RICHARDSON_DELTAS) -> SumRuleResult:
    """Integrate Gamma(k) over the first zone; the exact answer is (2 pi/d)^n.

    ``pol`` is a class name in 1D/2D and an axis (3-vector) in 3D.
    """
    if not 0 < d < 0.5:
        raise ValidationError("sum rules are evaluated in the single-order regime d < 0.5")
    expected = (2.0 * np.pi / d) ** dimensionality
    if dimensionality == 1:
        value = integral_gamma_1d(d, pol, power=1)
        label = pol
    elif dimensionality == 2:
        _check_pol(pol, POL_2D)

        # k = k0 sin(u) removes the inverse square root at the light cone
        def integrand(u, phi):
            kk = K0 * np.sin(u)
            g = gamma_k_2d(np.array([kk * np.cos(phi), kk * np.sin(phi)]), d, pol)
            return float(g) * kk * K0 * np.cos(u)

        value, _ = integrate.dblquad(integrand, 0.0, 2.0 * np.pi, 0.0, np.pi / 2,
                                     epsabs=0.0, epsrel=1e-11)
        label = pol
    elif dimensionality == 3:
        axis = np.asarray((0.0, 0.0, 1.0) if isinstance(pol, str) else pol, dtype=float)
        samples = [integral_gamma_3d(d, delta, axis) for delta in deltas]
        value = richardson_zero(deltas, samples)
        label = str(axis.tolist())
    else:
        raise ValidationError("dimensionality must be 1, 2 or 3")
    if not np.isfinite(value):
        raise ConvergenceError("sum-rule quadrature did not converge")
    return SumRuleResult(dimensionality, d, label, float(value), expected)


# ---------------------------------------------------------------- 2D model


@dataclass(frozen=True)
class TwoDModelParams:
    a: float
    b: float
    C: float = DEFAULT_C
    B: float = 0.0

    def __post_init__(self):
        if not any(np.isclose([self.a, self.b], ab).all() for ab in TWO_D_COEFFS.values()):
            raise ValidationError(f"(a, b) = ({self.a}, {self.b}) is not a known polarization class")
        if not self.C > 0:
            raise ValidationError("sampling constant C must be positive")

    @classmethod
    def for_polarization(cls, pol: str, C: float = DEFAULT_C, B: float | None = None):
        a, b = TWO_D_COEFFS[_check_pol(pol, POL_2D)]
        if B is None:
            B = 4.0 if pol == "out_of_plane" else 0.0
        return cls(a, b, C, B)

    @property
    def alpha(self) -> float:
        return 9.0 * (self.a - 3.0 * self.b - 2.0 * self.b * np.log(2.0 * self.C) + self.B) / (32.0 * np.pi)

    @property
    def beta(self) -> float:
        return 9.0 * self.b / (32.0 * np.pi)


def _trans_2d(d: float, n_atoms: float, p: TwoDModelParams) -> float:
    rn = np.sqrt(n_atoms)
    eps = p.C / (d * rn)
    arg = d * d * n_atoms / (p.C * (2.0 * d * rn - p.C))
    if arg <= 0:
        raise ValidationError("sampling cutoff exceeds the light cone; lower C or raise N")
    inner = -eps**4 / 4 + eps**3 - 2 * eps**2 + eps - 0.75 + 0.5 * np.log(arg)
    return 9.0 / (16.0 * np.pi * d * d) * (p.a + p.B + 4.0 * p.b * inner) - 2.0


def dcrit_2d_model(n_atoms: float, params: TwoDModelParams, mode: str = "transcendental",
                   bracket=(0.05, 5.0), xtol: float = 1e-8) -> float:
    """Critical spacing of a large 2D array from the truncated-integral model."""
    if n_atoms < 4:
        raise ValidationError("2D model needs N >= 4")
    if mode == "asymptotic":
        val = params.alpha + params.beta * np.log(n_atoms)
        if val <= 0:
            raise NumericalError("asymptotic law has no real solution for these parameters")
        return float(np.sqrt(val))
    if mode != "transcendental":
        raise ValidationError(f"mode must be 'transcendental' or 'asymptotic', got {mode!r}")
    lo, hi = bracket
    f_lo, f_hi = _trans_2d(lo, n_atoms, params), _trans_2d(hi, n_atoms, params)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NumericalError(f"no root of the 2D condition in [{lo}, {hi}]")
    return float(brentq(_trans_2d, lo, hi, args=(n_atoms, params), xtol=xtol, rtol=1e-14))


# ---------------------------------------------------------------- 3D model


@dataclass(frozen=True)
class ThreeDModelParams:
    """Constants of the 3D law; q and p hold an optional empirical fit."""

    C: float = DEFAULT_C
    B_bar: float = 0.0
    q: float | None = None
    p: float | None = None

    @property
    def A_bar(self) -> float:
        return float(np.sqrt(3.0 / (320.0 * np.pi**3 * self.C)))

    def fitted(self, n_atoms: float) -> float:
        if self.q is None or self.p is None:
            raise ValidationError("no empirical (q, p) fit stored")
        return self.q * n_atoms**self.p


def dcrit_3d_model(n_atoms: float, params: ThreeDModelParams = ThreeDModelParams()) -> float:
    """Critical spacing of a large 3D array.

    Below half a wavelength the pure N^(1/6) law applies. Otherwise the real
    positive root of 320 pi^3 d^3 - (3 N^(1/3)/C) d - 3 B_bar = 0 is returned.
    """
    if n_atoms < 8:
        raise ValidationError("3D model needs N >= 8")
    d_law = params.A_bar * n_atoms ** (1.0 / 6.0)
    if d_law < 0.5 or params.B_bar == 0.0:
        return float(d_law)
    c3 = 320.0 * np.pi**3
    c1 = -3.0 * n_atoms ** (1.0 / 3.0) / params.C
    c0 = -3.0 * params.B_bar
    roots = np.roots([c3, 0.0, c1, c0])
    real = roots[np.abs(roots.imag) < 1e-9 * np.abs(roots).max()].real
    real = real[real > 0]
    if real.size == 0:
        raise NumericalError("cubic for the 3D critical distance has no positive root")
    d = float(real.max())
    for _ in range(3):
        d -= (c3 * d**3 + c1 * d + c0) / (3 * c3 * d * d + c1)
    return d
