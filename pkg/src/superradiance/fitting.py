"""Least-squares fits of critical-distance and decay-rate scaling laws.

Every model is linear in its own coordinates, so fits are ordinary linear
least squares and residuals are reported in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FitError, ValidationError

MIN_POINTS = 4
MODELS = ("power_law", "sqrt_log", "saturation")


@dataclass(frozen=True)
class FitResult:
    model: str
    params: dict
    residual: float
    r_squared: float
    n_points: int
    coordinates: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "params": dict(self.params),
            "residual": self.residual,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
            "coordinates": self.coordinates,
        }


def _linear_fit(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("x and y must be 1D arrays of equal length")
    if len(x) < MIN_POINTS:
        raise FitError(f"need at least {MIN_POINTS} points, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValidationError("fit data must be finite")
    if np.ptp(x) == 0:
        raise FitError("all abscissae coincide; slope is undetermined")
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), float(coef[1]), float(np.sqrt(ss_res / len(x))), r2


def fit_power_law(n_atoms, d_crit) -> FitResult:
    """d = q N^p, fitted as a straight line in log-log coordinates."""
    n_atoms = np.asarray(n_atoms, dtype=float)
    d_crit = np.asarray(d_crit, dtype=float)
    if np.any(n_atoms <= 0) or np.any(d_crit <= 0):
        raise ValidationError("power-law fit needs positive data")
    c0, c1, rms, r2 = _linear_fit(np.log(n_atoms), np.log(d_crit))
    return FitResult("power_law", {"q": float(np.exp(c0)), "p": c1}, rms, r2, len(n_atoms),
                     "ln d vs ln N")


def fit_sqrt_log(n_atoms, d_crit) -> FitResult:
    """d = sqrt(alpha + beta ln N), fitted as d^2 against ln N."""
    n_atoms = np.asarray(n_atoms, dtype=float)
    if np.any(n_atoms <= 0):
        raise ValidationError("sqrt-log fit needs positive N")
    c0, c1, rms, r2 = _linear_fit(np.log(n_atoms), np.asarray(d_crit, dtype=float) ** 2)
    return FitResult("sqrt_log", {"alpha": c0, "beta": c1}, rms, r2, len(n_atoms), "d^2 vs ln N")


def fit_saturation(n_1d, rate) -> FitResult:
    """rate = A (1 - c / N_1D^2), fitted as rate against 1/N_1D^2."""
    n_1d = np.asarray(n_1d, dtype=float)
    if np.any(n_1d <= 0):
        raise ValidationError("saturation fit needs positive N_1D")
    c0, c1, rms, r2 = _linear_fit(1.0 / n_1d**2, rate)
    if c0 == 0:
        raise FitError("saturation amplitude vanished")
    return FitResult("saturation", {"amplitude": c0, "c": -c1 / c0}, rms, r2, len(n_1d),
                     "rate vs 1/N_1D^2")


def fit(model: str, x, y) -> FitResult:
    if model == "power_law":
        return fit_power_law(x, y)
    if model == "sqrt_log":
        return fit_sqrt_log(x, y)
    if model == "saturation":
        return fit_saturation(x, y)
    raise ValidationError(f"unknown model {model!r}; choose from {MODELS}")
