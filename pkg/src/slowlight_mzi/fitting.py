"""Fitting procedures for measured data: the lock-in slope fit that extracts
the frequency-to-voltage conversion (and hence the minimum measurable
frequency shift), the observed enhancement factor, and noise-vs-power law
fits for the detector characterization.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit


class DataShapeError(ValueError):
    """Raised when sweep arrays are empty or mismatched."""


@dataclass(frozen=True)
class LiaSweep:
    """A lock-in amplifier sweep: applied frequency ramp rates K_sum [1/s^2]
    and the lock-in output voltages V_LIA [mV], with the detection noise
    floor V_N [mV]."""

    ramp_rates: np.ndarray
    voltages: np.ndarray
    noise_floor: float

    def __post_init__(self):
        k = np.atleast_1d(np.asarray(self.ramp_rates, dtype=float))
        v = np.atleast_1d(np.asarray(self.voltages, dtype=float))
        if k.size == 0 or k.shape != v.shape:
            raise DataShapeError("ramp rates and voltages must be equal-length, non-empty")
        object.__setattr__(self, "ramp_rates", k)
        object.__setattr__(self, "voltages", v)


@dataclass(frozen=True)
class FitResult:
    params: tuple
    errors: tuple
    model: str
    residual_rms: float


def ksum_fit(sweep: LiaSweep) -> dict:
    """Weighted linear fit V_LIA = k * K_sum through the origin.

    Weights are 1/V_LIA^2 (constant fractional error), giving the closed-form
    k = sum(w K V) / sum(w K^2).  The minimum measurable frequency shift
    follows as V_N / k.
    """
    v = sweep.voltages
    if np.any(v == 0):
        raise ValueError("zero voltages give infinite weights; clean the sweep first")
    w = 1.0 / v**2
    k_sum = sweep.ramp_rates
    slope = float(np.sum(w * k_sum * v) / np.sum(w * k_sum**2))
    if slope <= 0:
        warnings.warn("non-positive fitted slope; sweep data look inverted",
                      stacklevel=2)
    resid = v - slope * k_sum
    dof = max(v.size - 1, 1)
    slope_err = float(math.sqrt(np.sum(w * resid**2) / dof / np.sum(w * k_sum**2)))
    return {
        "k": slope,
        "k_err": slope_err,
        "mmfs": sweep.noise_floor / slope if slope > 0 else math.inf,
        "residual_rms": float(np.sqrt(np.mean(resid**2))),
    }


def observed_sef(mmfs_standard: float, mmfs_measured: float) -> float:
    """Observed sensitivity enhancement factor: standard MMFS over measured."""
    if mmfs_measured <= 0:
        raise ValueError("measured MMFS must be positive")
    return mmfs_standard / mmfs_measured


# --- Noise-vs-DC-voltage law fits --------------------------------------------

def _sqrt_law(v_dc, p, b):
    return p * np.sqrt(v_dc) + b


def _linear_law(v_dc, p, b):
    return p * v_dc + b


def noise_law_fit(v_dc, sigma, model: str = "sqrt",
                  fixed_scale: float = None, fixed_linear: float = None) -> FitResult:
    """Fit the measured noise standard deviation against the DC voltage.

    model "sqrt":   sigma = p sqrt(V_DC) + b   (shot-noise-dominated)
    model "linear": sigma = p V_DC + b          (intensity-noise-dominated)
    model "mixed":  sigma = sqrt(c0^2 p^2 V_DC + a^2 V_DC^2) + b with the
                    chain constant c0 and intensity coefficient a held fixed
                    (pass `fixed_scale` = c0, `fixed_linear` = a); p and b free.
    """
    v_dc = np.asarray(v_dc, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if v_dc.size < 3 or v_dc.shape != sigma.shape:
        raise DataShapeError("need at least 3 matched (V_DC, sigma) points")

    if model == "sqrt":
        fun = _sqrt_law
    elif model == "linear":
        fun = _linear_law
    elif model == "mixed":
        if fixed_scale is None or fixed_linear is None:
            raise ValueError("mixed model needs fixed_scale (c0) and fixed_linear (a)")
        c0, a = fixed_scale, fixed_linear

        def fun(v, p, b):
            return np.sqrt(c0**2 * p**2 * v + a**2 * v**2) + b
    else:
        raise ValueError(f"unknown model {model!r}")

    p0 = (max(sigma.max() / math.sqrt(max(v_dc.max(), 1e-30)), 1e-12), 0.0)
    popt, pcov = curve_fit(fun, v_dc, sigma, p0=p0, maxfev=20000)
    resid = sigma - fun(v_dc, *popt)
    return FitResult(
        params=tuple(float(x) for x in popt),
        errors=tuple(float(x) for x in np.sqrt(np.diag(pcov))),
        model=model,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def select_noise_law(v_dc, sigma, models=("sqrt", "linear"), **kwargs) -> FitResult:
    """Fit each candidate law and return the one with the lowest residual RMS."""
    fits = [noise_law_fit(v_dc, sigma, model=m, **kwargs) for m in models]
    return min(fits, key=lambda f: f.residual_rms)
