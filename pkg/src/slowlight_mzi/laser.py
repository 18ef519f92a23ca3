"""Laser spectral statistics: cavity decay, quantum-limited linewidth, and
stochastic phase-evolution Monte Carlos (random phase jumps, Langevin beat notes).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import C0, photon_energy, photon_flux


@dataclass(frozen=True)
class LaserSpec:
    """Wavelength, power, ring-cavity geometry and (optionally) measured linewidth."""

    wavelength: float                 # [m]
    output_power: float               # [W]
    cavity_length: float              # [m], ring round-trip length
    output_coupler_reflectivity: float  # intensity reflectivity, in (0, 1)
    measured_linewidth: Optional[float] = None  # Gamma_L [rad/s], if not quantum limited

    def __post_init__(self):
        if self.wavelength <= 0 or self.output_power <= 0 or self.cavity_length <= 0:
            raise ValueError("wavelength, power and cavity length must be positive")
        if not (0.0 < self.output_coupler_reflectivity < 1.0):
            raise ValueError("output coupler reflectivity must lie in (0, 1)")

    @property
    def photon_flux(self) -> float:
        """Output photons per second, N = P / (hbar * omega)."""
        return photon_flux(self.output_power, self.wavelength)

    @property
    def photon_energy(self) -> float:
        return photon_energy(self.wavelength)

    @property
    def coherence_time(self) -> float:
        """tau_L = 1 / Gamma_L for a laser with a measured linewidth."""
        if self.measured_linewidth is None:
            raise ValueError("no measured linewidth set on this spec")
        return 1.0 / self.measured_linewidth


@dataclass(frozen=True)
class CavityFigures:
    decay_rate: float       # gamma_c [rad/s]
    decay_time: float       # tau_c [s]
    round_trip_time: float  # tau_RT [s]
    finesse: float          # F = tau_c / tau_RT


def cavity_decay(spec: LaserSpec, literal_form: bool = False) -> CavityFigures:
    """Decay rate of a ring cavity with one output coupler of reflectivity R.

    The default form gamma_c = (c0/L) * (1-R) / (2*pi*sqrt(R)) is the one
    consistent with the downstream quantum-limited linewidth chain; the
    `literal_form` variant (1-R)/(pi*sqrt(R)) is twice as large and is kept
    only for documentation and comparison.
    """
    r = spec.output_coupler_reflectivity
    denom = math.pi * math.sqrt(r) if literal_form else 2.0 * math.pi * math.sqrt(r)
    gamma_c = (C0 / spec.cavity_length) * (1.0 - r) / denom
    tau_c = 1.0 / gamma_c
    tau_rt = spec.cavity_length / C0
    return CavityFigures(gamma_c, tau_c, tau_rt, tau_c / tau_rt)


def schawlow_townes(spec: LaserSpec, cavity: CavityFigures, henry_factor: float = 1.0):
    """Quantum-limited linewidth Gamma_STL = gamma_c^2 / (2 N) and its inverse.

    `henry_factor` is a user-supplied multiplicative broadening factor.
    Returns (Gamma_STL [rad/s], tau_STL [s]).
    """
    if spec.output_power <= 0:
        raise ValueError("output power must be positive")
    gamma_stl = henry_factor * cavity.decay_rate**2 / (2.0 * spec.photon_flux)
    return gamma_stl, 1.0 / gamma_stl


def phase_jump_monte_carlo(
    tau_gap: float,
    tau_coherence: float,
    n_samples: int = 10**5,
    seed: int = 0,
    n_bins: int = 100,
) -> dict:
    """Sample the accumulated phase jump between the two arrival times.

    The phase difference over a lag `tau_gap` is Gaussian with variance
    tau_gap / tau_coherence.  Returns the sampled <cos> and <sin> (estimators
    of the fringe-contrast factor exp(-tau_gap / (2 tau_coherence)) and of 0),
    their standard errors, and a histogram of the draws.
    """
    if tau_gap < 0 or tau_coherence <= 0:
        raise ValueError("tau_gap must be >= 0 and tau_coherence > 0")
    if n_samples < 10**3:
        raise ValueError("need at least 1e3 samples")
    rng = np.random.default_rng(seed)
    if tau_gap == 0.0:
        dphi = np.zeros(n_samples)
    else:
        dphi = rng.normal(0.0, math.sqrt(tau_gap / tau_coherence), size=n_samples)
    cos_s = np.cos(dphi)
    sin_s = np.sin(dphi)
    counts, edges = np.histogram(dphi, bins=n_bins)
    return {
        "mean_cos": float(cos_s.mean()),
        "mean_sin": float(sin_s.mean()),
        "sem_cos": float(cos_s.std(ddof=1) / math.sqrt(n_samples)),
        "sem_sin": float(sin_s.std(ddof=1) / math.sqrt(n_samples)),
        "histogram": (counts, edges),
    }


def contrast_factor(tau_gap: float, tau_coherence: float) -> float:
    """Closed-form fringe contrast exp(-tau_gap / (2 tau_coherence))."""
    return math.exp(-tau_gap / (2.0 * tau_coherence))


def langevin_beat_monte_carlo(
    diffusion_2d: float,
    tau_measure: float,
    n_trajectories: int = 10**3,
    seed: int = 0,
    n_steps: int = 10**4,
    mean_beat: float = 0.0,
) -> dict:
    """Integrate psi_dot = mu + f(t) with <f f'> = 2D' delta(t - t').

    Euler-Maruyama on a grid of `n_steps` steps per trajectory; for this
    linear SDE the discretization is exact in distribution.  The frequency
    uncertainty estimate std(psi(tau_M)) / tau_M converges to
    sqrt(2D' / tau_M).
    """
    if diffusion_2d < 0 or tau_measure <= 0:
        raise ValueError("diffusion and measurement time must be positive")
    if n_steps < 100:
        raise ValueError("step count too small to resolve the measurement time")
    rng = np.random.default_rng(seed)
    dt = tau_measure / n_steps
    # psi(tau_M) = mu*tau_M + sqrt(2D' dt) * sum of n_steps standard normals
    kicks = rng.normal(0.0, 1.0, size=(n_trajectories, n_steps))
    psi_final = mean_beat * tau_measure + math.sqrt(diffusion_2d * dt) * kicks.sum(axis=1)
    est = float(psi_final.std(ddof=1) / tau_measure)
    return {
        "delta_mu_estimate": est,
        "delta_mu_analytic": math.sqrt(diffusion_2d / tau_measure),
        # relative std of a sample std over n trajectories
        "relative_error": 1.0 / math.sqrt(2.0 * (n_trajectories - 1)),
    }
