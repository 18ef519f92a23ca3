"""Closed forms for the minimum measurable frequency shift (MMFS), the
sensitivity enhancement factor (SEF), the optimal-imbalance interferometer,
and Heisenberg-limit measurement-time bounds.

All internal quantities are angular frequencies (rad/s).  The table
presentation layer in `tables.py` applies the mixed-Hz conventions needed to
reproduce the published tables.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .laser import CavityFigures, LaserSpec


@dataclass(frozen=True)
class DetectionSpec:
    """Detector quantum efficiency and measurement time/bandwidth."""

    quantum_efficiency: float
    measurement_time: float
    measurement_bandwidth: float = None  # defaults to 1/measurement_time

    def __post_init__(self):
        if not (0.0 < self.quantum_efficiency <= 1.0):
            raise ValueError("quantum efficiency must lie in (0, 1]")
        if self.measurement_time <= 0:
            raise ValueError("measurement time must be positive")
        if self.measurement_bandwidth is None:
            object.__setattr__(self, "measurement_bandwidth", 1.0 / self.measurement_time)


@dataclass(frozen=True)
class SensitivityReport:
    mmfs_standard: float
    mmfs_slow_light: float
    sef: float
    regime_notes: str = ""


def mmfs_standard_quantum(spec: LaserSpec, cavity: CavityFigures, det: DetectionSpec) -> float:
    """Standard-technique MMFS for a quantum-noise-limited laser,
    1 / (tau_c * sqrt(2 eta N tau_M))."""
    return 1.0 / (
        cavity.decay_time
        * math.sqrt(2.0 * det.quantum_efficiency * spec.photon_flux * det.measurement_time)
    )


def mmfs_standard_quantum_geometric(
    spec: LaserSpec, cavity: CavityFigures, det: DetectionSpec
) -> float:
    """Same quantity via the geometric-mean identity sqrt(Gamma_STL * Gamma_M / eta).

    Kept as an independent code path; must agree with `mmfs_standard_quantum`
    to machine precision.
    """
    gamma_stl = cavity.decay_rate**2 / (2.0 * spec.photon_flux)
    return math.sqrt(gamma_stl * det.measurement_bandwidth / det.quantum_efficiency)


def mmfs_standard_linewidth(gamma_l: float, gamma_m: float, eta: float) -> float:
    """Standard-technique MMFS for a laser of linewidth Gamma_L:
    sqrt(Gamma_L * Gamma_M / eta)."""
    if gamma_l < 0:
        raise ValueError("linewidth must be >= 0")
    return math.sqrt(gamma_l * gamma_m / eta)


def mmfs_slow_light(
    tau_sl: float, sigma: float, eta: float, photon_flux: float, tau_measure: float
) -> float:
    """Slow-light interferometer MMFS, sqrt(2) / (tau_sl * sqrt(eta sigma N tau_M)).

    Valid in the regime where the arm-lag is short compared to the laser
    coherence time (caller-asserted; see `sensitivity_report`).
    """
    if tau_sl <= 0:
        raise ValueError("tau_sl must be positive")
    return math.sqrt(2.0) / (tau_sl * math.sqrt(eta * sigma * photon_flux * tau_measure))


def sef_enhancement(tau_sl: float, sigma: float, tau_coherence: float, photon_flux: float) -> float:
    """Sensitivity enhancement factor (tau_sl / sqrt(2)) * sqrt(sigma N / tau_L).

    This is the enhancement form, i.e. mmfs_standard / mmfs_slow_light; its
    reciprocal is the MMFS ratio.
    """
    return (tau_sl / math.sqrt(2.0)) * math.sqrt(sigma * photon_flux / tau_coherence)


def sensitivity_report(
    tau_sl: float,
    sigma: float,
    gamma_l: float,
    photon_flux: float,
    det: DetectionSpec,
    tau_vac: float = 0.0,
) -> SensitivityReport:
    """Bundle the linewidth-referenced standard MMFS, the slow-light MMFS and
    their ratio, flagging the case where the short-lag approximation is dubious."""
    std = mmfs_standard_linewidth(gamma_l, det.measurement_bandwidth, det.quantum_efficiency)
    slow = mmfs_slow_light(
        tau_sl, sigma, det.quantum_efficiency, photon_flux, 1.0 / det.measurement_bandwidth
    )
    notes = ""
    if gamma_l > 0 and tau_vac * gamma_l > 0.1:
        notes = (
            "arm lag exceeds 10% of the coherence time; the short-lag "
            "approximation behind the slow-light MMFS is marginal"
        )
    return SensitivityReport(std, slow, std / slow, notes)


def sef_quantum_limit(
    finesse: float,
    group_index: float,
    sigma: float,
    tau0: float = 0.0,
    tau_d: float = 0.0,
    tau_rt: float = 0.0,
    limit_regime: bool = False,
) -> float:
    """MMFS ratio slow-light/standard for a quantum-limited laser.

    General form: 2 F tau_RT / ((tau0 + n_g tau_d) sqrt(sigma)).
    In the limit n_g*Ld >> L0 with cavity length equal to the cell length this
    reduces to 2 F / (n_g sqrt(sigma)); enhancement requires n_g > 2F.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if limit_regime:
        return 2.0 * finesse / (group_index * math.sqrt(sigma))
    tau_sl = tau0 + group_index * tau_d
    if tau_sl <= 0:
        raise ValueError("tau_sl must be positive")
    return 2.0 * finesse * tau_rt / (tau_sl * math.sqrt(sigma))


def umzi_mmfs_vs_imbalance(x, peak_signal: float, tau_stl: float):
    """MMFS of a plain unbalanced interferometer vs x = tau_vac / (2 tau_STL)."""
    x = np.asarray(x, dtype=float)
    return np.exp(x) / x / (math.sqrt(2.0 * peak_signal) * tau_stl)


def umzi_optimal(spec: LaserSpec, cavity: CavityFigures, peak_signal: float, tau_stl: float) -> dict:
    """Numerically minimize the imbalanced-interferometer MMFS over the
    normalized imbalance x; the optimum is x = 1, tau_vac = 2 tau_STL."""
    if peak_signal <= 0:
        raise ValueError("peak signal must be positive")
    res = minimize_scalar(
        lambda x: math.exp(x) / x, bounds=(1e-6, 10.0), method="bounded",
        options={"xatol": 1e-10},
    )
    x_opt = float(res.x)
    mmfs = float(umzi_mmfs_vs_imbalance(x_opt, peak_signal, tau_stl))
    ratio = math.e / (2.0 * spec.photon_flux * cavity.decay_time)
    return {
        "x_opt": x_opt,
        "tau_vac_opt": 2.0 * tau_stl * x_opt,
        "mmfs": mmfs,
        "ratio_to_std": ratio,
    }


def quantum_time_bound(mode: str, spec: LaserSpec, cavity: CavityFigures, tau_stl: float) -> float:
    """Minimum measurement time implied by d_omega * tau_M >= 1.

    mode "standard": tau_M >= tau_STL.
    mode "umzi":     tau_M >= 2 N tau_STL^2 / e^2 (optimal imbalance).
    """
    if mode == "standard":
        return tau_stl
    if mode == "umzi":
        return 2.0 * spec.photon_flux * tau_stl**2 / math.e**2
    raise ValueError(f"unknown mode {mode!r}")


def main_text_time_bound(spec: LaserSpec, cavity: CavityFigures) -> float:
    """The main-text constraint tau_M >= 2 N tau_c^2."""
    return 2.0 * spec.photon_flux * cavity.decay_time**2


def product_check(delta_omega: float, tau_measure: float) -> dict:
    """Uncertainty-product check d_omega * tau_M >= 1.

    `delta_omega` is taken in whichever cycle/angular convention the caller
    uses; the product is formed literally.
    """
    if delta_omega <= 0 or tau_measure <= 0:
        raise ValueError("inputs must be positive")
    product = delta_omega * tau_measure
    return {"product": product, "satisfies_bound": bool(product >= 1.0)}
