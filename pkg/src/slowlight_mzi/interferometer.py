"""Unbalanced Mach-Zehnder geometry, dispersive media, and the fringe signal model.

The interferometer has an intrinsic arm imbalance L0 plus a dispersive cell of
length Ls in the long arm.  Four time constants control everything:

    tau0    = L0/c0
    tau_d   = Ls/c0
    tau_vac = tau0 + tau_d          (vacuum cell, n = n_g = 1)
    tau_nd  = tau0 + n * tau_d      (arrival-time lag; n is the phase index)
    tau_sl  = tau0 + n_g * tau_d    (fringe scale; n_g is the group index)

The fringe magnification M = tau_sl / tau_vac.
"""

from dataclasses import dataclass

import numpy as np

from .constants import C0


class UndefinedRatioError(ValueError):
    """Raised when a ratio of time constants is requested with a zero denominator."""


class NoMediumError(ValueError):
    """Raised when a medium-dependent inversion is requested with tau_d = 0."""


@dataclass(frozen=True)
class InterferometerGeometry:
    """Arm imbalance of the interferometer.

    intrinsic_imbalance_length: extra path length L0 [m] excluding the cell.
    medium_length: physical length Ls [m] of the dispersive cell.
    """

    intrinsic_imbalance_length: float
    medium_length: float

    def __post_init__(self):
        if self.intrinsic_imbalance_length < 0 or self.medium_length < 0:
            raise ValueError("arm lengths must be >= 0")

    @classmethod
    def from_time_constants(cls, tau0: float, tau_d: float) -> "InterferometerGeometry":
        """Build a geometry whose L0/c0 and Ls/c0 equal the given delays [s]."""
        return cls(tau0 * C0, tau_d * C0)

    @property
    def tau0(self) -> float:
        return self.intrinsic_imbalance_length / C0

    @property
    def tau_d(self) -> float:
        return self.medium_length / C0

    @property
    def tau_vac(self) -> float:
        return self.tau0 + self.tau_d


@dataclass(frozen=True)
class DispersiveMedium:
    """Group index, phase index and on-resonance transmission of the cell."""

    group_index: float = 1.0
    phase_index: float = 1.0
    transmission: float = 1.0

    def __post_init__(self):
        if self.group_index < 1.0:
            raise ValueError("group_index must be >= 1 for a slow-light medium")
        if not (0.0 < self.transmission <= 1.0):
            raise ValueError("transmission must lie in (0, 1]")

    @classmethod
    def vacuum(cls) -> "DispersiveMedium":
        return cls(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class SignalPoint:
    """One point on the fringe: detuning [rad/s], signal and peak (photons)."""

    detuning: float
    signal: float
    peak: float

    def __post_init__(self):
        if not (0.0 <= self.signal <= self.peak + 1e-12 * abs(self.peak)):
            raise ValueError("signal must lie in [0, peak]")


def time_constants(geom: InterferometerGeometry, medium: DispersiveMedium) -> dict:
    """All five delay constants [s] for the given geometry and medium."""
    tau0 = geom.tau0
    tau_d = geom.tau_d
    return {
        "tau0": tau0,
        "tau_d": tau_d,
        "tau_vac": tau0 + tau_d,
        "tau_nd": tau0 + medium.phase_index * tau_d,
        "tau_sl": tau0 + medium.group_index * tau_d,
    }


def fringe_magnification(geom: InterferometerGeometry, medium: DispersiveMedium) -> float:
    """Ratio of slow-light to vacuum fringe density, M = tau_sl / tau_vac."""
    tau_vac = geom.tau_vac
    if tau_vac <= 0.0:
        raise UndefinedRatioError("tau_vac is zero; magnification undefined")
    return (geom.tau0 + medium.group_index * geom.tau_d) / tau_vac


def group_index_from_magnification(geom: InterferometerGeometry, magnification: float) -> float:
    """Invert the fringe magnification to recover the group index."""
    if magnification < 1.0:
        raise ValueError("magnification must be >= 1")
    if geom.tau_d <= 0.0:
        raise NoMediumError("tau_d is zero; group index cannot be inferred")
    return (magnification * geom.tau_vac - geom.tau0) / geom.tau_d


def signal_ideal(detuning, tau_eff: float, peak: float, phase_offset: float = 0.0):
    """Zero-linewidth fringe signal S = S0 cos^2((tau_eff*dw + offset)/2).

    `detuning` may be a scalar or array; the phase offset defaults to the
    zero-bias convention.
    """
    if peak < 0.0:
        raise ValueError("peak signal must be >= 0")
    return peak * np.cos((tau_eff * np.asarray(detuning) + phase_offset) / 2.0) ** 2


def signal_with_linewidth(
    detuning,
    tau_scale: float,
    tau_contrast: float,
    tau_coherence: float,
    peak: float,
    phase_offset: float = 0.0,
):
    """Fringe signal with finite laser linewidth.

    The fringe period is set by `tau_scale` (tau_sl with slow light, tau_nd or
    tau_vac without) while the contrast decays with the arrival-time lag
    `tau_contrast` relative to the coherence time `tau_coherence`:

        S = S0/2 + (S0/2) exp(-tau_contrast / (2 tau_coherence))
                 * cos(tau_scale * dw + offset)
    """
    if min(tau_scale, tau_contrast) < 0.0:
        raise ValueError("time constants must be >= 0")
    if tau_coherence <= 0.0:
        raise ValueError("coherence time must be > 0")
    if peak < 0.0:
        raise ValueError("peak signal must be >= 0")
    contrast = np.exp(-tau_contrast / (2.0 * tau_coherence))
    phase = tau_scale * np.asarray(detuning) + phase_offset
    return peak / 2.0 + (peak / 2.0) * contrast * np.cos(phase)
