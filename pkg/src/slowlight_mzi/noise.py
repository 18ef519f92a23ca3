"""Detection-noise simulation: synthesized white noise, the effective
spectrum-analyzer chain (DC blocker -> amplifier -> mixer -> low-pass filter),
avalanche-photodiode shot-noise statistics, and two-port balanced detection.

Synthetic noise is carried around as its explicit sinusoid set, which lets the
low-pass filter act as an exact spectral mask; arbitrary sampled series go
through a time-domain mixer plus single-pole filter instead.
"""

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.signal import butter, sosfilt

TWO_PI = 2.0 * math.pi

# Input loading factor of the DC blocker (low input impedance), measured ratio
DC_BLOCKER_LOADING = 0.73


class AliasingError(ValueError):
    """Raised when a requested sample rate undersamples the noise bandwidth."""


class ChainConfigError(ValueError):
    """Raised when the chain configuration is internally inconsistent."""


@dataclass(frozen=True)
class NoiseChainConfig:
    """Hardware constants of the synthesized-noise measurement chain."""

    rms_voltage: float = 1.0e-3       # A0 [V]
    term_count: int = 5 * 10**4       # m, sinusoids in the synthesis
    noise_bandwidth: float = 7.0e6    # B_w [Hz]
    amplifier_gain: float = 15.85     # g (24 dB) or g_tot for the balanced chain
    mixer_frequency: float = 500.0e3  # omega_R / 2pi [Hz]
    mixer_normalization: float = 0.66  # V_nor [V]
    mixer_scale: float = 0.89         # beta, calibrated mixer throughput
    lpf_bandwidth: float = 29.0e3     # B_c [Hz]
    amplifier_band: tuple = (0.1e6, 500.0e6)  # [Hz]
    dc_blocker_loading: bool = False
    seed: int = 0

    def __post_init__(self):
        for name in ("rms_voltage", "noise_bandwidth", "amplifier_gain",
                     "mixer_frequency", "mixer_normalization", "mixer_scale",
                     "lpf_bandwidth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.term_count < 100.0 * self.noise_bandwidth / self.lpf_bandwidth:
            raise ValueError("term_count must exceed 100 * B_w / B_c")


@dataclass(frozen=True)
class ApdModel:
    """Avalanche photodiode response and noise offsets."""

    conversion: float = 2.58e6        # k [V/W]
    photon_energy: float = 2.4991e-19  # [J], 795 nm photons
    bandwidth: float = 50.0e6         # [Hz]; tau_APD = 1 / bandwidth
    excess_offset: float = 0.14e-3    # C_exc [V]
    sd_offset: float = 0.1e-3         # C_sd [V]

    def __post_init__(self):
        if self.conversion <= 0 or self.bandwidth <= 0:
            raise ValueError("conversion and bandwidth must be positive")

    @property
    def response_time(self) -> float:
        return 1.0 / self.bandwidth


@dataclass(frozen=True)
class BalancedPair:
    """Two-port interferometer outputs feeding a balanced subtractor."""

    peak_signal: float                 # S0, photons per measurement window
    phase: float = math.pi / 2.0       # phi [rad]
    intensity_noise_ratio: float = 0.0  # alpha
    residual_fraction: float = 0.0     # p, uncancelled intensity-noise fraction
    extra_noise: float = 0.0           # Delta S_exc, photons

    def __post_init__(self):
        if not (0.0 <= self.residual_fraction <= 1.0):
            raise ValueError("residual fraction must lie in [0, 1]")


@dataclass(frozen=True)
class SinusoidSet:
    """A signal represented as a set of sinusoids sum(a_k sin(2 pi f_k t + phi_k))."""

    frequencies: np.ndarray   # [Hz]
    phases: np.ndarray        # [rad]
    amplitudes: np.ndarray    # [V]
    use_cosine: bool = False

    @property
    def ensemble_std(self) -> float:
        """Root of the summed half-squared amplitudes (random-phase ensemble)."""
        return float(np.sqrt(0.5 * np.sum(self.amplitudes**2)))

    def sample(self, times: np.ndarray, block: int = 2000) -> np.ndarray:
        """Evaluate the sum on a time grid, chunked over the sinusoid set."""
        times = np.asarray(times)
        out = np.zeros_like(times, dtype=float)
        osc = np.cos if self.use_cosine else np.sin
        for start in range(0, len(self.frequencies), block):
            sl = slice(start, start + block)
            arg = TWO_PI * np.outer(self.frequencies[sl], times) + self.phases[sl][:, None]
            out += self.amplitudes[sl] @ osc(arg)
        return out


def synth_white_noise(cfg: NoiseChainConfig, rng=None) -> SinusoidSet:
    """Synthesize band-limited white noise as m random sinusoids.

    Frequencies sit on a stratified-random grid of fundamental f0 = B_w / m,
    phases are uniform on (0, 2 pi]; the sample standard deviation converges
    to the configured RMS voltage as m grows.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    m = cfg.term_count
    f0 = cfg.noise_bandwidth / m
    freqs = (np.arange(m) + rng.uniform(0.0, 1.0, size=m)) * f0
    phases = rng.uniform(0.0, TWO_PI, size=m)
    a0 = cfg.rms_voltage * (DC_BLOCKER_LOADING if cfg.dc_blocker_loading else 1.0)
    amps = np.full(m, math.sqrt(2.0) * a0 / math.sqrt(m))
    return SinusoidSet(freqs, phases, amps)


def sample_series(noise: SinusoidSet, duration: float, sample_rate: float,
                  noise_bandwidth: Optional[float] = None) -> tuple:
    """(times, voltages) for a synthesized noise set.

    Rejects sample rates below twice the synthesis bandwidth.
    """
    if noise_bandwidth is not None and sample_rate <= 2.0 * noise_bandwidth:
        raise AliasingError("sample rate must exceed twice the noise bandwidth")
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    return t, noise.sample(t)


def spectrum_analyzer_chain(noise: SinusoidSet, cfg: NoiseChainConfig) -> SinusoidSet:
    """Amplifier -> mixer -> low-pass filter applied as an exact spectral mask.

    Components within B_c of the mixer frequency survive, shifted to baseband
    and scaled by g * beta; everything else is discarded.
    """
    _check_mixer_in_band(cfg)
    keep = np.abs(noise.frequencies - cfg.mixer_frequency) < cfg.lpf_bandwidth
    gain = cfg.amplifier_gain * cfg.mixer_scale
    return SinusoidSet(
        frequencies=noise.frequencies[keep] - cfg.mixer_frequency,
        phases=noise.phases[keep],
        amplitudes=gain * noise.amplitudes[keep],
        use_cosine=True,
    )


def spectrum_analyzer_chain_series(series: np.ndarray, sample_rate: float,
                                   cfg: NoiseChainConfig) -> np.ndarray:
    """Time-domain version of the chain for arbitrary sampled series.

    The mixer multiplies by 2 * beta * sin(omega_R t) (the factor 2 undoes the
    product-to-sum halving so the passband gain matches the spectral mask) and
    the LPF is a 4th-order Butterworth at B_c, whose equivalent noise bandwidth
    is within ~3% of the brick-wall mask.
    """
    _check_mixer_in_band(cfg)
    series = np.asarray(series, dtype=float)
    n = series.shape[0]
    t = np.arange(n) / sample_rate
    mixed = cfg.amplifier_gain * series * 2.0 * cfg.mixer_scale * np.sin(
        TWO_PI * cfg.mixer_frequency * t)
    sos = butter(4, cfg.lpf_bandwidth, fs=sample_rate, output="sos")
    return sosfilt(sos, mixed)


def _check_mixer_in_band(cfg: NoiseChainConfig):
    lo, hi = cfg.amplifier_band
    if not (lo <= cfg.mixer_frequency <= hi):
        raise ChainConfigError("mixer frequency lies outside the amplifier band")


# --- APD shot noise -----------------------------------------------------------

def apd_response(optical_power: float, apd: ApdModel, tau_window: float,
                 seed: int = 0, n_samples: int = 0) -> dict:
    """DC voltage and voltage noise amplitude of the photodiode.

    V_DC = k P; the shot-noise amplitude over a window tau is
    sqrt(k hbar_omega / tau) * sqrt(V_DC), plus the dark offset C_exc.
    Optional Gaussian samples of the instantaneous voltage are drawn for
    Monte Carlo use.
    """
    if optical_power < 0:
        raise ValueError("optical power must be >= 0")
    v_dc = apd.conversion * optical_power
    delta_v = math.sqrt(apd.conversion * apd.photon_energy / tau_window) * math.sqrt(v_dc)
    delta_v += apd.excess_offset
    out = {"v_dc": v_dc, "delta_v": delta_v}
    if n_samples:
        rng = np.random.default_rng(seed)
        out["samples"] = v_dc + delta_v * rng.standard_normal(n_samples)
    return out


def shot_noise_sd(v_dc: float, apd: ApdModel, lpf_bandwidth: float) -> float:
    """Standard deviation at the spectrum-analyzer output for shot-noise input:
    sqrt(2 w_LPF / w_APD) * sqrt(k hbar_omega / tau_APD) * sqrt(V_DC) + C_sd."""
    if v_dc < 0 or lpf_bandwidth <= 0:
        raise ValueError("inputs must be positive")
    scale = math.sqrt(2.0 * lpf_bandwidth / apd.bandwidth)
    return scale * math.sqrt(apd.conversion * apd.photon_energy / apd.response_time) \
        * math.sqrt(v_dc) + apd.sd_offset


# --- Balanced detection -------------------------------------------------------

def balanced_subtract(pair: BalancedPair, phase_mismatch_gain: float = 1.0) -> dict:
    """Difference signal of the two interferometer ports and its noise budget.

    The mean is S0 cos(phi).  Correlated intensity noise follows the mean
    (alpha S0 cos(phi)) plus an uncancelled residual fraction p; shot noise
    from the two ports adds in quadrature to sqrt(S0) regardless of phi.
    """
    s0 = pair.peak_signal
    mean = s0 * math.cos(pair.phase)
    intensity = pair.intensity_noise_ratio * s0 * (
        abs(math.cos(pair.phase)) + pair.residual_fraction * phase_mismatch_gain)
    shot = math.sqrt(s0)
    total = math.sqrt(intensity**2 + shot**2 + pair.extra_noise**2)
    slope = abs(s0 * math.sin(pair.phase))
    return {
        "mean": mean,
        "intensity_noise": intensity,
        "shot_noise": shot,
        "total_noise": total,
        "mmps": total / slope if slope > 0 else math.inf,
    }


def mmps_with_excess(peak_signal: float, extra_noise: float) -> float:
    """Minimum measurable phase shift with excess noise:
    (1/sqrt(S0)) * sqrt(1 + DS_exc^2 / S0)."""
    if peak_signal <= 0:
        raise ValueError("peak signal must be positive")
    return math.sqrt(1.0 + extra_noise**2 / peak_signal) / math.sqrt(peak_signal)


# --- Baseband-ratio Monte Carlo ----------------------------------------------

#: Balanced-chain configuration used for the baseband-ratio calibration.
#: The RMS voltage is the calibration scalar fixing the absolute scale of the
#: per-detector shot-noise voltage; the remaining entries are hardware values.
C0_CHAIN_CONFIG = NoiseChainConfig(
    rms_voltage=4.1441e-3,
    term_count=5 * 10**6,
    noise_bandwidth=7.0e6,
    amplifier_gain=393.0,
    mixer_frequency=500.0e3,
    mixer_scale=0.89,
    lpf_bandwidth=191.0e3,
)


def c0_monte_carlo(cfg: NoiseChainConfig = C0_CHAIN_CONFIG, repetitions: int = 400,
                   seed: int = 0) -> dict:
    """Monte Carlo estimate of the chain constant C0 = <sigma(S_F) / sqrt(A0)>.

    Every repetition draws a fresh sinusoid set; the filtered standard
    deviation uses the exact spectral mask, so only the in-band component
    count fluctuates.  Deterministic for a fixed seed.
    """
    if repetitions < 50:
        warnings.warn("fewer than 50 repetitions; C0 estimate is underpowered",
                      stacklevel=2)
    rng = np.random.default_rng(seed)
    m = cfg.term_count
    gain = cfg.amplifier_gain * cfg.mixer_scale
    lo = cfg.mixer_frequency - cfg.lpf_bandwidth
    hi = cfg.mixer_frequency + cfg.lpf_bandwidth
    ratios = np.empty(repetitions)
    for i in range(repetitions):
        freqs = rng.uniform(0.0, cfg.noise_bandwidth, size=m)
        n_kept = int(np.count_nonzero((freqs > lo) & (freqs < hi)))
        sigma = gain * cfg.rms_voltage * math.sqrt(n_kept / m)
        ratios[i] = sigma / math.sqrt(cfg.rms_voltage)
    return {"c0": float(ratios.mean()), "std": float(ratios.std(ddof=1)),
            "repetitions": repetitions}


def colored_noise(rms: float, band: tuple, term_count: int, seed: int = 0) -> SinusoidSet:
    """Band-limited colored noise (e.g. low-frequency phase-lock excess noise)."""
    rng = np.random.default_rng(seed)
    lo, hi = band
    freqs = rng.uniform(lo, hi, size=term_count)
    phases = rng.uniform(0.0, TWO_PI, size=term_count)
    amps = np.full(term_count, math.sqrt(2.0) * rms / math.sqrt(term_count))
    return SinusoidSet(freqs, phases, amps)


def combine(*sets: SinusoidSet) -> SinusoidSet:
    """Concatenate sinusoid sets into one signal."""
    if any(s.use_cosine != sets[0].use_cosine for s in sets):
        raise ValueError("cannot combine sine- and cosine-phase sets")
    return SinusoidSet(
        np.concatenate([s.frequencies for s in sets]),
        np.concatenate([s.phases for s in sets]),
        np.concatenate([s.amplitudes for s in sets]),
        sets[0].use_cosine,
    )
