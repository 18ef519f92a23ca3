"""Detection-noise chain: synthesized white noise through the effective
spectrum analyzer, APD shot-noise scaling, and the chain constant C0.

The synthesized noise is a sum of random sinusoids, so the mixer + low-pass
filter can be applied as an exact spectral mask; a time-domain path (mixer
multiply + Butterworth filter) is cross-checked against it on a single tone.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from slowlight_mzi import noise

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cfg = noise.NoiseChainConfig()
src = noise.synth_white_noise(cfg)
filtered = noise.spectrum_analyzer_chain(src, cfg)
expected = (cfg.amplifier_gain * cfg.mixer_scale * cfg.rms_voltage
            * math.sqrt(2.0 * cfg.lpf_bandwidth / cfg.noise_bandwidth))
print(f"white noise: {cfg.term_count} sinusoids over {cfg.noise_bandwidth:.3g} Hz, "
      f"rms {src.ensemble_std * 1e3:.3f} mV")
print(f"after chain (mask): std {filtered.ensemble_std * 1e3:.3f} mV "
      f"(flat-spectrum expectation {expected * 1e3:.3f} mV)")

# cross-check the time-domain chain on an in-band tone
tone = noise.SinusoidSet(np.array([cfg.mixer_frequency + 5e3]), np.array([0.0]),
                         np.array([1e-3]))
fs = 4e6
t = np.arange(int(0.01 * fs)) / fs
out = noise.spectrum_analyzer_chain_series(tone.sample(t), fs, cfg)
settled = out[len(out) // 2:]
print(f"time-domain chain, in-band tone: output rms {settled.std() * 1e3:.3f} mV "
      f"(mask prediction {cfg.amplifier_gain * cfg.mixer_scale * 1e-3 / math.sqrt(2) * 1e3:.3f} mV)")

# APD shot noise: sigma grows as sqrt(V_DC)
apd = noise.ApdModel()
powers = np.linspace(0.05e-6, 2.0e-6, 25)
v_dc = apd.conversion * powers
sigma = np.array([noise.shot_noise_sd(v, apd, cfg.lpf_bandwidth) for v in v_dc])
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(v_dc, sigma * 1e3, "o", ms=4)
ax.set_xlabel("V_DC [V]")
ax.set_ylabel("sigma [mV]")
ax.set_title("APD shot noise vs DC voltage")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "shot_noise.png"), dpi=120)
print(f"wrote {os.path.join(OUT, 'shot_noise.png')}")

# chain constant C0 = <sigma(S_F)/sqrt(A0)> for the balanced configuration
result = noise.c0_monte_carlo(repetitions=100, seed=0)
print(f"\nC0 Monte Carlo (100 repetitions): {result['c0']:.4f} "
      f"+- {result['std']:.4f}")

# balanced detection: minimum measurable phase shift vs operating phase
phases = np.linspace(0.05, math.pi - 0.05, 200)
mmps = [noise.balanced_subtract(
    noise.BalancedPair(peak_signal=1e8, phase=p, intensity_noise_ratio=1e-4,
                       residual_fraction=0.05))["mmps"] for p in phases]
fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(phases, mmps)
ax.set_xlabel("operating phase [rad]")
ax.set_ylabel("minimum measurable phase shift [rad]")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "balanced_mmps.png"), dpi=120)
print(f"wrote {os.path.join(OUT, 'balanced_mmps.png')}")
