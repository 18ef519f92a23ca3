"""Laser linewidth statistics and fringe contrast in an unbalanced interferometer.

Walks from a ring-cavity spec to its quantum-limited linewidth, then checks the
closed-form fringe-contrast factor exp(-tau/2tau_c) against a phase-jump Monte
Carlo, and plots the washed-out fringe for several arm lags.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from slowlight_mzi.interferometer import signal_with_linewidth
from slowlight_mzi.laser import (LaserSpec, cavity_decay, contrast_factor,
                                 phase_jump_monte_carlo, schawlow_townes)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# a HeNe-class ring laser: 10 mW, 70 cm cavity, 90% output coupler
spec = LaserSpec(wavelength=632.8e-9, output_power=10e-3, cavity_length=0.70,
                 output_coupler_reflectivity=0.9)
cavity = cavity_decay(spec)
gamma_stl, tau_stl = schawlow_townes(spec, cavity)
print(f"cavity decay rate     gamma_c  = {cavity.decay_rate:.4g} rad/s")
print(f"cavity finesse        F        = {cavity.finesse:.1f}")
print(f"quantum-limited width Gamma    = {gamma_stl:.4g} rad/s "
      f"({gamma_stl / (2 * np.pi):.4g} Hz)")
print(f"coherence time        tau_STL  = {tau_stl:.4g} s")

# Monte Carlo check of the contrast envelope at several lag ratios
print("\nlag/coherence   closed form   Monte Carlo <cos>   pull")
for ratio in (0.1, 0.5, 1.0, 2.0, 5.0):
    mc = phase_jump_monte_carlo(ratio, 1.0, n_samples=10**5, seed=1)
    cf = contrast_factor(ratio, 1.0)
    pull = (mc["mean_cos"] - cf) / mc["sem_cos"]
    print(f"{ratio:12.1f}   {cf:.6f}      {mc['mean_cos']:.6f}          {pull:+.2f}")

# fringes vs detuning for increasing arm lag (contrast decays, period fixed)
detuning = np.linspace(-4e9, 4e9, 1001)
fig, ax = plt.subplots(figsize=(7, 4))
tau_scale = 1.83e-9
for lag_ratio in (0.1, 1.0, 3.0):
    s = signal_with_linewidth(detuning, tau_scale, lag_ratio * tau_stl, tau_stl,
                              peak=1.0)
    ax.plot(detuning / 1e9, s, label=f"lag = {lag_ratio:g} tau_STL")
ax.set_xlabel("detuning [Grad/s]")
ax.set_ylabel("normalized signal")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "fringe_contrast.png"), dpi=120)
print(f"\nwrote {os.path.join(OUT, 'fringe_contrast.png')}")
