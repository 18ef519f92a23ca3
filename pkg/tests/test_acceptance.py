"""Acceptance suite: one test per acceptance criterion.

Each test records exactly one pass/fail line (printed in the terminal summary)
with the measured worst-case deviation and the runtime where a budget applies.
"""

import math
import os
import time

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from slowlight_mzi import cli, eit, fitting, noise, tables
from slowlight_mzi.constants import photon_flux
from slowlight_mzi.laser import (LaserSpec, cavity_decay, contrast_factor,
                                 langevin_beat_monte_carlo, phase_jump_monte_carlo,
                                 schawlow_townes)
from slowlight_mzi.sensitivity import (mmfs_slow_light, mmfs_standard_linewidth,
                                       sef_enhancement, sef_quantum_limit,
                                       umzi_optimal)


def _worst(table, columns=None):
    diffs = tables.table_diff(table)
    if columns is not None:
        diffs = [d for d in diffs if d[1] in columns]
    return max(d[4] for d in diffs)


def test_criterion_01_benchmark_mmfs_table(criteria):
    t0 = time.perf_counter()
    worst = _worst(tables.benchmark_mmfs_table())
    dt = time.perf_counter() - t0
    criteria(1, worst < 0.05 and dt < 1.0,
             f"benchmark MMFS table worst cell deviation {worst:.2%} "
             f"(tol 5%), runtime {dt:.3f}s (< 1s)")


def test_criterion_02_benchmark_time_bound_table(criteria):
    t0 = time.perf_counter()
    table = tables.benchmark_time_bound_table()
    worst_tau = _worst(table, columns=("tau_m_std_s", "tau_m_umzi_1e20_s"))
    worst_ratio = _worst(table, columns=("tau_m_ratio",))
    dt = time.perf_counter() - t0
    criteria(2, worst_tau < 0.05 and worst_ratio < 0.10 and dt < 1.0,
             f"time-bound columns worst {worst_tau:.2%} (tol 5%), ratio column "
             f"worst {worst_ratio:.2%} (tol 10%), runtime {dt:.3f}s (< 1s)")


def test_criterion_03_worked_numbers(criteria):
    t0 = time.perf_counter()
    tau_l = 1.0 / 2.4e6
    flux12 = photon_flux(1.2e-3, 795e-9)
    flux16 = photon_flux(1.6e-3, 795e-9)
    checks = []  # (label, computed, published, relative tolerance)

    # enhancement factor at the bare arm lag (no slow light)
    checks.append(("bare-lag SEF",
                   sef_enhancement(1.83e-9, 1.0, tau_l, flux16), 161.0, 0.03))
    # per-case theoretical enhancement factors for the four operating points
    for (tau_sl, sigma, flux, ref) in [
        (39.4e-9, 0.78, flux12, 2.6e3), (79.7e-9, 0.60, flux12, 4.7e3),
        (177.2e-9, 0.42, flux12, 8.7e3), (360.0e-9, 0.33, flux16, 1.8e4),
    ]:
        checks.append((f"SEF(tau_sl={tau_sl * 1e9:.0f}ns)",
                       sef_enhancement(tau_sl, sigma, tau_l, flux), ref, 0.05))
    # full-scale group-index enhancement factor
    checks.append(("full-scale SEF",
                   sef_enhancement(471e-9, 0.37, tau_l, flux16), 2.5e4, 0.05))
    # standard-technique MMFS at the effective detection efficiency
    checks.append(("MMFS std (eta_eff)",
                   mmfs_standard_linewidth(2.4e6, 20.7, 1.63e-4), 5.5e5, 0.03))
    # standard-technique MMFS at 50% detection efficiency
    checks.append(("MMFS std (eta=0.5)",
                   mmfs_standard_linewidth(2.4e6, 20.7, 0.5), 9.97e3, 0.03))
    # lock-in slope fit of the bundled sweep
    swing, v_lia, meta = cli._read_two_column_csv(cli._BUNDLED_SWEEP,
                                                  "swing_hz", "v_lia_volts")
    fit = fitting.ksum_fit(fitting.LiaSweep(swing, v_lia, float(meta["v_n_volts"])))
    checks.append(("fitted MMFS (bundled sweep)", fit["mmfs"], 2.45e5, 0.02))
    # balanced-geometry run: fitted MMFS and observed enhancement factor
    ramp = np.linspace(1e5, 1e7, 10)
    fit2 = fitting.ksum_fit(fitting.LiaSweep(ramp, 4.5e-5 * ramp, 0.033))
    checks.append(("fitted MMFS (balanced run)", fit2["mmfs"], 733.0, 0.02))
    std_3b = mmfs_standard_linewidth(2.4e6, 20.7, 2.95e-4)
    checks.append(("observed SEF (balanced run)",
                   fitting.observed_sef(std_3b, fit2["mmfs"]), 560.0, 0.02))
    # theoretical slow-light MMFS row for the four operating points
    tau_m = 1.0 / 20.7
    for (tau_sl, sigma, eta, flux, ref) in [
        (39.4e-9, 0.78, 2.0e-4, flux12, 2.0e2), (79.7e-9, 0.60, 4.0e-4, flux12, 77.0),
        (177.2e-9, 0.42, 5.5e-4, flux12, 35.0), (360.0e-9, 0.33, 5.0e-4, flux16, 18.0),
    ]:
        checks.append((f"MMFS theory(tau_sl={tau_sl * 1e9:.0f}ns)",
                       mmfs_slow_light(tau_sl, sigma, eta, flux, tau_m), ref, 0.10))

    dt = time.perf_counter() - t0
    failures = [f"{label}: {got:.4g} vs {ref:.4g} (tol {tol:.0%})"
                for label, got, ref, tol in checks if abs(got - ref) / ref > tol]
    worst = max(abs(got - ref) / ref / tol for _, got, ref, tol in checks)
    criteria(3, not failures and dt < 1.0,
             f"{len(checks)} worked numbers, worst at {worst:.0%} of its tolerance, "
             f"runtime {dt:.3f}s (< 1s)" + (f"; failures: {failures}" if failures else ""))


def test_criterion_04_contrast_decay_oracle(criteria):
    t0 = time.perf_counter()
    worst_pull = 0.0
    for ratio in (0.1, 0.5, 1.0, 2.0, 5.0):
        out = phase_jump_monte_carlo(ratio, 1.0, n_samples=2 * 10**5, seed=17)
        pull = abs(out["mean_cos"] - contrast_factor(ratio, 1.0)) / out["sem_cos"]
        worst_pull = max(worst_pull, pull)
    dt = time.perf_counter() - t0
    criteria(4, worst_pull < 3.0 and dt < 30.0,
             f"phase-jump Monte Carlo vs closed-form contrast at 5 lag ratios, "
             f"worst pull {worst_pull:.2f} sigma (< 3), runtime {dt:.1f}s (< 30s)")


def test_criterion_05_langevin_beat_oracle(criteria):
    t0 = time.perf_counter()
    worst_pull = 0.0
    for i, (diff2d, tau_m) in enumerate([(2.0e6, 1e-3), (1.0e4, 1e-2), (5.0e7, 1e-4)]):
        out = langevin_beat_monte_carlo(diff2d, tau_m, n_trajectories=10**3, seed=23 + i)
        sigma = out["delta_mu_analytic"] * out["relative_error"]
        worst_pull = max(worst_pull,
                         abs(out["delta_mu_estimate"] - out["delta_mu_analytic"]) / sigma)
    dt = time.perf_counter() - t0
    criteria(5, worst_pull < 3.0 and dt < 60.0,
             f"Langevin frequency-uncertainty vs sqrt(2D'/tau_M) at 3 settings, "
             f"worst pull {worst_pull:.2f} sigma (< 3), runtime {dt:.1f}s (< 60s)")


def test_criterion_06_optimal_imbalance_and_break_even(criteria):
    spec = LaserSpec(632.8e-9, 10e-3, 0.70, 0.9)
    cavity = cavity_decay(spec)
    _, tau_stl = schawlow_townes(spec, cavity)
    opt = umzi_optimal(spec, cavity, 1e10, tau_stl)
    x_err = abs(opt["x_opt"] - 1.0)

    # break-even sweep: the slow-light/standard MMFS ratio crosses 1 at n_g = 2F
    finesse = cavity.finesse
    n_g = np.linspace(1.2 * finesse, 3.0 * finesse, 181)
    step = n_g[1] - n_g[0]
    ratio = np.array([sef_quantum_limit(finesse, g, 1.0, limit_regime=True)
                      for g in n_g])
    # the ratio must pass through 1 within one grid step of n_g = 2F
    cross_idx = int(np.argmin(np.abs(ratio - 1.0)))
    ok_cross = (ratio[0] > 1.0 > ratio[-1]
                and abs(n_g[cross_idx] - 2.0 * finesse) <= step)
    criteria(6, x_err < 1e-6 and ok_cross,
             f"optimal imbalance x = 1 within {x_err:.1e} (< 1e-6); break-even at "
             f"n_g = {n_g[cross_idx]:.1f} vs 2F = {2 * finesse:.1f} "
             f"(grid step {step:.2f})")


def test_criterion_07_c0_monte_carlo(criteria):
    t0 = time.perf_counter()
    out = noise.c0_monte_carlo(repetitions=400, seed=0)
    dt = time.perf_counter() - t0
    dev = abs(out["c0"] - 5.26) / 5.26
    criteria(7, dev < 0.03 and dt < 300.0,
             f"C0 = {out['c0']:.4f} vs 5.26 ({dev:.2%}, tol 3%), 400 repetitions, "
             f"runtime {dt:.1f}s (< 5 min)")


def _time_domain_rhs(scheme):
    """Right-hand side of the master equation built directly from 4x4 matrices,
    independent of the vectorized superoperator construction under test."""
    h = np.zeros((4, 4), dtype=complex)
    h[0, 2] = h[2, 0] = scheme.pump_rabi_13 / 2.0
    h[0, 3] = h[3, 0] = scheme.pump_rabi_14 / 2.0
    h[1, 2] = h[2, 1] = scheme.probe_rabi_23 / 2.0
    h[1, 3] = h[3, 1] = scheme.probe_rabi_24 / 2.0
    delta4 = scheme.pump_detuning
    h[1, 1] = scheme.probe_detuning
    h[2, 2] = -(delta4 + scheme.excited_splitting)
    h[3, 3] = -delta4
    jumps = []
    for i, j, rate in ((0, 2, scheme.decay_31), (1, 2, scheme.decay_32),
                       (0, 3, scheme.decay_41), (1, 3, scheme.decay_42),
                       (1, 0, scheme.ground_exchange_rate),
                       (0, 1, scheme.ground_exchange_rate)):
        if rate > 0:
            c = np.zeros((4, 4))
            c[i, j] = math.sqrt(rate)
            jumps.append(c)

    def rhs(_, y):
        rho = y.reshape(4, 4)
        drho = -1j * (h @ rho - rho @ h)
        for c in jumps:
            cd = c.conj().T
            drho += c @ rho @ cd - 0.5 * (cd @ c @ rho + rho @ cd @ c)
        return drho.ravel()

    return rhs


def test_criterion_08_eit_model(criteria):
    t0 = time.perf_counter()
    scheme = eit.reference_scheme()
    cell = eit.CellConfig(number_density=eit.REFERENCE_SUSCEPTIBILITY_SCALE)

    # (a) calibrated model group index and center transmission
    narrow = np.linspace(-4e5, 4e5, 9)
    spectrum, diag = eit.propagate_sliced(scheme, cell, coupling=1.0,
                                          detunings=narrow, collect_invariants=True)
    n_g = spectrum.group_index_at_center
    sigma = eit.transmission_at_center(spectrum)
    ok_a = 1100.0 <= n_g <= 2100.0 and abs(sigma - 0.37) <= 0.10

    # (b) steady state vs an independent time-domain integration at zero velocity
    rho0 = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    horizon = 30.0 / min(r for r in (scheme.ground_exchange_rate, scheme.decay_42)
                         if r > 0)
    sol = solve_ivp(_time_domain_rhs(scheme), (0.0, horizon), rho0.ravel(),
                    method="DOP853", rtol=1e-8, atol=1e-10)
    ode_diff = float(np.abs(sol.y[:, -1].reshape(4, 4)
                            - eit.steady_state(scheme, 0.0)).max())
    ok_b = sol.success and ode_diff < 1e-6

    # (c) density-matrix invariants over all slices and velocity classes
    ok_c = all(v < 1e-9 for v in diag.values())

    # (d) transparency peak with positive dispersion slope at its center
    wide = np.linspace(-8e6, 8e6, 33)
    broad = eit.propagate_sliced(scheme, cell, coupling=1.0, detunings=wide)
    i0 = int(np.argmin(np.abs(wide)))
    ok_d = (broad.transmission[i0] > broad.transmission[0]
            and broad.transmission[i0] > broad.transmission[-1]
            and broad.group_index_at_center > 1.0)

    dt = time.perf_counter() - t0
    criteria(8, ok_a and ok_b and ok_c and ok_d and dt < 600.0,
             f"(a) n_g = {n_g:.0f} in [1100, 2100], sigma = {sigma:.3f} "
             f"(0.37 +- 0.1): {'ok' if ok_a else 'FAIL'}; "
             f"(b) ODE vs steady state max diff {ode_diff:.1e} (< 1e-6): "
             f"{'ok' if ok_b else 'FAIL'}; (c) invariants worst "
             f"{max(diag.values()):.1e}: {'ok' if ok_c else 'FAIL'}; "
             f"(d) transparency peak with positive dispersion: "
             f"{'ok' if ok_d else 'FAIL'}; runtime {dt:.1f}s (< 10 min)")


def test_criterion_09_fit_round_trips(criteria):
    t0 = time.perf_counter()
    rng = np.random.default_rng(41)

    # noiseless round trips are exact
    k_true = 2.2e-10
    ramp = np.linspace(5e7, 1e9, 12)
    exact = fitting.ksum_fit(fitting.LiaSweep(ramp, k_true * ramp, 5.4e-5))
    ok_exact_k = abs(exact["k"] - k_true) / k_true < 1e-10
    v = np.linspace(0.05, 2.0, 25)
    p_true, b_true = 3.2e-3, 1.0e-4
    clean = fitting.noise_law_fit(v, p_true * np.sqrt(v) + b_true, model="sqrt")
    ok_exact_law = (abs(clean.params[0] - p_true) / p_true < 1e-6
                    and abs(clean.params[1] - b_true) / b_true < 1e-4)

    # noisy round trips are unbiased over 1000 trials
    trials = 1000
    k_fits = np.empty(trials)
    for i in range(trials):
        noisy_v = k_true * ramp * (1.0 + 0.01 * rng.standard_normal(ramp.size))
        k_fits[i] = fitting.ksum_fit(fitting.LiaSweep(ramp, noisy_v, 5.4e-5))["k"]
    k_pull = abs(k_fits.mean() - k_true) / (k_fits.std(ddof=1) / math.sqrt(trials))

    p_fits = np.empty(trials)
    sigma_clean = p_true * np.sqrt(v) + b_true
    scale = 0.01 * sigma_clean.mean()
    for i in range(trials):
        noisy = sigma_clean + scale * rng.standard_normal(v.size)
        p_fits[i] = fitting.noise_law_fit(v, noisy, model="sqrt").params[0]
    p_pull = abs(p_fits.mean() - p_true) / (p_fits.std(ddof=1) / math.sqrt(trials))

    dt = time.perf_counter() - t0
    criteria(9, ok_exact_k and ok_exact_law and k_pull < 3.0 and p_pull < 3.0
             and dt < 60.0,
             f"noiseless fits exact (k rel err {abs(exact['k'] - k_true) / k_true:.1e}); "
             f"noisy bias pulls over 1000 trials: slope {k_pull:.2f} sigma, "
             f"sqrt-law {p_pull:.2f} sigma (< 3); runtime {dt:.1f}s (< 60s)")


def test_criterion_10_determinism(criteria, tmp_path):
    commands = [
        ["constants"],
        ["tables", "--which", "all"],
        ["sef"],
        ["mmfs"],
        ["eit"],
        ["noise", "--case", "white", "--seed", "7"],
        ["noise", "--case", "c0", "--repetitions", "60", "--seed", "5"],
        ["fit"],
    ]
    mismatched = []
    for idx, cmd in enumerate(commands):
        dirs = [str(tmp_path / f"run{idx}_{r}") for r in range(2)]
        contents = []
        for d in dirs:
            assert cli.main(cmd + ["--out", d]) == 0
            blob = {}
            for name in sorted(os.listdir(d)):
                if name.endswith(".csv"):
                    with open(os.path.join(d, name), "rb") as fh:
                        blob[name] = fh.read()
            contents.append(blob)
        if contents[0] != contents[1]:
            mismatched.append(cmd[0])
    criteria(10, not mismatched,
             f"{len(commands)} subcommand invocations repeated with fixed seeds: "
             + ("all CSV outputs byte-identical" if not mismatched
                else f"mismatches in {mismatched}"))
