"""Command-line scenario runner.

Subcommands: tables, sef, mmfs, eit, noise, fit, constants.  Every subcommand
accepts --config (INI scenario file), --seed, --out (output directory) and
--format (csv).  Exit codes: 0 success, 1 configuration error, 2 numerical
failure.  All CSV outputs are written atomically and deterministically.
"""

import argparse
import math
import os
import sys
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import constants, eit, fitting, noise, sensitivity, tables
from .config import ConfigError, default_scenario, load_config
from .interferometer import time_constants
from .laser import cavity_decay, schawlow_townes

_BUNDLED_SWEEP = os.path.join(os.path.dirname(__file__), "data", "lia_sweep_reference.csv")


# --- output helpers -----------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _write_csv(path: str, header, rows):
    """Atomic CSV write: temp file in the target directory, then rename."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(x) for x in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _save_plot(fig, path: str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _load_scenario(args):
    scenario = load_config(args.config) if args.config else default_scenario()
    if args.seed is not None:
        scenario = scenario.__class__(**{**scenario.__dict__, "seed": args.seed})
    return scenario


# --- subcommands --------------------------------------------------------------

def cmd_constants(args) -> int:
    rows = list(constants.CONSTANTS_TABLE)
    for name, value, unit in rows:
        print(f"{name:24s} {value:.10g} {unit}")
    _write_csv(os.path.join(args.out, "constants.csv"),
               ["name", "value", "unit"], rows)
    return 0


def cmd_tables(args) -> int:
    generators = {
        "supp1": tables.benchmark_mmfs_table,
        "supp2": tables.benchmark_time_bound_table,
        "main1": tables.slow_light_cases_table,
    }
    names = list(generators) if args.which == "all" else [args.which]
    for name in names:
        table = generators[name]()
        _write_csv(os.path.join(args.out, f"{table['name']}.csv"),
                   table["columns"], table["rows"])
        diff = tables.table_diff(table)
        _write_csv(os.path.join(args.out, f"{table['name']}_diff.csv"),
                   ["row", "column", "computed", "reference", "rel_dev"], diff)
        worst = max((d[4] for d in diff), default=0.0)
        print(f"{table['name']}: {len(table['rows'])} rows, worst deviation {worst:.3%}")
    return 0


def cmd_sef(args) -> int:
    sc = _load_scenario(args)
    taus = time_constants(sc.geometry, sc.medium)
    flux = sc.laser.photon_flux
    tau_l = sc.laser.coherence_time
    report = sensitivity.sensitivity_report(
        taus["tau_sl"], sc.medium.transmission, sc.laser.measured_linewidth,
        flux, sc.detection, tau_vac=taus["tau_vac"],
    )
    sef = sensitivity.sef_enhancement(taus["tau_sl"], sc.medium.transmission, tau_l, flux)
    print(f"tau_sl          = {taus['tau_sl']:.6g} s")
    print(f"SEF             = {sef:.6g}")
    print(f"MMFS (standard) = {report.mmfs_standard:.6g} 1/s")
    print(f"MMFS (slow)     = {report.mmfs_slow_light:.6g} 1/s")
    if report.regime_notes:
        print(f"note: {report.regime_notes}")
    _write_csv(os.path.join(args.out, "sef.csv"),
               ["tau_sl_s", "sigma", "sef", "mmfs_standard_per_s", "mmfs_slow_per_s"],
               [[taus["tau_sl"], sc.medium.transmission, sef,
                 report.mmfs_standard, report.mmfs_slow_light]])
    return 0


def cmd_mmfs(args) -> int:
    sc = _load_scenario(args)
    cavity = cavity_decay(sc.laser)
    gamma_stl, tau_stl = schawlow_townes(sc.laser, cavity)
    std = sensitivity.mmfs_standard_quantum(sc.laser, cavity, sc.detection)
    opt = sensitivity.umzi_optimal(sc.laser, cavity, sc.laser.photon_flux, tau_stl)
    bound_std = sensitivity.quantum_time_bound("standard", sc.laser, cavity, tau_stl)
    bound_umzi = sensitivity.quantum_time_bound("umzi", sc.laser, cavity, tau_stl)
    print(f"gamma_c   = {cavity.decay_rate:.6g} 1/s   finesse = {cavity.finesse:.6g}")
    print(f"Gamma_STL = {gamma_stl:.6g} 1/s   tau_STL = {tau_stl:.6g} s")
    print(f"MMFS standard (quantum)  = {std:.6g} 1/s")
    print(f"MMFS optimal imbalance   = {opt['mmfs']:.6g} 1/s  (x_opt = {opt['x_opt']:.6g})")
    print(f"time bounds: standard {bound_std:.6g} s, optimal imbalance {bound_umzi:.6g} s")
    _write_csv(os.path.join(args.out, "mmfs.csv"),
               ["gamma_c_per_s", "finesse", "gamma_stl_per_s", "tau_stl_s",
                "mmfs_standard_per_s", "mmfs_optimal_per_s", "x_opt",
                "time_bound_standard_s", "time_bound_optimal_s"],
               [[cavity.decay_rate, cavity.finesse, gamma_stl, tau_stl,
                 std, opt["mmfs"], opt["x_opt"], bound_std, bound_umzi]])
    return 0


def cmd_eit(args) -> int:
    sc = _load_scenario(args)
    detunings = np.linspace(-2e6, 2e6, 81)
    spectrum = eit.propagate_sliced(sc.scheme, sc.cell, coupling=1.0, detunings=detunings)
    sigma = eit.transmission_at_center(spectrum)
    dn = np.gradient(spectrum.phase_index, spectrum.detunings)
    print(f"n_g at center = {spectrum.group_index_at_center:.6g}")
    print(f"sigma at center = {sigma:.6g}")
    _write_csv(os.path.join(args.out, "eit_spectrum.csv"),
               ["detuning_hz", "transmission", "phase_index", "d_n_d_delta"],
               [[d / (2.0 * math.pi), t, n, g] for d, t, n, g in
                zip(spectrum.detunings, spectrum.transmission, spectrum.phase_index, dn)])
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
    ax1.plot(spectrum.detunings / (2e6 * math.pi), spectrum.transmission)
    ax1.set_ylabel("transmission")
    ax2.plot(spectrum.detunings / (2e6 * math.pi), spectrum.phase_index)
    ax2.set_ylabel("phase index")
    ax2.set_xlabel("two-photon detuning [MHz]")
    _save_plot(fig, os.path.join(args.out, "eit_spectrum.png"))
    return 0


def cmd_noise(args) -> int:
    sc = _load_scenario(args)
    cfg = sc.noise_chain.__class__(**{**sc.noise_chain.__dict__, "seed": sc.seed})
    if args.case == "white":
        src = noise.synth_white_noise(cfg)
        filtered = noise.spectrum_analyzer_chain(src, cfg)
        times = np.arange(2000) / (4.0 * cfg.noise_bandwidth)
        series = src.sample(times)
        _write_csv(os.path.join(args.out, "white_noise_series.csv"),
                   ["time_s", "voltage_v"], list(zip(times, series)))
        print(f"synthesized rms = {series.std():.6g} V (target {cfg.rms_voltage:.6g} V)")
        print(f"filtered std    = {filtered.ensemble_std:.6g} V")
        fig, ax = plt.subplots()
        ax.plot(times * 1e6, series, lw=0.5)
        ax.set_xlabel("time [us]")
        ax.set_ylabel("voltage [V]")
        _save_plot(fig, os.path.join(args.out, "white_noise_series.png"))
    elif args.case == "shot":
        apd = noise.ApdModel()
        powers = np.linspace(0.05e-6, 2.0e-6, 25)
        rows = []
        for p in powers:
            v_dc = apd.conversion * p
            rows.append([p, v_dc, noise.shot_noise_sd(v_dc, apd, cfg.lpf_bandwidth)])
        _write_csv(os.path.join(args.out, "shot_noise_sweep.csv"),
                   ["power_w", "v_dc_v", "sigma_v"], rows)
        arr = np.array(rows)
        fit = fitting.noise_law_fit(arr[:, 1], arr[:, 2], model="sqrt")
        print(f"shot-noise sweep: sqrt-law scale {fit.params[0]:.6g}, offset {fit.params[1]:.6g}")
        fig, ax = plt.subplots()
        ax.plot(arr[:, 1], arr[:, 2] * 1e3, "o")
        ax.set_xlabel("V_DC [V]")
        ax.set_ylabel("sigma [mV]")
        _save_plot(fig, os.path.join(args.out, "shot_noise_sweep.png"))
    elif args.case == "balanced":
        phases = np.linspace(0.0, math.pi, 37)
        rows = []
        for phi in phases:
            pair = noise.BalancedPair(peak_signal=1e8, phase=phi,
                                      intensity_noise_ratio=1e-4, residual_fraction=0.05)
            out = noise.balanced_subtract(pair)
            rows.append([phi, out["mean"], out["total_noise"], out["mmps"]])
        _write_csv(os.path.join(args.out, "balanced_sweep.csv"),
                   ["phase_rad", "mean", "total_noise", "mmps"], rows)
        best = min(rows, key=lambda r: r[3])
        print(f"best MMPS {best[3]:.6g} at phase {best[0]:.6g} rad")
    elif args.case == "c0":
        result = noise.c0_monte_carlo(repetitions=args.repetitions, seed=sc.seed)
        print(f"C0 = {result['c0']:.6g} +- {result['std']:.2g} "
              f"({result['repetitions']} repetitions)")
        _write_csv(os.path.join(args.out, "c0_monte_carlo.csv"),
                   ["c0", "std", "repetitions"],
                   [[result["c0"], result["std"], result["repetitions"]]])
    return 0


def _read_two_column_csv(path: str, col_a: str, col_b: str):
    values_a, values_b, meta = [], [], {}
    with open(path) as fh:
        lines = fh.readlines()
    header = None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "=" in line:
                key, _, raw = line.lstrip("#").partition("=")
                meta[key.strip()] = raw.strip()
            continue
        parts = [p.strip() for p in line.split(",")]
        if header is None:
            if parts[:2] != [col_a, col_b]:
                raise ConfigError(
                    f"{path}:{lineno}: expected header '{col_a},{col_b}', got {line!r}")
            header = parts
            continue
        try:
            values_a.append(float(parts[0]))
            values_b.append(float(parts[1]))
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"{path}:{lineno}: malformed row {line!r}") from exc
    if header is None or not values_a:
        raise ConfigError(f"{path}: no data rows found")
    return np.array(values_a), np.array(values_b), meta


def cmd_fit(args) -> int:
    path = args.input or _BUNDLED_SWEEP
    if args.kind == "lia":
        swing, v_lia, meta = _read_two_column_csv(path, "swing_hz", "v_lia_volts")
        noise_floor = float(meta.get("v_n_volts", args.noise_floor))
        sweep = fitting.LiaSweep(swing, v_lia, noise_floor)
        result = fitting.ksum_fit(sweep)
        print(f"k    = {result['k']:.6g} V per (1/s^2)  (+- {result['k_err']:.2g})")
        print(f"V_N  = {noise_floor:.6g} V")
        print(f"MMFS = {result['mmfs']:.6g} 1/s (as-printed convention)")
        _write_csv(os.path.join(args.out, "fit_result.csv"),
                   ["k", "k_err", "v_n_volts", "mmfs_per_s", "residual_rms"],
                   [[result["k"], result["k_err"], noise_floor,
                     result["mmfs"], result["residual_rms"]]])
        fig, ax = plt.subplots()
        ax.plot(swing, v_lia * 1e3, "o", label="data")
        ax.plot(swing, result["k"] * swing * 1e3, "-", label="fit")
        ax.set_xlabel("ramp-rate sum [1/s^2]")
        ax.set_ylabel("V_LIA [mV]")
        ax.legend()
        _save_plot(fig, os.path.join(args.out, "fit_overlay.png"))
    else:
        v_dc, sigma, _ = _read_two_column_csv(path, "v_dc_volts", "sigma_volts")
        result = fitting.select_noise_law(v_dc, sigma)
        print(f"model = {result.model}")
        print(f"params = {tuple(round(p, 12) for p in result.params)}")
        print(f"residual rms = {result.residual_rms:.6g}")
        _write_csv(os.path.join(args.out, "fit_result.csv"),
                   ["model", "scale", "offset", "residual_rms"],
                   [[result.model, result.params[0], result.params[1],
                     result.residual_rms]])
        fig, ax = plt.subplots()
        ax.plot(v_dc, sigma, "o", label="data")
        model_fun = np.sqrt if result.model == "sqrt" else (lambda x: x)
        ax.plot(v_dc, result.params[0] * model_fun(v_dc) + result.params[1],
                "-", label=f"{result.model} fit")
        ax.set_xlabel("V_DC [V]")
        ax.set_ylabel("sigma [V]")
        ax.legend()
        _save_plot(fig, os.path.join(args.out, "fit_overlay.png"))
    return 0


# --- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slowlight-mzi",
        description="Slow-light interferometer measurement-chain toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="scenario INI file")
        p.add_argument("--seed", type=int, default=None, help="master RNG seed")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=["csv"], default="csv")

    p = sub.add_parser("tables", help="regenerate the published tables")
    p.add_argument("--which", choices=["supp1", "supp2", "main1", "all"], default="all")
    common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("sef", help="sensitivity enhancement factor report")
    common(p)
    p.set_defaults(func=cmd_sef)

    p = sub.add_parser("mmfs", help="quantum-limited MMFS report")
    common(p)
    p.set_defaults(func=cmd_mmfs)

    p = sub.add_parser("eit", help="EIT probe spectrum and group index")
    common(p)
    p.set_defaults(func=cmd_eit)

    p = sub.add_parser("noise", help="detection-noise simulations")
    p.add_argument("--case", choices=["white", "shot", "balanced", "c0"], default="white")
    p.add_argument("--repetitions", type=int, default=400, help="c0 Monte Carlo repetitions")
    common(p)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("fit", help="fit sweep data from CSV")
    p.add_argument("--input", default=None, help="input CSV (default: bundled sweep)")
    p.add_argument("--kind", choices=["lia", "noise"], default="lia")
    p.add_argument("--noise-floor", type=float, default=0.0,
                   help="V_N in volts if absent from the CSV header")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("constants", help="print the physical-constants table")
    common(p)
    p.set_defaults(func=cmd_constants)

    return parser


_NUMERICAL_ERRORS = (
    eit.DegenerateSystemError,
    eit.ResolutionError,
    np.linalg.LinAlgError,
    FloatingPointError,
    ZeroDivisionError,
    OverflowError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
