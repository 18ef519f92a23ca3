"""Regeneration of the published benchmark tables from first principles.

Each generator returns a dict with `columns`, `rows` (computed values) and
`reference` (the printed values, None where no printed value exists) so the
CLI can emit both the table and a per-cell deviation report.

Presentation conventions: the benchmark tables quote gamma_c, Gamma_STL and
the standard MMFS divided by 2*pi (Hz presentation) while the optimal-imbalance
column is the Hz-presented standard MMFS scaled by the dimensionless ratio
e / (2 N tau_c).
"""

import math

from .laser import LaserSpec, cavity_decay, schawlow_townes
from .sensitivity import DetectionSpec, mmfs_slow_light, mmfs_standard_linewidth
from .constants import photon_flux

TWO_PI = 2.0 * math.pi

# Benchmark ring-laser parameter set
BENCH_WAVELENGTH = 632.8e-9
BENCH_POWER = 10e-3
BENCH_CAVITY_LENGTH = 0.70
BENCH_TAU_M = 0.1
BENCH_REFLECTIVITIES = (0.5, 0.8, 0.9, 0.95)

# Slow-light experiment constants (probe laser at 795 nm)
EXP_WAVELENGTH = 795e-9
EXP_GAMMA_L = 2.4e6        # probe linewidth [1/s]
EXP_GAMMA_M = 20.7         # lock-in bandwidth [1/s]

# Measured per-case values for the four slow-light settings
EXP_GROUP_INDICES = (142, 293, 659, 1343)
EXP_TAU_SL = (39.4e-9, 79.7e-9, 177.2e-9, 360.0e-9)
EXP_SIGMA = (0.78, 0.60, 0.42, 0.33)
EXP_POWER = (1.2e-3, 1.2e-3, 1.2e-3, 1.6e-3)
EXP_ETA_EFF = (2.0e-4, 4.0e-4, 5.5e-4, 5.0e-4)
EXP_VN_MV = (0.080, 0.14, 0.10, 0.066)
EXP_K_MV_PER_S = (3.1e-6, 9.5e-5, 2.1e-5, 3.8e-5)
EXP_MMFS_MEASURED = (2.6e4, 1.5e4, 4.8e3, 1.7e3)


def _bench_row(reflectivity: float):
    spec = LaserSpec(BENCH_WAVELENGTH, BENCH_POWER, BENCH_CAVITY_LENGTH, reflectivity)
    cavity = cavity_decay(spec)
    gamma_stl, tau_stl = schawlow_townes(spec, cavity)
    # Hz-presented standard MMFS and the dimensionless optimal-imbalance ratio
    dnu_std = math.sqrt((gamma_stl / TWO_PI) / BENCH_TAU_M)
    ratio = math.e / (2.0 * spec.photon_flux * cavity.decay_time)
    return spec, cavity, gamma_stl, tau_stl, dnu_std, ratio


def benchmark_mmfs_table() -> dict:
    """Quantum-limited MMFS benchmark vs output-coupler reflectivity."""
    columns = [
        "R", "lambda_nm", "tau_m_s", "p_out_mw", "l_cm",
        "gamma_c_over_2pi_mhz", "gamma_stl_over_2pi_mhz_milli",
        "mmfs_std_hz", "mmfs_optimal_imbalance_nhz",
    ]
    printed = {
        0.5: (7.7, 5.8, 0.24, 0.50),
        0.8: (2.4, 0.58, 0.076, 0.050),
        0.9: (1.1, 0.13, 0.036, 0.011),
        0.95: (0.56, 0.031, 0.018, 0.0026),
    }
    rows, reference = [], []
    for r in BENCH_REFLECTIVITIES:
        _, cavity, gamma_stl, _, dnu_std, ratio = _bench_row(r)
        rows.append([
            r, BENCH_WAVELENGTH * 1e9, BENCH_TAU_M, BENCH_POWER * 1e3,
            BENCH_CAVITY_LENGTH * 1e2,
            cavity.decay_rate / TWO_PI / 1e6,
            gamma_stl / TWO_PI * 1e3,
            dnu_std,
            ratio * dnu_std * 1e9,
        ])
        reference.append([r, None, None, None, None, *printed[r]])
    return {"name": "benchmark_mmfs", "columns": columns, "rows": rows, "reference": reference}


def benchmark_time_bound_table() -> dict:
    """Quantum-limit measurement-time bounds for the same benchmark rows."""
    columns = [
        "R", "lambda_nm", "p_out_mw", "l_cm",
        "tau_m_std_s", "tau_m_umzi_1e20_s", "tau_m_ratio",
    ]
    printed = {
        0.5: (27.33, 0.0643, 2.4e17),
        0.8: (273.3, 6.43, 2.3e18),
        0.9: (1230.0, 130.0, 1.1e19),
        0.95: (5194.0, 2320.0, 4.5e19),
    }
    rows, reference = [], []
    for r in BENCH_REFLECTIVITIES:
        spec, _, _, tau_stl, _, _ = _bench_row(r)
        tau_umzi = 2.0 * spec.photon_flux * tau_stl**2 / math.e**2
        rows.append([
            r, BENCH_WAVELENGTH * 1e9, BENCH_POWER * 1e3, BENCH_CAVITY_LENGTH * 1e2,
            tau_stl, tau_umzi / 1e20, tau_umzi / tau_stl,
        ])
        reference.append([r, None, None, None, *printed[r]])
    return {"name": "benchmark_time_bounds", "columns": columns, "rows": rows,
            "reference": reference}


def slow_light_cases_table() -> dict:
    """Measured vs predicted MMFS for the four slow-light operating points.

    Theory rows are computed from the closed forms; the measured rows carry
    the published fit outputs so the observed enhancement can be formed.
    """
    columns = [
        "n_g", "v_n_mv", "k_mv_per_s",
        "mmfs_measured_per_s", "mmfs_theory_per_s", "mmfs_std_per_s", "sef_observed",
    ]
    rows, reference = [], []
    # The published table quotes the theory row a factor 2*pi above the
    # worked per-case values; the table presentation keeps that convention.
    printed_theory = (1.2e3, 4.8e2, 2.1e2, 1.1e2)
    printed_std = (5.0e5, 3.5e5, 3.0e5, 3.2e5)
    printed_sef = (19.0, 24.0, 63.0, 185.0)
    tau_m = 1.0 / EXP_GAMMA_M
    for i, n_g in enumerate(EXP_GROUP_INDICES):
        flux = photon_flux(EXP_POWER[i], EXP_WAVELENGTH)
        theory = TWO_PI * mmfs_slow_light(EXP_TAU_SL[i], EXP_SIGMA[i], EXP_ETA_EFF[i], flux, tau_m)
        std = mmfs_standard_linewidth(EXP_GAMMA_L, EXP_GAMMA_M, EXP_ETA_EFF[i])
        rows.append([
            n_g, EXP_VN_MV[i], EXP_K_MV_PER_S[i],
            EXP_MMFS_MEASURED[i], theory, std, std / EXP_MMFS_MEASURED[i],
        ])
        reference.append([
            n_g, EXP_VN_MV[i], EXP_K_MV_PER_S[i],
            EXP_MMFS_MEASURED[i], printed_theory[i], printed_std[i], printed_sef[i],
        ])
    return {"name": "slow_light_cases", "columns": columns, "rows": rows,
            "reference": reference}


def table_diff(table: dict) -> list:
    """Per-cell relative deviation (computed vs reference) for a table dict.

    Returns rows of (row_index, column, computed, reference, rel_dev).
    """
    out = []
    for i, (row, ref) in enumerate(zip(table["rows"], table["reference"])):
        for col, val, refval in zip(table["columns"], row, ref):
            if refval is None:
                continue
            rel = abs(val - refval) / abs(refval) if refval != 0 else abs(val)
            out.append((i, col, val, refval, rel))
    return out


def detection_spec_for_lockin() -> DetectionSpec:
    """Detection spec matching the lock-in bandwidth used in the experiment."""
    return DetectionSpec(
        quantum_efficiency=1.0, measurement_time=1.0 / EXP_GAMMA_M,
        measurement_bandwidth=EXP_GAMMA_M,
    )
