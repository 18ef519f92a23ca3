"""Physical constants and reference atomic data used across the package.

All frequencies are angular (rad/s) unless a name says otherwise.
"""

import math

# Fundamental constants (CODATA, SI units)
C0 = 299_792_458.0            # vacuum speed of light [m/s]
HBAR = 1.054_571_817e-34      # reduced Planck constant [J s]
K_B = 1.380_649e-23           # Boltzmann constant [J/K]

# Rb-85 reference data
RB85_MASS = 1.409_993e-25           # atomic mass [kg]
RB85_GROUND_SPLITTING_HZ = 3.0357e9   # 5S1/2 F=2 <-> F=3 interval [Hz]
# 5P1/2 F'=2 <-> F'=3 hyperfine interval; externally sourced reference value.
RB85_EXCITED_SPLITTING_HZ = 361.58e6  # [Hz]


def photon_angular_frequency(wavelength: float) -> float:
    """Angular frequency [rad/s] of a photon with the given vacuum wavelength [m]."""
    return 2.0 * math.pi * C0 / wavelength


def photon_energy(wavelength: float) -> float:
    """Energy [J] of a photon with the given vacuum wavelength [m]."""
    return HBAR * photon_angular_frequency(wavelength)


def photon_flux(power: float, wavelength: float) -> float:
    """Photons per second carried by `power` [W] at `wavelength` [m]."""
    return power / photon_energy(wavelength)


#: (name, value, unit) rows for the auditable constants table.
CONSTANTS_TABLE = (
    ("c0", C0, "m/s"),
    ("hbar", HBAR, "J*s"),
    ("k_B", K_B, "J/K"),
    ("rb85_mass", RB85_MASS, "kg"),
    ("rb85_ground_splitting", RB85_GROUND_SPLITTING_HZ, "Hz"),
    ("rb85_excited_splitting", RB85_EXCITED_SPLITTING_HZ, "Hz"),
)
