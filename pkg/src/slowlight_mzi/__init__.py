"""Numerical toolkit for slow-light-augmented unbalanced interferometry:
laser linewidth statistics, fringe signal models, minimum measurable frequency
shift and enhancement-factor closed forms, a four-level EIT group-index model,
detection-noise Monte Carlo, and the associated data-fitting procedures.
"""

from . import (config, constants, eit, fitting, interferometer, laser, noise,
               sensitivity, tables)

__all__ = [
    "config", "constants", "eit", "fitting", "interferometer", "laser",
    "noise", "sensitivity", "tables",
]

__version__ = "0.1.0"
