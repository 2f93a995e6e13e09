"""Quantum wave mixing on a cascaded source-probe pair of two-level systems.

Stationary cascaded response, its weak-drive expansion, exact and
time-domain cross-checks, and closed-form side-peak amplitudes.
"""

from .analytics import (
    cascaded_peak,
    coherent_limit_peak,
    effective_rabi,
    single_qubit_coherent_peak,
    suppression_ratio_closed,
    table1_rows,
)
from .model import DriveAmplitudes, ParameterError, SystemParams, build_A, build_b, build_Omega
from .neumann import NeumannExpansion, expand
from .series import DriveSeries, MonomialKey
from .spectrum import Spectrum
from .stationary import extract_spectrum, solve_at_phase, suppression_ratio_numeric

__version__ = "0.1.0"
