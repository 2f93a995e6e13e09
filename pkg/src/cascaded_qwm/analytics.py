"""Closed-form side-peak amplitudes, limiting regimes and suppression ratios.

All amplitudes are coefficients of ``exp(i n delta_omega t)`` in
``<sigma_-^pr>`` to leading order in the drives.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .model import SystemParams
from .series import MonomialKey

__all__ = [
    "PEAKS",
    "SUPPRESSED_PEAKS",
    "cascaded_peak",
    "single_qubit_coherent_peak",
    "effective_rabi",
    "coherent_limit_peak",
    "suppression_ratio_closed",
    "suppression_asymptote",
    "antibunching_limit_peak",
    "monomial_to_physical",
    "MonomialRow",
    "table1_rows",
    "leading_monomial",
]

PEAKS = (-1, 1, -3, 3, -5, 5)
SUPPRESSED_PEAKS = (3, -5, 5)


def _unsupported(n, allowed):
    return ValueError(f"harmonic {n} not supported; expected one of {tuple(allowed)}")


def cascaded_peak(n: int, params: SystemParams) -> complex:
    """Leading-order cascaded amplitude of the ``n``-th side peak."""
    gs, gp = params.gamma_s, params.gamma_pr
    a = params.alpha
    ws, wp = params.omega_s_amp, params.omega_pr_amp
    if n == -1:
        return -2 * wp / gp
    if n == 1:
        return 4 * a * ws / gs
    if n == -3:
        return -32 * a * wp**2 * ws.conjugate() / (gs * gp**2)
    if n == 3:
        return 64 * a**2 * ws**2 * wp.conjugate() / (gs * gp * (gs + gp))
    if n == -5:
        return (
            -a**2 * (512 * gs + 768 * gp) * wp**3 * ws.conjugate() ** 2
            / (gs * gp**3 * (gs + gp) ** 2)
        )
    if n == 5:
        return (
            a**3 * (1024 * gs + 2560 * gp) * ws**3 * wp.conjugate() ** 2
            / (gs * gp**2 * (gs + gp) ** 2 * (gs + 2 * gp))
        )
    raise _unsupported(n, PEAKS)


def single_qubit_coherent_peak(n: int, gamma: float, omega1: complex, omega2: complex) -> complex:
    """Two-tone wave mixing on one qubit; tone 1 at ``-delta_omega``, tone 2 at ``+delta_omega``.

    Phases follow the conventional single-qubit set; only magnitudes are compared
    against the cascaded amplitudes.
    """
    g = gamma
    if n == 1:
        return 2 * omega2 / g
    if n == -1:
        return 2 * omega1 / g
    if n == 3:
        return 16 * omega1 * omega2**2 / g**3
    if n == -3:
        return 16 * omega2 * omega1**2 / g**3
    if n == 5:
        return 128 * omega2**3 * omega1**2 / g**5
    if n == -5:
        return 128 * omega1**3 * omega2**2 / g**5
    raise _unsupported(n, PEAKS)


def effective_rabi(params: SystemParams):
    """``(gamma, Omega_1, Omega_2)`` of the coherent drive equivalent to the filtered source."""
    omega2 = -2 * params.mu * params.omega_s_amp * math.sqrt(params.gamma_pr / params.gamma_s)
    return params.gamma_pr, params.omega_pr_amp, omega2


def coherent_limit_peak(n: int, params: SystemParams) -> complex:
    """Coherent-filtering reference amplitude at the same drive voltages."""
    return single_qubit_coherent_peak(n, *effective_rabi(params))


def suppression_ratio_closed(n: int, gamma_s: float, gamma_pr: float) -> float:
    gs, gp = float(gamma_s), float(gamma_pr)
    if n == 3:
        return gs / (gs + gp)
    if n == -5:
        return gs * (gs + 1.5 * gp) / (gs + gp) ** 2
    if n == 5:
        return gs**2 * (gs + 2.5 * gp) / ((gs + gp) ** 2 * (gs + 2 * gp))
    raise _unsupported(n, SUPPRESSED_PEAKS)


def suppression_asymptote(n: int, r: float) -> float:
    """Small-``r`` law of the suppression ratio."""
    if n == 3:
        return r
    if n == -5:
        return 1.5 * r
    if n == 5:
        return 1.25 * r**2
    raise _unsupported(n, SUPPRESSED_PEAKS)


def antibunching_limit_peak(n: int, params: SystemParams) -> complex:
    """Leading amplitude for ``gamma_pr >> gamma_s``."""
    gs, gp, mu = params.gamma_s, params.gamma_pr, params.mu
    ws, wp = params.omega_s_amp, params.omega_pr_amp
    r = gs / gp
    if n == 3:
        return mu**2 * r * 64 * ws**2 * wp.conjugate() / (gs * gp**2)
    if n == -5:
        return -(mu**2) * r * 768 * wp**3 * ws.conjugate() ** 2 / (gs * gp**4)
    if n == 5:
        return mu**3 * r**1.5 * 1280 * ws**3 * wp.conjugate() ** 2 / (gs * gp**4)
    raise _unsupported(n, SUPPRESSED_PEAKS)


def monomial_to_physical(coeff: complex, key, params: SystemParams) -> complex:
    """Amplitude contributed by ``coeff * p-^a p+^b s+^c s-^d`` with the time factor stripped."""
    return coeff * MonomialKey(*key).value(params.drives(0.0))


class MonomialRow(NamedTuple):
    peak: int
    monomial: MonomialKey
    source_factors: int
    scaling: str
    # small-r law of the normalized amplitude, as (prefactor, power of r);
    # None when the peak is not suppressed
    law: tuple | None


def table1_rows():
    rows = [
        (-1, MonomialKey(1, 0, 0, 0), "not suppressed", None),
        (1, MonomialKey(0, 0, 1, 0), "not suppressed", None),
        (-3, MonomialKey(2, 0, 0, 1), "not suppressed", None),
        (3, MonomialKey(0, 1, 2, 0), "gamma_s/gamma_pr", (1.0, 1)),
        (-5, MonomialKey(3, 0, 0, 2), "(3/2) gamma_s/gamma_pr", (1.5, 1)),
        (5, MonomialKey(0, 2, 3, 0), "(5/4) (gamma_s/gamma_pr)^2", (1.25, 2)),
    ]
    return [MonomialRow(n, k, k.source_factors, s, law) for n, k, s, law in rows]


def leading_monomial(n: int) -> MonomialKey:
    for row in table1_rows():
        if row.peak == n:
            return row.monomial
    raise _unsupported(n, PEAKS)
