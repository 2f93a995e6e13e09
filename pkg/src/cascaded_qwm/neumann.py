"""Weak-drive expansion of the stationary cascaded response.

The drive-independent matrix ``A`` is factorized once; every order then
follows from the previous one by

    X[N] = -A^{-1} (Omega X[N-1] + b[N]),    X[0] = -A^{-1} b[0],

with ``Omega`` applied symbolically: each of its nonzero entries is a single
drive component, i.e. a monomial shift of a :class:`DriveSeries`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .model import (
    N_STATE,
    OMEGA_ENTRIES,
    SIGMA_M_PR,
    SIGMA_Z_PR,
    SIGMA_ZZ,
    DriveAmplitudes,
    ParameterError,
    SystemParams,
    build_A,
)
from .series import (
    DEFAULT_PRUNE,
    UNIT_KEYS,
    DriveSeries,
    MonomialKey,
    evaluate,
    harmonic_component,
    linear_combination,
    series_add,
    series_scale_mul,
)
from .spectrum import Spectrum

__all__ = [
    "ConfigurationError",
    "WeakDriveWarning",
    "NeumannExpansion",
    "MAX_ORDER",
    "WEAK_DRIVE_LIMIT",
    "source_rhs_layer",
    "expand",
    "sideband_coefficient",
    "peak_amplitude_perturbative",
]

MAX_ORDER = 12
WEAK_DRIVE_LIMIT = 0.3
# coefficients below this fraction of the largest one in their layer are
# round-off from the dense inverse and are dropped
_LAYER_RTOL = 1e-13


class ConfigurationError(ValueError):
    pass


class WeakDriveWarning(UserWarning):
    pass


def source_rhs_layer(order: int, r: float, truncation: int, prune=DEFAULT_PRUNE):
    """Order-``order`` part of the inhomogeneous vector as 12 series.

    The source saturation factor ``F = sum_k (-8 s+ s- / r**2)**k`` feeds
    entry 12 at even orders and, with the prefactors ``2 s+/r`` and
    ``2 s-/r``, entries 2 and 5 at odd orders.
    """
    comps = [DriveSeries.zero(truncation, prune) for _ in range(N_STATE)]
    k, odd = divmod(order, 2)
    f_k = (-8.0 / r**2) ** k
    if odd:
        comps[1] = DriveSeries({(0, 0, k + 1, k): 2.0 / r * f_k}, truncation, prune)
        comps[4] = DriveSeries({(0, 0, k, k + 1): 2.0 / r * f_k}, truncation, prune)
    else:
        comps[SIGMA_ZZ] = DriveSeries({(0, 0, k, k): f_k}, truncation, prune)
        if order == 0:
            comps[SIGMA_Z_PR] = DriveSeries({(0, 0, 0, 0): -1.0}, truncation, prune)
    return comps


def _apply_omega(layer, entries, truncation, prune):
    out = [DriveSeries.zero(truncation, prune) for _ in range(N_STATE)]
    for e in entries:
        out[e.row] = series_add(out[e.row], series_scale_mul(layer[e.col], UNIT_KEYS[e.drive], e.coeff))
    return out


def _clean_layer(layer):
    peak = max((abs(v) for s in layer for _, v in s.items()), default=0.0)
    if peak == 0.0:
        return layer
    cut = _LAYER_RTOL * peak
    return [s._like({k: v for k, v in s.items() if abs(v) > cut}) for s in layer]


@dataclass(frozen=True)
class NeumannExpansion:
    """Order-by-order weak-drive solution.

    ``layers[N][i]`` is the order-``N`` series of state component ``i``
    (0-based); ``total[i]`` is their sum.
    """

    r: float
    alpha: float
    order: int
    layers: tuple
    total: tuple

    def component(self, index: int) -> DriveSeries:
        return self.total[index]

    @property
    def coherence(self) -> DriveSeries:
        return self.total[SIGMA_M_PR]

    def coefficient(self, component: int, key) -> complex:
        return self.total[component][MonomialKey(*key)]

    def peak(self, n: int, d: DriveAmplitudes) -> complex:
        return peak_amplitude_perturbative(self, n, d)

    def spectrum(self, params: SystemParams, harmonics) -> Spectrum:
        d = params.drives(0.0)
        _guard(d)
        amps = {n: evaluate(harmonic_component(self.coherence, n), d) for n in harmonics}
        return Spectrum(amps, method=f"neumann:{self.order}", params=params)


def expand(params, order: int = 5, *, truncation: int | None = None,
           max_order: int = MAX_ORDER, prune: float = DEFAULT_PRUNE,
           entries=OMEGA_ENTRIES) -> NeumannExpansion:
    """Expand the stationary solution to total drive order ``order``.

    ``params`` is a :class:`SystemParams` or an ``(r, alpha)`` pair; only the
    linewidth ratio and the cascaded coupling enter the coefficients.
    """
    if isinstance(params, SystemParams):
        r, alpha = params.r, params.alpha
    else:
        r, alpha = map(float, params)
    if order < 0:
        raise ConfigurationError("expansion order must be non-negative")
    if order > max_order:
        raise ConfigurationError(f"expansion order {order} exceeds the cap {max_order}")
    trunc = order if truncation is None else int(truncation)
    if trunc < order:
        raise ConfigurationError("truncation order below expansion order")

    A = build_A(r, alpha)
    lu = lu_factor(A)
    if not np.all(np.isfinite(lu[0])) or np.min(np.abs(np.diag(lu[0]))) == 0.0:
        raise np.linalg.LinAlgError("drive-independent matrix is singular")
    neg_inv = -lu_solve(lu, np.eye(N_STATE))

    def solve(rhs):
        return _clean_layer(
            [linear_combination(neg_inv[i], rhs) for i in range(N_STATE)]
        )

    layers = [solve(source_rhs_layer(0, r, trunc, prune))]
    for n in range(1, order + 1):
        driven = _apply_omega(layers[-1], entries, trunc, prune)
        src = source_rhs_layer(n, r, trunc, prune)
        layers.append(solve([series_add(u, v) for u, v in zip(driven, src)]))

    total = []
    for i in range(N_STATE):
        acc = layers[0][i]
        for layer in layers[1:]:
            acc = series_add(acc, layer[i])
        total.append(acc)
    return NeumannExpansion(r, alpha, order, tuple(tuple(l) for l in layers), tuple(total))


def sideband_coefficient(exp: NeumannExpansion, component: int, key) -> complex:
    """Coefficient of a monomial in a state component (0 when absent).

    ``component`` is 0-based; 0 is the probe coherence.
    """
    key = MonomialKey(*key)
    if key.total_order > exp.order:
        raise ConfigurationError(f"monomial {key.label()} lies beyond order {exp.order}")
    return exp.total[component][key]


def _guard(d: DriveAmplitudes):
    if d.max_abs() >= WEAK_DRIVE_LIMIT:
        warnings.warn(
            f"drive component of magnitude {d.max_abs():.3g} is outside the weak-drive "
            f"regime (< {WEAK_DRIVE_LIMIT}); the truncated series may not converge",
            WeakDriveWarning,
            stacklevel=3,
        )


def peak_amplitude_perturbative(exp: NeumannExpansion, n: int, d: DriveAmplitudes) -> complex:
    """Coefficient of ``exp(i n theta)`` in the probe coherence."""
    if abs(n) > exp.order:
        raise ConfigurationError(f"harmonic {n} lies beyond order {exp.order}")
    _guard(d)
    return evaluate(harmonic_component(exp.coherence, n), d)
