"""Stationary cascaded source-probe system: parameters, state layout, matrices.

The twelve probe and source-probe moments are stored as a complex numpy
array in the fixed order given by :data:`STATE_LABELS`.  In the stationary
approximation they obey ``0 = (A + Omega(theta)) X + b(theta)`` where ``A``
holds the decay rates and the cascaded coupling and ``Omega`` is linear in
the four dimensionless drive components.

Time is measured in units of ``1/gamma_pr`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "ParameterError",
    "SystemParams",
    "DriveAmplitudes",
    "STATE_LABELS",
    "N_STATE",
    "SIGMA_M_PR",
    "SIGMA_P_PR",
    "SIGMA_Z_PR",
    "SIGMA_ZZ",
    "CONJUGATE_INDEX",
    "OMEGA_ENTRIES",
    "OmegaEntry",
    "vacuum_state",
    "build_A",
    "block_slices",
    "build_Omega",
    "build_b",
    "source_factor",
    "source_steady_state",
    "equations_rhs",
    "conjugation_defect",
]


class ParameterError(ValueError):
    """Raised for unphysical or inconsistent system parameters."""


STATE_LABELS = (
    "sm_pr",      # <s-^pr>
    "sm_s sz_pr",
    "sz_s sm_pr",
    "sp_pr",      # <s+^pr>
    "sp_s sz_pr",
    "sz_s sp_pr",
    "sm_s sm_pr",
    "sp_s sp_pr",
    "sz_pr",
    "sp_s sm_pr",
    "sm_s sp_pr",
    "sz_s sz_pr",
)
N_STATE = len(STATE_LABELS)

SIGMA_M_PR = 0
SIGMA_P_PR = 3
SIGMA_Z_PR = 8
SIGMA_ZZ = 11

# index of the Hermitian-conjugate partner of every moment
CONJUGATE_INDEX = (3, 4, 5, 0, 1, 2, 7, 6, 8, 10, 9, 11)


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the cascaded pair.

    ``omega_s_amp`` and ``omega_pr_amp`` are the complex Rabi amplitudes in
    the same units as the decay rates.  ``alpha`` is always derived from
    ``mu`` and ``r`` so that ``alpha**2 == mu**2 * r``.
    """

    gamma_s: float
    gamma_pr: float
    mu: float = 1.0
    omega_s_amp: complex = 0.0
    omega_pr_amp: complex = 0.0
    delta_omega: float = 0.0
    r: float = field(init=False)
    alpha: float = field(init=False)

    def __post_init__(self):
        for name in ("gamma_s", "gamma_pr"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if not (0.0 <= self.mu <= 1.0):
            raise ParameterError(f"mu must lie in [0, 1], got {self.mu!r}")
        if not (math.isfinite(self.delta_omega) and self.delta_omega >= 0):
            raise ParameterError(f"delta_omega must be >= 0, got {self.delta_omega!r}")
        for name in ("omega_s_amp", "omega_pr_amp"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        r = self.gamma_s / self.gamma_pr
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "alpha", self.mu * math.sqrt(r))

    @classmethod
    def from_voltages(cls, gamma_s, gamma_pr, eps_s, eps_pr, mu=1.0, delta_omega=0.0):
        """Build parameters from drive voltages, ``Omega = sqrt(gamma) * eps``."""
        if gamma_s <= 0 or gamma_pr <= 0:
            raise ParameterError("decay rates must be positive")
        return cls(
            gamma_s=gamma_s,
            gamma_pr=gamma_pr,
            mu=mu,
            omega_s_amp=math.sqrt(gamma_s) * complex(eps_s),
            omega_pr_amp=math.sqrt(gamma_pr) * complex(eps_pr),
            delta_omega=delta_omega,
        )

    def with_drives(self, omega_s_amp=None, omega_pr_amp=None) -> "SystemParams":
        return SystemParams(
            gamma_s=self.gamma_s,
            gamma_pr=self.gamma_pr,
            mu=self.mu,
            omega_s_amp=self.omega_s_amp if omega_s_amp is None else omega_s_amp,
            omega_pr_amp=self.omega_pr_amp if omega_pr_amp is None else omega_pr_amp,
            delta_omega=self.delta_omega,
        )

    def scaled_drives(self, factor: float) -> "SystemParams":
        return self.with_drives(self.omega_s_amp * factor, self.omega_pr_amp * factor)

    def drives(self, theta: float = 0.0) -> "DriveAmplitudes":
        return DriveAmplitudes.from_params(self, theta)


class DriveAmplitudes(NamedTuple):
    """Dimensionless drive components at rotating-frame phase ``theta``.

    ``p_minus`` and ``s_minus`` carry ``exp(-i theta)``, ``p_plus`` and
    ``s_plus`` carry ``exp(+i theta)``.
    """

    p_minus: complex
    p_plus: complex
    s_plus: complex
    s_minus: complex

    @classmethod
    def from_params(cls, params: SystemParams, theta: float = 0.0) -> "DriveAmplitudes":
        eta = complex(math.cos(theta), math.sin(theta))
        g = params.gamma_pr
        w_pr = params.omega_pr_amp
        w_s = params.omega_s_amp
        return cls(
            p_minus=w_pr / g / eta,
            p_plus=w_pr.conjugate() / g * eta,
            s_plus=w_s / g * eta,
            s_minus=w_s.conjugate() / g / eta,
        )

    def max_abs(self) -> float:
        return max(abs(v) for v in self)


class OmegaEntry(NamedTuple):
    row: int
    col: int
    drive: int  # position in DriveAmplitudes: 0 p-, 1 p+, 2 s+, 3 s-
    coeff: float


def _entries():
    P_M, P_P, S_P, S_M = range(4)
    # (row, col, drive, coeff), 1-based rows/cols
    raw = [
        (1, 9, P_M, 1),
        (2, 7, P_P, -2), (2, 11, P_M, -2), (2, 12, S_P, 1),
        (3, 7, S_M, -2), (3, 10, S_P, -2), (3, 12, P_M, 1),
        (4, 9, P_P, 1),
        (5, 8, P_M, -2), (5, 10, P_P, -2), (5, 12, S_M, 1),
        (6, 8, S_P, -2), (6, 11, S_M, -2), (6, 12, P_P, 1),
        (7, 2, P_M, 1), (7, 3, S_P, 1),
        (8, 5, P_P, 1), (8, 6, S_M, 1),
        (9, 1, P_P, -2), (9, 4, P_M, -2),
        (10, 3, S_M, 1), (10, 5, P_M, 1),
        (11, 2, P_P, 1), (11, 6, S_P, 1),
        (12, 2, S_M, -2), (12, 3, P_P, -2), (12, 5, S_P, -2), (12, 6, P_M, -2),
    ]
    return tuple(OmegaEntry(r - 1, c - 1, d, float(k)) for r, c, d, k in raw)


#: The 28 nonzero entries of the drive matrix, each a single drive component
#: times an integer coefficient.
OMEGA_ENTRIES = _entries()


def vacuum_state() -> np.ndarray:
    """Joint ground state: both inversions at -1, product <sz sz> = +1."""
    x = np.zeros(N_STATE, dtype=complex)
    x[SIGMA_Z_PR] = -1.0
    x[SIGMA_ZZ] = 1.0
    return x


def _check_r(r):
    if not (math.isfinite(r) and r > 0):
        raise ParameterError(f"linewidth ratio r must be positive, got {r!r}")


def block_slices():
    """Index groups of the block-diagonal drive-independent matrix."""
    return {
        "A_minus": [0, 1, 2],
        "A_plus": [3, 4, 5],
        "A_mm": [6],
        "A_pp": [7],
        "A_z": [8, 9, 10, 11],
    }


def _coherence_block(r, a):
    return np.array(
        [
            [-0.5, a, 0.0],
            [-a, -(1.0 + r / 2), -a],
            [-r, -a, -(r + 0.5)],
        ]
    )


def build_A(params_or_r, alpha=None) -> np.ndarray:
    """Drive-independent 12x12 matrix.

    Accepts either a :class:`SystemParams` or the pair ``(r, alpha)``.
    """
    if isinstance(params_or_r, SystemParams):
        r, a = params_or_r.r, params_or_r.alpha
    else:
        r, a = float(params_or_r), float(alpha)
    _check_r(r)
    A = np.zeros((N_STATE, N_STATE))
    A[0:3, 0:3] = _coherence_block(r, a)
    A[3:6, 3:6] = _coherence_block(r, a)
    A[6, 6] = A[7, 7] = -(r + 1) / 2
    A[8:12, 8:12] = [
        [-1.0, -2 * a, -2 * a, 0.0],
        [a / 2, -(r + 1) / 2, 0.0, a / 2],
        [a / 2, 0.0, -(r + 1) / 2, a / 2],
        [-r, 2 * a, 2 * a, -(r + 1)],
    ]
    return A


def build_Omega(d: DriveAmplitudes, entries=OMEGA_ENTRIES) -> np.ndarray:
    """Drive matrix, linear in the four components of ``d``."""
    Om = np.zeros((N_STATE, N_STATE), dtype=complex)
    for e in entries:
        Om[e.row, e.col] += e.coeff * d[e.drive]
    return Om


def source_factor(d: DriveAmplitudes, r: float) -> complex:
    """Saturation factor ``1 / (1 + 8 s+ s- / r**2)`` of the source."""
    return 1.0 / (1.0 + 8.0 * d.s_plus * d.s_minus / r**2)


def build_b(d: DriveAmplitudes, r: float) -> np.ndarray:
    _check_r(r)
    f = source_factor(d, r)
    b = np.zeros(N_STATE, dtype=complex)
    b[1] = 2.0 * d.s_plus / r * f
    b[4] = 2.0 * d.s_minus / r * f
    b[SIGMA_Z_PR] = -1.0
    b[SIGMA_ZZ] = f
    return b


def source_steady_state(params: SystemParams):
    """Stationary source inversion and coherence amplitude.

    Returns ``(sigma_z, sigma_minus)`` where ``sigma_minus`` is the
    coefficient of ``exp(i delta_omega t)``.
    """
    sat = 1.0 + 8.0 * abs(params.omega_s_amp) ** 2 / params.gamma_s**2
    return -1.0 / sat, -2.0 * params.omega_s_amp / (params.gamma_s * sat)


def equations_rhs(state, params: SystemParams, theta: float = 0.0, source=None):
    """Right-hand side of the probe and source-probe moment equations.

    Written term by term from the equations of motion (the four conjugate
    ones follow by Hermitian conjugation), independently of
    :func:`build_A` / :func:`build_Omega`.  ``source`` is an optional triple
    ``(<s-^s>, <s+^s>, <sz^s>)``; by default the stationary source solution
    at phase ``theta`` is used.
    """
    x = np.asarray(state, dtype=complex)
    (sm, smz, szm, sp, spz, szp, smm, spp, z, spm, smp, zz) = x
    r, a = params.r, params.alpha
    pm, pp, s_p, s_m = DriveAmplitudes.from_params(params, theta)
    if source is None:
        f = source_factor(DriveAmplitudes(pm, pp, s_p, s_m), r)
        src_m, src_p, src_z = -2 * s_p / r * f, -2 * s_m / r * f, -f
    else:
        src_m, src_p, src_z = source

    out = np.empty(N_STATE, dtype=complex)
    out[0] = pm * z + a * smz - sm / 2
    out[3] = pp * z + a * spz - sp / 2
    out[8] = -(2 * pm * sp + 2 * pp * sm) - 2 * a * (spm + smp) - z - 1
    out[10] = s_p * szp + pp * smz + a * (z / 2 + zz / 2) - smp * (r / 2 + 0.5)
    out[9] = s_m * szm + pm * spz + a * (z / 2 + zz / 2) - spm * (r / 2 + 0.5)
    out[7] = -spp * (r / 2 + 0.5) + pp * spz + s_m * szp
    out[6] = -smm * (r / 2 + 0.5) + pm * smz + s_p * szm
    out[4] = (
        -(2 * pm * spp + 2 * pp * spm) + s_m * zz - a * sp - a * szp
        - spz * (r / 2 + 1) - src_p
    )
    out[1] = (
        -(2 * pp * smm + 2 * pm * smp) + s_p * zz - a * sm - a * szm
        - smz * (r / 2 + 1) - src_m
    )
    out[11] = (
        -(2 * pm * szp + 2 * pp * szm) - (2 * s_p * spz + 2 * s_m * smz)
        + 2 * a * (spm + smp) - z * r - zz * (r + 1) - src_z
    )
    out[2] = (
        pm * zz - (2 * s_p * spm + 2 * s_m * smm) - a * smz - sm * r - szm * (r + 0.5)
    )
    out[5] = (
        pp * zz - (2 * s_m * smp + 2 * s_p * spp) - a * spz - sp * r - szp * (r + 0.5)
    )
    return out


def conjugation_defect(x) -> float:
    """Largest violation of the Hermitian pairing of a state, relative to its norm."""
    x = np.asarray(x, dtype=complex)
    scale = max(np.linalg.norm(x), 1e-300)
    pair = np.abs(x[list(CONJUGATE_INDEX)] - np.conj(x)).max()
    return float(pair / scale)
