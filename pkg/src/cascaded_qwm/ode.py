"""Time-domain oracle for the stationary approximation.

Integrates the full time-dependent moment equations (the twelve probe and
source-probe moments plus the three source moments) at finite
``delta_omega`` from the joint ground state, discards a transient, and
projects the late-time probe coherence onto ``exp(i n delta_omega t)``.
Independent of the matrix form: the right-hand side is
:func:`cascaded_qwm.model.equations_rhs`.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import N_STATE, SIGMA_M_PR, SystemParams, equations_rhs, vacuum_state
from .spectrum import Spectrum, format_float

__all__ = [
    "StiffnessError",
    "OdeConfigurationError",
    "OdeSettings",
    "Trajectory",
    "full_rhs",
    "integrate",
    "project_harmonics",
    "ode_spectrum",
]

N_FULL = N_STATE + 3  # plus <s-^s>, <s+^s>, <sz^s>


class StiffnessError(RuntimeError):
    pass


class OdeConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class OdeSettings:
    """Integration controls; times are physical (same units as ``1/gamma``).

    ``transient_time`` defaults to ``60 / min(gamma_s, gamma_pr)`` and the
    analysis window to ``periods`` beat periods ``2 pi / delta_omega``.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    transient_time: float | None = None
    periods: int = 3
    samples_per_period: int = 64
    method: str = "DOP853"

    def transient_for(self, params: SystemParams) -> float:
        floor = 10.0 / min(params.gamma_s, params.gamma_pr)
        if self.transient_time is None:
            return 6 * floor
        if self.transient_time < floor:
            raise OdeConfigurationError(
                f"transient_time {self.transient_time} shorter than 10/min(gamma) = {floor}"
            )
        return self.transient_time


@dataclass
class Trajectory:
    """Uniformly sampled late-time solution over the analysis window."""

    t: np.ndarray        # physical time
    states: np.ndarray   # (len(t), 12)
    source: np.ndarray   # (len(t), 3)
    params: SystemParams
    periods: int

    @property
    def window(self) -> float:
        return float(self.t[-1] - self.t[0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["t"] + [f"re_{i}" for i in range(1, 13)] + [f"im_{i}" for i in range(1, 13)]
        buf.write(",".join(cols) + "\n")
        for t, x in zip(self.t, self.states):
            vals = [t, *x.real, *x.imag]
            buf.write(",".join(format_float(v) for v in vals) + "\n")
        return buf.getvalue()


def full_rhs(tau: float, y: np.ndarray, params: SystemParams) -> np.ndarray:
    """Derivative with respect to ``tau = gamma_pr t`` of the 15 moments."""
    theta = params.delta_omega / params.gamma_pr * tau
    d = params.drives(theta)
    r = params.r
    src_m, src_p, src_z = y[N_STATE:]
    out = np.empty(N_FULL, dtype=complex)
    out[:N_STATE] = equations_rhs(y[:N_STATE], params, theta, source=(src_m, src_p, src_z))
    out[N_STATE] = d.s_plus * src_z - r / 2 * src_m
    out[N_STATE + 1] = d.s_minus * src_z - r / 2 * src_p
    out[N_STATE + 2] = -2 * d.s_plus * src_p - 2 * d.s_minus * src_m - r * src_z - r
    return out


def integrate(params: SystemParams, settings: OdeSettings = OdeSettings()) -> Trajectory:
    if not params.delta_omega > 0:
        raise OdeConfigurationError("time-domain integration needs delta_omega > 0")
    if settings.periods < 1:
        raise OdeConfigurationError("analysis window must span at least one beat period")
    g = params.gamma_pr
    period = 2 * math.pi / params.delta_omega
    t0 = settings.transient_for(params)
    t1 = t0 + settings.periods * period
    n_samples = settings.periods * settings.samples_per_period + 1
    t_eval = np.linspace(t0, t1, n_samples)

    y0 = np.zeros(N_FULL, dtype=complex)
    y0[:N_STATE] = vacuum_state()
    y0[N_STATE + 2] = -1.0
    sol = solve_ivp(
        full_rhs, (0.0, g * t1), y0, method=settings.method,
        t_eval=g * t_eval, rtol=settings.rtol, atol=settings.atol, args=(params,),
    )
    if sol.status != 0:
        raise StiffnessError(f"integration failed: {sol.message}")
    y = sol.y.T
    return Trajectory(t_eval, y[:, :N_STATE], y[:, N_STATE:], params, settings.periods)


def project_harmonics(traj: Trajectory, n_list, *, min_periods: int = 3,
                      component: int = SIGMA_M_PR) -> Spectrum:
    """Trapezoid-rule projection ``(1/T) int X(t) exp(-i n delta_omega t) dt``."""
    if traj.periods < min_periods:
        raise OdeConfigurationError(
            f"window covers {traj.periods} beat periods; at least {min_periods} required"
        )
    dw = traj.params.delta_omega
    x = traj.states[:, component]
    amps = {}
    for n in n_list:
        integrand = x * np.exp(-1j * n * dw * traj.t)
        amps[n] = complex(np.trapezoid(integrand, traj.t) / traj.window)
    return Spectrum(amps, method="ode", params=traj.params, samples=len(traj.t),
                    extra={"periods": traj.periods})


def ode_spectrum(params: SystemParams, harmonics=range(-7, 8),
                 settings: OdeSettings = OdeSettings()) -> Spectrum:
    return project_harmonics(integrate(params, settings), list(harmonics))
