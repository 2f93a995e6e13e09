"""Programmatic cross-verification suite behind ``qwm verify``."""

from __future__ import annotations

import time
import warnings
from typing import Callable, NamedTuple

import numpy as np

from . import analytics
from .model import (
    OMEGA_ENTRIES,
    SystemParams,
    build_A,
    build_b,
    build_Omega,
    equations_rhs,
)
from .neumann import expand
from .series import MonomialKey
from .stationary import extract_spectrum, suppression_ratio_numeric

__all__ = ["CheckResult", "run_checks", "format_report", "flipped_entries", "CHECKS"]

R_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def flipped_entries(index: int = 5):
    """Drive-matrix entries with the sign of one entry reversed (mutation test)."""
    entries = list(OMEGA_ENTRIES)
    e = entries[index]
    entries[index] = e._replace(coeff=-e.coeff)
    return tuple(entries)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def check_determinants(entries):
    worst = 0.0
    for r in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        A = build_A(r, 0.7)
        dm = np.linalg.det(A[0:3, 0:3])
        dp = np.linalg.det(A[3:6, 3:6])
        dz = np.linalg.det(A[8:12, 8:12])
        ref = -(r + 2) * (2 * r + 1) / 8
        worst = max(worst, _rel(dm, ref), _rel(dp, ref), _rel(dz, (r + 1) ** 3 / 4))
    return worst < 1e-12, f"max rel dev {worst:.1e}"


def check_consistency(entries, samples=200):
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(samples):
        r = rng.uniform(0.1, 10.0)
        g_pr = rng.uniform(0.5, 5.0)
        p = SystemParams(
            gamma_s=r * g_pr, gamma_pr=g_pr, mu=rng.uniform(0, 1),
            omega_s_amp=complex(*rng.normal(scale=0.3, size=2)),
            omega_pr_amp=complex(*rng.normal(scale=0.3, size=2)),
        )
        theta = rng.uniform(0, 2 * np.pi)
        x = rng.normal(size=12) + 1j * rng.normal(size=12)
        d = p.drives(theta)
        lhs = (build_A(p) + build_Omega(d, entries)) @ x + build_b(d, p.r)
        rhs = equations_rhs(x, p, theta)
        worst = max(worst, np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
    return worst < 1e-10, f"{samples} samples, max rel dev {worst:.1e}"


def third_order_reference(r, a):
    return {
        (2, 1, 0, 0): 16.0,
        (2, 0, 0, 1): -32 * a / r,
        (1, 1, 1, 0): -64 * a / r,
        (1, 0, 1, 1): 128 * a**2 / r**2,
        (0, 1, 2, 0): 64 * a**2 / (r * (r + 1)),
        (0, 0, 2, 1): -32 * a * (4 * a**2 * r + r + 1) / (r**3 * (r + 1)),
    }


def fifth_order_reference(r, a):
    return {
        (3, 0, 0, 2): -256 * a**2 * (2 * r + 3) / (r * (r + 1) ** 2),
        (0, 2, 3, 0): 512 * a**3 * (2 * r + 5) / (r * (r + 1) ** 2 * (r + 2)),
    }


def check_order1(entries):
    ok = True
    for r in R_GRID:
        a = np.sqrt(r)
        layer = expand((r, a), 1, entries=entries).layers[1][0]
        ref = {(1, 0, 0, 0): -2.0, (0, 0, 1, 0): 4 * a / r}
        ok &= set(layer.keys()) == set(ref) and all(_rel(layer[k], v) < 1e-12 for k, v in ref.items())
    return ok, "first-order coherence {p-: -2, s+: 4 alpha/r}"


def check_order3(entries):
    worst, extra = 0.0, 0
    for r in R_GRID:
        a = np.sqrt(r)
        layer = expand((r, a), 3, entries=entries).layers[3][0]
        ref = third_order_reference(r, a)
        extra += len(set(layer.keys()) - set(ref))
        worst = max([worst] + [_rel(layer[k], v) for k, v in ref.items()])
    return worst < 1e-10 and extra == 0, f"max rel dev {worst:.1e}, unexpected terms {extra}"


def check_order5(entries):
    worst = 0.0
    for r in R_GRID:
        a = np.sqrt(r)
        coh = expand((r, a), 5, entries=entries).coherence
        worst = max([worst] + [_rel(coh[k], v) for k, v in fifth_order_reference(r, a).items()])
    return worst < 1e-10, f"max rel dev {worst:.1e}"


def check_closed_form(entries):
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        p = SystemParams(gamma_s=3.0 * r, gamma_pr=3.0, mu=1.0,
                         omega_s_amp=0.2 + 0.1j, omega_pr_amp=0.15 - 0.05j)
        for key, coeff in fifth_order_reference(p.r, p.alpha).items():
            n = MonomialKey(*key).harmonic
            amp = analytics.monomial_to_physical(coeff, key, p)
            worst = max(worst, _rel(amp, analytics.cascaded_peak(n, p)))
    return worst < 1e-10, f"max rel dev {worst:.1e}"


def check_residual_scaling(entries):
    base = SystemParams(gamma_s=1.0, gamma_pr=2.0, mu=0.8,
                        omega_s_amp=0.025 * (1 + 0.5j), omega_pr_amp=0.04 * (1 - 0.3j))
    worst = 1.0
    for N in (1, 3, 5):
        exp = expand(base, N, entries=entries)
        for n in (-1, 1, -3, 3):
            def err(scale):
                p = base.scaled_drives(scale)
                return abs(extract_spectrum(p, harmonics=[n])[n] - exp.spectrum(p, [n])[n])
            factor = err(1.0) / err(0.5) / 2 ** (N + 2)
            worst = max(worst, factor, 1 / factor)
    return worst <= 1.5, f"worst factor off 2^(N+2): {worst:.3f}"


def check_limit(entries, g_pr=100.0):
    p = SystemParams.from_voltages(100 * g_pr, g_pr, eps_s=0.025, eps_pr=0.05)
    spec = extract_spectrum(p, harmonics=analytics.PEAKS)
    worst = 0.0
    for n in analytics.PEAKS:
        ref = abs(analytics.coherent_limit_peak(n, p))
        worst = max(worst, _rel(abs(spec[n]), ref), _rel(abs(analytics.cascaded_peak(n, p)), ref))
    ratios = [suppression_ratio_numeric(p, n, guard=False) for n in analytics.SUPPRESSED_PEAKS]
    ok = worst < 0.03 and min(ratios) > 0.97
    return ok, f"r=100: max dev {worst:.2%}, min ratio {min(ratios):.4f}"


def check_ratio_identity(entries):
    worst = 0.0
    for r in np.logspace(-2, 2, 9):
        p = SystemParams.from_voltages(r * 5.0, 5.0, eps_s=0.03, eps_pr=0.07)
        for n in analytics.SUPPRESSED_PEAKS:
            s = abs(analytics.cascaded_peak(n, p)) / abs(analytics.coherent_limit_peak(n, p))
            worst = max(worst, _rel(s, analytics.suppression_ratio_closed(n, p.gamma_s, p.gamma_pr)))
    return worst < 1e-12, f"max rel dev {worst:.1e}"


def check_crossover(entries, gamma_pr=100.0, points=41):
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for r in np.logspace(-2, 2, points):
            p = SystemParams.from_voltages(r * gamma_pr, gamma_pr, eps_s=0.025, eps_pr=0.05)
            for n in analytics.SUPPRESSED_PEAKS:
                num = suppression_ratio_numeric(p, n, guard=False)
                worst = max(worst, _rel(num, analytics.suppression_ratio_closed(n, p.gamma_s, gamma_pr)))
    return worst < 0.02, f"{points} points, max rel dev {worst:.2%}"


CHECKS: list[tuple[str, Callable, bool]] = [
    ("block determinants", check_determinants, True),
    ("matrix/equation consistency", check_consistency, True),
    ("order-1 coefficients", check_order1, True),
    ("order-3 coefficients", check_order3, True),
    ("order-5 sideband coefficients", check_order5, True),
    ("closed form vs monomials", check_closed_form, True),
    ("suppression ratio identity", check_ratio_identity, True),
    ("residual scaling", check_residual_scaling, False),
    ("coherent-filtering limit", check_limit, False),
    ("suppression crossover", check_crossover, False),
]


def run_checks(quick: bool = False, entries=OMEGA_ENTRIES) -> list[CheckResult]:
    results = []
    for name, fn, is_quick in CHECKS:
        if quick and not is_quick:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn(entries)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results


def format_report(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.seconds:7.3f}s  {r.detail}"
        for r in results
    ]
    n_ok = sum(r.passed for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
