"""
Checking the stationary approximation in the time domain
========================================================

The stationary solver sets time derivatives to zero in the rotating frame.
That is valid when the beat frequency is small against both linewidths.
Here the full moment equations, including the source, are integrated at a
finite beat frequency.  The late-time signal is then projected onto each
harmonic.

The magnitudes converge quadratically as the beat frequency shrinks.  Each
complex amplitude carries a phase lag linear in the beat frequency.  That
lag is the finite response time of the probe.
"""

from dataclasses import replace

from cascaded_qwm import SystemParams, extract_spectrum
from cascaded_qwm.ode import ode_spectrum

base = SystemParams.from_voltages(1.0, 5.0, eps_s=0.1, eps_pr=0.2)
peaks = (-5, -3, -1, 1, 3, 5)
exact = extract_spectrum(base, harmonics=peaks)

# %%
for frac in (0.1, 0.03, 0.01):
    p = replace(base, delta_omega=frac * base.gamma_pr)
    ode = ode_spectrum(p, peaks)
    cplx = max(abs(ode[n] - exact[n]) / abs(exact[n]) for n in peaks)
    mag = max(abs(abs(ode[n]) - abs(exact[n])) / abs(exact[n]) for n in peaks)
    print(f"beat = {frac:5.2f} gamma_pr: complex error {cplx:.2e}, magnitude error {mag:.2e}")
