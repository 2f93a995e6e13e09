"""
Weak-drive expansion of the probe coherence
===========================================

For weak drives the stationary state is a power series in four drive
components: p- and p+ for the probe tone, s+ and s- for the source.  Each
monomial p-^a p+^b s+^c s-^d oscillates at harmonic n = -a + b + c - d.  Its
coefficient depends only on the linewidth ratio r and the coupling alpha.
"""

import math

from cascaded_qwm import SystemParams, expand, extract_spectrum
from cascaded_qwm.series import series_table

r = 0.5
exp = expand((r, math.sqrt(r)), order=5)

# %%
# First and third order terms of the probe coherence.  Only odd orders appear.
for a, b, c, d, n, re, im in series_table(exp.coherence):
    if a + b + c + d <= 3:
        print(f"p-^{a} p+^{b} s+^{c} s-^{d}   n={n:+d}   {re:+.6f}")

# %%
# Truncated series converge to the exact stationary spectrum as the order
# grows.  The error falls roughly fivefold per two orders at these drives.
params = SystemParams.from_voltages(1.0, 5.0, eps_s=0.1, eps_pr=0.2)
exact = extract_spectrum(params, harmonics=[-3, -1, 1, 3])
for order in (5, 7, 9, 11):
    approx = expand(params, order).spectrum(params, [-3, -1, 1, 3])
    worst = max(abs(approx[n] - exact[n]) / abs(exact[n]) for n in (-3, -1, 1, 3))
    print(f"order {order:2d}: worst relative error {worst:.1e}")
