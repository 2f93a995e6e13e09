"""
How much antibunching suppresses each side peak
===============================================

At fixed drive voltages, each suppressed side peak is divided by its value
for a coherent source.  The ratio depends only on the two linewidths and
falls as the source narrows:

    S(+3) = gs / (gs + gp)
    S(-5) = gs (gs + 1.5 gp) / (gs + gp)^2
    S(+5) = gs^2 (gs + 2.5 gp) / ((gs + gp)^2 (gs + 2 gp))

Here the ratios are computed from the exact stationary solution and
compared with these forms.
"""

import warnings

import numpy as np

from cascaded_qwm import SystemParams, suppression_ratio_closed, suppression_ratio_numeric

# %%
# A broad probe keeps the normalized drives weak, so that leading order holds.
gamma_pr = 100.0
print(f"{'r':>8} {'S3':>9} {'closed':>9} {'S-5':>9} {'closed':>9} {'S+5':>10} {'closed':>10}")
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for r in np.logspace(-2, 2, 9):
        p = SystemParams.from_voltages(r * gamma_pr, gamma_pr, eps_s=0.025, eps_pr=0.05)
        cols = []
        for n in (3, -5, 5):
            cols += [suppression_ratio_numeric(p, n, guard=False),
                     suppression_ratio_closed(n, p.gamma_s, gamma_pr)]
        print(f"{r:8.3f} " + " ".join(f"{v:9.3e}" for v in cols))

# %%
# For a narrow source, +3 and -5 fall linearly in r while +5 falls as r^2.
# A peak needing k source photons is suppressed by about r^(k-1).
