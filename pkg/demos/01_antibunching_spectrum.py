"""
Side peaks of a probe qubit driven by a fluorescing source
===========================================================

A probe qubit is driven by a coherent tone and by the resonance fluorescence
of a second, driven qubit.  The two drives beat at a small offset, and the
probe coherence develops side peaks at odd multiples of that offset.

We compare two source linewidths at fixed drive voltages.  A narrow source
(gamma_s = 1) emits antibunched light; a broad one (gamma_s = 25) acts almost
like a coherent tone.
"""

from cascaded_qwm import SystemParams, extract_spectrum

# %%
# Both runs share the probe linewidth and the drive voltages.
antibunched = SystemParams.from_voltages(1.0, 5.0, eps_s=0.1, eps_pr=0.2)
coherent = SystemParams.from_voltages(25.0, 5.0, eps_s=0.1, eps_pr=0.2)

anti = extract_spectrum(antibunched)
coh = extract_spectrum(coherent)

# %%
# Peaks that need at most one source photon look the same in both regimes.
# Peaks that need two or more (+3, -5, +5) are suppressed by antibunching.
print(f"{'n':>3} {'antibunched':>12} {'coherent':>12} {'ratio':>7}")
for n in range(-7, 8, 2):
    print(f"{n:>3} {anti.abs(n):12.4e} {coh.abs(n):12.4e} {anti.abs(n) / coh.abs(n):7.3f}")

# %%
# Even harmonics vanish identically: every drive monomial has odd order.
print("largest even harmonic:", max(anti.abs(n) for n in range(-6, 7, 2)))

# %%
# The same table is available as CSV, ready for any plotting tool.
print(anti.subset(range(-3, 4)).to_csv())
