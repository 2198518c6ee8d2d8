#!/usr/bin/env python3
"""Antibunching dips of the emitted field, computed two independent ways.

A weak probe on the medium atom populates the narrow single-excitation
polaritons.  At the polariton resonance the second photon would have to
enter a two-excitation state that decays much faster than it can be fed,
so coincidences are suppressed: g2(0) < 1 even though the "cavity" here
is as lossy as they come.

The equal-time coherence is computed along two fully independent routes:
the driven master equation (quantum regression at tau = 0) and the
drive-free resolvent formula.  They agree to a fraction of a percent at
epsilon = 1e-3 gamma; cranking the drive up washes the blockade out.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wqed import (DriveSpec, build_liouvillian, canonical_three_atom,
                  emission_operator, enumerate_basis, g2_zero_analytic,
                  g2_zero_regression, steady_state, validate)
from wqed.scenarios import resonant_detuning

gamma = 0.01
system = validate(canonical_three_atom(gamma, 1.0))
basis = enumerate_basis(3)
sig = emission_operator(system, basis)
dip = resonant_detuning(system)
print(f"polariton resonance at delta = {dip:.5f} (~ -sqrt(2 Gamma gamma) = "
      f"{-np.sqrt(2 * gamma):.5f})")

deltas = np.linspace(-3 * abs(dip), 3 * abs(dip), 121)
deltas[np.abs(deltas) < 1e-12] = 1e-3 * abs(dip)  # dodge the interference zero

analytic = np.array([g2_zero_analytic(system, d) for d in deltas])

fig, ax = plt.subplots(figsize=(6.4, 4.0))
ax.semilogy(deltas / abs(dip), analytic, "C0-", label="resolvent formula")

for eps_rel, marker in ((1e-3, "o"), (1.0, "s"), (10.0, "^")):
    me = []
    for d in deltas[::8]:
        L = build_liouvillian(system,
                              DriveSpec(epsilon=eps_rel * gamma, delta=float(d)),
                              basis)
        me.append(g2_zero_regression(L, steady_state(L), sig))
    ax.semilogy(deltas[::8] / abs(dip), me, marker, ms=4, ls="none",
                label=f"master equation, eps = {eps_rel:g} gamma")

ax.axhline(1.0, color="0.7", lw=0.8)
ax.set(xlabel="delta / |Re lambda_-|", ylabel="g2(0)",
       title=f"photon blockade at gamma = {gamma} Gamma")
ax.legend(frameon=False, fontsize=8)
fig.tight_layout()
fig.savefig("photon_blockade.png", dpi=150)
print("wrote photon_blockade.png")

i_dip = int(np.argmin(np.abs(deltas - dip)))
print(f"\ndip value (weak drive): g2(0) = {analytic[i_dip]:.4f}")
print(f"bunching peak at delta = 0: g2(0) -> {analytic[len(deltas) // 2]:.3g}")
for eps_rel in (1e-3, 1.0, 10.0):
    L = build_liouvillian(system, DriveSpec(epsilon=eps_rel * gamma, delta=dip), basis)
    val = g2_zero_regression(L, steady_state(L), sig)
    print(f"eps = {eps_rel:5g} gamma: g2(0) at the dip = {val:.4f}")
