#!/usr/bin/env python3
"""Delayed coincidences g2(tau): how long does the blockade protect?

After a photon is emitted, the conditional state needs roughly a polariton
lifetime to be re-excited, so g2(tau) climbs back to 1 on a timescale set
by the medium linewidth: halving gamma roughly doubles the recovery time.
Sliding the medium atom off center (keeping the mirrors half a wavelength
apart) narrows the polaritons further and stretches the antibunched window
without destroying the blockade.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wqed import (DriveSpec, build_liouvillian, canonical_three_atom,
                  emission_operator, enumerate_basis, g2_regression,
                  steady_state, validate)
from wqed.scenarios import resonant_detuning

fig, ax = plt.subplots(figsize=(6.4, 4.0))
recoveries = {}
for (gamma, d), style in [((0.01, 0.25), "C0-"), ((0.02, 0.25), "C1-"),
                          ((0.01, 0.10), "C0--"), ((0.02, 0.10), "C1--")]:
    system = validate(canonical_three_atom(gamma, 1.0, d=d))
    basis = enumerate_basis(3)
    delta = resonant_detuning(system)
    L = build_liouvillian(system, DriveSpec(epsilon=1e-3 * gamma, delta=delta), basis)
    rho = steady_state(L)
    taus = np.linspace(0.0, 50.0 / gamma, 800)
    curve = g2_regression(L, rho, emission_operator(system, basis), taus)
    recoveries[(gamma, d)] = curve.recovery_time(0.8)
    ax.plot(taus, curve.values, style,
            label=f"gamma = {gamma}, d = {d}", lw=1.2)
    print(f"gamma = {gamma}, d = {d:4.2f}: g2(0) = {curve.values[0]:.4f}, "
          f"recovery to 0.8 at tau = {recoveries[(gamma, d)]:7.1f}")

ax.axhline(1.0, color="0.7", lw=0.8)
ax.set(xlabel="tau * Gamma", ylabel="g2(tau)", xlim=(0, 3000),
       title="coincidence recovery at the polariton resonance")
ax.legend(frameon=False, fontsize=8)
fig.tight_layout()
fig.savefig("delayed_coincidences.png", dpi=150)
print("wrote delayed_coincidences.png")

r = recoveries
print(f"\nrecovery-time ratio gamma 0.01/0.02 (centered): "
      f"{r[(0.01, 0.25)] / r[(0.02, 0.25)]:.2f} (~ 2: inverse in gamma)")
print(f"off-center stretch at gamma = 0.01: "
      f"x{r[(0.01, 0.10)] / r[(0.01, 0.25)]:.2f}")
