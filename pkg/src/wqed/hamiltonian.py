"""Waveguide-induced couplings and the resulting atomic Hamiltonians.

After eliminating the waveguide photons in the Markov limit, the atoms are
coupled pairwise through

    J_mn     = sqrt(Gamma_m Gamma_n) sin(k0 |x_m - x_n|)     (coherent)
    gamma_mn = sqrt(Gamma_m Gamma_n) cos(k0 (x_m - x_n))     (dissipative)

and the non-Hermitian effective Hamiltonian combines them as

    H_eff = -i sum_mn sqrt(Gamma_m Gamma_n) e^{i k0 |x_m - x_n|} sp_m s_n
          = H_c - i sum_mn gamma_mn sp_m s_n.

The diagonal of J vanishes (sin 0 = 0), so there is no residual Lamb shift
in this convention.  The dissipative matrix is positive semidefinite by
construction: gamma_mn = u_m u_n + w_m w_n with u_n = sqrt(Gamma_n) cos(k0 x_n)
and w_n = sqrt(Gamma_n) sin(k0 x_n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TWO_PI, DriveSpec, ValidatedSystem
from .subspace import Basis, OperatorRep, ladder_operator, number_operator


@dataclass(frozen=True, eq=False)
class CouplingMatrices:
    """Pairwise waveguide-induced couplings (both symmetric real arrays)."""

    coherent: np.ndarray     # J_mn, zero diagonal
    dissipative: np.ndarray  # gamma_mn, diagonal = bare decay rates


def pair_coefficients(positions: np.ndarray, rates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(J, gamma) coupling matrices for arbitrary positions and rates."""
    dx = np.abs(positions[:, None] - positions[None, :])
    amp = np.sqrt(np.outer(rates, rates))
    J = amp * np.sin(TWO_PI * dx)
    G = amp * np.cos(TWO_PI * dx)  # cos is even, |dx| is safe here too
    return J, G


def coupling_matrices(system: ValidatedSystem) -> CouplingMatrices:
    J, G = pair_coefficients(system.positions, system.rates)
    J.flags.writeable = False
    G.flags.writeable = False
    return CouplingMatrices(coherent=J, dissipative=G)


def _accumulate(coef: np.ndarray, sigmas: list[np.ndarray]) -> np.ndarray:
    """sum_mn coef[m, n] * sp_m s_n over the many-body space."""
    d = sigmas[0].shape[0]
    out = np.zeros((d, d), dtype=complex)
    for m in range(len(sigmas)):
        sp_m = sigmas[m].conj().T
        for n in range(len(sigmas)):
            c = coef[m, n]
            if c != 0.0:
                out += c * (sp_m @ sigmas[n])
    return out


def effective_matrix(positions: np.ndarray, rates: np.ndarray, basis: Basis) -> np.ndarray:
    """Many-body matrix of the non-Hermitian effective Hamiltonian.

    Low-level variant that takes raw position/rate arrays, so it also
    serves mirror-only subsystems that have no medium atom.
    """
    dx = np.abs(positions[:, None] - positions[None, :])
    coef = -1j * np.sqrt(np.outer(rates, rates)) * np.exp(1j * TWO_PI * dx)
    sigmas = [ladder_operator(basis, n).matrix for n in range(basis.n_atoms)]
    return _accumulate(coef, sigmas)


def effective_hamiltonian(system: ValidatedSystem, basis: Basis) -> OperatorRep:
    """Non-Hermitian effective Hamiltonian of the validated system."""
    if basis.n_atoms != system.n_atoms:
        raise ValueError("basis atom count does not match the system")
    return OperatorRep(matrix=effective_matrix(system.positions, system.rates, basis),
                       basis=basis)


def coherent_hamiltonian(system: ValidatedSystem, basis: Basis) -> OperatorRep:
    """Hermitian waveguide-mediated coupling H_c = sum J_mn sp_m s_n."""
    if basis.n_atoms != system.n_atoms:
        raise ValueError("basis atom count does not match the system")
    J, _ = pair_coefficients(system.positions, system.rates)
    sigmas = [ladder_operator(basis, n).matrix for n in range(basis.n_atoms)]
    return OperatorRep(matrix=_accumulate(J.astype(complex), sigmas), basis=basis)


def driven_hamiltonian(system: ValidatedSystem, drive: DriveSpec, basis: Basis) -> OperatorRep:
    """Time-independent Hamiltonian in the frame rotating at the drive.

    H = -delta * N + H_c + epsilon * (s_p + sp_p).  Rotating at the drive
    frequency (rather than the atomic frequency) removes the explicit
    e^{+-i delta t} factors from the probe term; steady-state correlation
    functions are identical in either frame.
    """
    h = coherent_hamiltonian(system, basis).matrix
    h -= drive.delta * number_operator(basis).matrix
    if drive.epsilon != 0.0:
        sp = ladder_operator(basis, system.medium_index).matrix
        h += drive.epsilon * (sp + sp.conj().T)
    return OperatorRep(matrix=h, basis=basis)
