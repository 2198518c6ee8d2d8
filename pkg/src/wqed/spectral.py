"""Biorthogonal spectral analysis of the non-Hermitian excitation blocks.

A diagonalizable non-Hermitian matrix M is resolved as
M = sum_n lambda_n |R_n><L_n| with <L_n|R_m> = delta_nm.  Near an
exceptional point the left/right eigenvectors of a coalescing pair become
parallel and the decomposition degrades; that is detected and reported
rather than silently regularized.

Closed forms for the symmetric three-atom cavity (mirrors at -+lambda0/4):

    single excitation:  lambda_pm = (-i gamma +- sqrt(gamma (8 Gamma - gamma))) / 2
                        lambda_3  = -2i Gamma
    two excitations:    beta_pm   = -(i/2) (2 Gamma + gamma +- sqrt(4 Gamma^2 - 12 gamma Gamma + gamma^2))
                        beta_3    = -i (2 Gamma + gamma)

For negative discriminants the principal branch +i sqrt(|disc|) is used, so
the "+" label always carries the larger |Im| in the purely imaginary regime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .model import ValidatedSystem, canonical_three_atom, validate
from .subspace import enumerate_basis, restrict
from .hamiltonian import effective_hamiltonian

# Exceptional points of the canonical geometry, in units of Gamma.
EP_GAMMA_SINGLE = 8.0
EP_GAMMA_TWO = 2.0 * (3.0 - 2.0 * np.sqrt(2.0))


class NearDefectiveError(ValueError):
    """Eigenvectors are too close to parallel for a reliable biorthogonal set."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues with paired left/right eigenvectors.

    right holds unit-norm right eigenvectors as columns, left holds rows
    normalized so that left @ right = identity.  Eigenvalues are sorted by
    descending imaginary part, ties broken by ascending real part.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    normalized: bool = True

    def reconstruct(self) -> np.ndarray:
        return (self.right * self.eigenvalues) @ self.left


def biorthogonal_decompose(M: np.ndarray, overlap_tol: float = 1e-8,
                           allow_unnormalized: bool = False) -> Spectrum:
    """Full left/right eigendecomposition of a complex square matrix.

    Raises NearDefectiveError when any left-right eigenvector overlap
    |<l_n|r_n>| (both unit norm) falls below overlap_tol, or when the
    normalized decomposition fails to reconstruct M to 1e-10 * max|M|;
    both signal the vicinity of an exceptional point.  With
    allow_unnormalized=True the raw (conjugate-transposed) left vectors
    are returned instead of raising.
    """
    M = np.asarray(M, dtype=complex)
    w, vl, vr = sla.eig(M, left=True, right=True)
    order = np.lexsort((w.real, -w.imag))
    w = w[order]
    vl = vl[:, order]
    vr = vr[:, order]

    overlaps = np.sum(vl.conj() * vr, axis=0)
    worst = np.abs(overlaps).min() if overlaps.size else 1.0
    if worst < overlap_tol:
        if allow_unnormalized:
            return Spectrum(eigenvalues=w, right=vr, left=vl.conj().T,
                            normalized=False)
        raise NearDefectiveError(
            f"smallest left-right overlap {worst:.3e} < {overlap_tol:.1e}; "
            "matrix is (near-)defective")

    left = np.linalg.inv(vr)
    scale = np.abs(M).max()
    recon_dev = np.abs((vr * w) @ left - M).max()
    if scale > 0 and recon_dev > 1e-10 * scale:
        if allow_unnormalized:
            return Spectrum(eigenvalues=w, right=vr, left=vl.conj().T,
                            normalized=False)
        raise NearDefectiveError(
            f"spectral reconstruction error {recon_dev:.3e} exceeds "
            f"1e-10 * max|M| = {1e-10 * scale:.3e}")
    return Spectrum(eigenvalues=w, right=vr, left=left)


def _branch_sqrt(disc: float) -> complex:
    """Principal square root of a real discriminant."""
    if disc >= 0.0:
        return complex(np.sqrt(disc), 0.0)
    return complex(0.0, np.sqrt(-disc))


def closed_form_single(gamma: float, Gamma: float) -> tuple[complex, complex, complex]:
    """(lambda_+, lambda_-, lambda_3) of the single-excitation block."""
    if gamma <= 0 or Gamma <= 0:
        raise ValueError("rates must be positive")
    s = _branch_sqrt(gamma * (8.0 * Gamma - gamma))
    lam_p = 0.5 * (-1j * gamma + s)
    lam_m = 0.5 * (-1j * gamma - s)
    return lam_p, lam_m, -2j * Gamma


def closed_form_two(gamma: float, Gamma: float) -> tuple[complex, complex, complex]:
    """(beta_+, beta_-, beta_3) of the two-excitation block."""
    if gamma <= 0 or Gamma <= 0:
        raise ValueError("rates must be positive")
    s = _branch_sqrt(4.0 * Gamma ** 2 - 12.0 * gamma * Gamma + gamma ** 2)
    beta_p = -0.5j * ((2.0 * Gamma + gamma) + s)
    beta_m = -0.5j * ((2.0 * Gamma + gamma) - s)
    return beta_p, beta_m, -1j * (2.0 * Gamma + gamma)


def drive_accessible_single_excitation(system) -> np.ndarray:
    """Single-excitation eigenvalues reachable by driving the medium atom.

    Filters out states whose left eigenvectors carry (numerically) zero
    weight on the medium, such as the decoupled dark modes of multi-atom
    mirrors; those never acquire amplitude under the probe.
    """
    basis = enumerate_basis(system.n_atoms, 1)
    H1 = restrict(effective_hamiltonian(system, basis), 1)
    w, vr = sla.eig(H1)
    left = np.linalg.inv(vr)
    weight = np.abs(left[:, system.medium_index])
    return w[weight > 1e-8 * weight.max()]


def match_to_reference(values: np.ndarray, reference: np.ndarray) -> tuple[np.ndarray, float]:
    """Permute `values` onto `reference` by minimum-weight assignment.

    Returns the permuted values and the largest matched distance, making
    eigenvalue comparisons independent of solver ordering.
    """
    values = np.asarray(values, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    cost = np.abs(values[:, None] - reference[None, :])
    rows, cols = linear_sum_assignment(cost)
    permuted = np.empty_like(reference)
    permuted[cols] = values[rows]
    return permuted, float(cost[rows, cols].max())


@dataclass(frozen=True)
class SpectrumRow:
    """One gamma point of the spectrum sweep: numerics vs closed forms."""

    gamma: float
    lam: tuple[complex, complex, complex]        # numerical, matched order
    beta: tuple[complex, complex, complex]
    lam_closed: tuple[complex, complex, complex]
    beta_closed: tuple[complex, complex, complex]
    max_dev: float
    note: str = ""


def spectrum_report(system: ValidatedSystem, gamma_grid) -> list[SpectrumRow]:
    """Sweep the medium decay rate and compare block spectra to closed forms.

    The system fixes the mirror rate and the symmetric geometry; each row
    rebuilds the cavity with the grid's gamma.  Decomposition failures
    (exceptional points) are recorded in the row note with NaN numerics and
    do not abort the sweep.  Rows also flag the two-excitation discriminant
    sign change at gamma = 2(3 - 2 sqrt(2)) Gamma.
    """
    mirror = system.mirror_rates
    if system.n_atoms != 3 or not np.allclose(system.positions, [-0.25, 0.0, 0.25]):
        raise ValueError("spectrum_report requires the symmetric three-atom geometry")
    Gamma = float(mirror[0])

    rows = []
    for gamma in np.asarray(gamma_grid, dtype=float):
        sys_g = validate(canonical_three_atom(gamma, Gamma))
        basis = enumerate_basis(3)
        H = effective_hamiltonian(sys_g, basis)
        lam_cf = closed_form_single(gamma, Gamma)
        beta_cf = closed_form_two(gamma, Gamma)
        note = ""
        if abs(gamma - EP_GAMMA_TWO * Gamma) <= 5e-3 * Gamma:
            note = "two-excitation discriminant sign change"
        try:
            w1 = biorthogonal_decompose(restrict(H, 1)).eigenvalues
            w2 = biorthogonal_decompose(restrict(H, 2)).eigenvalues
        except NearDefectiveError as err:
            nan3 = (complex(np.nan, np.nan),) * 3
            rows.append(SpectrumRow(gamma=float(gamma), lam=nan3, beta=nan3,
                                    lam_closed=lam_cf, beta_closed=beta_cf,
                                    max_dev=float("nan"),
                                    note=f"near-defective: {err}"))
            continue
        lam, d1 = match_to_reference(w1, np.array(lam_cf))
        beta, d2 = match_to_reference(w2, np.array(beta_cf))
        rows.append(SpectrumRow(gamma=float(gamma), lam=tuple(lam), beta=tuple(beta),
                                lam_closed=lam_cf, beta_closed=beta_cf,
                                max_dev=max(d1, d2), note=note))
    return rows


SPECTRUM_CSV_COLUMNS = ("gamma", "re_lp", "im_lp", "re_lm", "im_lm", "re_l3", "im_l3",
                        "re_bp", "im_bp", "re_bm", "im_bm", "re_b3", "im_b3", "max_dev")


def spectrum_rows_to_csv(rows: list[SpectrumRow]) -> str:
    """Serialize sweep rows with lossless 17-significant-digit formatting."""
    out = [",".join(SPECTRUM_CSV_COLUMNS)]
    for r in rows:
        vals = [r.gamma]
        for z in (*r.lam, *r.beta):
            vals.extend([z.real, z.imag])
        vals.append(r.max_dev)
        out.append(",".join(f"{v:.16e}" for v in vals))
    return "\n".join(out) + "\n"
