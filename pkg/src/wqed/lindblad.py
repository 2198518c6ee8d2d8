"""Driven Liouvillian construction, steady states, and time propagation.

Density matrices are column-stacked (Fortran order), so vec(A rho B) =
kron(B.T, A) vec(rho) and the master equation

    drho/dt = -i [H, rho] + sum_mn gamma_mn (2 s_m rho sp_n - sp_n s_m rho - rho sp_n s_m)

becomes a dense dim^2 x dim^2 matrix acting on vec(rho).  The dissipator
keeps the full gamma_mn matrix including the cross terms between different
atoms; dropping those collective terms changes the physics.

Weak-drive conditioning: at epsilon much below the atomic linewidths the
steady state spans many orders of magnitude across excitation sectors
(sector populations scale like (2 epsilon / gamma_min)^(n_row + n_col)).
Solving in those raw coordinates loses the small sectors to roundoff, so
the null-space extraction and the conditional-state propagation both work
in a diagonally rescaled frame M = D^-1 L D with D = s^grade, which makes
every sector O(1) and is exact (a similarity transform, not a truncation).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import DriveSpec, ValidatedSystem
from .subspace import Basis, ladder_operator
from .hamiltonian import coupling_matrices, driven_hamiltonian


class DegenerateSteadyStateError(ValueError):
    """The Liouvillian kernel is not one-dimensional.

    Happens for instance with N >= 2 atom mirrors, whose decoupled dark
    modes carry conserved excitations; the steady state then depends on the
    initial condition and must be obtained by propagation instead.
    """


class IntegrationError(RuntimeError):
    """The adaptive integrator failed (step-size underflow or divergence)."""


class TruncationWarning(UserWarning):
    """Driving an excitation-truncated basis: amplitudes beyond the cut are
    dropped, with relative error of order (epsilon / gamma)^2."""


def vec(rho: np.ndarray) -> np.ndarray:
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape((dim, dim), order="F")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Dense density matrix tagged with its basis."""

    matrix: np.ndarray
    basis: Basis

    @classmethod
    def ground(cls, basis: Basis) -> "DensityMatrix":
        m = np.zeros((basis.size, basis.size), dtype=complex)
        m[0, 0] = 1.0
        return cls(matrix=m, basis=basis)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(h).min())

    def excited_population(self) -> float:
        """Total population outside the global ground state."""
        return float(1.0 - self.matrix[0, 0].real)

    def check(self, trace_tol: float = 1e-10, herm_tol: float = 1e-12,
              positivity_tol: float = 1e-10) -> list[str]:
        """Return the list of violated density-matrix invariants (empty = ok)."""
        problems = []
        if abs(self.trace() - 1.0) > trace_tol:
            problems.append(f"trace deviates from 1 by {abs(self.trace() - 1.0):.3e}")
        if self.hermiticity_defect() > herm_tol:
            problems.append(f"hermiticity defect {self.hermiticity_defect():.3e}")
        if self.min_eigenvalue() < -positivity_tol:
            problems.append(f"negative eigenvalue {self.min_eigenvalue():.3e}")
        return problems


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Dense Liouvillian acting on column-stacked density matrices."""

    matrix: np.ndarray
    basis: Basis
    drive: DriveSpec
    system: ValidatedSystem

    @property
    def dim(self) -> int:
        return self.basis.size

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)


def liouvillian_matrix(H: np.ndarray, gamma_mat: np.ndarray,
                       sigmas: list[np.ndarray]) -> np.ndarray:
    """Assemble the superoperator from a Hamiltonian and a dissipative matrix.

    Exposed separately so the collective cross terms of gamma_mat can be
    modified in regression tests.
    """
    d = H.shape[0]
    eye = np.eye(d)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    n = len(sigmas)
    for m in range(n):
        for k in range(n):
            g = gamma_mat[m, k]
            if g == 0.0:
                continue
            s_m = sigmas[m]
            sp_k = sigmas[k].conj().T
            sink = sp_k @ s_m
            L += g * (2.0 * np.kron(sp_k.T, s_m)
                      - np.kron(eye, sink) - np.kron(sink.T, eye))
    return L


def build_liouvillian(system: ValidatedSystem, drive: DriveSpec, basis: Basis) -> Superoperator:
    """Driven Liouvillian in the frame rotating at the drive frequency."""
    if basis.n_atoms != system.n_atoms:
        raise ValueError("basis atom count does not match the system")
    if drive.epsilon > 0.0 and basis.max_excitations < basis.n_atoms:
        warnings.warn(
            f"driving a basis truncated at {basis.max_excitations} excitations; "
            "amplitudes above the cut are discarded", TruncationWarning, stacklevel=2)
    H = driven_hamiltonian(system, drive, basis).matrix
    G = coupling_matrices(system).dissipative
    sigmas = [ladder_operator(basis, i).matrix for i in range(system.n_atoms)]
    return Superoperator(matrix=liouvillian_matrix(H, G, sigmas),
                         basis=basis, drive=drive, system=system)


def grade_exponents(basis: Basis) -> np.ndarray:
    """Excitation grade n_row + n_col of every vectorized matrix entry."""
    pops = np.array([s.bit_count() for s in basis.states], dtype=float)
    return (pops[:, None] + pops[None, :]).reshape(-1, order="F")


def drive_scale(L: Superoperator) -> float:
    """Sector scale s = min(1, 2 epsilon / gamma_min) of the weak-drive grading."""
    eps = L.drive.epsilon
    if eps <= 0.0:
        return 1.0
    return min(1.0, 2.0 * eps / float(L.system.rates.min()))


def steady_state(L: Superoperator, uniqueness_tol: float = 1e-8) -> DensityMatrix:
    """Unique steady state via null-space extraction of the Liouvillian.

    The singular vector of the smallest singular value is computed in the
    grade-rescaled frame (see module docstring), Hermitized and normalized
    to unit trace.  Raises DegenerateSteadyStateError when the second
    smallest singular value is below uniqueness_tol times the largest.
    """
    s = drive_scale(L)
    if s < 1.0:
        D = s ** grade_exponents(L.basis)
        M = L.matrix * (D[None, :] / D[:, None])
    else:
        D = None
        M = L.matrix
    _, svals, vh = np.linalg.svd(M)
    if svals[-2] <= uniqueness_tol * svals[0]:
        raise DegenerateSteadyStateError(
            f"steady state is not unique: singular-value ratio "
            f"{svals[-2] / svals[0]:.3e} <= {uniqueness_tol:.1e}")
    y = vh[-1].conj()
    x = y if D is None else D * y
    rho = unvec(x, L.dim)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12 * np.abs(rho).max():
        raise DegenerateSteadyStateError("null vector has (near-)zero trace")
    rho = rho / tr
    return DensityMatrix(matrix=rho, basis=L.basis)


def _propagate_vec(Lmat: np.ndarray, v0: np.ndarray, t_grid: np.ndarray,
                   rtol: float = 1e-10, atol: float | None = None) -> np.ndarray:
    """Adaptive propagation of dv/dt = L v, sampled on t_grid (column per time)."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[-1] == 0.0:
        return np.repeat(v0[:, None], t_grid.size, axis=1)
    if atol is None:
        atol = 1e-13 * max(np.abs(v0).max(), 1e-30)
    sol = solve_ivp(lambda t, y: Lmat @ y, (0.0, float(t_grid[-1])), v0,
                    t_eval=t_grid, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegrationError(f"propagation failed: {sol.message}")
    return sol.y


def propagate(L: Superoperator, rho0: DensityMatrix, t_grid,
              rtol: float = 1e-10) -> list[DensityMatrix]:
    """Evolve rho0 under the Liouvillian, returning one state per grid time.

    t_grid must be ascending and start at or after 0 (the initial state is
    taken at t = 0).  Uses an adaptive high-order explicit integrator with
    per-step relative tolerance rtol.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        return []
    if t_grid[0] < 0.0 or np.any(np.diff(t_grid) < 0.0):
        raise ValueError("t_grid must be ascending and nonnegative")
    if rho0.basis is not L.basis and rho0.basis.states != L.basis.states:
        raise ValueError("density matrix basis does not match the Liouvillian")
    cols = _propagate_vec(L.matrix, vec(rho0.matrix), t_grid, rtol=rtol)
    return [DensityMatrix(matrix=unvec(cols[:, k], L.dim), basis=L.basis)
            for k in range(cols.shape[1])]
