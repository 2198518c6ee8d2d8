"""Output-field photon statistics of the driven atom cavity.

With vacuum input and Markovian coupling, every normal-ordered correlation
of the outgoing field reduces to a correlation of the collective atomic
emission operator

    sigma_tilde = sum_n sqrt(Gamma_n) e^{i k0 x_n} sigma_n

(the input terms annihilate the vacuum and the propagation prefactors
cancel in normalized quantities).  Two independent routes to the second
order coherence are provided:

* quantum regression on the driven Liouvillian,
      g2(tau) = tr(st+ st  e^{L tau}[st rho_ss st+]) / tr(st+ st rho_ss)^2,
  evaluated by propagating the normalized conditional state; and

* the weak-drive resolvent formula, drive-strength independent,
      g2(0) = |<g| st^2 G2 sp_p G1 sp_p |g>|^2 / |<g| st G1 sp_p |g>|^4,
  with G1 = (delta - H1)^-1 and G2 = (2 delta - H2)^-1 the effective
  Hamiltonian blocks at the single- and two-excitation drive energies.

Multiplying sigma_tilde by any nonzero complex scalar (detector phase or
direction convention) leaves every normalized quantity unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TWO_PI, ValidatedSystem, geometry_id
from .subspace import Basis, enumerate_basis, ladder_operator, restrict
from .hamiltonian import effective_hamiltonian
from .spectral import biorthogonal_decompose, closed_form_two, match_to_reference
from .lindblad import (DensityMatrix, Superoperator, vec, unvec,
                       grade_exponents, drive_scale, _propagate_vec)
from .collective import mode_basis_hamiltonians, is_symmetric_canonical


class CorrelationUnderflowError(ZeroDivisionError):
    """The single-photon flux is numerically zero, so g2 is undefined."""


class SingularResolventError(np.linalg.LinAlgError):
    """The drive energy hits an exactly real eigenvalue (zero-dissipation mode)."""


@dataclass(frozen=True, eq=False)
class EmissionOperator:
    """Collective lowering operator seen by the output field."""

    matrix: np.ndarray
    basis: Basis

    def number_operator(self) -> np.ndarray:
        return self.matrix.conj().T @ self.matrix


def emission_operator(system: ValidatedSystem, basis: Basis) -> EmissionOperator:
    """sigma_tilde in the given basis; lowers excitation number by one."""
    if basis.n_atoms != system.n_atoms:
        raise ValueError("basis atom count does not match the system")
    m = np.zeros((basis.size, basis.size), dtype=complex)
    for n in range(system.n_atoms):
        phase = np.exp(1j * TWO_PI * system.positions[n])
        m += np.sqrt(system.rates[n]) * phase * ladder_operator(basis, n).matrix
    return EmissionOperator(matrix=m, basis=basis)


@dataclass(frozen=True, eq=False)
class G2Curve:
    """Sampled second-order coherence with the parameters that produced it."""

    tau_grid: np.ndarray
    values: np.ndarray
    delta: float
    epsilon: float
    geometry: str
    method: str  # "regression" or "analytic"

    def minimum(self) -> float:
        return float(self.values.min())

    def recovery_time(self, threshold: float = 0.8) -> float:
        """First upward crossing of the threshold, linearly interpolated."""
        v = self.values
        for i in range(1, v.size):
            if v[i] >= threshold and v[i - 1] < threshold:
                t0, t1 = self.tau_grid[i - 1], self.tau_grid[i]
                return float(t0 + (threshold - v[i - 1]) * (t1 - t0) / (v[i] - v[i - 1]))
        return float("nan")


def g1(rho_ss: DensityMatrix, sig: EmissionOperator) -> float:
    """Steady-state single-photon flux tr(st+ st rho)."""
    return float(np.trace(sig.number_operator() @ rho_ss.matrix).real)


def _canonical_gauge(matrix: np.ndarray) -> np.ndarray:
    """Divide out the largest entry of the emission matrix.

    g2 is invariant under rescaling the emission operator by any nonzero
    complex number; fixing the gauge up front makes the numerical result
    independent of that scale and phase too (inputs agree to rounding, so
    the adaptive propagation follows the same path).
    """
    flat = np.abs(matrix).ravel()
    pivot = matrix.ravel()[int(np.argmax(flat))]
    if pivot == 0.0:
        raise CorrelationUnderflowError("emission operator is identically zero")
    return matrix / pivot


def g2_regression(L: Superoperator, rho_ss: DensityMatrix, sig: EmissionOperator,
                  tau_grid, rtol: float = 1e-10) -> G2Curve:
    """g2(tau) via the quantum regression theorem.

    The conditional state st rho_ss st+ is trace-normalized and propagated
    under the Liouvillian in the same grade-rescaled frame used for the
    steady state, which keeps the weakly populated sectors accurate over
    long delays.
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid.size == 0 or tau_grid[0] < 0.0 or np.any(np.diff(tau_grid) < 0.0):
        raise ValueError("tau_grid must be ascending and start at tau >= 0")
    if g1(rho_ss, sig) < 1e-30:
        raise CorrelationUnderflowError(
            "single-photon flux too small to normalize g2 (is the system driven?)")
    m = _canonical_gauge(sig.matrix)
    nop = m.conj().T @ m
    G1v = float(np.trace(nop @ rho_ss.matrix).real)
    chi = m @ rho_ss.matrix @ m.conj().T
    chi = chi / np.trace(chi).real

    s = drive_scale(L)
    if s < 1.0:
        D = s ** grade_exponents(L.basis)
        M = L.matrix * (D[None, :] / D[:, None])
        y0 = vec(chi) / D
    else:
        D = None
        M = L.matrix
        y0 = vec(chi)
    cols = _propagate_vec(M, y0, tau_grid, rtol=rtol, atol=1e-14)
    values = np.empty(tau_grid.size)
    for k in range(tau_grid.size):
        x = cols[:, k] if D is None else D * cols[:, k]
        values[k] = np.trace(nop @ unvec(x, L.dim)).real / G1v
    return G2Curve(tau_grid=tau_grid, values=values, delta=L.drive.delta,
                   epsilon=L.drive.epsilon, geometry=geometry_id(L.system),
                   method="regression")


def g2_zero_regression(L: Superoperator, rho_ss: DensityMatrix,
                       sig: EmissionOperator) -> float:
    """Equal-time g2(0) from the steady state alone (no propagation)."""
    if g1(rho_ss, sig) < 1e-30:
        raise CorrelationUnderflowError("single-photon flux too small")
    m = _canonical_gauge(sig.matrix)
    nop = m.conj().T @ m
    G1v = float(np.trace(nop @ rho_ss.matrix).real)
    chi = m @ rho_ss.matrix @ m.conj().T
    return float(np.trace(nop @ chi).real) / G1v ** 2


def _resolvent_vectors(system: ValidatedSystem, delta: float):
    """Shared pieces of the weak-drive formulas: blocks, drive path, fluxes."""
    n = system.n_atoms
    basis = enumerate_basis(n, min(2, n))
    H = effective_hamiltonian(system, basis)
    H1 = restrict(H, 1)
    sp = ladder_operator(basis, system.medium_index).matrix.conj().T
    st = emission_operator(system, basis).matrix
    r0, r1 = basis.block_range(0), basis.block_range(1)
    try:
        v1 = np.linalg.solve(delta * np.eye(n) - H1, sp[r1, r0][:, 0])
    except np.linalg.LinAlgError as err:
        raise SingularResolventError(
            f"delta = {delta} is an eigenvalue of the single-excitation block"
        ) from err
    den = complex((st[r0, r1] @ v1)[0])
    return basis, H, sp, st, v1, den


def g2_zero_analytic(system: ValidatedSystem, delta: float) -> float:
    """Weak-drive g2(0) from the excitation-subspace resolvents.

    Exact in the zero-drive limit and independent of epsilon.  Returns 0
    for a single atom (no two-excitation states) and +inf at detunings
    where the single-photon emission amplitude interferes to zero.
    """
    if system.n_atoms < 2:
        return 0.0
    basis, H, sp, st, v1, den = _resolvent_vectors(system, delta)
    H2 = restrict(H, 2)
    r0, r1, r2 = (basis.block_range(k) for k in range(3))
    try:
        v2 = np.linalg.solve(2.0 * delta * np.eye(H2.shape[0]) - H2,
                             sp[r2, r1] @ v1)
    except np.linalg.LinAlgError as err:
        raise SingularResolventError(
            f"2*delta = {2 * delta} is an eigenvalue of the two-excitation block"
        ) from err
    st2 = st @ st
    num = complex((st2[r0, r2] @ v2)[0])
    den4 = abs(den) ** 4
    if den4 == 0.0:
        return float("inf")
    return abs(num) ** 2 / den4


@dataclass(frozen=True)
class ZenoChannel:
    """One two-excitation eigenstate as seen by the weak drive.

    raw_amplitude is the bare matrix element <L_n| sp_p G1 sp_p |g>; it
    grows with the resonant single-excitation enhancement and is not
    dimensionless.  amplitude divides out the squared single-excitation
    amplitude |<g| st G1 sp_p |g>|^2 (the same normalization the g2 formula
    applies), giving the drive strength per emitted photon pair; ratio is
    that strength over the channel linewidth |Im eig| and is the
    quantitative suppression witness: ratio << 1 means the channel decays
    faster than it can be fed.
    """

    label: str
    eigenvalue: complex
    raw_amplitude: complex
    amplitude: float
    ratio: float


@dataclass(frozen=True)
class ZenoReport:
    delta: float
    single_photon_amplitude: complex
    channels: tuple[ZenoChannel, ...]

    def channel(self, label: str) -> ZenoChannel:
        for c in self.channels:
            if c.label == label:
                return c
        raise KeyError(label)


def zeno_diagnostics(system: ValidatedSystem, delta: float) -> ZenoReport:
    """Decompose the weak-drive two-excitation feeding over eigenchannels.

    Requires the symmetric three-atom cavity.  Works in the collective-mode
    basis, where the bright-branch decouplings are exact floating-point
    zeros: the e_p.B channel amplitude comes out identically 0, a strict
    selection rule rather than a small number.
    """
    if not is_symmetric_canonical(system):
        raise ValueError("zeno diagnostics require the symmetric three-atom cavity")
    gamma = system.medium_rate
    Gamma = float(system.mirror_rates[0])
    H1m, H2m = mode_basis_hamiltonians(system)
    assert H1m[2, 0] == 0.0 and H1m[2, 1] == 0.0, "bright mode failed to decouple"
    assert H2m[0, 1] == 0.0 and H2m[0, 2] == 0.0, "e_p.B failed to decouple"

    # Single-excitation resolvent in the mode basis; drive enters on e_p.
    b = np.zeros(3, dtype=complex)
    b[0] = 1.0
    v1 = np.linalg.solve(delta * np.eye(3) - H1m, b)
    # Emission row over (e_p, D, B): the dark mode does not emit.
    den = complex(np.sqrt(gamma) * v1[0] + (-1j * np.sqrt(2.0 * Gamma)) * v1[2])
    den2 = abs(den) ** 2
    if den2 == 0.0:
        raise CorrelationUnderflowError("single-photon amplitude vanished")

    # Second drive photon lifts (e_p, D, B) -> (e_p.B, e_p.D, e1.e2):
    # sp_p kills the e_p component and maps D -> e_p.D, B -> e_p.B exactly.
    u = np.array([v1[2], v1[1], 0.0], dtype=complex)

    # The e_p.B channel is exactly decoupled; decompose the coupled 2x2.
    spec = biorthogonal_decompose(H2m[1:, 1:])
    beta_cf = closed_form_two(gamma, Gamma)
    matched, _ = match_to_reference(spec.eigenvalues, np.array(beta_cf[:2]))

    channels = []
    for k, lbl in enumerate(("beta_plus", "beta_minus")):
        idx = int(np.argmin(np.abs(spec.eigenvalues - matched[k])))
        raw = complex(spec.left[idx] @ u[1:])
        amp = abs(raw) / den2
        channels.append(ZenoChannel(
            label=lbl, eigenvalue=complex(spec.eigenvalues[idx]),
            raw_amplitude=raw, amplitude=amp,
            ratio=amp / abs(spec.eigenvalues[idx].imag)))
    raw_b = complex(u[0])  # exactly zero by the selection rule
    eig_b = complex(H2m[0, 0])
    channels.append(ZenoChannel(label="e_p.B", eigenvalue=eig_b,
                                raw_amplitude=raw_b, amplitude=abs(raw_b) / den2,
                                ratio=abs(raw_b) / den2 / abs(eig_b.imag)))
    return ZenoReport(delta=delta, single_photon_amplitude=den,
                      channels=tuple(channels))
