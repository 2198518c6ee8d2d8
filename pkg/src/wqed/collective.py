"""Collective bright/dark modes of the mirror array and excitation censuses.

For mirrors placed on the lambda0/4 grid (all mirror-mirror separations
multiples of lambda0/2), the mirror-only single-excitation Hamiltonian is
-i times a real symmetric rank-one matrix: one superradiant bright mode
that decays at 2N Gamma and 2N-1 dark modes with exactly zero decay.  The
medium atom couples to a single combination inside the dark manifold with
strength sqrt(2N Gamma gamma); the dark eigenspace is degenerate, so the
returned mode basis is oriented to concentrate that coupling on one mode
(any other orthonormal choice spreads it, which is pure basis convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TWO_PI, ValidatedSystem
from .subspace import enumerate_basis, ladder_operator, restrict
from .hamiltonian import effective_matrix, effective_hamiltonian
from .spectral import biorthogonal_decompose

BRIGHT = "bright"
DARK_COUPLED = "dark-coupled"
DARK_DECOUPLED = "dark-decoupled"

# Index order of the canonical mode bases built below.
SINGLE_MODE_ORDER = ("e_p", "D", "B")
TWO_MODE_ORDER = ("e_p.B", "e_p.D", "e1.e2")


@dataclass(frozen=True, eq=False)
class CollectiveMode:
    """One mirror-array mode: real orthonormal coefficients over the mirror
    atoms (position order), its complex decay eigenvalue, and the strength
    of its coupling to the medium atom."""

    coefficients: np.ndarray
    decay: complex
    coupling_to_medium: float
    label: str


@dataclass(frozen=True, eq=False)
class ModeSet:
    modes: tuple[CollectiveMode, ...]
    mirror_positions: np.ndarray
    mirror_rates: np.ndarray

    def coupled_dark_modes(self) -> list[CollectiveMode]:
        return [m for m in self.modes if m.label == DARK_COUPLED]

    def bright_modes(self) -> list[CollectiveMode]:
        return [m for m in self.modes if m.label == BRIGHT]


def collective_modes(system: ValidatedSystem) -> ModeSet:
    """Diagonalize the mirror-only block and quantify medium couplings.

    Requires at least two mirror atoms on the lambda0/4 grid (the block
    must be -i times a real symmetric matrix).  Degenerate eigenvalue
    clusters are rotated so the medium coupling lands on a single mode.
    """
    mirrors = system.mirror_positions
    rates = system.mirror_rates
    if mirrors.size < 2:
        raise ValueError("collective modes need at least two mirror atoms")
    scale = float(rates.max())

    basis1 = enumerate_basis(mirrors.size, 1)
    block = effective_matrix(mirrors, rates, basis1)[1:, 1:]
    S = (1j * block).real
    skew = np.abs((1j * block).imag).max()
    if skew > 1e-12 * scale:
        raise ValueError(
            "mirror-only Hamiltonian is not anti-Hermitian; mirror separations "
            "must be multiples of lambda0/2 for a bright/dark mode structure")
    evals, vecs = np.linalg.eigh(S)

    # Medium coupling row of the full single-excitation block.
    xp = system.positions[system.medium_index]
    gamma = system.medium_rate
    h_row = -1j * np.sqrt(gamma * rates) * np.exp(1j * TWO_PI * np.abs(mirrors - xp))
    if np.abs(h_row.imag).max() > 1e-12 * scale:
        raise ValueError("medium atom is off the lambda0/4 grid of the mirrors")
    h_row = h_row.real

    # Rotate each degenerate cluster to isolate the coupled combination.
    cols = []
    tol = 1e-9 * max(1.0, np.abs(evals).max())
    i = 0
    while i < evals.size:
        j = i
        while j + 1 < evals.size and abs(evals[j + 1] - evals[i]) <= tol:
            j += 1
        V = vecs[:, i:j + 1]
        w = V.T @ h_row
        if np.linalg.norm(w) > 1e-12 * max(scale, 1.0) and V.shape[1] > 1:
            b1 = V @ (w / np.linalg.norm(w))
            rest = V - np.outer(b1, b1 @ V)
            u, sv, _ = np.linalg.svd(rest, full_matrices=False)
            keep = u[:, sv > 1e-10 * sv[0]][:, :V.shape[1] - 1]
            V = np.column_stack([b1, keep])
        for k in range(V.shape[1]):
            cols.append((evals[i], V[:, k]))
        i = j + 1

    modes = []
    for ev, c in cols:
        decay = complex(0.0, -ev)
        coupling = float(abs(c @ h_row))
        if abs(decay.imag) > 1e-10 * scale:
            label = BRIGHT
        elif coupling > 1e-10 * scale:
            label = DARK_COUPLED
        else:
            label = DARK_DECOUPLED
        c = c.copy()
        c.flags.writeable = False
        modes.append(CollectiveMode(coefficients=c, decay=decay,
                                    coupling_to_medium=coupling, label=label))
    modes.sort(key=lambda m: (-abs(m.decay.imag), -m.coupling_to_medium))
    return ModeSet(modes=tuple(modes), mirror_positions=mirrors, mirror_rates=rates)


@dataclass(frozen=True)
class TwoExcitationCensus:
    """Counts of bright vs dark two-excitation states of the mirror array."""

    n_bright: int
    n_dark: int
    total: int
    eigenvalues: tuple


def two_excitation_census(system: ValidatedSystem, dark_tol: float = 1e-10) -> TwoExcitationCensus:
    """Classify the mirror-only two-excitation spectrum by linewidth."""
    mirrors = system.mirror_positions
    rates = system.mirror_rates
    if mirrors.size < 2:
        raise ValueError("need at least two mirror atoms")
    scale = float(rates.max())
    basis = enumerate_basis(mirrors.size, 2)
    H = effective_matrix(mirrors, rates, basis)
    blk = basis.block_range(2)
    evals = np.linalg.eigvals(H[blk, blk])
    bright = int(np.sum(np.abs(evals.imag) > dark_tol * scale))
    return TwoExcitationCensus(n_bright=bright, n_dark=evals.size - bright,
                               total=int(evals.size), eigenvalues=tuple(evals))


@dataclass(frozen=True)
class PolaritonCensus:
    """Full-system two-excitation spectrum and its dynamically active states.

    Participation is measured by the drive-in amplitude <L_n| sp_p G1 sp_p |g>
    at a generic probe detuning; states with (numerically) zero amplitude
    never enter the driven dynamics.  delta_numeric is the mean |Re| of the
    two active states with the smallest linewidths, and zeno_eigenvalue the
    active state with the largest linewidth.
    """

    total: int
    eigenvalues: tuple
    participating: tuple
    delta_pair: tuple
    delta_numeric: float
    zeno_eigenvalue: complex


def polariton_census(system: ValidatedSystem, probe_delta: float | None = None,
                     participation_tol: float = 1e-8) -> PolaritonCensus:
    basis = enumerate_basis(system.n_atoms, 2)
    H = effective_hamiltonian(system, basis)
    H1 = restrict(H, 1)
    H2 = restrict(H, 2)
    if probe_delta is None:
        # Any generic value works; zero amplitudes are structural.
        coupling = np.sqrt(2.0 * system.mirror_rates.sum() * system.medium_rate / 2.0)
        probe_delta = 0.5923 * max(coupling, system.rate_scale * 1e-3)

    sp = ladder_operator(basis, system.medium_index).matrix.conj().T
    r0, r1, r2 = (basis.block_range(k) for k in range(3))
    drive0 = sp[r1, r0][:, 0]
    lift = sp[r2, r1]
    v1 = np.linalg.solve(probe_delta * np.eye(H1.shape[0]) - H1, drive0)
    u = lift @ v1
    spec2 = biorthogonal_decompose(H2)
    amps = np.abs(spec2.left @ u)
    mask = amps > participation_tol * max(amps.max(), 1e-300)
    active = spec2.eigenvalues[mask]
    order = np.argsort(np.abs(active.imag))
    pair = tuple(active[order][:2]) if active.size >= 2 else tuple(active)
    delta_num = float(np.mean([abs(z.real) for z in pair])) if pair else float("nan")
    zeno = active[int(np.argmax(np.abs(active.imag)))] if active.size else complex("nan")
    return PolaritonCensus(total=int(spec2.eigenvalues.size),
                           eigenvalues=tuple(spec2.eigenvalues),
                           participating=tuple(active),
                           delta_pair=pair, delta_numeric=delta_num,
                           zeno_eigenvalue=complex(zeno))


def _exchange_pairs_single(H1: np.ndarray, i_m1: int, i_p: int, i_m2: int) -> np.ndarray:
    """Single-excitation block in the (e_p, D, B) mode basis.

    Built entry by entry with explicit pairwise differences so that, for a
    mirror-exchange-symmetric input block, every decoupling of the bright
    mode cancels exactly in floating point (a - a = 0), not just to
    rounding.
    """
    rt2 = np.sqrt(2.0)
    hp1, hp2 = H1[i_p, i_m1], H1[i_p, i_m2]
    h1p, h2p = H1[i_m1, i_p], H1[i_m2, i_p]
    h11, h22 = H1[i_m1, i_m1], H1[i_m2, i_m2]
    h12, h21 = H1[i_m1, i_m2], H1[i_m2, i_m1]
    out = np.empty((3, 3), dtype=complex)
    out[0, 0] = H1[i_p, i_p]
    out[0, 1] = (hp1 + hp2) / rt2
    out[1, 0] = (h1p + h2p) / rt2
    out[0, 2] = (hp1 - hp2) / rt2
    out[2, 0] = (h1p - h2p) / rt2
    out[1, 1] = 0.5 * ((h11 + h22) + (h12 + h21))
    out[2, 2] = 0.5 * ((h11 + h22) - (h12 + h21))
    out[1, 2] = 0.5 * ((h11 - h22) - (h12 - h21))
    out[2, 1] = 0.5 * ((h11 - h22) + (h12 - h21))
    return out


def _exchange_pairs_two(H2: np.ndarray, i_p1: int, i_mm: int, i_p2: int) -> np.ndarray:
    """Two-excitation block in the (e_p.B, e_p.D, e1.e2) mode basis.

    Same exact-cancellation construction; i_p1, i_p2 index the bare states
    with the medium plus one mirror excited, i_mm the double-mirror state.
    """
    rt2 = np.sqrt(2.0)
    a11, a22 = H2[i_p1, i_p1], H2[i_p2, i_p2]
    a12, a21 = H2[i_p1, i_p2], H2[i_p2, i_p1]
    b1, b2 = H2[i_p1, i_mm], H2[i_p2, i_mm]
    c1, c2 = H2[i_mm, i_p1], H2[i_mm, i_p2]
    out = np.empty((3, 3), dtype=complex)
    out[0, 0] = 0.5 * ((a11 + a22) - (a12 + a21))
    out[1, 1] = 0.5 * ((a11 + a22) + (a12 + a21))
    out[0, 1] = 0.5 * ((a11 - a22) - (a12 - a21))
    out[1, 0] = 0.5 * ((a11 - a22) + (a12 - a21))
    out[0, 2] = (b1 - b2) / rt2
    out[2, 0] = (c1 - c2) / rt2
    out[1, 2] = (b1 + b2) / rt2
    out[2, 1] = (c1 + c2) / rt2
    out[2, 2] = H2[i_mm, i_mm]
    return out


def mode_basis_hamiltonians(system: ValidatedSystem) -> tuple[np.ndarray, np.ndarray]:
    """Excitation blocks of H_eff in the collective-mode bases of a
    mirror/medium/mirror cavity.

    Returns (H1m, H2m) ordered per SINGLE_MODE_ORDER and TWO_MODE_ORDER.
    Valid for any three-atom system with the medium between two mirrors;
    for the symmetric geometry the bright-mode decouplings are exact zeros.
    """
    if system.n_atoms != 3:
        raise ValueError("mode-basis reduction is defined for three atoms")
    if system.medium_index != 1:
        raise ValueError("medium atom must sit between the two mirrors")
    basis = enumerate_basis(3)
    H = effective_hamiltonian(system, basis)
    H1 = restrict(H, 1)
    H2 = restrict(H, 2)
    # Single-excitation bare order is (m1, p, m2) = atoms ascending.
    H1m = _exchange_pairs_single(H1, 0, 1, 2)
    # Two-excitation bare masks ascending: {m1,p}=0b011, {m1,m2}=0b101, {p,m2}=0b110.
    H2m = _exchange_pairs_two(H2, 0, 1, 2)
    return H1m, H2m


def is_symmetric_canonical(system: ValidatedSystem) -> bool:
    """True for the exactly symmetric cavity: mirrors at -+1/4, medium at 0."""
    if system.n_atoms != 3:
        return False
    if not np.array_equal(system.positions, np.array([-0.25, 0.0, 0.25])):
        return False
    mr = system.mirror_rates
    return system.medium_index == 1 and mr[0] == mr[1]
