"""Product basis of two-level atoms organized by total excitation number.

States are bitmasks (bit n set = atom n excited), grouped into contiguous
blocks of fixed excitation number.  Operators that conserve excitation
number are block diagonal in this ordering, which makes subspace
restriction a plain slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np


class BlockStructureError(ValueError):
    """An operator expected to be excitation-block structured is not."""


@dataclass(frozen=True)
class Basis:
    """Excitation-ordered product basis for n_atoms two-level systems.

    states are sorted by (excitation number, bitmask); block_bounds[k] is
    the (start, stop) index range of the k-excitation block.
    """

    n_atoms: int
    max_excitations: int
    states: tuple[int, ...]
    block_bounds: tuple[tuple[int, int], ...]
    _index: dict = field(repr=False, hash=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.states)

    def block_range(self, k: int) -> slice:
        if not 0 <= k <= self.max_excitations:
            raise ValueError(f"no block with {k} excitations in this basis")
        start, stop = self.block_bounds[k]
        return slice(start, stop)

    def block_dim(self, k: int) -> int:
        start, stop = self.block_bounds[k]
        return stop - start

    def index_of(self, mask: int) -> int:
        return self._index[mask]


@dataclass(frozen=True, eq=False)
class OperatorRep:
    """Dense matrix of an operator together with the basis it lives in."""

    matrix: np.ndarray
    basis: Basis

    def __post_init__(self):
        d = self.basis.size
        if self.matrix.shape != (d, d):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match basis size {d}")


def enumerate_basis(n_atoms: int, max_excitations: int | None = None) -> Basis:
    """Enumerate all product states with at most max_excitations excited atoms.

    max_excitations = None keeps the full 2**n_atoms space.  Block k holds
    the C(n_atoms, k) states with exactly k excitations, masks ascending.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    if max_excitations is None:
        max_excitations = n_atoms
    if not 0 <= max_excitations <= n_atoms:
        raise ValueError(
            f"max_excitations must lie in [0, {n_atoms}], got {max_excitations}")

    states: list[int] = []
    bounds: list[tuple[int, int]] = []
    for k in range(max_excitations + 1):
        start = len(states)
        states.extend(sorted(sum(1 << i for i in c)
                             for c in combinations(range(n_atoms), k)))
        bounds.append((start, len(states)))
    index = {s: i for i, s in enumerate(states)}
    return Basis(n_atoms=n_atoms, max_excitations=max_excitations,
                 states=tuple(states), block_bounds=tuple(bounds), _index=index)


def ladder_operator(basis: Basis, atom_index: int) -> OperatorRep:
    """Lowering operator sigma_n = |g_n><e_n| of one atom in the full basis.

    Maps the k-excitation block into the (k-1)-excitation block; entries
    are 0 or 1 (no exchange signs for distinguishable two-level atoms).
    """
    if not 0 <= atom_index < basis.n_atoms:
        raise ValueError(f"atom index {atom_index} out of range")
    d = basis.size
    m = np.zeros((d, d), dtype=complex)
    bit = 1 << atom_index
    for j, s in enumerate(basis.states):
        if s & bit:
            m[basis.index_of(s & ~bit), j] = 1.0
    return OperatorRep(matrix=m, basis=basis)


def number_operator(basis: Basis) -> OperatorRep:
    """Total excitation number, diagonal in the product basis."""
    diag = np.array([s.bit_count() for s in basis.states], dtype=float)
    return OperatorRep(matrix=np.diag(diag).astype(complex), basis=basis)


def restrict(op: OperatorRep, k: int, tol: float = 1e-12) -> np.ndarray:
    """Extract the k-excitation diagonal block of a block-diagonal operator.

    Raises BlockStructureError if any matrix element outside the diagonal
    blocks exceeds tol times the largest element (an operator that does not
    conserve excitation number, e.g. a driven Hamiltonian).
    """
    m = op.matrix
    scale = np.abs(m).max()
    if scale > 0:
        mask = np.zeros(m.shape, dtype=bool)
        for kk in range(op.basis.max_excitations + 1):
            r = op.basis.block_range(kk)
            mask[r, r] = True
        worst = np.abs(m[~mask]).max() if (~mask).any() else 0.0
        if worst > tol * scale:
            raise BlockStructureError(
                f"operator is not excitation-block diagonal: off-block element "
                f"{worst:.3e} exceeds {tol:.1e} * max element {scale:.3e}")
    r = op.basis.block_range(k)
    return m[r, r].copy()


def embed(block: np.ndarray, basis: Basis, k: int) -> OperatorRep:
    """Place a k-block matrix back into the full space (zero elsewhere)."""
    dim = basis.block_dim(k)
    if block.shape != (dim, dim):
        raise ValueError(f"block shape {block.shape} != ({dim}, {dim})")
    m = np.zeros((basis.size, basis.size), dtype=complex)
    r = basis.block_range(k)
    m[r, r] = block
    return OperatorRep(matrix=m, basis=basis)


def block_between(op: OperatorRep, k_out: int, k_in: int) -> np.ndarray:
    """Rectangular sub-block mapping the k_in block into the k_out block."""
    return op.matrix[op.basis.block_range(k_out), op.basis.block_range(k_in)].copy()


def block_sizes(n_atoms: int, max_excitations: int | None = None) -> list[int]:
    """Binomial block dimensions C(n_atoms, k) for k up to the truncation."""
    kmax = n_atoms if max_excitations is None else max_excitations
    return [comb(n_atoms, k) for k in range(kmax + 1)]
