"""Geometry and drive definitions for an atom-mirror waveguide cavity.

Positions are stored in units of the resonant wavelength lambda0 and rates in
units of the mirror decay rate, with hbar = v_g = 1.  Every propagation phase
downstream is k0*x = 2*pi*(position in lambda0), so only those products and
rate ratios enter the physics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MEDIUM = "medium"
MIRROR = "mirror"

TWO_PI = 2.0 * np.pi


class ConfigError(ValueError):
    """A system or drive configuration violates one or more invariants.

    Carries the full list of violations so callers can report everything
    that is wrong at once instead of failing on the first problem.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))


@dataclass(frozen=True)
class AtomSpec:
    """One two-level atom coupled to the waveguide.

    position : atom position in units of lambda0
    rate     : decay rate into the waveguide (coupling strength squared)
    role     : "medium" (the driven atom) or "mirror"
    """

    position: float
    rate: float
    role: str


@dataclass(frozen=True)
class DriveSpec:
    """Coherent probe on the medium atom.

    epsilon : drive amplitude (>= 0)
    delta   : detuning of the drive from the shared atomic frequency
    """

    epsilon: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        problems = []
        if not (self.epsilon >= 0.0):
            problems.append("drive amplitude epsilon must be >= 0")
        if not (np.isfinite(self.epsilon) and np.isfinite(self.delta)):
            problems.append("drive parameters must be finite")
        if problems:
            raise ConfigError(problems)


@dataclass(frozen=True)
class SystemConfig:
    """Unvalidated collection of atoms.  Run validate() before use."""

    atoms: tuple[AtomSpec, ...]


@dataclass(frozen=True, eq=False)
class ValidatedSystem:
    """A checked configuration with precomputed arrays.

    Atoms are ordered by ascending position.  Immutable after construction
    (the arrays are marked read-only), so instances can be shared freely
    across parallel workers.
    """

    config: SystemConfig
    positions: np.ndarray
    rates: np.ndarray
    medium_index: int

    @property
    def n_atoms(self) -> int:
        return self.positions.size

    @property
    def medium_rate(self) -> float:
        """Decay rate gamma of the driven medium atom."""
        return float(self.rates[self.medium_index])

    @property
    def mirror_rates(self) -> np.ndarray:
        return np.delete(self.rates, self.medium_index)

    @property
    def mirror_positions(self) -> np.ndarray:
        return np.delete(self.positions, self.medium_index)

    @property
    def rate_scale(self) -> float:
        """Largest rate in the system; natural unit for tolerances."""
        return float(self.rates.max())


def canonical_three_atom(gamma: float, Gamma: float, d: float = 0.25) -> SystemConfig:
    """Two mirror atoms enclosing one driven medium atom at the origin.

    The mirrors sit at -d and 1/2 - d so their separation is always
    lambda0/2; d = 1/4 is the symmetric arrangement.  gamma is the medium
    rate, Gamma the common mirror rate.
    """
    problems = []
    if not gamma > 0:
        problems.append("gamma must be > 0")
    if not Gamma > 0:
        problems.append("Gamma must be > 0")
    if not 0.0 < d < 0.5:
        problems.append("d must lie strictly inside (0, 1/2)")
    if problems:
        raise ConfigError(problems)
    return SystemConfig(atoms=(
        AtomSpec(position=-d, rate=Gamma, role=MIRROR),
        AtomSpec(position=0.0, rate=gamma, role=MEDIUM),
        AtomSpec(position=0.5 - d, rate=Gamma, role=MIRROR),
    ))


def n_atom_mirror_config(N: int, gamma: float, Gamma: float) -> SystemConfig:
    """Mirrors made of N atoms each, placed at +-(2k+1)/4 for k = 0..N-1.

    Intra-mirror spacing is lambda0/2 and every mirror atom is an odd
    multiple of lambda0/4 away from the medium atom at the origin, which
    preserves the bright/dark mode structure of the three-atom cavity.
    N = 1 reproduces canonical_three_atom(gamma, Gamma, 1/4) exactly.
    """
    problems = []
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        problems.append("N must be an integer >= 1")
    if not gamma > 0:
        problems.append("gamma must be > 0")
    if not Gamma > 0:
        problems.append("Gamma must be > 0")
    if problems:
        raise ConfigError(problems)
    offsets = (2 * np.arange(N) + 1) / 4.0
    positions = np.sort(np.concatenate([-offsets, offsets, [0.0]]))
    atoms = tuple(
        AtomSpec(position=float(p), rate=gamma if p == 0.0 else Gamma,
                 role=MEDIUM if p == 0.0 else MIRROR)
        for p in positions
    )
    return SystemConfig(atoms=atoms)


def validate(config: SystemConfig) -> ValidatedSystem:
    """Check every invariant of a configuration and freeze it for use.

    Raises ConfigError listing all violations: exactly one medium atom,
    strictly positive rates, finite non-duplicate positions, known roles.
    Atoms are canonicalized to ascending position order.
    """
    problems = []
    atoms = sorted(config.atoms, key=lambda a: a.position)
    if not atoms:
        raise ConfigError(["configuration contains no atoms"])
    for i, a in enumerate(atoms):
        if a.role not in (MEDIUM, MIRROR):
            problems.append(f"atom {i}: unknown role {a.role!r}")
        if not (np.isfinite(a.position)):
            problems.append(f"atom {i}: position must be finite")
        if not (np.isfinite(a.rate) and a.rate > 0):
            problems.append(f"atom {i}: rate must be positive")
    n_medium = sum(1 for a in atoms if a.role == MEDIUM)
    if n_medium != 1:
        problems.append(f"exactly one medium atom required, found {n_medium}")
    positions = [a.position for a in atoms]
    if len(set(positions)) != len(positions):
        problems.append("duplicate atom positions are not allowed")
    if problems:
        raise ConfigError(problems)

    pos = np.array(positions, dtype=float)
    rates = np.array([a.rate for a in atoms], dtype=float)
    pos.flags.writeable = False
    rates.flags.writeable = False
    medium_index = next(i for i, a in enumerate(atoms) if a.role == MEDIUM)
    return ValidatedSystem(config=SystemConfig(atoms=tuple(atoms)),
                           positions=pos, rates=rates,
                           medium_index=medium_index)


def geometry_id(system: ValidatedSystem) -> str:
    """Compact deterministic tag describing a validated geometry."""
    parts = [f"n={system.n_atoms}"]
    parts.append(f"gamma={system.medium_rate:.6g}")
    mirror = system.mirror_rates
    if mirror.size and np.all(mirror == mirror[0]):
        parts.append(f"Gamma={mirror[0]:.6g}")
    parts.append("x=" + ",".join(f"{p:.6g}" for p in system.positions))
    return ";".join(parts)
