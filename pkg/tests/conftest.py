import numpy as np
import pytest

from wqed import AtomSpec, SystemConfig, canonical_three_atom, validate


@pytest.fixture
def weak_cavity():
    """Symmetric cavity with a slow medium atom (gamma = 0.01 Gamma)."""
    return validate(canonical_three_atom(0.01, 1.0))


@pytest.fixture
def unit_cavity():
    """Symmetric cavity with gamma = Gamma = 1."""
    return validate(canonical_three_atom(1.0, 1.0))


def random_system(rng, n_atoms=3):
    """Random valid geometry: distinct positions in [-1, 1], rates in [0.01, 10]."""
    while True:
        pos = rng.uniform(-1.0, 1.0, n_atoms)
        if np.unique(pos).size == n_atoms:
            break
    rates = rng.uniform(0.01, 10.0, n_atoms)
    medium = rng.integers(0, n_atoms)
    atoms = tuple(
        AtomSpec(position=float(pos[i]), rate=float(rates[i]),
                 role="medium" if i == medium else "mirror")
        for i in range(n_atoms))
    return validate(SystemConfig(atoms=atoms))
