import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_bell_diagonal_params(rng):
    """Uniform rejection sampling inside the physical tetrahedron."""
    from qobesity import BellDiagonalParams

    while True:
        c = rng.uniform(-1.0, 1.0, size=3)
        p = BellDiagonalParams(*c)
        if p.is_physical(tol=0.0):
            return p


def random_pattern_state(rng, k):
    """Random physical state with the pattern-k zero structure: mask a
    Ginibre state, then mix in identity until positive."""
    from qobesity import random_state
    from qobesity.obesity import x_family_pattern_mask

    mask = x_family_pattern_mask(k)
    rho = np.where(mask, random_state(rng), 0.0)
    w = np.linalg.eigvalsh(rho).min()
    if w < 0:
        rho = rho + 1.5 * abs(w) * np.eye(4)
    return rho / np.trace(rho).real
