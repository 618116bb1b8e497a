import numpy as np
import pytest

from conftest import random_bell_diagonal_params, random_pattern_state
from qobesity import (
    BellDiagonalParams,
    PatternMismatchError,
    bell_diagonal_state,
    bell_phi_plus,
    concurrence,
    correlation_matrix,
    maximally_mixed,
    obesity,
    obesity_bell_diagonal,
    obesity_x_family,
    random_state,
)
from qobesity.states import random_local_unitary


def test_obesity_bell_state():
    # det R = det diag(1, 1, -1, 1) = -1
    assert obesity(bell_phi_plus()) == pytest.approx(1.0, abs=1e-12)


def test_obesity_product_state_is_zero():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    assert obesity(rho) == 0.0


def test_obesity_werner_half():
    rho = bell_diagonal_state(BellDiagonalParams(-0.5, -0.5, -0.5))
    assert obesity(rho) == pytest.approx(abs(-1 / 8) ** 0.25, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_x_family_matches_determinant(rng, k):
    for _ in range(300):
        rho = random_pattern_state(rng, k)
        assert obesity_x_family(rho, k) == pytest.approx(obesity(rho), abs=1e-10)


def test_x_family_examples():
    # pure alpha|up,up> + beta|down,down>  ->  Omega = 2 alpha beta
    alpha, beta = 0.6, 0.8
    v = np.array([alpha, 0, 0, beta], dtype=complex)
    rho = np.outer(v, v)
    assert obesity_x_family(rho, 1) == pytest.approx(2 * alpha * beta, abs=1e-12)
    # |up,down><up,down| -> 0
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 1.0
    assert obesity_x_family(rho, 1) == 0.0


def test_x_family_bell_diagonal_reduces_to_closed_form(rng):
    for _ in range(100):
        p = random_bell_diagonal_params(rng)
        rho = bell_diagonal_state(p)
        assert obesity_x_family(rho, 1) == pytest.approx(
            abs(p.c1 * p.c2 * p.c3) ** 0.25, abs=1e-12
        )


def test_x_family_pattern_mismatch_reports_entries(rng):
    rho = random_state(rng)
    with pytest.raises(PatternMismatchError, match=r"rho\["):
        obesity_x_family(rho, 1)


def test_x_family_bad_pattern_index():
    with pytest.raises(ValueError):
        obesity_x_family(maximally_mixed(), 4)


def test_bell_diagonal_known_values():
    assert obesity_bell_diagonal(BellDiagonalParams(-1, -1, -1)) == pytest.approx(1.0)
    assert obesity_bell_diagonal(BellDiagonalParams(0.3, 0.0, 0.4)) == 0.0
    p = BellDiagonalParams(1.0, -0.5, 0.5)
    assert obesity_bell_diagonal(p) == pytest.approx(0.25**0.25, abs=1e-12)
    # cross-check against the determinant route on the explicit matrix
    assert obesity_bell_diagonal(p) == pytest.approx(obesity(bell_diagonal_state(p)), abs=1e-12)


def test_bell_diagonal_rejects_unphysical():
    with pytest.raises(ValueError, match="unphysical"):
        obesity_bell_diagonal(BellDiagonalParams(1.0, 1.0, 1.0))
    with pytest.raises(ValueError, match="unphysical"):
        bell_diagonal_state(BellDiagonalParams(1.0, 1.0, 1.0))
    # c1 = 1 forces c2 + c3 = 0; this triple sits outside the tetrahedron
    with pytest.raises(ValueError, match="unphysical"):
        obesity_bell_diagonal(BellDiagonalParams(1.0, -0.5, -0.5))


def test_bell_diagonal_agreement_random(rng):
    for _ in range(300):
        p = random_bell_diagonal_params(rng)
        assert obesity_bell_diagonal(p) == pytest.approx(
            obesity(bell_diagonal_state(p)), abs=1e-12
        )


def test_obesity_upper_bounds_concurrence(rng):
    for _ in range(500):
        rho = random_state(rng)
        assert obesity(rho) >= concurrence(rho) - 1e-9


def test_obesity_range(rng):
    for _ in range(500):
        om = obesity(random_state(rng))
        assert 0.0 <= om <= 1.0 + 1e-9


def test_obesity_local_unitary_invariance(rng):
    for _ in range(200):
        rho = random_state(rng)
        u = np.kron(random_local_unitary(rng), random_local_unitary(rng))
        assert obesity(u @ rho @ u.conj().T) == pytest.approx(obesity(rho), abs=1e-10)


def test_bell_diagonal_populations_order():
    # Phi+ is the c = (1, -1, 1) corner
    p = BellDiagonalParams(1.0, -1.0, 1.0)
    np.testing.assert_allclose(p.eigenvalues(), [1.0, 0.0, 0.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(bell_diagonal_state(p), bell_phi_plus(), atol=1e-14)


def test_obesity_determinant_noise_floor(rng):
    # rank-deficient correlation: tiny determinants report exactly zero
    rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)  # product of A-mixed, B-up
    R = correlation_matrix(rho)
    assert abs(np.linalg.det(R.R)) < 1e-48
    assert obesity(rho) == 0.0
