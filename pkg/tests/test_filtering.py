import numpy as np
import pytest

from qobesity import (
    FilterError,
    FilterUndefinedError,
    LocalFilter,
    apply_filter,
    bell_phi_plus,
    correlation_matrix,
    filtered_correlation_matrix,
    filtered_obesity_general,
    filtered_obesity_theorem,
    filtering_function,
    ising_optimal_filter,
    lorentz_lift,
    maximally_mixed,
    obesity,
    random_state,
)
from qobesity.filtering import DeterminantPreconditionError, load_filter, save_filter
from qobesity.states import random_local_unitary, single_site_bloch


def random_invertible(rng):
    while True:
        op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(op)) > 1e-3:
            return op


def random_sl2c(rng):
    op = random_invertible(rng)
    return op / np.sqrt(np.linalg.det(op))


def test_identity_filter_is_noop(rng):
    rho = random_state(rng)
    rho_f, tn = apply_filter(rho, LocalFilter.identity())
    np.testing.assert_allclose(rho_f, rho, atol=1e-14)
    assert tn == pytest.approx(1.0, abs=1e-14)


def test_diagonal_filter_on_bell_state():
    s = 0.5
    f = LocalFilter(np.diag([s, 1.0]), np.eye(2))
    rho_f, tn = apply_filter(bell_phi_plus(), f)
    assert tn == pytest.approx((s**2 + 1) / 2, abs=1e-14)
    v = np.array([s, 0, 0, 1.0]) / np.sqrt(s**2 + 1)
    np.testing.assert_allclose(rho_f, np.outer(v, v), atol=1e-14)


def test_unitary_filter_preserves_trace(rng):
    rho = random_state(rng)
    f = LocalFilter(random_local_unitary(rng), random_local_unitary(rng))
    rho_f, tn = apply_filter(rho, f)
    assert tn == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(rho_f, f.kron @ rho @ f.kron.conj().T, atol=1e-12)


def test_filter_annihilates_state():
    rho = np.zeros((4, 4), dtype=complex)
    rho[3, 3] = 1.0  # |down,down>
    f = LocalFilter(np.array([[1.0, 0.0], [0.0, 1e-8]]), np.array([[1.0, 0.0], [0.0, 1e-8]]))
    from qobesity import FilterAnnihilatesStateError

    with pytest.raises(FilterAnnihilatesStateError):
        apply_filter(rho, f)


def test_singular_filter_rejected():
    with pytest.raises(FilterError, match="singular"):
        LocalFilter(np.array([[1.0, 0.0], [0.0, 0.0]]), np.eye(2))


def test_filtering_function_values(rng):
    rho = random_state(rng)
    assert filtering_function(rho, LocalFilter.identity()) == pytest.approx(1.0)
    f = LocalFilter(np.diag([0.5, 1.0]), np.diag([0.5, 1.0]))
    assert f.is_subnormalized
    assert filtering_function(rho, f) >= 1.0
    # diagonal arithmetic on the maximally mixed state
    assert filtering_function(maximally_mixed(), f) == pytest.approx(64 / 25, abs=1e-12)


def test_subnormalized_flag():
    assert not LocalFilter(2.0 * np.eye(2), np.eye(2)).is_subnormalized


def test_theorem_form_unit_determinant(rng):
    for _ in range(200):
        rho = random_state(rng)
        f = LocalFilter(random_sl2c(rng), random_sl2c(rng))
        predicted = filtered_obesity_theorem(rho, f)
        rho_f, _ = apply_filter(rho, f)
        assert predicted == pytest.approx(obesity(rho_f), abs=1e-9)


def test_theorem_form_identity(rng):
    rho = random_state(rng)
    assert filtered_obesity_theorem(rho, LocalFilter.identity()) == pytest.approx(
        obesity(rho), abs=1e-12
    )


def test_theorem_form_rejects_unscaled_determinant(rng):
    rho = random_state(rng)
    f = LocalFilter(np.diag([0.7, 1.0]), np.eye(2))
    with pytest.raises(DeterminantPreconditionError):
        filtered_obesity_theorem(rho, f)


def test_general_form_bell_state_closed_form():
    # O_A = diag(s, 1) on |Phi+>: Omega_F = 2s/(s^2+1)
    for s in (0.5, 0.25, 2.0):
        f = LocalFilter(np.diag([s, 1.0]), np.eye(2))
        predicted = filtered_obesity_general(bell_phi_plus(), f)
        assert predicted == pytest.approx(2 * s / (s**2 + 1), abs=1e-12)
        rho_f, _ = apply_filter(bell_phi_plus(), f)
        assert predicted == pytest.approx(obesity(rho_f), abs=1e-12)


def test_general_form_random_filters(rng):
    for _ in range(300):
        rho = random_state(rng)
        f = LocalFilter(random_invertible(rng), random_invertible(rng))
        rho_f, _ = apply_filter(rho, f)
        assert filtered_obesity_general(rho, f) == pytest.approx(obesity(rho_f), abs=1e-9)


def test_scaling_invariants(rng):
    # Omega(rho_F) . trace_norm = Omega(rho) . |det O_A||det O_B|
    for _ in range(200):
        rho = random_state(rng)
        f = LocalFilter(random_invertible(rng), random_invertible(rng))
        rho_f, tn = apply_filter(rho, f)
        assert obesity(rho_f) * tn == pytest.approx(obesity(rho) * f.det_product, abs=1e-9)


def test_lift_identity_and_sigma_x():
    np.testing.assert_allclose(lorentz_lift(np.eye(2)).L, np.eye(4), atol=1e-14)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(lorentz_lift(sx).L, np.diag([1.0, 1.0, -1.0, -1.0]), atol=1e-14)


def test_lift_diagonal_has_unit_determinant():
    for eta in (0.1, 0.5, 2.0, 7.0):
        lift = lorentz_lift(np.diag([eta, 1.0]))
        assert lift.det() == pytest.approx(1.0, abs=1e-10)


def test_lift_properties_random(rng):
    for _ in range(300):
        lift = lorentz_lift(random_invertible(rng))
        assert lift.det() == pytest.approx(1.0, abs=1e-10)
        assert lift.minkowski_defect() < 1e-8
        assert lift.L[0, 0] > 0  # orthochronous


def test_lift_rejects_singular():
    with pytest.raises(FilterError):
        lorentz_lift(np.zeros((2, 2)))


def test_filtered_correlation_matrix_identity(rng):
    rho = random_state(rng)
    R = correlation_matrix(rho)
    Rf = filtered_correlation_matrix(R, LocalFilter.identity())
    np.testing.assert_allclose(Rf.R, R.R, atol=1e-12)


def test_filtered_correlation_matrix_unitary_rotates_T(rng):
    rho = random_state(rng)
    R = correlation_matrix(rho)
    f = LocalFilter(random_local_unitary(rng), random_local_unitary(rng))
    Rf = filtered_correlation_matrix(R, f)
    assert np.linalg.det(Rf.R) == pytest.approx(np.linalg.det(R.R), abs=1e-10)
    assert np.linalg.norm(Rf.T) == pytest.approx(np.linalg.norm(R.T), abs=1e-10)


def test_filtered_correlation_matrix_dual_path(rng):
    for _ in range(200):
        rho = random_state(rng)
        f = LocalFilter(random_invertible(rng), random_invertible(rng))
        Rf = filtered_correlation_matrix(correlation_matrix(rho), f)
        rho_f, _ = apply_filter(rho, f)
        np.testing.assert_allclose(Rf.R, correlation_matrix(rho_f).R, atol=1e-9)
        assert Rf.R[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_ising_optimal_filter_balanced():
    f = ising_optimal_filter(0.3, 0.3)
    np.testing.assert_allclose(f.O_A, np.eye(2), atol=1e-14)


def test_ising_optimal_filter_eta_value():
    f = ising_optimal_filter(0.4, 0.1)
    assert f.O_A[0, 0] == pytest.approx(0.25**0.25, abs=1e-12)
    assert f.O_A[1, 1] == pytest.approx(1.0)
    # flipped populations shrink the other slot
    f = ising_optimal_filter(0.1, 0.4)
    assert f.O_A[0, 0] == pytest.approx(1.0)
    assert f.O_A[1, 1] == pytest.approx(0.25**0.25, abs=1e-12)


def test_ising_optimal_filter_degenerate():
    with pytest.raises(FilterUndefinedError):
        ising_optimal_filter(0.5, 0.0)
    with pytest.raises(FilterUndefinedError):
        ising_optimal_filter(0.0, 0.5)


def test_ising_filter_bell_diagonalizes_and_enhances():
    from qobesity import ising_pair_state

    for lam in (0.3, 0.8, 1.0, 1.3, 1.9):
        pair = ising_pair_state(lam, 1)
        f = ising_optimal_filter(pair.A_plus, pair.A_minus)
        rho_f, _ = apply_filter(pair.rho, f)
        assert np.linalg.norm(single_site_bloch(rho_f, "A")) < 1e-9
        assert np.linalg.norm(single_site_bloch(rho_f, "B")) < 1e-9
        assert obesity(rho_f) >= obesity(pair.rho) - 1e-10


def test_filters_never_create_obesity(rng):
    # det R scales multiplicatively, so Omega = 0 stays 0.  The scaling law
    # gives the exact zero; the direct route sees the fourth root of
    # determinant-level roundoff (~1e-35 for this doubly singular R), so it
    # is bounded rather than exactly zero.
    rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    assert obesity(rho) == 0.0
    for _ in range(50):
        f = LocalFilter(random_invertible(rng), random_invertible(rng))
        assert filtered_obesity_general(rho, f) == 0.0
        rho_f, _ = apply_filter(rho, f)
        assert obesity(rho_f) <= 1e-7


def test_filter_file_round_trip(tmp_path, rng):
    f = LocalFilter(random_invertible(rng), random_invertible(rng))
    path = tmp_path / "filter.json"
    save_filter(f, path)
    g = load_filter(path)
    np.testing.assert_allclose(g.O_A, f.O_A, atol=0)
    np.testing.assert_allclose(g.O_B, f.O_B, atol=0)


def test_filter_file_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"O_A": [[1, 0], [0, 1]], "O_B": [[1, 0], [0, 1]]}')
    with pytest.raises(ValueError, match="malformed"):
        load_filter(path)
