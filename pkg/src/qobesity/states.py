"""Two-qubit density matrices and their Pauli correlation representation.

Conventions used throughout the package:

* computational basis order |up,up>, |up,down>, |down,up>, |down,down>,
  with sigma_z|up> = +|up>;
* tensor products are A (x) B with party A the left factor;
* the correlation matrix is the 4x4 expectation table

      R[i, j] = tr(rho . sigma_i (x) sigma_j),   sigma_0 = identity,

  so R[0, 0] = 1, column 0 holds the Bloch vector of party A and row 0
  holds the Bloch vector of party B.  The 3x3 block R[1:, 1:] is the
  spin-spin correlation tensor T.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

import numpy as np

__all__ = [
    "PAULI",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "CorrelationMatrix",
    "StateValidationError",
    "validate_state",
    "correlation_matrix",
    "state_from_correlation_matrix",
    "pair_reduced_state",
    "single_site_bloch",
    "concurrence",
    "random_state",
    "random_local_unitary",
    "bell_phi_plus",
    "maximally_mixed",
    "load_state",
    "save_state",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: sigma_0 .. sigma_3
PAULI = (np.eye(2, dtype=complex), SIGMA_X, SIGMA_Y, SIGMA_Z)

# 4x4 products sigma_i (x) sigma_j, precomputed once
_PAULI_PAIR = np.array([[np.kron(p, q) for q in PAULI] for p in PAULI])

DEFAULT_TOL = 1e-10


class StateValidationError(ValueError):
    """Raised when a matrix fails the density-matrix checks.

    The ``violations`` attribute carries the individual failure messages.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def validate_state(rho: np.ndarray, tol: float = DEFAULT_TOL) -> list[str]:
    """Check Hermiticity, unit trace and positivity of a two-qubit state.

    Returns a list of human-readable violation messages; an empty list
    means the state is physical within ``tol``.  Eigenvalues are allowed
    to dip to ``-tol`` to absorb numerical noise from upstream solvers.
    """
    rho = np.asarray(rho, dtype=complex)
    violations = []
    if rho.shape != (4, 4):
        return [f"shape {rho.shape} is not 4x4"]
    herm_dev = np.abs(rho - rho.conj().T).max()
    if herm_dev > tol:
        violations.append(f"not Hermitian: max |rho - rho^dag| = {herm_dev:.3e}")
    trace_dev = abs(np.trace(rho) - 1.0)
    if trace_dev > tol:
        violations.append(f"trace deviates from 1 by {trace_dev:.3e}")
    # eigvalsh on the Hermitian part keeps the check meaningful even when
    # the Hermiticity check above already failed
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -tol:
        violations.append(
            "negative eigenvalue(s): " + np.array2string(evals, precision=6)
        )
    return violations


def _require_valid(rho, tol=DEFAULT_TOL):
    violations = validate_state(rho, tol)
    if violations:
        raise StateValidationError(violations)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pauli expectation table R[i, j] = <sigma_i (x) sigma_j>."""

    R: np.ndarray

    @property
    def a(self) -> np.ndarray:
        """Bloch vector of party A (column 0 of the expectation table)."""
        return self.R[1:, 0].copy()

    @property
    def b(self) -> np.ndarray:
        """Bloch vector of party B (row 0 of the expectation table)."""
        return self.R[0, 1:].copy()

    @property
    def T(self) -> np.ndarray:
        """3x3 spin-spin correlation block."""
        return self.R[1:, 1:].copy()

    def det(self) -> float:
        """det R via LU with partial pivoting (numpy's routine)."""
        return float(np.linalg.det(self.R))


def correlation_matrix(rho: np.ndarray, tol: float = DEFAULT_TOL) -> CorrelationMatrix:
    """Expectation table of a valid two-qubit state.

    Raises ``StateValidationError`` for unphysical input.
    """
    rho = np.asarray(rho, dtype=complex)
    _require_valid(rho, tol)
    R = np.einsum("ab,ijba->ij", rho, _PAULI_PAIR).real
    return CorrelationMatrix(R)


def state_from_correlation_matrix(R, check: bool = True) -> np.ndarray:
    """Reconstruct rho = (1/4) sum_ij R_ij sigma_i (x) sigma_j.

    With ``check=True`` (default) an unphysical reconstruction raises
    ``StateValidationError`` instead of being returned silently.
    """
    if isinstance(R, CorrelationMatrix):
        R = R.R
    R = np.asarray(R, dtype=float)
    rho = 0.25 * np.einsum("ij,ijab->ab", R, _PAULI_PAIR)
    if check:
        _require_valid(rho)
    return rho


def pair_reduced_state(rho_full: np.ndarray, i: int, j: int, n_sites: int) -> np.ndarray:
    """Partial trace of an n-site density matrix onto sites (i, j).

    Site ``i`` becomes the left tensor factor of the returned two-qubit
    state.  Site 0 is the leftmost (most significant) factor of the full
    register.
    """
    if not (0 <= i < j < n_sites):
        raise ValueError(f"need 0 <= i < j < n_sites, got ({i}, {j}) with n={n_sites}")
    dim = 2**n_sites
    rho_full = np.asarray(rho_full)
    if rho_full.shape != (dim, dim):
        raise ValueError(f"expected {dim}x{dim} matrix for {n_sites} sites")
    tensor = rho_full.reshape((2,) * (2 * n_sites))
    # bring kept sites to the front on both the ket and bra sides
    keep = [i, j]
    perm = keep + [s for s in range(n_sites) if s not in keep]
    perm = perm + [n_sites + p for p in perm]
    tensor = tensor.transpose(perm)
    tensor = tensor.reshape(4, dim // 4, 4, dim // 4)
    return np.einsum("akbk->ab", tensor)


def single_site_bloch(rho: np.ndarray, party: str = "A") -> np.ndarray:
    """Bloch vector of one party via partial trace, independent of R."""
    rho = np.asarray(rho, dtype=complex)
    t = rho.reshape(2, 2, 2, 2)
    red = np.einsum("akbk->ab", t) if party == "A" else np.einsum("kakb->ab", t)
    return np.array([np.trace(red @ P).real for P in PAULI[1:]])


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit state.

    C = max(0, l1 - l2 - l3 - l4) where l_i are the decreasing square
    roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
    """
    rho = np.asarray(rho, dtype=complex)
    _require_valid(rho)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    m = rho @ yy @ rho.conj() @ yy
    evals = np.linalg.eigvals(m).real
    # abs() guards tiny negative values from roundoff
    lams = np.sort(np.sqrt(np.abs(evals)))[::-1]
    return max(0.0, lams[0] - lams[1] - lams[2] - lams[3])


def random_state(rng: np.random.Generator) -> np.ndarray:
    """Full-rank random two-qubit state (normalized Ginibre G G^dag)."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random single-qubit unitary (QR of a Ginibre matrix)."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bell_phi_plus() -> np.ndarray:
    """|Phi+><Phi+| with |Phi+> = (|up,up> + |down,down>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def maximally_mixed() -> np.ndarray:
    return np.eye(4, dtype=complex) / 4.0


def save_state(rho: np.ndarray, path) -> None:
    """Write a state as JSON {"rho": [[[re, im] x4] x4]}, row-major."""
    rho = np.asarray(rho, dtype=complex)
    payload = {"rho": [[[z.real, z.imag] for z in row] for row in rho]}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def load_state(path, check: bool = True) -> np.ndarray:
    """Read a state written by :func:`save_state`; validates by default."""
    with open(path) as fh:
        payload = json.load(fh)
    raw = np.asarray(payload["rho"], dtype=float)
    if raw.shape != (4, 4, 2):
        raise ValueError(f"malformed state file: rho shape {raw.shape}, expected (4, 4, 2)")
    rho = raw[..., 0] + 1j * raw[..., 1]
    if check:
        _require_valid(rho)
    return rho
