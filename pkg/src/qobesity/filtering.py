"""Local filtering operations and their effect on obesity.

A local filter is an invertible (generally non-unitary) pair (O_A, O_B)
acting as

    rho_F = (O_A x O_B) rho (O_A x O_B)^dag / trace_norm .

On the Pauli expectation table the filter acts by a pair of proper
orthochronous Lorentz transformations,

    R_F = |det O_A| |det O_B| . L_A R L_B^T / trace_norm ,
    L   = Lam (O x O*) Lam^dag / |det O| ,    det L = 1 ,

from which the obesity scaling law follows:

    Omega(rho_F) . trace_norm = Omega(rho) . |det O_A| |det O_B| .

For unit-determinant (SL(2,C)) filters the determinant factors drop and
the scaling is just the inverse trace norm.  The determinant-free form
is exposed separately with an explicit |det O| ~ 1 precondition because
it fails for general filters; the direct route obesity(apply_filter(..))
is the ground truth either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from .obesity import obesity
from .states import CorrelationMatrix, correlation_matrix

__all__ = [
    "LocalFilter",
    "LorentzLift",
    "FilterError",
    "FilterAnnihilatesStateError",
    "FilterUndefinedError",
    "DeterminantPreconditionError",
    "apply_filter",
    "filtering_function",
    "filtered_obesity_theorem",
    "filtered_obesity_general",
    "lorentz_lift",
    "filtered_correlation_matrix",
    "ising_optimal_filter",
    "load_filter",
    "save_filter",
]

#: the Pauli-coordinate change of basis: LAMBDA @ vec(sigma_mu) = sqrt(2) e_mu
LAMBDA = np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0j, -1.0j, 0.0],
        [1.0, 0.0, 0.0, -1.0],
    ],
    dtype=complex,
) / np.sqrt(2.0)

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


class FilterError(ValueError):
    pass


class FilterAnnihilatesStateError(FilterError):
    """trace((O_A x O_B) rho (.)^dag) is numerically zero."""


class FilterUndefinedError(FilterError):
    """The requested filter construction has no well-defined result."""


class DeterminantPreconditionError(FilterError):
    """The determinant-free scaling law needs |det O_A| = |det O_B| = 1."""


@dataclass(frozen=True)
class LocalFilter:
    """Invertible local operator pair (O_A, O_B)."""

    O_A: np.ndarray
    O_B: np.ndarray

    def __post_init__(self):
        for name in ("O_A", "O_B"):
            op = np.asarray(getattr(self, name), dtype=complex)
            if op.shape != (2, 2):
                raise FilterError(f"{name} must be 2x2, got {op.shape}")
            if abs(np.linalg.det(op)) <= 1e-12:
                raise FilterError(f"{name} is singular: |det| = {abs(np.linalg.det(op)):.3e}")
            object.__setattr__(self, name, op)

    @property
    def det_product(self) -> float:
        """|det O_A| . |det O_B|."""
        return float(abs(np.linalg.det(self.O_A)) * abs(np.linalg.det(self.O_B)))

    @property
    def is_subnormalized(self) -> bool:
        """True when both operators have largest singular value <= 1
        (needed for the enhancement property, not for validity)."""
        return bool(
            np.linalg.norm(self.O_A, 2) <= 1.0 + 1e-12
            and np.linalg.norm(self.O_B, 2) <= 1.0 + 1e-12
        )

    @property
    def kron(self) -> np.ndarray:
        return np.kron(self.O_A, self.O_B)

    @staticmethod
    def identity() -> "LocalFilter":
        return LocalFilter(np.eye(2), np.eye(2))


@dataclass(frozen=True)
class LorentzLift:
    """Normalized 4x4 Pauli-coordinate action of a single 2x2 operator."""

    L: np.ndarray = field(repr=False)

    def det(self) -> float:
        return float(np.linalg.det(self.L))

    def minkowski_defect(self) -> float:
        """max |L eta L^T - eta|; zero for an exact Lorentz transform."""
        return float(np.abs(self.L @ MINKOWSKI @ self.L.T - MINKOWSKI).max())


def apply_filter(rho: np.ndarray, f: LocalFilter):
    """Filtered state and trace norm: (rho_F, trace_norm)."""
    rho = np.asarray(rho, dtype=complex)
    k = f.kron
    unnorm = k @ rho @ k.conj().T
    trace_norm = np.trace(unnorm).real
    if trace_norm <= 1e-12:
        raise FilterAnnihilatesStateError(
            f"filter annihilates the state: trace norm {trace_norm:.3e}"
        )
    return unnorm / trace_norm, trace_norm


def filtering_function(rho: np.ndarray, f: LocalFilter) -> float:
    """Inverse trace norm 1/tr((O_A x O_B) rho (.)^dag)."""
    _, trace_norm = apply_filter(rho, f)
    return 1.0 / trace_norm


def filtered_obesity_theorem(rho: np.ndarray, f: LocalFilter, det_tol: float = 1e-9) -> float:
    """Determinant-free scaling law Omega_F = Omega / trace_norm.

    Valid only for unit-determinant filters; raises
    ``DeterminantPreconditionError`` otherwise (use
    :func:`filtered_obesity_general` for arbitrary invertible filters).
    """
    for name, op in (("O_A", f.O_A), ("O_B", f.O_B)):
        d = abs(np.linalg.det(op))
        if abs(d - 1.0) > det_tol:
            raise DeterminantPreconditionError(
                f"|det {name}| = {d:.12f} differs from 1; "
                "the determinant-free law does not apply"
            )
    return obesity(rho) * filtering_function(rho, f)


def filtered_obesity_general(rho: np.ndarray, f: LocalFilter) -> float:
    """Determinant-corrected scaling law, valid for any invertible filter:

        Omega_F = Omega . |det O_A| |det O_B| / trace_norm ."""
    return obesity(rho) * f.det_product * filtering_function(rho, f)


def lorentz_lift(O: np.ndarray) -> LorentzLift:
    """L = Lam (O x O*) Lam^dag / |det O| for an invertible 2x2 operator.

    L is real with det L = 1 and preserves the Minkowski form.
    """
    O = np.asarray(O, dtype=complex)
    d = abs(np.linalg.det(O))
    if d <= 1e-12:
        raise FilterError(f"cannot lift a singular operator: |det| = {d:.3e}")
    L = LAMBDA @ np.kron(O, O.conj()) @ LAMBDA.conj().T / d
    imag_max = float(np.abs(L.imag).max())
    if imag_max > 1e-10:
        raise FilterError(f"lift has imaginary residue {imag_max:.3e}")
    return LorentzLift(L.real.copy())


def filtered_correlation_matrix(R: CorrelationMatrix, f: LocalFilter) -> CorrelationMatrix:
    """Expectation table of the filtered state, from the table alone.

    Computes |det O_A||det O_B| L_A R L_B^T, reads the trace norm off the
    (0,0) entry and renormalizes so R_F[0,0] = 1.
    """
    L_A = lorentz_lift(f.O_A).L
    L_B = lorentz_lift(f.O_B).L
    unnorm = f.det_product * (L_A @ R.R @ L_B.T)
    trace_norm = unnorm[0, 0]
    if trace_norm <= 1e-12:
        raise FilterAnnihilatesStateError(
            f"filter annihilates the state: trace norm {trace_norm:.3e}"
        )
    return CorrelationMatrix(unnorm / trace_norm)


def ising_optimal_filter(A_plus: float, A_minus: float) -> LocalFilter:
    """Obesity-optimal diagonal filter for X-form pair states with
    populations (A_plus, B, B, A_minus).

    Applies diag(eta, 1) with eta = (A_minus/A_plus)^(1/4) on both
    parties, oriented so the shrinking entry sits on the dominant
    population (eta <= 1 regardless of the sign convention of <sigma_z>).
    The filtered state has both local Bloch vectors equal to zero.
    """
    if A_plus <= 1e-10 or A_minus <= 1e-10:
        raise FilterUndefinedError(
            f"diagonal populations ({A_plus:.3e}, {A_minus:.3e}) too close to zero; "
            "the balancing filter is undefined"
        )
    eta = (min(A_plus, A_minus) / max(A_plus, A_minus)) ** 0.25
    op = np.diag([eta, 1.0]) if A_plus >= A_minus else np.diag([1.0, eta])
    return LocalFilter(op, op.copy())


def save_filter(f: LocalFilter, path) -> None:
    """Write a filter as JSON {"O_A": [[[re, im] x2] x2], "O_B": ...}."""
    payload = {
        name: [[[z.real, z.imag] for z in row] for row in op]
        for name, op in (("O_A", f.O_A), ("O_B", f.O_B))
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def load_filter(path) -> LocalFilter:
    with open(path) as fh:
        payload = json.load(fh)
    ops = {}
    for name in ("O_A", "O_B"):
        raw = np.asarray(payload[name], dtype=float)
        if raw.shape != (2, 2, 2):
            raise ValueError(f"malformed filter file: {name} shape {raw.shape}")
        ops[name] = raw[..., 0] + 1j * raw[..., 1]
    return LocalFilter(ops["O_A"], ops["O_B"])
