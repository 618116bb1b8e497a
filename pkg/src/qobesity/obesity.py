"""Quantum obesity of two-qubit states.

Obesity is the quartic-root determinant of the Pauli expectation table,

    Omega = |det R|^(1/4),

a local-unitary invariant that upper-bounds concurrence.  Besides the
generic determinant route this module carries two closed forms: one for
a family of sparsity patterns (diagonal + anti-diagonal plus at most one
extra flip sector) and one for Bell-diagonal states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import CorrelationMatrix, correlation_matrix

__all__ = [
    "obesity",
    "obesity_from_R",
    "x_family_pattern_mask",
    "check_x_family_pattern",
    "obesity_x_family",
    "BellDiagonalParams",
    "bell_diagonal_state",
    "obesity_bell_diagonal",
    "PatternMismatchError",
]

# below this determinant magnitude the fourth root only amplifies noise
_DET_FLOOR = 1e-48


class PatternMismatchError(ValueError):
    """State does not have the sparsity pattern the closed form needs."""


def obesity_from_R(R: CorrelationMatrix | np.ndarray) -> float:
    """Omega = |det R|^(1/4); reported as exactly 0 below the noise floor."""
    det = R.det() if isinstance(R, CorrelationMatrix) else float(np.linalg.det(R))
    mag = abs(det)
    if mag < _DET_FLOOR:
        return 0.0
    return mag**0.25


def obesity(rho: np.ndarray) -> float:
    """Quantum obesity of a valid two-qubit state."""
    return obesity_from_R(correlation_matrix(rho))


def x_family_pattern_mask(k: int) -> np.ndarray:
    """Boolean mask of entries allowed to be nonzero for pattern k = 1|2|3.

    k=1 is the X pattern (diagonal + anti-diagonal).  k=2 additionally
    allows the single-flip entries of party A (positions (0,2), (1,3) and
    transposes), k=3 those of party B ((0,1), (2,3) and transposes).
    """
    if k not in (1, 2, 3):
        raise ValueError("pattern index must be 1, 2 or 3")
    mask = np.eye(4, dtype=bool)
    mask[0, 3] = mask[3, 0] = mask[1, 2] = mask[2, 1] = True
    if k == 2:
        mask[0, 2] = mask[2, 0] = mask[1, 3] = mask[3, 1] = True
    elif k == 3:
        mask[0, 1] = mask[1, 0] = mask[2, 3] = mask[3, 2] = True
    return mask


def check_x_family_pattern(rho: np.ndarray, k: int, tol: float = 1e-10) -> list[str]:
    """List the entries violating the pattern-k zero structure."""
    rho = np.asarray(rho, dtype=complex)
    mask = x_family_pattern_mask(k)
    bad = []
    for i in range(4):
        for j in range(4):
            if not mask[i, j] and abs(rho[i, j]) > tol:
                bad.append(f"rho[{i},{j}] = {rho[i, j]:.3e} should vanish for pattern k={k}")
    return bad


def obesity_x_family(rho: np.ndarray, k: int, tol: float = 1e-10) -> float:
    """Closed-form obesity for states with the pattern-k zero structure.

        Omega = 2 |(|rho_23|^2 - |rho_14|^2)(rho_22 rho_33 - rho_11 rho_44)|^(1/4)

    (1-based indices; only the anti-diagonal and the main diagonal enter,
    the extra k=2/k=3 entries drop out of det R).
    """
    rho = np.asarray(rho, dtype=complex)
    bad = check_x_family_pattern(rho, k, tol)
    if bad:
        raise PatternMismatchError("; ".join(bad))
    inner = (abs(rho[1, 2]) ** 2 - abs(rho[0, 3]) ** 2) * (
        rho[1, 1].real * rho[2, 2].real - rho[0, 0].real * rho[3, 3].real
    )
    return 2.0 * abs(inner) ** 0.25


@dataclass(frozen=True)
class BellDiagonalParams:
    """Correlation triple (c1, c2, c3) of a Bell-diagonal state."""

    c1: float
    c2: float
    c3: float

    def eigenvalues(self) -> np.ndarray:
        """Populations of the four Bell states, in the order
        Phi+, Phi-, Psi+, Psi-."""
        c1, c2, c3 = self.c1, self.c2, self.c3
        return 0.25 * np.array(
            [
                1 + c1 - c2 + c3,
                1 - c1 + c2 + c3,
                1 + c1 + c2 - c3,
                1 - c1 - c2 - c3,
            ]
        )

    def is_physical(self, tol: float = 1e-12) -> bool:
        return bool(self.eigenvalues().min() >= -tol)


def bell_diagonal_state(params: BellDiagonalParams) -> np.ndarray:
    """rho = (1/4)(I + sum_j c_j sigma_j (x) sigma_j)."""
    from .states import PAULI

    if not params.is_physical():
        raise ValueError(
            f"unphysical Bell-diagonal parameters {params}: "
            f"populations {params.eigenvalues()}"
        )
    rho = np.eye(4, dtype=complex)
    for c, p in zip((params.c1, params.c2, params.c3), PAULI[1:]):
        rho += c * np.kron(p, p)
    return rho / 4.0


def obesity_bell_diagonal(params: BellDiagonalParams) -> float:
    """Omega = |c1 c2 c3|^(1/4) for a physical Bell-diagonal state."""
    if not params.is_physical():
        raise ValueError(f"unphysical Bell-diagonal parameters {params}")
    return abs(params.c1 * params.c2 * params.c3) ** 0.25
