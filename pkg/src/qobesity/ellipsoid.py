"""Quantum steering ellipsoids of two-qubit states.

Measuring party B along direction n and post-selecting steers party A's
Bloch vector to

    a' = (a + T n) / (1 + b . n),        p(n) = (1 + b . n)/2 ,

and as n sweeps the unit sphere the image is an ellipsoid with

    center  c = gamma_b (a - T b)
    shape   Q = gamma_b (T - a b^T)(I + gamma_b b b^T)(T^T - b a^T)

where gamma_b = 1/(1 - |b|^2).  Semiaxes are the square roots of Q's
eigenvalues.  The volume obeys the exact identity

    (4 pi / 3) sqrt(det Q) = (4 pi / 3) gamma_b^2 |det R| ,

i.e. V = (4 pi/3) gamma_b^2 Omega^4.  (With the Lorentz-factor
convention gamma = (1 - b^2)^(-1/2) the same identity reads gamma^4;
this module uses gamma_b = (1 - b^2)^(-1) throughout.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import PAULI, correlation_matrix

__all__ = [
    "SteeringEllipsoid",
    "SingularMarginalError",
    "gamma_b",
    "steering_ellipsoid",
    "ellipsoid_volume",
    "steered_bloch_vector",
]

_PURE_MARGINAL_TOL = 1e-9


class SingularMarginalError(ValueError):
    """The non-steered marginal is (numerically) pure, so gamma_b diverges
    and the steering ellipsoid degenerates."""


def _gamma(bloch: np.ndarray) -> float:
    b2 = float(bloch @ bloch)
    if b2 >= (1.0 - _PURE_MARGINAL_TOL) ** 2:
        raise SingularMarginalError(
            f"|b| = {np.sqrt(b2):.12f} is too close to 1 (pure marginal)"
        )
    return 1.0 / (1.0 - b2)


def gamma_b(rho: np.ndarray) -> float:
    """gamma_b = 1/(1 - |b|^2) >= 1 from party B's Bloch vector."""
    return _gamma(correlation_matrix(rho).b)


@dataclass(frozen=True)
class SteeringEllipsoid:
    """Steering ellipsoid: center, shape matrix and derived geometry."""

    center: np.ndarray
    Q: np.ndarray
    semiaxes: np.ndarray        # descending
    orientation: np.ndarray     # columns are the axis directions
    gamma_b: float

    @property
    def volume(self) -> float:
        return (4.0 * np.pi / 3.0) * float(np.prod(self.semiaxes))

    def squared_radius(self, point: np.ndarray, degenerate_axis: float = 1e-6) -> float:
        """Squared ellipsoidal radius of ``point`` (1.0 = on the surface).

        Axes shorter than ``degenerate_axis`` are excluded from the
        inversion (the shape matrix is not invertible there); along those
        directions the offset itself must vanish at the same scale, else
        the point is reported as infinitely far outside.
        """
        d = self.orientation.T @ (np.asarray(point, dtype=float) - self.center)
        live = self.semiaxes > degenerate_axis
        if np.any(np.abs(d[~live]) > degenerate_axis):
            return np.inf
        if not np.any(live):
            return 0.0
        return float(np.sum((d[live] / self.semiaxes[live]) ** 2))


def steering_ellipsoid(rho: np.ndarray, steered_party: str = "A") -> SteeringEllipsoid:
    """Ellipsoid traced by the steered party under projective measurements
    on the other party.

    Raises ``SingularMarginalError`` when the measured party's marginal is
    pure (no steering possible, gamma diverges).
    """
    if steered_party not in ("A", "B"):
        raise ValueError("steered_party must be 'A' or 'B'")
    cm = correlation_matrix(rho)
    a, b, T = cm.a, cm.b, cm.T
    if steered_party == "B":
        a, b, T = b, a, T.T
    g = _gamma(b)
    center = g * (a - T @ b)
    M = T - np.outer(a, b)
    Q = g * M @ (np.eye(3) + g * np.outer(b, b)) @ M.T
    Q = 0.5 * (Q + Q.T)
    evals, evecs = np.linalg.eigh(Q)
    evals = np.where((evals < 0) & (evals > -1e-10), 0.0, evals)
    if evals.min() < 0:
        raise np.linalg.LinAlgError(f"shape matrix not PSD: eigenvalues {evals}")
    order = np.argsort(evals)[::-1]
    return SteeringEllipsoid(
        center=center,
        Q=Q,
        semiaxes=np.sqrt(evals[order]),
        orientation=evecs[:, order],
        gamma_b=g,
    )


def ellipsoid_volume(rho: np.ndarray, steered_party: str = "A") -> float:
    """Euclidean volume (4 pi/3) s1 s2 s3 of the steering ellipsoid,
    equal to (4 pi/3) gamma_b^2 Omega^4."""
    return steering_ellipsoid(rho, steered_party).volume


def steered_bloch_vector(rho: np.ndarray, n: np.ndarray):
    """Post-measurement Bloch vector of A after B measures along unit n.

    Returns ``(a_prime, prob)``.  Raises ``ValueError`` for an outcome of
    (numerically) zero probability.
    """
    n = np.asarray(n, dtype=float)
    cm = correlation_matrix(rho)
    prob = 0.5 * (1.0 + cm.b @ n)
    if prob <= 1e-12:
        raise ValueError(f"measurement outcome has vanishing probability {prob:.3e}")
    a_prime = (cm.a + cm.T @ n) / (2.0 * prob)
    return a_prime, prob


def steered_bloch_vector_projector(rho: np.ndarray, n: np.ndarray):
    """Same as :func:`steered_bloch_vector` via explicit projectors.

    Independent route kept for cross-validation: builds the projector
    (I + n.sigma)/2 on B, applies it, partial-traces and reads the Bloch
    vector of the conditional state of A.
    """
    n = np.asarray(n, dtype=float)
    rho = np.asarray(rho, dtype=complex)
    proj = 0.5 * (PAULI[0] + n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3])
    m = rho @ np.kron(np.eye(2), proj)
    prob = np.trace(m).real
    if prob <= 1e-12:
        raise ValueError(f"measurement outcome has vanishing probability {prob:.3e}")
    red = np.einsum("akbk->ab", m.reshape(2, 2, 2, 2)) / prob
    return np.array([np.trace(red @ p).real for p in PAULI[1:]]), prob
