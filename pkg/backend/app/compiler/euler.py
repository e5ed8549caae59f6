"""
Euler decomposition U = e^{i phi} U_x(zeta) U_z(eta) U_x(xi).

Conjugating by a Hadamard turns the x-z-x form into z-x-z, whose entries
give eta from the magnitudes and zeta +/- xi from the phases.
"""

import cmath
import math

import numpy as np

from app.constants import DEGENERATE_ANGLE_TOL, UNITARY_TOL
from app.exceptions import NonUnitaryError, NormalizationError
from app.simulator.gates import HADAMARD, euler_matrix
from app.utils import wrap_angle


def euler_decompose(unitary) -> tuple[float, float, float, float]:
    """Euler angles of a one-qubit unitary.

    Args:
        unitary: 2x2 unitary matrix

    Returns:
        tuple: (xi, eta, zeta, phi) with eta in [0, pi] and xi, zeta, phi in
        [-pi, pi)

    Raises:
        NonUnitaryError: If the matrix is not a 2x2 unitary within 1e-10
    """
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (2, 2) or not np.allclose(
        u.conj().T @ u, np.eye(2), atol=UNITARY_TOL
    ):
        raise NonUnitaryError("Euler decomposition needs a 2x2 unitary")
    v = HADAMARD @ u @ HADAMARD
    w = v / np.sqrt(np.linalg.det(v))
    eta = 2 * math.atan2(abs(w[1, 0]), abs(w[0, 0]))
    if math.sin(eta / 2) < DEGENERATE_ANGLE_TOL:
        xi = -2 * cmath.phase(w[0, 0])
        zeta = 0.0
    elif math.cos(eta / 2) < DEGENERATE_ANGLE_TOL:
        difference = 2 * (cmath.phase(w[1, 0]) + math.pi / 2)
        xi = -difference
        zeta = 0.0
    else:
        total = -2 * cmath.phase(w[0, 0])
        difference = 2 * (cmath.phase(w[1, 0]) + math.pi / 2)
        zeta = (total + difference) / 2
        xi = (total - difference) / 2
    xi = wrap_angle(xi)
    zeta = wrap_angle(zeta)
    overlap = np.trace(euler_matrix(xi, eta, zeta).conj().T @ u) / 2
    phi = wrap_angle(cmath.phase(overlap))
    return xi, eta, zeta, phi


def input_prep_angles(alpha: complex, beta: complex) -> tuple[float, float, float]:
    """Rotation angles taking |+> to alpha|0> + beta|1>.

    Raises:
        NormalizationError: If |alpha|^2 + |beta|^2 differs from 1 by more
            than 1e-10
    """
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > 1e-10:
        raise NormalizationError(f"Target state has norm {norm:.12f}, expected 1")
    target = np.array([alpha, beta], dtype=complex)
    orthogonal = np.array([np.conj(beta), -np.conj(alpha)], dtype=complex)
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / math.sqrt(2)
    unitary = np.outer(target, plus.conj()) + np.outer(orthogonal, minus.conj())
    xi, eta, zeta, _ = euler_decompose(unitary)
    return xi, eta, zeta
