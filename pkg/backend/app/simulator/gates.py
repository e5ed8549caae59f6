"""
Gate matrices.

Conventions: U_x(a) = exp(-i a X / 2), U_z(a) = exp(-i a Z / 2) and the
Euler rotation U_R(xi, eta, zeta) = U_x(zeta) U_z(eta) U_x(xi). Two-qubit
matrices list the first operand as the most significant qubit.
"""

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


def ux(angle: float) -> np.ndarray:
    c = np.cos(angle / 2)
    s = np.sin(angle / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def uz(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def euler_matrix(xi: float, eta: float, zeta: float) -> np.ndarray:
    return ux(zeta) @ uz(eta) @ ux(xi)


def pauli_power(x: int, z: int) -> np.ndarray:
    """X^x Z^z."""
    result = IDENTITY
    if x:
        result = result @ PAULI_X
    if z:
        result = result @ PAULI_Z
    return result


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True if a = e^{i phi} b for some phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    index = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[index]) < tol:
        return bool(np.allclose(a, 0, atol=tol))
    phase = a[index] / b[index]
    if abs(abs(phase) - 1) > 1e-6:
        return False
    return bool(np.allclose(a, phase * b, atol=tol))
