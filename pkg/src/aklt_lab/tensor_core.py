"""Dense complex linear algebra and spin-1 operator constants.

Everything downstream works with small dense ``complex128`` arrays: 2x2
(virtual / edge-qubit), 3x3 (spin-1 physical) and the 4x4 and 9x9 objects
built from them.  Basis conventions fixed here and inherited everywhere:

* spin-1 basis ordered ``(|+1>, |0>, |-1>)`` (eigenbasis of Sz),
* spin-1/2 basis ordered ``(|up>, |down>)``.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-12

# ---------------------------------------------------------------------------
# constants

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_SQ2 = np.sqrt(2.0)

_SX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQ2
_SY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQ2
_SZ = np.diag([1.0, 0.0, -1.0]).astype(complex)

for _m in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, _SX, _SY, _SZ):
    _m.setflags(write=False)


def spin1_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-1 matrices (Sx, Sy, Sz) in the Sz eigenbasis (|+1>, |0>, |-1>)."""
    return _SX, _SY, _SZ


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def kron_all(ops) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left factor slowest."""
    out = np.array([[1.0 + 0.0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def is_hermitian(a: np.ndarray, atol: float = ATOL) -> bool:
    return bool(np.abs(a - a.conj().T).max() <= atol)


def is_unitary(a: np.ndarray, atol: float = ATOL) -> bool:
    d = a.shape[0]
    return bool(np.abs(a.conj().T @ a - np.eye(d)).max() <= atol)


def exp_i_pi_spin(axis_op: np.ndarray) -> np.ndarray:
    """exp(i*pi*axis_op) for a Hermitian operator, by spectral decomposition.

    Exact at machine precision for the small Hermitian matrices used here
    (integer-spin axis operators give involutive, real-spectrum results).
    """
    if not is_hermitian(axis_op, atol=1e-10):
        raise ValueError("axis operator must be Hermitian")
    w, v = np.linalg.eigh(axis_op)
    return (v * np.exp(1j * np.pi * w)) @ v.conj().T


def rotated_spin_ops(theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """In-plane rotated spin-1 operators (Sx~(theta), Sy~(theta), Sz).

    Sx~ = Sx cos(theta/2) + Sy sin(theta/2), Sy~ = -Sx sin(theta/2) + Sy cos(theta/2).
    """
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return c * _SX + s * _SY, -s * _SX + c * _SY, _SZ


def z2z2_unitaries() -> list[tuple[str, np.ndarray]]:
    """The canonical Z2xZ2 representation {1, e^{i pi Sx}, e^{i pi Sy}, e^{i pi Sz}}."""
    return [
        ("1", np.eye(3, dtype=complex)),
        ("x", exp_i_pi_spin(_SX)),
        ("y", exp_i_pi_spin(_SY)),
        ("z", exp_i_pi_spin(_SZ)),
    ]


def measurement_kets(theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Measurement-basis kets (alpha_theta, beta_theta, gamma).

    alpha_theta = (-e^{-i theta/2}|+1> + e^{i theta/2}|-1>)/sqrt(2)
    beta_theta  = ( e^{-i theta/2}|+1> + e^{i theta/2}|-1>)/sqrt(2)
    gamma       = |0>

    They are the zero-eigenvectors of Sx~(theta), Sy~(theta) and Sz.
    """
    em, ep = np.exp(-1j * theta / 2.0), np.exp(1j * theta / 2.0)
    alpha = np.array([-em, 0.0, ep], dtype=complex) / _SQ2
    beta = np.array([em, 0.0, ep], dtype=complex) / _SQ2
    gamma = np.array([0.0, 1.0, 0.0], dtype=complex)
    return alpha, beta, gamma


def hadamard_rotation_ops() -> tuple[np.ndarray, np.ndarray]:
    """(qubit, spin-1) rotations by pi about (x+z)/sqrt(2), exchanging x and z.

    Conjugation sends X<->Z and Y->-Y on the qubit, Sx<->Sz and Sy->-Sy on
    the spin-1.  Used to reduce the X-rotation pipeline to the Z one.
    """
    h2 = (PAULI_X + PAULI_Z) / _SQ2
    n_dot_s = (_SX + _SZ) / _SQ2
    h3 = exp_i_pi_spin(n_dot_s)
    return h2, h3
