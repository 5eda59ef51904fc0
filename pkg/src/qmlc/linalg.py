"""Dense complex matrix helpers on top of numpy.

Qubit ordering everywhere: wire 0 is the most significant bit of a basis
index.  Density matrices are vectorized by stacking columns, so the
superoperator of ``rho -> M rho M^dagger`` is ``kron(conj(M), M)``.
"""

from __future__ import annotations

import numpy as np

from .errors import SizeMismatch

CMatrix = np.ndarray

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)


def as_matrix(a) -> CMatrix:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise SizeMismatch(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(n: int) -> CMatrix:
    return np.eye(n, dtype=complex)


def mul(a: CMatrix, b: CMatrix) -> CMatrix:
    if a.shape[1] != b.shape[0]:
        raise SizeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(*ms: CMatrix) -> CMatrix:
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def adjoint(a: CMatrix) -> CMatrix:
    return a.conj().T


def norm_inf(a: CMatrix) -> float:
    """Largest absolute entry (0 for empty matrices)."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_unitary(u: CMatrix, tol: float = 1e-9) -> bool:
    u = np.asarray(u)
    return u.shape[0] == u.shape[1] and norm_inf(adjoint(u) @ u - identity(u.shape[0])) < tol


def is_isometry(v: CMatrix, tol: float = 1e-9) -> bool:
    return norm_inf(adjoint(v) @ v - identity(v.shape[1])) < tol


def partial_trace_last(rho: CMatrix, keep: int, drop: int) -> CMatrix:
    """Trace out the trailing ``drop`` qubits of a ``keep + drop`` qubit operator."""
    dk, dd = 2**keep, 2**drop
    if rho.shape != (dk * dd, dk * dd):
        raise SizeMismatch(f"operator of shape {rho.shape} is not on {keep}+{drop} qubits")
    return np.einsum("ajbj->ab", rho.reshape(dk, dd, dk, dd))


def vec(rho: CMatrix) -> np.ndarray:
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> CMatrix:
    return np.asarray(v).reshape(dim, dim, order="F")


def conjugation_superop(m: CMatrix) -> CMatrix:
    return np.kron(m.conj(), m)


def equal_up_to_phase(a: CMatrix, b: CMatrix, tol: float = 1e-9) -> bool:
    """True when ``a = e^{i phi} b`` for some global phase, entrywise within ``tol``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < tol:
        return norm_inf(a) < tol
    phase = a[k] / b[k]
    if abs(abs(phase) - 1) > tol:
        return False
    return norm_inf(a - phase * b) < tol
