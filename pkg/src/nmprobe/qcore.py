"""Dense complex linear algebra for 1-3 qubit states.

Everything is a plain complex128 ndarray. Qubit index 0 is the most
significant bit of the computational basis label, so on two qubits
|10> means qubit 0 excited, qubit 1 in the ground state.

Validation of inputs (unitarity, Hermiticity, trace) runs through
``assert`` so that ``python -O`` strips it from the hot path.
"""

from __future__ import annotations

import numpy as np

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)

_ATOL = 1e-12


def is_unitary(U: np.ndarray, atol: float = _ATOL) -> bool:
    U = np.asarray(U)
    return (U.ndim == 2 and U.shape[0] == U.shape[1]
            and np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) < atol)


def is_density(rho: np.ndarray, atol: float = _ATOL) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) >= atol:
        return False
    if abs(np.trace(rho).real - 1.0) >= atol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() > -1e-10)


def ket(bits: str) -> np.ndarray:
    """Computational basis state, e.g. ket("10")."""
    n = len(bits)
    v = np.zeros(2 ** n, dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    return np.outer(state, state.conj())


def bell_phi_plus() -> np.ndarray:
    """Density matrix of (|00> + |11>)/sqrt(2)."""
    return density((ket("00") + ket("11")) / np.sqrt(2.0))


def ry(theta: float) -> np.ndarray:
    """Rotation about the y axis: [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]."""
    if not np.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def op_on(U: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator on `qubit` of an n-qubit register."""
    if not 0 <= qubit < n:
        raise ValueError(f"qubit index {qubit} out of range for {n} qubits")
    out = np.array([[1.0 + 0j]])
    for k in range(n):
        out = np.kron(out, U if k == qubit else ID2)
    return out


def controlled(U: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    """Controlled-U on an n-qubit register.

    Identity when the control qubit is |0>, U on the target when it is |1>.
    """
    if control == target:
        raise ValueError("control and target must differ")
    for idx in (control, target):
        if not 0 <= idx < n:
            raise ValueError(f"qubit index {idx} out of range for {n} qubits")
    U = np.asarray(U, dtype=complex)
    assert is_unitary(U), "controlled() requires a unitary block"
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    # control projector decomposition: P0 x I + P1 x U
    cbit = n - 1 - control  # bit position of control in the basis label
    p0 = np.zeros((dim, dim), dtype=complex)
    mask = []
    for k in range(dim):
        if (k >> cbit) & 1:
            mask.append(k)
        else:
            p0[k, k] = 1.0
    out += p0
    Ut = op_on(U, target, n)
    for k in mask:
        out[:, k] = Ut[:, k]
    return out


def apply_unitary(rho: np.ndarray, U: np.ndarray) -> np.ndarray:
    if rho.shape != U.shape:
        raise ValueError(f"dimension mismatch: state {rho.shape}, gate {U.shape}")
    assert is_unitary(U)
    return U @ rho @ U.conj().T


def partial_trace(rho: np.ndarray, keep: tuple[int, ...] | list[int]) -> np.ndarray:
    """Trace out every qubit not in `keep`; qubit order inside `keep` is preserved
    in ascending-index order."""
    keep = tuple(sorted(set(keep)))
    n = int(round(np.log2(rho.shape[0])))
    if not keep or any(q < 0 or q >= n for q in keep):
        raise ValueError(f"invalid subsystem set {keep} for {n} qubits")
    if len(keep) == n:
        return rho
    tr = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # descending order keeps lower ket/bra axis pairs aligned at (q, q + half)
    for q in sorted(tr, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + (t.ndim // 2))
    d = 2 ** len(keep)
    return t.reshape(d, d)


def expectation(rho: np.ndarray, obs: np.ndarray) -> float:
    if rho.shape != obs.shape:
        raise ValueError(f"dimension mismatch: state {rho.shape}, observable {obs.shape}")
    assert np.max(np.abs(obs - np.conj(obs.T))) < _ATOL, "observable must be Hermitian"
    val = np.trace(rho @ obs)
    assert abs(val.imag) < 1e-10, f"expectation has imaginary residue {val.imag}"
    return float(val.real)
