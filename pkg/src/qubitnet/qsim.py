"""Exact statevector simulator for small qubit registers.

Conventions, fixed once and used everywhere:
- qubit 0 is the least-significant bit of the basis-state index
- U3(theta, phi, lam) = [[cos t/2, -e^{i lam} sin t/2],
                         [e^{i phi} sin t/2, e^{i(phi+lam)} cos t/2]]
- RY(theta) = U3(theta, 0, 0); RZ(phi) = diag(1, e^{i phi})

Probabilities are computed exactly from amplitudes. A seeded shot-sampling
helper exists for demonstration only and is never used in training.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 20
ORACLE_MAX_QUBITS = 4


@dataclass(frozen=True)
class Gate:
    """A single circuit element: 'ry', 'rz', 'u3' or 'cx'.

    `qubits` holds (target,) for rotations and (control, target) for cx.
    `angles` holds the rotation angles in radians (empty for cx).
    """

    kind: str
    qubits: tuple[int, ...]
    angles: tuple[float, ...] = ()

    def matrix(self) -> np.ndarray:
        """2x2 matrix for single-qubit gates; raises for cx."""
        if self.kind == "ry":
            return u3_matrix(self.angles[0], 0.0, 0.0)
        if self.kind == "rz":
            return np.array([[1.0, 0.0], [0.0, np.exp(1j * self.angles[0])]])
        if self.kind == "u3":
            return u3_matrix(*self.angles)
        raise ValueError(f"gate kind {self.kind!r} has no 2x2 matrix")


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def ry(theta: float, qubit: int) -> Gate:
    return Gate("ry", (qubit,), (float(theta),))


def rz(phi: float, qubit: int) -> Gate:
    return Gate("rz", (qubit,), (float(phi),))


def u3(theta: float, phi: float, lam: float, qubit: int) -> Gate:
    return Gate("u3", (qubit,), (float(theta), float(phi), float(lam)))


def cx(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError("cx control and target must differ")
    return Gate("cx", (control, target))


@dataclass
class StateVector:
    """2^n complex amplitudes of an n-qubit register."""

    n_qubits: int
    amplitudes: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.amplitudes is not None and len(self.amplitudes) != 2**self.n_qubits:
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got {len(self.amplitudes)}"
            )

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def new_zero_state(n_qubits: int) -> StateVector:
    """|0...0> on n_qubits. Rejects registers larger than MAX_QUBITS."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _check_qubit(state: StateVector, q: int):
    if not 0 <= q < state.n_qubits:
        raise IndexError(f"qubit {q} out of range for {state.n_qubits}-qubit state")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate, returning a new StateVector. Norm is preserved."""
    n = state.n_qubits
    for q in gate.qubits:
        _check_qubit(state, q)
    psi = state.amplitudes.reshape([2] * n)
    if gate.kind == "cx":
        control, target = gate.qubits
        # numpy axis for qubit q (qubit 0 = least-significant bit)
        ac, at = n - 1 - control, n - 1 - target
        psi = psi.copy()
        on = [slice(None)] * n
        on[ac] = 1
        lo, hi = list(on), list(on)
        lo[at], hi[at] = 0, 1
        lo, hi = tuple(lo), tuple(hi)
        psi[lo], psi[hi] = psi[hi].copy(), psi[lo].copy()
    else:
        ax = n - 1 - gate.qubits[0]
        psi = np.moveaxis(psi, ax, -1)
        psi = psi @ gate.matrix().T
        psi = np.moveaxis(psi, -1, ax)
    return StateVector(n, np.ascontiguousarray(psi.reshape(-1)))


def run_circuit(n_qubits: int, gates) -> StateVector:
    """Apply a gate sequence to |0...0>."""
    state = new_zero_state(n_qubits)
    for g in gates:
        state = apply_gate(state, g)
    return state


def prob_one(state: StateVector, qubit: int) -> float:
    """Exact Born probability of measuring 1 on `qubit`."""
    _check_qubit(state, qubit)
    psi = state.amplitudes.reshape([2] * state.n_qubits)
    ax = state.n_qubits - 1 - qubit
    sel = [slice(None)] * state.n_qubits
    sel[ax] = 1
    block = psi[tuple(sel)]
    return float(np.sum(np.abs(block) ** 2))


def sample_one(state: StateVector, qubit: int, shots: int, seed: int) -> float:
    """Seeded shot-sampling estimate of prob_one; demonstration only."""
    p = prob_one(state, qubit)
    rng = np.random.default_rng(seed)
    return float(rng.binomial(shots, p) / shots)


def gate_full_matrix(n_qubits: int, gate: Gate) -> np.ndarray:
    """Dense 2^n x 2^n matrix of `gate` acting on an n-qubit register."""
    dim = 2**n_qubits
    if gate.kind == "cx":
        control, target = gate.qubits
        mat = np.zeros((dim, dim), dtype=complex)
        for j in range(dim):
            out = j ^ (1 << target) if (j >> control) & 1 else j
            mat[out, j] = 1.0
        return mat
    # Kronecker order: qubit n-1 is the most-significant factor
    mat = np.array([[1.0]], dtype=complex)
    for q in range(n_qubits - 1, -1, -1):
        factor = gate.matrix() if q == gate.qubits[0] else np.eye(2, dtype=complex)
        mat = np.kron(mat, factor)
    return mat


def dense_oracle(n_qubits: int, gates) -> StateVector:
    """Brute-force oracle: full-matrix products applied to |0...0>.

    O(4^n) memory, so capped at ORACLE_MAX_QUBITS. Exists purely as an
    independent cross-check of apply_gate.
    """
    if not 1 <= n_qubits <= ORACLE_MAX_QUBITS:
        raise ValueError(f"dense oracle supports 1..{ORACLE_MAX_QUBITS} qubits")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    for g in gates:
        amps = gate_full_matrix(n_qubits, g) @ amps
    return StateVector(n_qubits, amps)
