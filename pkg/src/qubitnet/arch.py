"""Circuit architectures and the forward pass.

Two templates:

- PartialChain: per layer, one RY per qubit followed by a linear CX chain
  (qubit i controls i+1). Parameter count = n_layers * n_qubits.
- FullyEntangled: per layer, for each ordered pair (i, j) with i != j in
  lexicographic order, CX(i, j) then a U3 on j. Parameter count =
  3 * n_qubits * (n_qubits - 1) * n_layers.

The input is encoded as an initial RY(angle) on each qubit; the prediction
is the probability of measuring 1 on the last qubit (index n-1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qsim

PARTIAL_CHAIN = "partial-chain"
FULLY_ENTANGLED = "fully-entangled"
TOPOLOGIES = (PARTIAL_CHAIN, FULLY_ENTANGLED)


@dataclass(frozen=True)
class Architecture:
    n_qubits: int
    n_layers: int
    topology: str = PARTIAL_CHAIN

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if self.n_layers < 1:
            raise ValueError("n_layers must be >= 1")


def param_count(arch: Architecture) -> int:
    if arch.topology == PARTIAL_CHAIN:
        return arch.n_layers * arch.n_qubits
    return 3 * arch.n_qubits * (arch.n_qubits - 1) * arch.n_layers


def check_params(arch: Architecture, params: np.ndarray) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    expected = param_count(arch)
    if params.shape != (expected,):
        raise ValueError(
            f"expected {expected} parameters for {arch.topology} "
            f"n={arch.n_qubits} layers={arch.n_layers}, got shape {params.shape}"
        )
    return params


def check_input(arch: Architecture, angles: np.ndarray) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (arch.n_qubits,):
        raise ValueError(
            f"expected {arch.n_qubits} input angles, got shape {angles.shape}"
        )
    if np.any(angles < 0) or np.any(angles > np.pi):
        raise ValueError("input angles must lie in [0, pi]")
    return angles


def build_circuit(arch: Architecture, input_angles, params) -> list[qsim.Gate]:
    """Emit the gate sequence: encoding layer, then the entangling layers.

    Parameter consumption is layer-major, then qubit/pair order, so two
    builds with identical arguments are bit-identical.
    """
    angles = check_input(arch, input_angles)
    p = check_params(arch, params)
    n = arch.n_qubits
    gates = [qsim.ry(angles[q], q) for q in range(n)]
    k = 0
    for _ in range(arch.n_layers):
        if arch.topology == PARTIAL_CHAIN:
            for q in range(n):
                gates.append(qsim.ry(p[k], q))
                k += 1
            for q in range(n - 1):
                gates.append(qsim.cx(q, q + 1))
        else:
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    gates.append(qsim.cx(i, j))
                    gates.append(qsim.u3(p[k], p[k + 1], p[k + 2], j))
                    k += 3
    return gates


def forward(arch: Architecture, input_angles, params) -> float:
    """Predicted label: prob of 1 on the last qubit after the circuit."""
    gates = build_circuit(arch, input_angles, params)
    state = qsim.run_circuit(arch.n_qubits, gates)
    return qsim.prob_one(state, arch.n_qubits - 1)


def _batch_apply_1q(psi: np.ndarray, mats: np.ndarray, qubit: int, n: int) -> np.ndarray:
    # psi: (B, 2^n), mats: (B, 2, 2); qubit 0 is the LSB of the basis index
    b = psi.shape[0]
    t = psi.reshape(b, 2 ** (n - 1 - qubit), 2, 2**qubit)
    t0, t1 = t[:, :, 0, :], t[:, :, 1, :]
    coef = mats.reshape(b, 2, 2, 1, 1)
    out = np.empty_like(t)
    out[:, :, 0, :] = coef[:, 0, 0] * t0 + coef[:, 0, 1] * t1
    out[:, :, 1, :] = coef[:, 1, 0] * t0 + coef[:, 1, 1] * t1
    return out.reshape(b, -1)


from functools import lru_cache


@lru_cache(maxsize=None)
def _cx_permutation(n: int, control: int, target: int) -> np.ndarray:
    indices = np.arange(2**n)
    control_on = (indices >> control) & 1 == 1
    return np.where(control_on, indices ^ (1 << target), indices)


def _batch_apply_cx(psi: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    return psi[:, _cx_permutation(n, control, target)]


def _ry_mats(thetas: np.ndarray) -> np.ndarray:
    c, s = np.cos(thetas / 2.0), np.sin(thetas / 2.0)
    mats = np.empty((len(thetas), 2, 2), dtype=complex)
    mats[:, 0, 0], mats[:, 0, 1] = c, -s
    mats[:, 1, 0], mats[:, 1, 1] = s, c
    return mats


def _u3_mats(thetas, phis, lams) -> np.ndarray:
    c, s = np.cos(thetas / 2.0), np.sin(thetas / 2.0)
    mats = np.empty((len(thetas), 2, 2), dtype=complex)
    mats[:, 0, 0] = c
    mats[:, 0, 1] = -np.exp(1j * lams) * s
    mats[:, 1, 0] = np.exp(1j * phis) * s
    mats[:, 1, 1] = np.exp(1j * (phis + lams)) * c
    return mats


def forward_batch(arch: Architecture, input_angles, param_rows: np.ndarray) -> np.ndarray:
    """forward() for many parameter vectors sharing one input, vectorized.

    Equivalent to [forward(arch, input_angles, row) for row in param_rows];
    exists so a finite-difference gradient's 2P evaluations run as one
    batched pass. Deterministic, independent of batch layout.
    """
    angles = check_input(arch, input_angles)
    rows = np.atleast_2d(np.asarray(param_rows, dtype=float))
    expected = param_count(arch)
    if rows.shape[1] != expected:
        raise ValueError(f"expected rows of {expected} parameters, got {rows.shape[1]}")
    b, n = rows.shape[0], arch.n_qubits
    psi = np.ones((1, 1), dtype=complex)
    for q in range(n):  # build the encoded product state, qubit n-1 as MSB
        half = angles[q] / 2.0
        two = np.array([np.cos(half), np.sin(half)], dtype=complex)
        psi = np.einsum("i,bj->bij", two, psi).reshape(1, -1)
    psi = np.broadcast_to(psi, (b, 2**n)).copy()
    k = 0
    for _ in range(arch.n_layers):
        if arch.topology == PARTIAL_CHAIN:
            for q in range(n):
                psi = _batch_apply_1q(psi, _ry_mats(rows[:, k]), q, n)
                k += 1
            for q in range(n - 1):
                psi = _batch_apply_cx(psi, q, q + 1, n)
        else:
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    psi = _batch_apply_cx(psi, i, j, n)
                    mats = _u3_mats(rows[:, k], rows[:, k + 1], rows[:, k + 2])
                    psi = _batch_apply_1q(psi, mats, j, n)
                    k += 3
    t = psi.reshape([b] + [2] * n)
    sel = [slice(None)] * (n + 1)
    sel[1] = 1  # axis 1 holds the last qubit (MSB)
    return np.sum(np.abs(t[tuple(sel)].reshape(b, -1)) ** 2, axis=1)
