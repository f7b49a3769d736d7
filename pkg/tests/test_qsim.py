import numpy as np
import pytest

from qubitnet import qsim


def random_gate(rng, n):
    kind = rng.choice(["ry", "rz", "u3", "cx"] if n > 1 else ["ry", "rz", "u3"])
    if kind == "cx":
        control, target = rng.choice(n, size=2, replace=False)
        return qsim.cx(int(control), int(target))
    q = int(rng.integers(n))
    angles = rng.uniform(-2 * np.pi, 2 * np.pi, size=3)
    if kind == "ry":
        return qsim.ry(angles[0], q)
    if kind == "rz":
        return qsim.rz(angles[0], q)
    return qsim.u3(angles[0], angles[1], angles[2], q)


def test_zero_state_one_qubit():
    s = qsim.new_zero_state(1)
    assert np.allclose(s.amplitudes, [1, 0])


def test_zero_state_two_qubits():
    s = qsim.new_zero_state(2)
    assert np.allclose(s.amplitudes, [1, 0, 0, 0])


def test_zero_state_ten_qubits():
    s = qsim.new_zero_state(10)
    assert len(s.amplitudes) == 1024
    assert s.amplitudes[0] == 1.0
    assert np.count_nonzero(s.amplitudes) == 1


@pytest.mark.parametrize("n", [0, -1, 21])
def test_zero_state_rejects_bad_size(n):
    with pytest.raises(ValueError):
        qsim.new_zero_state(n)


def test_ry_pi_flips():
    s = qsim.apply_gate(qsim.new_zero_state(1), qsim.ry(np.pi, 0))
    assert np.allclose(s.amplitudes, [0, 1], atol=1e-12)


def test_cx_truth_table():
    # |10> (qubit 0 set, control) -> |11>
    s = qsim.new_zero_state(2)
    s = qsim.apply_gate(s, qsim.ry(np.pi, 0))
    s = qsim.apply_gate(s, qsim.cx(0, 1))
    expected = np.zeros(4)
    expected[3] = 1.0
    assert np.allclose(np.abs(s.amplitudes) ** 2, expected, atol=1e-12)


def test_cx_control_off_is_noop():
    s = qsim.apply_gate(qsim.new_zero_state(2), qsim.cx(0, 1))
    assert np.allclose(s.amplitudes, [1, 0, 0, 0])


def test_cx_rejects_equal_control_target():
    with pytest.raises(ValueError):
        qsim.cx(1, 1)


def test_apply_gate_rejects_bad_index():
    with pytest.raises(IndexError):
        qsim.apply_gate(qsim.new_zero_state(2), qsim.ry(0.5, 2))


def test_prob_one_zero_state():
    assert qsim.prob_one(qsim.new_zero_state(1), 0) == 0.0


def test_prob_one_equal_superposition():
    s = qsim.apply_gate(qsim.new_zero_state(1), qsim.ry(np.pi / 2, 0))
    assert abs(qsim.prob_one(s, 0) - 0.5) < 1e-12


@pytest.mark.parametrize("theta", [0.3, 1.1, 2.7])
def test_prob_one_matches_closed_form(theta):
    s = qsim.apply_gate(qsim.new_zero_state(1), qsim.ry(theta, 0))
    assert abs(qsim.prob_one(s, 0) - np.sin(theta / 2) ** 2) < 1e-12


def test_prob_one_rejects_bad_index():
    with pytest.raises(IndexError):
        qsim.prob_one(qsim.new_zero_state(2), 5)


def test_gate_matrices_are_unitary():
    rng = np.random.default_rng(7)
    for _ in range(50):
        g = random_gate(rng, 3)
        mat = qsim.gate_full_matrix(3, g)
        assert np.allclose(mat @ mat.conj().T, np.eye(8), atol=1e-12)


def test_dense_oracle_single_ry():
    s = qsim.dense_oracle(1, [qsim.ry(np.pi, 0)])
    assert np.allclose(s.amplitudes, [0, 1], atol=1e-12)


def test_dense_oracle_cx_after_flip():
    s = qsim.dense_oracle(2, [qsim.ry(np.pi, 0), qsim.cx(0, 1)])
    assert np.allclose(np.abs(s.amplitudes) ** 2, [0, 0, 0, 1], atol=1e-12)


def test_dense_oracle_rejects_large_register():
    with pytest.raises(ValueError):
        qsim.dense_oracle(5, [])


def test_oracle_equivalence_random_circuits():
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(1, 4))
        gates = [random_gate(rng, n) for _ in range(int(rng.integers(1, 31)))]
        fast = qsim.run_circuit(n, gates)
        slow = qsim.dense_oracle(n, gates)
        assert np.max(np.abs(fast.amplitudes - slow.amplitudes)) < 1e-10


def test_norm_preserved_under_random_gates():
    rng = np.random.default_rng(3)
    state = qsim.new_zero_state(4)
    for _ in range(1000):
        state = qsim.apply_gate(state, random_gate(rng, 4))
        assert abs(state.norm_sq() - 1.0) < 1e-12


def test_u3_theta_only_equals_ry():
    rng = np.random.default_rng(11)
    for theta in rng.uniform(-2 * np.pi, 2 * np.pi, size=20):
        a = qsim.run_circuit(2, [qsim.ry(theta, 1)])
        b = qsim.run_circuit(2, [qsim.u3(theta, 0.0, 0.0, 1)])
        assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-12


def test_cx_is_involution():
    rng = np.random.default_rng(13)
    state = qsim.run_circuit(3, [random_gate(rng, 3) for _ in range(10)])
    twice = qsim.apply_gate(qsim.apply_gate(state, qsim.cx(0, 2)), qsim.cx(0, 2))
    assert np.max(np.abs(twice.amplitudes - state.amplitudes)) < 1e-12


def test_gate_is_local_on_product_states():
    # rotating qubit 0 must not move prob_one on qubits 1 and 2
    rng = np.random.default_rng(17)
    for _ in range(20):
        prep = [qsim.ry(rng.uniform(0, np.pi), q) for q in range(3)]
        state = qsim.run_circuit(3, prep)
        before = [qsim.prob_one(state, q) for q in (1, 2)]
        state = qsim.apply_gate(state, qsim.u3(*rng.uniform(-3, 3, 3), 0))
        after = [qsim.prob_one(state, q) for q in (1, 2)]
        assert np.allclose(before, after, atol=1e-12)


def test_sample_one_is_seeded_and_plausible():
    s = qsim.apply_gate(qsim.new_zero_state(1), qsim.ry(np.pi / 2, 0))
    a = qsim.sample_one(s, 0, shots=10000, seed=5)
    b = qsim.sample_one(s, 0, shots=10000, seed=5)
    assert a == b
    assert abs(a - 0.5) < 0.05
