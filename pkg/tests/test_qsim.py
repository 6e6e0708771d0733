import numpy as np
import pytest

from nisqchem.circuits import Circuit, Gate
from nisqchem.qsim import (
    NoiseModel,
    expectation,
    partial_trace,
    run_noisy,
    run_pure,
)
from nisqchem.qubitop import QubitOperator

from .oracles import PAULI, pauli_string_matrix


def _rx(theta):
    return np.cos(theta / 2) * PAULI["I"] - 1j * np.sin(theta / 2) * PAULI["X"]


def _rz(theta):
    return np.cos(theta / 2) * PAULI["I"] - 1j * np.sin(theta / 2) * PAULI["Z"]


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _embed(u, qubits, n):
    """Dense n-qubit matrix for a gate (qubit 0 most significant)."""
    if len(qubits) == 1:
        mats = [PAULI["I"]] * n
        mats[qubits[0]] = u
        out = np.array([[1.0 + 0j]])
        for m in mats:
            out = np.kron(out, m)
        return out
    # permute (q1,q2) to the most significant pair, apply, permute back
    q1, q2 = qubits
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - k)) & 1 for k in range(n)]
        sub = 2 * bits[q1] + bits[q2]
        for sub2 in range(4):
            amp = u[sub2, sub]
            if amp == 0:
                continue
            b2 = list(bits)
            b2[q1], b2[q2] = sub2 >> 1, sub2 & 1
            row = sum(b << (n - 1 - k) for k, b in enumerate(b2))
            out[row, col] += amp
    return out


def _random_circuit(rng, n_qubits, n_gates, n_params=0):
    gates = []
    for _ in range(n_gates):
        kind = rng.choice(["RX", "RZ", "CNOT"])
        if kind == "CNOT" and n_qubits >= 2:
            q1, q2 = rng.choice(n_qubits, size=2, replace=False)
            gates.append(Gate("CNOT", (int(q1), int(q2))))
        else:
            kind = rng.choice(["RX", "RZ"])
            gates.append(Gate(kind, (int(rng.integers(n_qubits)),),
                              angle=float(rng.uniform(-np.pi, np.pi))))
    return Circuit(n_system=n_qubits, n_ancilla=0, gates=tuple(gates), n_params=n_params)


def test_rx_pi_flips_qubit():
    c = Circuit(1, 0, (Gate("RX", (0,), angle=np.pi),), 0)
    psi = run_pure(c, [])
    np.testing.assert_allclose(psi, [0.0, -1j], atol=1e-12)


def test_empty_circuit_is_vacuum():
    c = Circuit(2, 1, (), 0)
    psi = run_pure(c, [])
    expected = np.zeros(8)
    expected[0] = 1.0
    np.testing.assert_allclose(psi, expected)


def test_parameter_count_mismatch():
    c = Circuit(1, 0, (Gate("RX", (0,), parameter_slot=0),), 1)
    with pytest.raises(ValueError, match="parameters"):
        run_pure(c, [])


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_run_pure_matches_dense_matrix_chain(seed):
    rng = np.random.default_rng(seed)
    c = _random_circuit(rng, 3, 12)
    psi = run_pure(c, [])
    u = np.eye(8, dtype=complex)
    for g in c.gates:
        if g.kind == "CNOT":
            u = _embed(CNOT, g.qubits, 3) @ u
        elif g.kind == "RX":
            u = _embed(_rx(g.angle), g.qubits, 3) @ u
        else:
            u = _embed(_rz(g.angle), g.qubits, 3) @ u
    np.testing.assert_allclose(psi, u[:, 0], atol=1e-12)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-10)


def test_noiseless_density_equals_pure_projector():
    rng = np.random.default_rng(7)
    c = _random_circuit(rng, 3, 10)
    psi = run_pure(c, [])
    rho = run_noisy(c, [], NoiseModel(0.0, 0.0))
    np.testing.assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-10)


def test_full_depolarization_single_qubit():
    c = Circuit(1, 0, (Gate("RX", (0,), angle=1.234),), 0)
    rho = run_noisy(c, [], NoiseModel(p1=1.0, p2=0.0))
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)


def test_cnot_depolarizing_matches_hand_composition():
    theta = 0.9
    p2 = 0.1
    c = Circuit(2, 0, (Gate("RX", (0,), angle=theta), Gate("CNOT", (0, 1))), 0)
    rho = run_noisy(c, [], NoiseModel(p1=0.0, p2=p2))
    u1 = _embed(_rx(theta), (0,), 2)
    psi = (CNOT @ u1)[:, 0]
    pure = np.outer(psi, psi.conj())
    expected = (1 - p2) * pure + p2 * np.eye(4) / 4
    np.testing.assert_allclose(rho, expected, atol=1e-12)


def test_channel_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(11)
    for p in (0.0, 0.05, 1.0):
        c = _random_circuit(rng, 3, 14)
        rho = run_noisy(c, [], NoiseModel(p1=p, p2=p))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-10)
        evals = np.linalg.eigvalsh(rho)
        assert evals.min() > -1e-9


def test_partial_trace_product_state():
    rho_a = np.array([[0.75, 0.1], [0.1, 0.25]], dtype=complex)
    rho_b = np.array([[0.5, 0.2j], [-0.2j, 0.5]], dtype=complex)
    rho = np.kron(rho_a, rho_b)
    np.testing.assert_allclose(partial_trace(rho, [1]), rho_a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, [0]), rho_b, atol=1e-12)


def test_partial_trace_bell_state():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    for q in (0, 1):
        np.testing.assert_allclose(partial_trace(rho, [q]), np.eye(2) / 2, atol=1e-12)


def test_partial_trace_matches_contraction_oracle():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    got = partial_trace(rho, [1])
    t = rho.reshape(2, 2, 2, 2, 2, 2)
    # direct index contraction over qubit 1 (row axis 1, col axis 4)
    expected = np.einsum("aibcid->abcd", t).reshape(4, 4)
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_partial_trace_all_qubits():
    rho = np.eye(4, dtype=complex) / 4
    out = partial_trace(rho, [0, 1])
    np.testing.assert_allclose(out, [[1.0]], atol=1e-12)


def test_expectation_z_after_rx_pi():
    c = Circuit(1, 0, (Gate("RX", (0,), angle=np.pi),), 0)
    z = QubitOperator({((0, "Z"),): 1.0})
    assert expectation(z, c, []) == pytest.approx(-1.0, abs=1e-12)


def test_expectation_identity_returns_constant():
    rng = np.random.default_rng(5)
    c = _random_circuit(rng, 2, 8)
    op = QubitOperator.identity(2.5, n_qubits=2)
    assert expectation(op, c, []) == pytest.approx(2.5, abs=1e-12)
    assert expectation(op, c, [], NoiseModel(0.3, 0.3)) == pytest.approx(2.5, abs=1e-10)


def test_expectation_rejects_ancilla_operators():
    c = Circuit(1, 1, (), 0)
    op = QubitOperator({((1, "Z"),): 1.0})
    with pytest.raises(ValueError, match="ancilla"):
        expectation(op, c, [])


@pytest.mark.parametrize("seed", [0, 5, 9])
def test_statevector_and_density_paths_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    c = _random_circuit(rng, n, 16)
    op = QubitOperator({})
    for _ in range(4):
        term = tuple(
            (int(q), str(rng.choice(list("XYZ"))))
            for q in rng.choice(n, size=min(2, n), replace=False)
        )
        op = op + QubitOperator({term: float(rng.uniform(-1, 1))})
    e_pure = expectation(op, c, [])
    rho = run_noisy(c, [], NoiseModel(0.0, 0.0))
    h = op.matrix(n)
    e_rho = float(np.trace(h @ rho).real)
    assert e_pure == pytest.approx(e_rho, abs=1e-10)


def test_expectation_with_ancilla_traces_correctly():
    # entangle system and ancilla, compare against explicit partial trace
    gates = (
        Gate("RX", (0,), angle=0.7),
        Gate("CNOT", (0, 1)),
        Gate("RZ", (0,), angle=0.3),
    )
    c = Circuit(1, 1, gates, 0)
    z = QubitOperator({((0, "Z"),): 1.0})
    psi = run_pure(c, [])
    rho_sys = partial_trace(np.outer(psi, psi.conj()), [1])
    expected = float(np.trace(PAULI["Z"] @ rho_sys).real)
    assert expectation(z, c, []) == pytest.approx(expected, abs=1e-12)
