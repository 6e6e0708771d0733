"""Dense gate-level simulation, pure and noisy.

Statevectors live as (2,)*n tensors with qubit 0 on axis 0; density
matrices carry row axes 0..n-1 and column axes n..2n-1.  Depolarizing noise
acts after every gate on exactly that gate's qubits.  Expectation values
trace the ancilla block out of the output state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit
from .qubitop import QubitOperator

MAX_QUBITS = 12


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate depolarizing probabilities (p1 single-, p2 two-qubit)."""

    p1: float = 1e-3
    p2: float = 1e-2

    def __post_init__(self):
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("depolarizing probabilities must lie in [0, 1]")

    @property
    def is_zero(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0


_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def _rotation(kind: str, angle: float) -> np.ndarray:
    half = 0.5 * angle
    if kind == "RX":
        return np.array(
            [[np.cos(half), -1j * np.sin(half)], [-1j * np.sin(half), np.cos(half)]]
        )
    if kind == "RZ":
        return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]])
    raise ValueError(f"unknown rotation {kind!r}")


def _gate_unitaries(circuit: Circuit, params: np.ndarray):
    if len(params) != circuit.n_params:
        raise ValueError(
            f"expected {circuit.n_params} parameters, got {len(params)}"
        )
    for g in circuit.gates:
        if g.kind == "CNOT":
            yield g, _CNOT
        else:
            angle = g.angle if g.parameter_slot is None else params[g.parameter_slot]
            yield g, _rotation(g.kind, float(angle))


def _apply_1q(tensor, u, axis):
    out = np.tensordot(u, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _apply_2q(tensor, u4, ax1, ax2):
    u = u4.reshape(2, 2, 2, 2)
    out = np.tensordot(u, tensor, axes=([2, 3], [ax1, ax2]))
    return np.moveaxis(out, [0, 1], [ax1, ax2])


def run_pure(circuit: Circuit, params) -> np.ndarray:
    """Statevector after applying the circuit to |0...0>, flattened."""
    n = circuit.n_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")
    params = np.asarray(params, dtype=float)
    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1.0
    for gate, u in _gate_unitaries(circuit, params):
        if gate.kind == "CNOT":
            state = _apply_2q(state, u, gate.qubits[0], gate.qubits[1])
        else:
            state = _apply_1q(state, u, gate.qubits[0])
    return state.reshape(-1)


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVW"


def _batched_rotation(kind: str, angles: np.ndarray) -> np.ndarray:
    half = 0.5 * angles
    u = np.empty((len(angles), 2, 2), dtype=complex)
    if kind == "RX":
        c, s = np.cos(half), -1j * np.sin(half)
        u[:, 0, 0] = c
        u[:, 0, 1] = s
        u[:, 1, 0] = s
        u[:, 1, 1] = c
    else:
        u[:, 0, 0] = np.exp(-1j * half)
        u[:, 0, 1] = 0.0
        u[:, 1, 0] = 0.0
        u[:, 1, 1] = np.exp(1j * half)
    return u


def run_pure_batch(circuit: Circuit, params_batch) -> np.ndarray:
    """Statevectors for a batch of parameter vectors in one tensor pass.

    Returns shape (batch, 2**n).  Matches run_pure row by row; the batch
    dimension amortizes the per-gate dispatch overhead, which is what makes
    parameter-shift gradients cheap.
    """
    params_batch = np.asarray(params_batch, dtype=float)
    if params_batch.ndim != 2 or params_batch.shape[1] != circuit.n_params:
        raise ValueError(f"expected (batch, {circuit.n_params}) parameters")
    n = circuit.n_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")
    b = params_batch.shape[0]
    state = np.zeros((b,) + (2,) * n, dtype=complex)
    state[(slice(None),) + (0,) * n] = 1.0
    axes = _LETTERS[:n]
    for g in circuit.gates:
        if g.kind == "CNOT":
            q1, q2 = g.qubits
            sub = f"xyuv,z{axes.replace(axes[q1], 'u').replace(axes[q2], 'v')}->z{axes.replace(axes[q1], 'x').replace(axes[q2], 'y')}"
            state = np.einsum(sub, _CNOT.reshape(2, 2, 2, 2), state)
        else:
            (q,) = g.qubits
            if g.parameter_slot is None:
                u = _rotation(g.kind, float(g.angle))
                sub = f"xy,z{axes.replace(axes[q], 'y')}->z{axes.replace(axes[q], 'x')}"
                state = np.einsum(sub, u, state)
            else:
                u = _batched_rotation(g.kind, params_batch[:, g.parameter_slot])
                sub = f"zxy,z{axes.replace(axes[q], 'y')}->z{axes.replace(axes[q], 'x')}"
                state = np.einsum(sub, u, state)
    return state.reshape(b, -1)


def _depolarize(rho, n: int, qubits: tuple[int, ...], p: float):
    """(1-p) rho + p * (I/2^k on `qubits`) x tr_qubits(rho), in tensor form."""
    if p == 0.0:
        return rho
    k = len(qubits)
    reduced = rho
    removed = 0
    for q in sorted(qubits):
        m = n - removed
        reduced = np.trace(reduced, axis1=q - removed, axis2=m + q - removed)
        removed += 1
    eye = np.eye(1 << k, dtype=complex).reshape((2,) * (2 * k)) / (1 << k)
    mixed = np.multiply.outer(eye, reduced)
    # outer axes: [q rows, q cols, rest rows, rest cols]; send each back home
    qs = sorted(qubits)
    rest = [q for q in range(n) if q not in qubits]
    destination = [*qs, *(n + q for q in qs), *rest, *(n + q for q in rest)]
    mixed = np.moveaxis(mixed, list(range(2 * n)), destination)
    return (1.0 - p) * rho + p * mixed


def run_noisy(circuit: Circuit, params, noise: NoiseModel) -> np.ndarray:
    """Density matrix (2^n x 2^n) after gate-wise depolarizing evolution."""
    n = circuit.n_qubits
    if n > MAX_QUBITS // 2 + 2:
        raise ValueError(f"{n} qubits is past the dense density-matrix cap")
    params = np.asarray(params, dtype=float)
    rho = np.zeros((2,) * (2 * n), dtype=complex)
    rho[(0,) * (2 * n)] = 1.0
    for gate, u in _gate_unitaries(circuit, params):
        if gate.kind == "CNOT":
            q1, q2 = gate.qubits
            rho = _apply_2q(rho, u, q1, q2)
            rho = _apply_2q(rho, u.conj(), n + q1, n + q2)
            rho = _depolarize(rho, n, (q1, q2), noise.p2)
        else:
            (q,) = gate.qubits
            rho = _apply_1q(rho, u, q)
            rho = _apply_1q(rho, u.conj(), n + q)
            rho = _depolarize(rho, n, (q,), noise.p1)
    return rho.reshape(1 << n, 1 << n)


def partial_trace(rho: np.ndarray, traced_qubits) -> np.ndarray:
    """Reduced density matrix over the untraced qubits, order preserved."""
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if rho.shape != (dim, dim) or (1 << n) != dim:
        raise ValueError("density matrix must be square with power-of-two size")
    traced = sorted(set(int(q) for q in traced_qubits))
    for q in traced:
        if not 0 <= q < n:
            raise ValueError(f"traced qubit {q} outside [0, {n})")
    tensor = rho.reshape((2,) * (2 * n))
    removed = 0
    for q in traced:
        m = n - removed
        tensor = np.trace(tensor, axis1=q - removed, axis2=m + q - removed)
        removed += 1
    m = n - removed
    return tensor.reshape(1 << m, 1 << m)


def expectation_batch(op: QubitOperator, circuit: Circuit, params_batch) -> np.ndarray:
    """Noiseless expectation values for a batch of parameter vectors."""
    ns, na = circuit.n_system, circuit.n_ancilla
    for term in op.terms:
        for q, _ in term:
            if q >= ns:
                raise ValueError(f"operator touches ancilla qubit {q}")
    h = op.matrix(ns)
    psi = run_pure_batch(circuit, params_batch).reshape(-1, 1 << ns, 1 << na)
    values = np.einsum("zik,ij,zjk->z", psi.conj(), h, psi)
    if np.abs(values.imag).max(initial=0.0) > 1e-9:
        raise ValueError("imaginary expectation residue above 1e-9")
    return values.real


def expectation(
    op: QubitOperator,
    circuit: Circuit,
    params,
    noise: NoiseModel | None = None,
) -> float:
    """Tr(H rho_system) for the circuit output, ancilla traced out."""
    ns, na = circuit.n_system, circuit.n_ancilla
    for term in op.terms:
        for q, _ in term:
            if q >= ns:
                raise ValueError(f"operator touches ancilla qubit {q}")
    h = op.matrix(ns)
    if noise is None or noise.is_zero:
        psi = run_pure(circuit, params).reshape(1 << ns, 1 << na)
        value = complex(np.einsum("ik,ij,jk->", psi.conj(), h, psi))
    else:
        rho = run_noisy(circuit, params, noise)
        rho_sys = partial_trace(rho, range(ns, ns + na))
        value = complex(np.trace(h @ rho_sys))
    if abs(value.imag) > 1e-9:
        raise ValueError(f"imaginary expectation residue {value.imag:.2e}")
    return float(value.real)
