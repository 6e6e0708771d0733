"""Ansatz circuit builders.

The ancilla-augmented ansatz (HAA) layers RZ-RX-RZ triplets over system
plus ancilla qubits followed by an entangling CNOT pass; the output state
is the ancilla partial trace taken later by the simulator.  The
hardware-efficient baseline (HEA) is the same template with no ancillas.
Parameter slots run layer-major, qubit-minor, triplet position last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuits import Circuit, Gate, LayerSpan

KINDS = ("HAA", "HEA")
ENTANGLERS = ("chain", "ring")


@dataclass(frozen=True)
class AnsatzSpec:
    n_system: int
    n_ancilla: int
    n_layers: int
    entangler: str = "chain"
    kind: str = "HAA"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ansatz kind {self.kind!r}")
        if self.entangler not in ENTANGLERS:
            raise ValueError(f"unknown entangler {self.entangler!r}")
        if self.n_system < 1:
            raise ValueError("need at least one system qubit")
        if self.n_layers < 1:
            raise ValueError("need at least one layer")
        if self.kind == "HEA" and self.n_ancilla != 0:
            raise ValueError("HEA takes no ancilla qubits")
        if self.n_ancilla < 0:
            raise ValueError("ancilla count must be non-negative")

    @property
    def template_qubits(self) -> int:
        return self.n_system + self.n_ancilla


def parameter_count(spec: AnsatzSpec) -> int:
    """3 rotations per template qubit per layer, all parameters fresh."""
    return 3 * spec.template_qubits * spec.n_layers


def build(spec: AnsatzSpec, initial_bits=None) -> Circuit:
    """Assemble the layered circuit.

    ``initial_bits`` optionally prepends bound RX(pi) flips on system
    qubits to prepare an encoded reference bitstring before the
    parameterized layers (the bits are most-significant-first, matching
    qubit order).
    """
    m = spec.template_qubits
    gates: list[Gate] = []
    if initial_bits is not None:
        if len(initial_bits) != spec.n_system:
            raise ValueError("initial_bits must cover exactly the system qubits")
        for q, bit in enumerate(initial_bits):
            if bit:
                gates.append(Gate("RX", (q,), angle=math.pi))
    layers: list[LayerSpan] = []
    slot = 0
    for _ in range(spec.n_layers):
        gate_start, slot_start = len(gates), slot
        for q in range(m):
            for kind in ("RZ", "RX", "RZ"):
                gates.append(Gate(kind, (q,), parameter_slot=slot))
                slot += 1
        for q in range(m - 1):
            gates.append(Gate("CNOT", (q, q + 1)))
        if spec.entangler == "ring" and m > 1:
            gates.append(Gate("CNOT", (m - 1, 0)))
        layers.append(LayerSpan(gate_start, len(gates), slot_start, slot))
    return Circuit(
        n_system=spec.n_system,
        n_ancilla=spec.n_ancilla,
        gates=tuple(gates),
        n_params=slot,
        layers=tuple(layers),
    )


def matched_hea(spec: AnsatzSpec) -> AnsatzSpec:
    """HEA on the system qubits with the HAA's two-qubit gate count.

    CNOTs dominate depolarizing error, so the fairness match equalizes
    them exactly when divisible (always for 2 system qubits) and rounds
    up otherwise; the HEA ends up with at least as many rotations.
    """
    if spec.n_system < 2:
        raise ValueError("gate matching needs at least 2 system qubits")
    haa_cnots = (spec.template_qubits - 1) * spec.n_layers
    layers = max(1, math.ceil(haa_cnots / (spec.n_system - 1)))
    return AnsatzSpec(
        n_system=spec.n_system,
        n_ancilla=0,
        n_layers=layers,
        entangler=spec.entangler,
        kind="HEA",
    )
