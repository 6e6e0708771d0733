"""Parametric circuit description shared by the simulator and the builders.

Qubit 0 is the most significant tensor axis; ancilla qubits occupy the
highest indices.  A gate either carries a bound angle or a parameter slot,
never both.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

GATE_KINDS = ("RX", "RZ", "CNOT")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    parameter_slot: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind == "CNOT":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("CNOT needs two distinct qubits")
            if self.angle is not None or self.parameter_slot is not None:
                raise ValueError("CNOT takes no angle")
        else:
            if len(self.qubits) != 1:
                raise ValueError("rotations act on exactly one qubit")
            if (self.angle is None) == (self.parameter_slot is None):
                raise ValueError("rotation needs either an angle or a slot")


@dataclass(frozen=True)
class LayerSpan:
    """Gate/slot extent of one entangling layer inside a Circuit."""

    gate_start: int
    gate_end: int
    slot_start: int
    slot_end: int


@dataclass(frozen=True)
class Circuit:
    n_system: int
    n_ancilla: int
    gates: tuple[Gate, ...]
    n_params: int
    layers: tuple[LayerSpan, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        n_total = self.n_system + self.n_ancilla
        for g in self.gates:
            if any(q < 0 or q >= n_total for q in g.qubits):
                raise ValueError(f"gate {g} touches qubit outside [0, {n_total})")
            if g.parameter_slot is not None and not 0 <= g.parameter_slot < self.n_params:
                raise ValueError(f"parameter slot {g.parameter_slot} outside [0, {self.n_params})")

    @property
    def n_qubits(self) -> int:
        return self.n_system + self.n_ancilla

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    @property
    def n_rotations(self) -> int:
        return sum(1 for g in self.gates if g.kind != "CNOT")

    @property
    def n_cnots(self) -> int:
        return self.count("CNOT")

    def to_json(self) -> str:
        doc = {
            "n_system": self.n_system,
            "n_ancilla": self.n_ancilla,
            "n_params": self.n_params,
            "layers": [
                [s.gate_start, s.gate_end, s.slot_start, s.slot_end] for s in self.layers
            ],
            "gates": [
                {
                    "kind": g.kind,
                    "qubits": list(g.qubits),
                    **({"angle": g.angle} if g.angle is not None else {}),
                    **({"slot": g.parameter_slot} if g.parameter_slot is not None else {}),
                }
                for g in self.gates
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        doc = json.loads(text)
        gates = tuple(
            Gate(
                kind=g["kind"],
                qubits=tuple(g["qubits"]),
                angle=g.get("angle"),
                parameter_slot=g.get("slot"),
            )
            for g in doc["gates"]
        )
        layers = tuple(LayerSpan(*span) for span in doc.get("layers", []))
        return cls(
            n_system=doc["n_system"],
            n_ancilla=doc["n_ancilla"],
            gates=gates,
            n_params=doc["n_params"],
            layers=layers,
        )
