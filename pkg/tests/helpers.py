"""Shared wiring used by the VQE/ZNE/acceptance tests."""

from __future__ import annotations

from nisqchem import fold_core, ground_state
from nisqchem.ansatz import AnsatzSpec, build
from nisqchem.fermion import to_fermion
from nisqchem.mapping import bravyi_kitaev, taper_two_qubits, tapered_reference_bits


def tapered_problem(ints, n_ancilla=1, n_layers=2, entangler="chain", kind="HAA"):
    """Blocked-spin BK + two-qubit taper + reference-prepared ansatz.

    Returns (qubit_op, circuit, e_casci).
    """
    ham = fold_core(ints, list(range(ints.n_orb)))
    n_spin = ham.n_act_elec // 2
    e_casci = ground_state(ham, n_spin, n_spin).energy
    fop = to_fermion(ham, ordering="blocked")
    op = taper_two_qubits(bravyi_kitaev(fop), ham.n_act_elec, ordering="blocked")
    bits = tapered_reference_bits(2 * ham.n_act, ham.n_act_elec, "blocked")
    spec = AnsatzSpec(
        n_system=op.n_qubits,
        n_ancilla=0 if kind == "HEA" else n_ancilla,
        n_layers=n_layers,
        entangler=entangler,
        kind=kind,
    )
    circuit = build(spec, initial_bits=bits)
    return op, circuit, e_casci
