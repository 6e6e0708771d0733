"""Fermion-to-qubit mappings and the two-qubit symmetry reduction.

Jordan-Wigner strings count parity linearly; the Bravyi-Kitaev encoding
stores occupation sums over the subtrees of a midpoint-split binary tree
(identical to the padded power-of-two construction whenever the mode count
is a power of two).  For an even mode count that tree always places the
first-half parity on qubit n/2-1 and the total parity on qubit n-1, which
is what lets those two qubits be replaced by eigenvalues for a blocked
(all-alpha-then-all-beta) spin layout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fermion import FermionOperator
from .qubitop import QubitOperator, simplify


@dataclass(frozen=True)
class _Tree:
    """Midpoint-split binary tree over modes 0..n-1.

    Node k owns the contiguous mode range [start[k], k]; its stored bit is
    the occupation parity of that range.
    """

    n: int
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    start: tuple[int, ...]

    @classmethod
    def build(cls, n: int) -> "_Tree":
        parent = [-1] * n
        children: list[list[int]] = [[] for _ in range(n)]
        start = list(range(n))

        def split(left: int, right: int, root: int) -> None:
            if left >= right:
                return
            pivot = (left + right) >> 1
            parent[pivot] = root
            children[root].append(pivot)
            start[pivot] = left
            split(left, pivot, pivot)
            split(pivot + 1, right, root)

        if n > 0:
            start[n - 1] = 0
            split(0, n - 1, n - 1)
        return cls(
            n=n,
            parent=tuple(parent),
            children=tuple(tuple(sorted(c)) for c in children),
            start=tuple(start),
        )

    def update_set(self, j: int) -> frozenset[int]:
        out = set()
        k = self.parent[j]
        while k >= 0:
            out.add(k)
            k = self.parent[k]
        return frozenset(out)

    def parity_set(self, j: int) -> frozenset[int]:
        """Qubits whose bits XOR to the occupation parity of modes [0, j)."""
        out = set()
        x = j - 1
        while x >= 0:
            out.add(x)
            x = self.start[x] - 1
        return frozenset(out)

    def flip_set(self, j: int) -> frozenset[int]:
        return frozenset(self.children[j])

    def encode(self, occupations) -> list[int]:
        """Stored qubit bits for an occupation vector."""
        bits = []
        for k in range(self.n):
            bits.append(sum(occupations[self.start[k] : k + 1]) % 2)
        return bits


def jordan_wigner(op: FermionOperator) -> QubitOperator:
    """a+_j -> 1/2 (X_j - i Y_j) Z_{j-1} ... Z_0, extended linearly."""
    n = op.n_modes()

    def ladder(j: int, create: bool) -> QubitOperator:
        zs = {q: "Z" for q in range(j)}
        c = QubitOperator({tuple({**zs, j: "X"}.items()): 0.5})
        d = QubitOperator({tuple({**zs, j: "Y"}.items()): -0.5j if create else 0.5j})
        return c + d

    return _map_ladders(op, ladder, n)


def bravyi_kitaev(op: FermionOperator, n_modes: int | None = None) -> QubitOperator:
    """Tree-encoded mapping: X on the update set, Z on parity/remainder sets."""
    n = op.n_modes() if n_modes is None else n_modes
    tree = _Tree.build(n)

    def ladder(j: int, create: bool) -> QubitOperator:
        update = tree.update_set(j)
        parity = tree.parity_set(j)
        remainder = parity - tree.flip_set(j)
        c_term = {q: "X" for q in update}
        c_term[j] = "X"
        c_term.update({q: "Z" for q in parity})
        d_term = {q: "X" for q in update}
        d_term[j] = "Y"
        d_term.update({q: "Z" for q in remainder})
        c = QubitOperator({tuple(c_term.items()): 0.5})
        d = QubitOperator({tuple(d_term.items()): -0.5j if create else 0.5j})
        return c + d

    return _map_ladders(op, ladder, n)


def _map_ladders(op: FermionOperator, ladder, n: int) -> QubitOperator:
    total = QubitOperator({}, n_qubits=max(n, 0))
    for term, coeff in op.terms.items():
        mapped = QubitOperator.identity(coeff, n_qubits=max(n, 0))
        for mode, create in term:
            mapped = mapped * ladder(mode, create)
        total = total + mapped
    return simplify(total)


def reference_occupations(n_modes: int, n_elec: int, ordering: str) -> list[int]:
    """Closed-shell reference determinant as a mode-occupation vector."""
    if n_elec % 2:
        raise ValueError("closed shell requires an even electron count")
    n_spatial = n_modes // 2
    occ = [0] * n_modes
    for p in range(n_elec // 2):
        if ordering == "interleaved":
            occ[2 * p] = 1
            occ[2 * p + 1] = 1
        elif ordering == "blocked":
            occ[p] = 1
            occ[n_spatial + p] = 1
        else:
            raise ValueError(f"unknown spin ordering {ordering!r}")
    return occ


def encoded_reference_bits(n_modes: int, n_elec: int, ordering: str) -> list[int]:
    """Bravyi-Kitaev qubit bits of the closed-shell reference determinant."""
    tree = _Tree.build(n_modes)
    return tree.encode(reference_occupations(n_modes, n_elec, ordering))


def tapered_reference_bits(n_modes: int, n_elec: int, ordering: str) -> list[int]:
    """Encoded reference bits restricted to the qubits that survive tapering."""
    bits = encoded_reference_bits(n_modes, n_elec, ordering)
    removed = {n_modes // 2 - 1, n_modes - 1}
    return [b for q, b in enumerate(bits) if q not in removed]


def taper_two_qubits(
    op: QubitOperator, n_elec: int, ordering: str = "interleaved"
) -> QubitOperator:
    """Fix the two parity qubits of a Bravyi-Kitaev Hamiltonian and drop them.

    Qubits n/2-1 and n-1 carry conserved parities; their Z eigenvalues are
    read off the encoded closed-shell reference determinant (ms2 = 0), the
    remaining indices are compacted order-preservingly.
    """
    n = op.n_qubits
    if n < 4 or n % 2:
        raise ValueError("tapering requires an even qubit count >= 4")
    removed = (n // 2 - 1, n - 1)
    for term in op.terms:
        for q, p in term:
            if q in removed and p != "Z":
                raise ValueError("symmetry qubits not Z-diagonal")
    bits = encoded_reference_bits(n, n_elec, ordering)
    eigen = {q: (-1.0 if bits[q] else 1.0) for q in removed}

    def new_index(q: int) -> int:
        return q - sum(1 for r in removed if r < q)

    out: dict = {}
    for term, coeff in op.terms.items():
        c = coeff
        kept = []
        for q, p in term:
            if q in removed:
                c *= eigen[q]
            else:
                kept.append((new_index(q), p))
        key = tuple(kept)
        out[key] = out.get(key, 0.0) + c
    return simplify(QubitOperator(out, n_qubits=n - 2))
