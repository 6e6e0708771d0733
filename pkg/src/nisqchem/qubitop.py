"""Weighted sums of Pauli strings.

A term is a sorted tuple of (qubit, letter) pairs; identity factors are
never stored.  The text serialization is one term per line,
``coeff X0 Z1 Y3``, with a ``qubits N`` header so idle trailing qubits
survive round-trips.
"""

from __future__ import annotations

import numpy as np

PauliString = tuple[tuple[int, str], ...]

SIMPLIFY_TOL = 1e-12

# (single-qubit products) P1*P2 -> (phase, P)
_PAULI_PRODUCT = {
    ("X", "X"): (1, "I"),
    ("Y", "Y"): (1, "I"),
    ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _normalize(term) -> PauliString:
    pairs = tuple(sorted((int(q), p) for q, p in term))
    for q, p in pairs:
        if q < 0:
            raise ValueError("qubit indices must be non-negative")
        if p not in "XYZ":
            raise ValueError(f"unknown Pauli letter {p!r}")
    return pairs


class QubitOperator:
    """Sum of Pauli strings with complex coefficients."""

    def __init__(self, terms=None, n_qubits: int | None = None):
        self.terms: dict[PauliString, complex] = {}
        if terms:
            for term, coeff in terms.items():
                key = _normalize(term)
                self.terms[key] = self.terms.get(key, 0.0) + complex(coeff)
        inferred = 1 + max((q for t in self.terms for q, _ in t), default=-1)
        self.n_qubits = inferred if n_qubits is None else int(n_qubits)
        if self.n_qubits < inferred:
            raise ValueError("n_qubits smaller than highest term index")

    @classmethod
    def identity(cls, coefficient=1.0, n_qubits: int = 0) -> "QubitOperator":
        return cls({(): coefficient}, n_qubits=n_qubits)

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        out = dict(self.terms)
        for term, coeff in other.terms.items():
            out[term] = out.get(term, 0.0) + coeff
        return QubitOperator(out, n_qubits=max(self.n_qubits, other.n_qubits))

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return QubitOperator(
                {t: c * other for t, c in self.terms.items()}, n_qubits=self.n_qubits
            )
        out: dict[PauliString, complex] = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                phase, term = _multiply_strings(t1, t2)
                coeff = c1 * c2 * phase
                out[term] = out.get(term, 0.0) + coeff
        return QubitOperator(out, n_qubits=max(self.n_qubits, other.n_qubits))

    __rmul__ = __mul__

    def simplified(self, tol: float = SIMPLIFY_TOL) -> "QubitOperator":
        kept = {t: c for t, c in self.terms.items() if abs(c) >= tol}
        return QubitOperator(kept, n_qubits=self.n_qubits)

    def hermitian_part_check(self, tol: float = 1e-10) -> None:
        for term, coeff in self.terms.items():
            if abs(coeff.imag) > tol:
                raise ValueError(f"non-real coefficient {coeff} on {term}")

    def matrix(self, n_qubits: int | None = None) -> np.ndarray:
        """Dense matrix with qubit 0 as the most significant kron factor.

        Results are memoized per size; instances are treated as immutable.
        """
        n = self.n_qubits if n_qubits is None else n_qubits
        cache = self.__dict__.setdefault("_matrix_cache", {})
        if n in cache:
            return cache[n]
        dim = 1 << n
        mat = np.zeros((dim, dim), dtype=complex)
        for term, coeff in self.terms.items():
            factor = np.array([[1.0 + 0j]])
            letters = dict(term)
            for q in range(n):
                factor = np.kron(factor, _PAULI_MATS[letters.get(q, "I")])
            mat += coeff * factor
        mat.flags.writeable = False
        cache[n] = mat
        return mat

    def __repr__(self):
        return f"QubitOperator({len(self.terms)} terms, {self.n_qubits} qubits)"


def _multiply_strings(t1: PauliString, t2: PauliString):
    letters = dict(t1)
    phase = 1.0 + 0.0j
    for q, p2 in t2:
        p1 = letters.get(q)
        if p1 is None:
            letters[q] = p2
            continue
        ph, p = _PAULI_PRODUCT[(p1, p2)]
        phase *= ph
        if p == "I":
            del letters[q]
        else:
            letters[q] = p
    return phase, tuple(sorted(letters.items()))


def simplify(op: QubitOperator, tol: float = SIMPLIFY_TOL) -> QubitOperator:
    """Merge duplicate Pauli strings and drop |coeff| < tol terms."""
    return op.simplified(tol)


def dumps(op: QubitOperator) -> str:
    """Serialize one term per line: ``coeff  pauli-string``."""
    lines = [f"qubits {op.n_qubits}"]
    for term in sorted(op.terms):
        coeff = op.terms[term]
        text = repr(coeff.real) if abs(coeff.imag) < 1e-15 else repr(coeff)[1:-1]
        paulis = " ".join(f"{p}{q}" for q, p in term) or "I"
        lines.append(f"{text} {paulis}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> QubitOperator:
    terms: dict[PauliString, complex] = {}
    n_qubits = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "qubits":
            n_qubits = int(parts[1])
            continue
        coeff = complex(parts[0])
        term = []
        for tok in parts[1:]:
            if tok == "I":
                continue
            term.append((int(tok[1:]), tok[0]))
        key = _normalize(term)
        terms[key] = terms.get(key, 0.0) + coeff
    return QubitOperator(terms, n_qubits=n_qubits)
