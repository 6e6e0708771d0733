"""Second-quantized operators over spin-orbital modes.

Terms are stored normal-ordered: creations left of annihilations, indices
descending within each group, with anticommutation phases tracked.  Spin
orbitals may be indexed interleaved (2p, 2p+1) or blocked (p, n_act+p);
the blocked layout is what makes the two-qubit symmetry reduction land on
fixed qubit positions downstream.
"""

from __future__ import annotations

from .hamstore import ActiveSpaceHamiltonian

LadderTerm = tuple[tuple[int, bool], ...]  # ((mode, is_creation), ...)

_TOL = 1e-14


class FermionOperator:
    """Sparse sum of ladder-operator products with complex coefficients."""

    def __init__(self, terms: dict[LadderTerm, complex] | None = None):
        self.terms: dict[LadderTerm, complex] = dict(terms or {})

    @classmethod
    def from_term(cls, ops, coefficient=1.0) -> "FermionOperator":
        return cls({tuple((int(m), bool(c)) for m, c in ops): complex(coefficient)})

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        out = dict(self.terms)
        for term, coeff in other.terms.items():
            out[term] = out.get(term, 0.0) + coeff
        return FermionOperator(out)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FermionOperator({t: c * other for t, c in self.terms.items()})
        out: dict[LadderTerm, complex] = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                key = t1 + t2
                out[key] = out.get(key, 0.0) + c1 * c2
        return FermionOperator(out)

    __rmul__ = __mul__

    def n_modes(self) -> int:
        return 1 + max((m for t in self.terms for m, _ in t), default=-1)

    def normal_ordered(self) -> "FermionOperator":
        """Rewrite with creations left, indices descending, phases tracked."""
        out = FermionOperator()
        for term, coeff in self.terms.items():
            for ordered, sign in _normal_order_term(list(term)):
                key = tuple(ordered)
                out.terms[key] = out.terms.get(key, 0.0) + sign * coeff
        out.terms = {t: c for t, c in out.terms.items() if abs(c) > _TOL}
        return out


def _normal_order_term(ops):
    """Yield (ordered_ops, sign) pairs for one ladder product."""
    stack = [(ops, 1)]
    while stack:
        seq, sign = stack.pop()
        swapped = False
        for k in range(len(seq) - 1):
            (m1, c1), (m2, c2) = seq[k], seq[k + 1]
            if not c1 and c2:  # annihilation left of creation
                rest = seq[:k] + [(m2, True), (m1, False)] + seq[k + 2 :]
                stack.append((rest, -sign))
                if m1 == m2:  # anticommutator contraction
                    stack.append((seq[:k] + seq[k + 2 :], sign))
                swapped = True
                break
            if c1 == c2 and m1 < m2:  # enforce descending within a group
                rest = seq[:k] + [(m2, c2), (m1, c1)] + seq[k + 2 :]
                stack.append((rest, -sign))
                swapped = True
                break
            if c1 == c2 and m1 == m2:  # nilpotent
                swapped = True
                break
        if not swapped:
            yield seq, sign


def to_fermion(ham: ActiveSpaceHamiltonian, ordering: str = "interleaved") -> FermionOperator:
    """Second-quantize an active-space Hamiltonian.

    H = e_frozen + sum h_pq a+_ps a_qs + 1/2 sum (pq|rs) a+_ps a+_rt a_st a_qs
    with spin-orbital mode = 2p+spin ("interleaved", the default) or
    p + spin*n_act ("blocked").
    """
    if ordering not in ("interleaved", "blocked"):
        raise ValueError(f"unknown spin ordering {ordering!r}")
    n = ham.n_act

    def mode(p: int, spin: int) -> int:
        return 2 * p + spin if ordering == "interleaved" else p + spin * n

    op = FermionOperator({(): complex(ham.e_frozen)})
    for p in range(n):
        for q in range(n):
            hpq = ham.h_eff[p, q]
            if hpq == 0.0:
                continue
            for s in (0, 1):
                op += FermionOperator.from_term(
                    [(mode(p, s), True), (mode(q, s), False)], hpq
                )
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    g = ham.eri_get(p, q, r, s)
                    if g == 0.0:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            op += FermionOperator.from_term(
                                [
                                    (mode(p, s1), True),
                                    (mode(r, s2), True),
                                    (mode(s, s2), False),
                                    (mode(q, s1), False),
                                ],
                                0.5 * g,
                            )
    return op.normal_ordered()
