"""Exact diagonalization (full CI) over bitstring-encoded determinants.

Determinants carry independent alpha/beta occupation masks over the active
orbitals.  Phase convention: spin-orbitals are ordered all-alpha-ascending
then all-beta-ascending, with creation operators applied in descending
index order, which keeps the two spin strings' phases independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .hamstore import ActiveSpaceHamiltonian

DEFAULT_DET_CAP = 20_000
_DENSE_LIMIT = 512


@dataclass(frozen=True)
class Determinant:
    alpha_occ: int
    beta_occ: int


@dataclass(frozen=True)
class CIResult:
    """Ground-state energy (includes e_frozen) and unit-norm CI vector."""

    energy: float
    coefficients: np.ndarray


def enumerate_determinants(n_act: int, n_alpha: int, n_beta: int) -> list[Determinant]:
    """All determinants at fixed (n_alpha, n_beta), ascending by (alpha, beta) mask."""
    if n_alpha > n_act or n_beta > n_act or min(n_alpha, n_beta, n_act) < 0:
        raise ValueError("electron counts must lie in [0, n_act]")
    a_masks = _masks(n_act, n_alpha)
    b_masks = _masks(n_act, n_beta)
    return [Determinant(a, b) for a in a_masks for b in b_masks]


def _masks(n: int, k: int) -> list[int]:
    return sorted(sum(1 << i for i in c) for c in combinations(range(n), k))


def _occ_list(mask: int) -> list[int]:
    occ = []
    i = 0
    while mask >> i:
        if (mask >> i) & 1:
            occ.append(i)
        i += 1
    return occ


def _excitation_phase(mask: int, i: int, a: int) -> int:
    """Sign of moving one particle i -> a within a single spin string."""
    lo, hi = (i, a) if i < a else (a, i)
    between = mask & (((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1))
    return -1 if bin(between).count("1") % 2 else 1


def matrix_element(d1: Determinant, d2: Determinant, ham: ActiveSpaceHamiltonian) -> float:
    """Slater-Condon <d1|H|d2>; diagonal entries include e_frozen."""
    a1, b1 = d1.alpha_occ, d1.beta_occ
    a2, b2 = d2.alpha_occ, d2.beta_occ
    da = bin(a1 ^ a2).count("1") // 2
    db = bin(b1 ^ b2).count("1") // 2
    if da + db > 2:
        return 0.0
    g = ham.eri_get
    if da == 0 and db == 0:
        occ_a = _occ_list(a1)
        occ_b = _occ_list(b1)
        e = ham.e_frozen
        for i in occ_a:
            e += ham.h_eff[i, i]
        for i in occ_b:
            e += ham.h_eff[i, i]
        for i, j in combinations(occ_a, 2):
            e += g(i, i, j, j) - g(i, j, j, i)
        for i, j in combinations(occ_b, 2):
            e += g(i, i, j, j) - g(i, j, j, i)
        for i in occ_a:
            for j in occ_b:
                e += g(i, i, j, j)
        return e
    if da == 1 and db == 0:
        return _single(a1, a2, _occ_list(a1), _occ_list(b1), ham)
    if da == 0 and db == 1:
        return _single(b1, b2, _occ_list(b1), _occ_list(a1), ham)
    if da == 2 and db == 0:
        return _double_same(a1, a2, ham)
    if da == 0 and db == 2:
        return _double_same(b1, b2, ham)
    # one alpha and one beta excitation
    (ia,), (aa,) = _occ_list(a1 & ~a2), _occ_list(a2 & ~a1)
    (ib,), (ab,) = _occ_list(b1 & ~b2), _occ_list(b2 & ~b1)
    phase = _excitation_phase(a1, ia, aa) * _excitation_phase(b1, ib, ab)
    return phase * ham.eri_get(ia, aa, ib, ab)


def _single(m1: int, m2: int, occ_same: list[int], occ_other: list[int], ham) -> float:
    (i,) = _occ_list(m1 & ~m2)
    (a,) = _occ_list(m2 & ~m1)
    g = ham.eri_get
    v = ham.h_eff[i, a]
    for j in occ_same:
        if j != i:
            v += g(i, a, j, j) - g(i, j, j, a)
    for j in occ_other:
        v += g(i, a, j, j)
    return _excitation_phase(m1, i, a) * v


def _double_same(m1: int, m2: int, ham) -> float:
    i, j = _occ_list(m1 & ~m2)
    a, b = _occ_list(m2 & ~m1)
    # pair (i->a, j->b); phases composed by applying the excitations in turn
    phase = _excitation_phase(m1, i, a)
    m_mid = (m1 & ~(1 << i)) | (1 << a)
    phase *= _excitation_phase(m_mid, j, b)
    g = ham.eri_get
    return phase * (g(i, a, j, b) - g(i, b, j, a))


def build_hamiltonian_matrix(
    ham: ActiveSpaceHamiltonian, dets: list[Determinant], sparse: bool = False
):
    """Assemble <d1|H|d2> over ``dets`` by enumerating connected excitations."""
    dim = len(dets)
    index = {(d.alpha_occ, d.beta_occ): k for k, d in enumerate(dets)}
    rows, cols, vals = [], [], []
    n_act = ham.n_act
    for k, d in enumerate(dets):
        rows.append(k)
        cols.append(k)
        vals.append(matrix_element(d, d, ham))
        for d2 in _connected(d, n_act):
            k2 = index.get((d2.alpha_occ, d2.beta_occ))
            if k2 is None or k2 <= k:
                continue
            v = matrix_element(d, d2, ham)
            if v != 0.0:
                rows.extend((k, k2))
                cols.extend((k2, k))
                vals.extend((v, v))
    if sparse:
        return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    mat = np.zeros((dim, dim))
    mat[rows, cols] = vals
    return mat


def _connected(d: Determinant, n_act: int):
    """Determinants reachable by single or double excitations from ``d``."""
    occ_a, occ_b = _occ_list(d.alpha_occ), _occ_list(d.beta_occ)
    vir_a = [p for p in range(n_act) if not (d.alpha_occ >> p) & 1]
    vir_b = [p for p in range(n_act) if not (d.beta_occ >> p) & 1]
    singles_a = [
        (d.alpha_occ & ~(1 << i)) | (1 << a) for i in occ_a for a in vir_a
    ]
    singles_b = [
        (d.beta_occ & ~(1 << i)) | (1 << a) for i in occ_b for a in vir_b
    ]
    for m in singles_a:
        yield Determinant(m, d.beta_occ)
    for m in singles_b:
        yield Determinant(d.alpha_occ, m)
    for (i, j) in combinations(occ_a, 2):
        for (a, b) in combinations(vir_a, 2):
            m = (d.alpha_occ & ~(1 << i) & ~(1 << j)) | (1 << a) | (1 << b)
            yield Determinant(m, d.beta_occ)
    for (i, j) in combinations(occ_b, 2):
        for (a, b) in combinations(vir_b, 2):
            m = (d.beta_occ & ~(1 << i) & ~(1 << j)) | (1 << a) | (1 << b)
            yield Determinant(d.alpha_occ, m)
    for ma in singles_a:
        for mb in singles_b:
            yield Determinant(ma, mb)


def ground_state(
    ham: ActiveSpaceHamiltonian,
    n_alpha: int,
    n_beta: int,
    det_cap: int = DEFAULT_DET_CAP,
) -> CIResult:
    """Lowest eigenpair of the CI matrix at fixed (n_alpha, n_beta).

    Dense below 512 determinants, Lanczos (scipy eigsh, seeded on the first
    determinant) above; the residual 2-norm must reach 1e-9.  The returned
    vector has its largest-magnitude coefficient positive.
    """
    dets = enumerate_determinants(ham.n_act, n_alpha, n_beta)
    dim = len(dets)
    if dim > det_cap:
        raise ValueError(f"determinant basis {dim} exceeds cap {det_cap}")
    if dim == 1:
        return CIResult(energy=matrix_element(dets[0], dets[0], ham), coefficients=np.array([1.0]))
    if dim <= _DENSE_LIMIT:
        mat = build_hamiltonian_matrix(ham, dets, sparse=False)
        evals, evecs = np.linalg.eigh(mat)
        energy, vec = float(evals[0]), evecs[:, 0]
    else:
        mat = build_hamiltonian_matrix(ham, dets, sparse=True)
        v0 = np.zeros(dim)
        v0[0] = 1.0
        try:
            evals, evecs = scipy.sparse.linalg.eigsh(mat, k=1, which="SA", v0=v0, maxiter=max(1000, 20 * dim))
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise RuntimeError("iterative eigensolver did not converge") from exc
        energy, vec = float(evals[0]), evecs[:, 0]
        residual = np.linalg.norm(mat @ vec - energy * vec)
        if residual > 1e-9:
            raise RuntimeError(f"eigensolver residual {residual:.2e} above 1e-9")
    if vec[int(np.argmax(np.abs(vec)))] < 0:
        vec = -vec
    return CIResult(energy=energy, coefficients=vec)
