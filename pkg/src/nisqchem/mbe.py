"""Orbital-correlation increments and active-space selection.

Single and pair correlation increments come from CASCI solves on orbital
subsets folded against the closed-shell core:

    d1[i]      = E(base + {i}) - E(base)
    d2[(i,j)]  = E(base + {i,j}) - d1[i] - d1[j] - E(base)

Orbitals are scored by |d1| plus the summed |d2| row and selected by their
contribution relative to the largest score; HOMO and LUMO always join.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .casci import ground_state
from .hamstore import OrbitalIntegrals, fold_core


@dataclass(frozen=True)
class CorrelationTable:
    e_ref: float
    delta1: dict[int, float]
    delta2: dict[tuple[int, int], float]
    base: tuple[int, ...]


@dataclass(frozen=True)
class ActiveSpaceSelection:
    orbitals: tuple[int, ...]
    scores: dict[int, float]
    threshold: float


def homo_lumo(ints: OrbitalIntegrals) -> tuple[int, int]:
    """Frontier orbital indices under the canonical closed-shell ordering."""
    if ints.n_occ >= ints.n_orb:
        raise ValueError("no virtual orbital available for LUMO")
    return ints.n_occ - 1, ints.n_occ


def increment_energy(
    ints: OrbitalIntegrals,
    subset: list[int] | tuple[int, ...],
    base: list[int] | tuple[int, ...] = (),
) -> float:
    """CASCI energy of the active space base + subset (frozen core elsewhere)."""
    ham = fold_core(ints, sorted(set(subset) | set(base)))
    n_spin = ham.n_act_elec // 2
    return ground_state(ham, n_spin, n_spin).energy


def correlation_table(
    ints: OrbitalIntegrals,
    base: list[int] | tuple[int, ...] = (),
    n_workers: int = 4,
) -> CorrelationTable:
    """Evaluate all single and pair increments outside ``base``.

    The N + N(N-1)/2 + 1 CASCI solves are independent and dispatched to a
    thread pool; assembly is a deterministic reduction over sorted keys.
    """
    base = tuple(sorted(set(base)))
    orbitals = [i for i in range(ints.n_orb) if i not in base]
    subsets: list[tuple[int, ...]] = [()]
    subsets += [(i,) for i in orbitals]
    subsets += [pair for pair in combinations(orbitals, 2)]

    energies: dict[tuple[int, ...], float] = {}
    with ThreadPoolExecutor(max_workers=max(1, n_workers)) as pool:
        futures = {s: pool.submit(increment_energy, ints, s, base) for s in subsets}
        for s, fut in futures.items():
            try:
                energies[s] = fut.result()
            except Exception as exc:
                raise RuntimeError(f"CASCI solve failed for subset {s}") from exc

    e_ref = energies[()]
    delta1 = {i: energies[(i,)] - e_ref for i in orbitals}
    delta2 = {
        (i, j): energies[(i, j)] - delta1[i] - delta1[j] - e_ref
        for (i, j) in combinations(orbitals, 2)
    }
    return CorrelationTable(e_ref=e_ref, delta1=delta1, delta2=delta2, base=base)


def orbital_scores(table: CorrelationTable) -> dict[int, float]:
    """Score each orbital by its own increment plus its pair row."""
    scores = {i: abs(v) for i, v in table.delta1.items()}
    for (i, j), v in table.delta2.items():
        scores[i] = scores.get(i, 0.0) + abs(v)
        scores[j] = scores.get(j, 0.0) + abs(v)
    return scores


def select_active(
    table: CorrelationTable, threshold: float, homo: int, lumo: int
) -> ActiveSpaceSelection:
    """Keep orbitals whose score is >= threshold of the largest; add HOMO/LUMO."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    scores = orbital_scores(table)
    sigma_max = max(scores.values(), default=0.0)
    if sigma_max <= 0.0:
        warnings.warn("all correlation scores are zero; selecting only HOMO/LUMO")
        chosen: set[int] = set()
    else:
        chosen = {p for p, s in scores.items() if s / sigma_max >= threshold}
    chosen |= {homo, lumo}
    return ActiveSpaceSelection(
        orbitals=tuple(sorted(chosen)), scores=scores, threshold=threshold
    )


def table_to_csv(table: CorrelationTable) -> str:
    """CSV rows ``i,j,delta_hartree``; the i==j rows carry the single increments."""
    lines = ["i,j,delta_hartree"]
    for i in sorted(table.delta1):
        lines.append(f"{i},{i},{float(table.delta1[i])!r}")
    for (i, j) in sorted(table.delta2):
        lines.append(f"{i},{j},{float(table.delta2[(i, j)])!r}")
    return "\n".join(lines) + "\n"
