"""Synthetic molecule-like integral sets for benchmarks and tests.

The generated Hamiltonians have an ascending diagonal Fock-like spectrum
with small random hoppings and repulsion-dominated two-electron entries, so
the closed-shell reference determinant dominates the ground state and the
target particle/spin sector sits lowest in Fock space.
"""

from __future__ import annotations

import numpy as np

from .hamstore import OrbitalIntegrals, eri_key


def synth_integrals(
    n_orb: int,
    n_elec: int,
    seed: int,
    *,
    hopping: float = 0.05,
    coulomb: float = 0.08,
    gap: float = 1.0,
) -> OrbitalIntegrals:
    """Random weakly-correlated integrals with a closed-shell ground state.

    ``hopping`` scales the off-diagonal one-electron block, ``coulomb`` the
    non-diagonal two-electron entries; diagonal repulsions stay O(0.3) so
    higher-occupancy sectors are penalized.
    """
    rng = np.random.default_rng(seed)
    diag = -2.0 * gap + gap * np.arange(n_orb) + 0.1 * gap * rng.uniform(-1, 1, n_orb)
    diag.sort()
    h = np.diag(diag)
    off = hopping * rng.uniform(-1, 1, (n_orb, n_orb))
    h = h + np.triu(off, 1) + np.triu(off, 1).T

    eri: dict[tuple[int, int, int, int], float] = {}
    for p in range(n_orb):
        for q in range(p + 1):
            for r in range(n_orb):
                for s in range(r + 1):
                    key = eri_key(p, q, r, s)
                    if key in eri:
                        continue
                    if p == q and r == s:
                        # Coulomb-like diagonal block, strictly repulsive
                        value = 0.25 + 0.15 * rng.uniform(0, 1)
                    else:
                        value = coulomb * rng.uniform(-1, 1)
                    eri[key] = value
    e_core = rng.uniform(-0.5, 0.5)
    return OrbitalIntegrals(
        n_orb=n_orb, n_elec=n_elec, ms2=0, e_core=float(e_core), h=h, eri=eri
    )
