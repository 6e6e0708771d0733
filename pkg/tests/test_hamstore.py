import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nisqchem import barrier_kcal, fold_core, ground_state, parse_fcidump, write_fcidump
from nisqchem.hamstore import OrbitalIntegrals, eri_key
from nisqchem.synth import synth_integrals

from .conftest import H2_E_FCI

MINIMAL = """&FCI NORB=1,NELEC=2,MS2=0,
 ORBSYM=1,
 ISYM=1,
&END
0.5 1 1 0 0
0.25 0 0 0 0
"""


def test_parse_minimal_document():
    ints = parse_fcidump(MINIMAL)
    assert ints.n_orb == 1
    assert ints.n_elec == 2
    assert ints.h[0, 0] == 0.5
    assert ints.e_core == 0.25


def test_parse_h2_casci_matches_external_fci(h2_ints):
    ham = fold_core(h2_ints, [0, 1])
    res = ground_state(ham, 1, 1)
    assert res.energy == pytest.approx(H2_E_FCI, abs=1e-8)


@pytest.mark.parametrize(
    "text,msg",
    [
        (MINIMAL.replace("NELEC=2,", ""), "missing header key"),
        (MINIMAL.replace("NORB=1,", ""), "missing header key"),
        (MINIMAL.replace("0.5 1 1 0 0", "0.5 2 1 0 0"), "outside"),
        (MINIMAL.replace("0.5 1 1 0 0", "abc 1 1 0 0"), "non-numeric"),
        (MINIMAL.replace("NELEC=2", "NELEC=4"), "exceeds"),
        (MINIMAL.replace("MS2=0", "MS2=2"), "ms2"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(ValueError, match=msg):
        parse_fcidump(text)


def test_roundtrip_h2(h2_ints):
    again = parse_fcidump(write_fcidump(h2_ints))
    assert again.n_orb == h2_ints.n_orb
    assert again.n_elec == h2_ints.n_elec
    assert np.array_equal(again.h, h2_ints.h)
    assert again.eri == h2_ints.eri
    assert again.e_core == h2_ints.e_core


def test_write_core_only_document():
    ints = OrbitalIntegrals(n_orb=1, n_elec=2, ms2=0, e_core=0.25, h=np.zeros((1, 1)))
    body = [l for l in write_fcidump(ints).splitlines() if l and not l.startswith((" ", "&"))]
    assert body == ["0.25 0 0 0 0"]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
       st.floats(-10, 10, allow_nan=False))
def test_eri_eightfold_symmetry(p, q, r, s, v):
    ints = OrbitalIntegrals(
        n_orb=4, n_elec=2, ms2=0, e_core=0.0, h=np.zeros((4, 4)),
        eri={eri_key(p, q, r, s): v},
    )
    perms = [(p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
             (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p)]
    for perm in perms:
        assert ints.eri_get(*perm) == v


def test_eri_get_symmetry_examples():
    ints = OrbitalIntegrals(
        n_orb=4, n_elec=2, ms2=0, e_core=0.0, h=np.zeros((4, 4)),
        eri={eri_key(0, 1, 2, 3): 0.375},
    )
    assert ints.eri_get(1, 0, 3, 2) == 0.375
    assert ints.eri_get(2, 3, 0, 1) == 0.375
    assert ints.eri_get(0, 0, 1, 1) == 0.0
    with pytest.raises(IndexError):
        ints.eri_get(0, 0, 0, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_roundtrip_random_integrals(seed):
    ints = synth_integrals(3, 4, seed)
    again = parse_fcidump(write_fcidump(ints))
    assert np.array_equal(again.h, ints.h)
    assert again.eri == ints.eri
    assert again.e_core == ints.e_core


def test_fold_core_all_active_is_identity(h2_ints):
    ham = fold_core(h2_ints, [0, 1])
    assert ham.e_frozen == h2_ints.e_core
    assert np.array_equal(ham.h_eff, h2_ints.h)
    assert ham.n_act_elec == 2
    assert ham.orbital_ids == (0, 1)


def test_fold_core_last_write_wins():
    text = MINIMAL.replace("0.5 1 1 0 0", "0.9 1 1 0 0\n0.5 1 1 0 0")
    assert parse_fcidump(text).h[0, 0] == 0.5


def test_fold_core_frozen_determinant_subspace():
    # freezing orbitals must reproduce the constrained-determinant energy
    ints = synth_integrals(4, 4, seed=7)
    full = fold_core(ints, [0, 1, 2, 3])
    e_constrained = _constrained_fci(ints, frozen=[0], active=[1, 2, 3])
    folded = fold_core(ints, [1, 2, 3])
    assert folded.n_act_elec == 2
    res = ground_state(folded, 1, 1)
    assert res.energy == pytest.approx(e_constrained, abs=1e-10)
    # enlarging the active space can only lower the energy
    e_full = ground_state(full, 2, 2).energy
    assert e_full <= res.energy + 1e-12


def _constrained_fci(ints, frozen, active):
    """Dense FCI restricted to determinants with frozen orbitals doubly occupied."""
    from nisqchem.casci import build_hamiltonian_matrix, enumerate_determinants
    from nisqchem.hamstore import fold_core as fc

    ham = fc(ints, sorted(frozen + active))
    n_alpha = n_beta = ham.n_act_elec // 2
    dets = enumerate_determinants(ham.n_act, n_alpha, n_beta)
    pos = {orb: i for i, orb in enumerate(ham.orbital_ids)}
    keep = [
        k
        for k, d in enumerate(dets)
        if all((d.alpha_occ >> pos[f]) & 1 and (d.beta_occ >> pos[f]) & 1 for f in frozen)
    ]
    mat = build_hamiltonian_matrix(ham, dets)
    sub = mat[np.ix_(keep, keep)]
    return float(np.linalg.eigvalsh(sub)[0])


def test_variational_monotonicity_over_subsets():
    ints = synth_integrals(4, 4, seed=3)
    e_all = ground_state(fold_core(ints, [0, 1, 2, 3]), 2, 2).energy
    for subset in ([0, 1], [0, 1, 2], [0, 1, 3]):
        ham = fold_core(ints, subset)
        na = ham.n_act_elec // 2
        e_sub = ground_state(ham, na, na).energy
        assert e_sub >= e_all - 1e-12


def test_barrier_kcal_paper_values():
    assert barrier_kcal(-1451.899418, -1451.855420) == pytest.approx(27.61, abs=0.01)
    assert barrier_kcal(-1450.052175, -1450.038176) == pytest.approx(8.78, abs=0.01)
    assert barrier_kcal(-1450.025308, -1449.975190) == pytest.approx(31.45, abs=0.01)
    assert barrier_kcal(-1.5, -1.5) == 0.0


def test_barrier_rejects_nonfinite():
    with pytest.raises(ValueError):
        barrier_kcal(math.nan, 0.0)
