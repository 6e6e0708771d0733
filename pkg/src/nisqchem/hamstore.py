"""FCIDUMP-backed storage of molecular / downfolded Hamiltonians.

One- and two-electron integrals are kept over spatial orbitals in chemists'
notation, with the two-electron tensor stored once per 8-fold-symmetric
equivalence class.  A frozen-core fold produces the active-space Hamiltonian
consumed by the CI and mapping layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HARTREE_TO_KCAL = 627.509474

_HEADER_KEYS = ("NORB", "NELEC")


def eri_key(p: int, q: int, r: int, s: int) -> tuple[int, int, int, int]:
    """Canonical index of (pq|rs) under the 8 real-orbital permutations."""
    a = (max(p, q), min(p, q))
    b = (max(r, s), min(r, s))
    if a < b:
        a, b = b, a
    return (*a, *b)


@dataclass(frozen=True)
class OrbitalIntegrals:
    """Spatial-orbital integrals plus scalar core energy (all hartree).

    ``h`` is the symmetric one-electron matrix, ``eri`` maps canonical
    4-index keys to (pq|rs) values.  Instances are immutable and safe to
    share between threads.
    """

    n_orb: int
    n_elec: int
    ms2: int
    e_core: float
    h: np.ndarray
    eri: dict[tuple[int, int, int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_orb < 1:
            raise ValueError("n_orb must be >= 1")
        if not (0 < self.n_elec <= 2 * self.n_orb):
            raise ValueError(f"n_elec={self.n_elec} outside (0, 2*n_orb]")
        if self.ms2 != 0:
            raise ValueError("only ms2=0 (closed shell) is supported")
        if self.n_elec % 2 != 0:
            raise ValueError("ms2=0 requires an even electron count")
        h = np.asarray(self.h, dtype=float)
        if h.shape != (self.n_orb, self.n_orb):
            raise ValueError("h must be (n_orb, n_orb)")
        if not np.allclose(h, h.T, atol=1e-12, rtol=0.0):
            raise ValueError("h must be symmetric within 1e-12")
        h = h.copy()
        h.flags.writeable = False
        object.__setattr__(self, "h", h)
        for key in self.eri:
            if eri_key(*key) != key:
                raise ValueError(f"eri key {key} is not canonical")
            if any(i < 0 or i >= self.n_orb for i in key):
                raise ValueError(f"eri key {key} out of range")

    def eri_get(self, p: int, q: int, r: int, s: int) -> float:
        """(pq|rs), honoring 8-fold symmetry; unset entries are 0."""
        for i in (p, q, r, s):
            if not 0 <= i < self.n_orb:
                raise IndexError(f"orbital index {i} outside [0, {self.n_orb})")
        return self.eri.get(eri_key(p, q, r, s), 0.0)

    @property
    def n_occ(self) -> int:
        """Doubly occupied orbital count of the closed-shell reference."""
        return self.n_elec // 2


@dataclass(frozen=True)
class ActiveSpaceHamiltonian:
    """Integrals folded onto an active orbital subset.

    Active orbitals are re-indexed 0..n_act-1; ``orbital_ids`` maps back to
    the parent ordering.  ``e_frozen`` absorbs the core energy plus the
    frozen-orbital mean-field contributions.
    """

    n_act: int
    n_act_elec: int
    e_frozen: float
    h_eff: np.ndarray
    eri_act: dict[tuple[int, int, int, int], float]
    orbital_ids: tuple[int, ...]

    def __post_init__(self):
        if self.n_act_elec < 0 or self.n_act_elec > 2 * self.n_act:
            raise ValueError("active electron count outside [0, 2*n_act]")
        if len(self.orbital_ids) != self.n_act:
            raise ValueError("orbital_ids length must equal n_act")
        h = np.asarray(self.h_eff, dtype=float).copy()
        h.flags.writeable = False
        object.__setattr__(self, "h_eff", h)

    def eri_get(self, p: int, q: int, r: int, s: int) -> float:
        for i in (p, q, r, s):
            if not 0 <= i < self.n_act:
                raise IndexError(f"active index {i} outside [0, {self.n_act})")
        return self.eri_act.get(eri_key(p, q, r, s), 0.0)


def parse_fcidump(text: str) -> OrbitalIntegrals:
    """Parse an FCIDUMP document.

    Header ``&FCI ... &END`` (or ``/``) must declare NORB and NELEC; MS2
    defaults to 0.  Body lines are ``value i j k l`` with 1-based indices:
    all-zero indices carry the core energy, ``k l`` zero a one-electron
    h_ij, anything else (ij|kl).  Later duplicates overwrite earlier ones.
    """
    header, body = _split_header(text)
    keys = _parse_header(header)
    for k in _HEADER_KEYS:
        if k not in keys:
            raise ValueError(f"missing header key {k}")
    n_orb = keys["NORB"]
    n_elec = keys["NELEC"]
    ms2 = keys.get("MS2", 0)
    if n_orb < 1:
        raise ValueError("NORB must be >= 1")
    if n_elec > 2 * n_orb:
        raise ValueError(f"NELEC={n_elec} exceeds 2*NORB={2 * n_orb}")

    e_core = 0.0
    h = np.zeros((n_orb, n_orb))
    eri: dict[tuple[int, int, int, int], float] = {}
    for raw in body.splitlines():
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"malformed integral line: {line!r}")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
        except ValueError as exc:
            raise ValueError(f"non-numeric value in line: {line!r}") from exc
        try:
            i, j, k, l = (int(t) for t in parts[1:])
        except ValueError as exc:
            raise ValueError(f"non-integer index in line: {line!r}") from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orb:
                raise ValueError(f"index {idx} outside [0, {n_orb}]")
        if i == j == k == l == 0:
            e_core = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise ValueError(f"one-electron line needs i,j >= 1: {line!r}")
            h[i - 1, j - 1] = value
            h[j - 1, i - 1] = value
        else:
            if min(i, j, k, l) == 0:
                raise ValueError(f"two-electron line needs all indices >= 1: {line!r}")
            eri[eri_key(i - 1, j - 1, k - 1, l - 1)] = value
    return OrbitalIntegrals(n_orb=n_orb, n_elec=n_elec, ms2=ms2, e_core=e_core, h=h, eri=eri)


def _split_header(text: str) -> tuple[str, str]:
    upper = text.upper()
    start = upper.find("&FCI")
    if start < 0:
        raise ValueError("missing &FCI header")
    end_tag = upper.find("&END", start + 4)
    slash = upper.find("/", start + 4)
    if end_tag < 0 and slash < 0:
        raise ValueError("header not terminated by &END or /")
    if end_tag >= 0 and (slash < 0 or end_tag < slash):
        return text[start + 4 : end_tag], text[end_tag + 4 :]
    return text[start + 4 : slash], text[slash + 1 :]


def _parse_header(header: str) -> dict[str, int]:
    keys: dict[str, int] = {}
    # normalize "KEY = v1,v2," runs into parseable chunks
    cleaned = header.replace("=", " = ").replace(",", " , ")
    tokens = cleaned.split()
    i = 0
    while i < len(tokens):
        tok = tokens[i].upper()
        if i + 1 < len(tokens) and tokens[i + 1] == "=":
            values = []
            j = i + 2
            while j < len(tokens) and tokens[j] != "=":
                if tokens[j] == ",":
                    j += 1
                    continue
                if j + 1 < len(tokens) and tokens[j + 1] == "=":
                    break
                values.append(tokens[j])
                j += 1
            if tok in ("NORB", "NELEC", "MS2", "ISYM") and values:
                try:
                    keys[tok] = int(values[0])
                except ValueError as exc:
                    raise ValueError(f"non-integer header value for {tok}") from exc
            i = j
        else:
            i += 1
    return keys


def write_fcidump(ints: OrbitalIntegrals) -> str:
    """Render an FCIDUMP document; parse(write(x)) is value-identical.

    Values are written with 17 significant digits so round-trips are
    bit-exact.  Only stored two-electron entries and nonzero one-electron
    entries are emitted; the core energy line is always last.
    """
    lines = [
        f"&FCI NORB={ints.n_orb},NELEC={ints.n_elec},MS2={ints.ms2},",
        " ORBSYM=" + ",".join("1" for _ in range(ints.n_orb)) + ",",
        " ISYM=1,",
        "&END",
    ]
    for (p, q, r, s), value in sorted(ints.eri.items()):
        lines.append(f"{value:.17g} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(ints.n_orb):
        for q in range(p + 1):
            if ints.h[p, q] != 0.0:
                lines.append(f"{ints.h[p, q]:.17g} {p + 1} {q + 1} 0 0")
    lines.append(f"{ints.e_core:.17g} 0 0 0 0")
    return "\n".join(lines) + "\n"


def fold_core(ints: OrbitalIntegrals, active: list[int] | tuple[int, ...]) -> ActiveSpaceHamiltonian:
    """Fold frozen-core contributions onto the ``active`` orbital subset.

    The closed-shell reference doubly occupies the n_elec/2 lowest-index
    orbitals; occupied orbitals absent from ``active`` are frozen, virtuals
    absent from it are dropped.
    """
    active = sorted(set(int(a) for a in active))
    for a in active:
        if not 0 <= a < ints.n_orb:
            raise ValueError(f"active orbital {a} outside [0, {ints.n_orb})")
    occ = set(range(ints.n_occ))
    frozen = sorted(occ - set(active))
    n_act_elec = ints.n_elec - 2 * len(frozen)
    if n_act_elec < 0 or n_act_elec > 2 * len(active):
        raise ValueError("active electron count inconsistent with active set")

    e_frozen = ints.e_core
    for i in frozen:
        e_frozen += 2.0 * ints.h[i, i]
        for j in frozen:
            e_frozen += 2.0 * ints.eri_get(i, i, j, j) - ints.eri_get(i, j, j, i)

    n_act = len(active)
    h_eff = np.zeros((n_act, n_act))
    for pi, p in enumerate(active):
        for qi, q in enumerate(active):
            v = ints.h[p, q]
            for i in frozen:
                v += 2.0 * ints.eri_get(p, q, i, i) - ints.eri_get(p, i, i, q)
            h_eff[pi, qi] = v

    pos = {p: i for i, p in enumerate(active)}
    eri_act: dict[tuple[int, int, int, int], float] = {}
    for (p, q, r, s), value in ints.eri.items():
        if p in pos and q in pos and r in pos and s in pos:
            eri_act[eri_key(pos[p], pos[q], pos[r], pos[s])] = value
    return ActiveSpaceHamiltonian(
        n_act=n_act,
        n_act_elec=n_act_elec,
        e_frozen=e_frozen,
        h_eff=h_eff,
        eri_act=eri_act,
        orbital_ids=tuple(active),
    )


def barrier_kcal(e_is: float, e_ts: float) -> float:
    """Barrier (e_ts - e_is) converted from hartree to kcal/mol."""
    if not (math.isfinite(e_is) and math.isfinite(e_ts)):
        raise ValueError("energies must be finite")
    return (e_ts - e_is) * HARTREE_TO_KCAL
