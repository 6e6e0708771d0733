from __future__ import annotations

from pathlib import Path

import pytest

from nisqchem import parse_fcidump

DATA_DIR = Path(__file__).parent / "data"

# frozen oracle values from scripts/make_h2_fixture.py (independent
# closed-form integrals + script-local sector diagonalization)
H2_E_FCI = -1.137270174884926
H2_E_HF = -1.116684387248653
H2_E_NUC = 0.713753993687618


@pytest.fixture(scope="session")
def h2_text() -> str:
    return (DATA_DIR / "h2_sto3g.fcidump").read_text()


@pytest.fixture(scope="session")
def h2_ints(h2_text):
    return parse_fcidump(h2_text)
