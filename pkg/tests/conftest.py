import numpy as np
import pytest

from gsmkit import reference as ref
from gsmkit.basis import gell_mann_basis, partition_basis
from gsmkit.gsm import r_class_gsm, verify_gsm

ACCEPTANCE_LOG: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def qubit_2_3():
    """Projective qubit GSM with blocks (2, 3), from explicit matrices."""
    res = verify_gsm(ref.qubit_projective_2_3(), 2)
    assert res.ok
    return res.gsm


@pytest.fixture(scope="session")
def qubit_r_2_3():
    """Qubit GSM, blocks (2, 3), r = 1/3 (largest admissible r)."""
    return r_class_gsm(partition_basis(gell_mann_basis(2), [2, 3]), 1 / 3)


@pytest.fixture(scope="session")
def qubit_sic():
    res = verify_gsm([ref.qubit_sic_families()["unprimed:+"]], 2)
    assert res.ok
    return res.gsm


@pytest.fixture(scope="session")
def qubit_mub():
    """Three mutually unbiased qubit bases (r = 1)."""
    return r_class_gsm(partition_basis(gell_mann_basis(2), [2, 2, 2]), 1.0)


@pytest.fixture(scope="session")
def qutrit_r_3333():
    return r_class_gsm(partition_basis(gell_mann_basis(3), [3, 3, 3, 3]), 1 / 3)
