import numpy as np
import pytest
from scipy.linalg import expm

from attenuant.fock import DensityMatrix, ModeDims

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def dense_beamsplitter(lam: float, cutoff: int) -> np.ndarray:
    """Reference unitary from a dense matrix exponential on a square truncation."""
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
    eye = np.eye(cutoff)
    A, B = np.kron(a, eye), np.kron(eye, a)
    theta = np.arccos(np.sqrt(lam))
    return expm(theta * (A.conj().T @ B - A @ B.conj().T))


def random_state(rng: np.random.Generator, d: int, rank: int | None = None) -> DensityMatrix:
    rank = d if rank is None else rank
    x = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = x @ x.conj().T
    return DensityMatrix(ModeDims((d,)), m / np.trace(m).real)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
