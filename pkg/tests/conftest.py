import numpy as np
import pytest

# Pauli matrices for dense oracles built independently of the package kernels
I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def kron_all(letters):
    out = np.array([[1.0 + 0.0j]])
    for p in letters:
        out = np.kron(out, PAULIS[p])
    return out


def dense_hamiltonian(h):
    """Dense matrix oracle built with np.kron from the term data only."""
    n = h.num_qubits
    mat = np.zeros((1 << n, 1 << n), dtype=complex)
    for term in h.terms:
        letters = ["I"] * n
        for q, p in term.operators:
            letters[q] = p
        mat += term.coefficient * kron_all(letters)
    return mat


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
