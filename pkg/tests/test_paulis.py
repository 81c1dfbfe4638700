import json

import numpy as np
import pytest

from vqebench.paulis import (ConvergenceError, Hamiltonian, PauliTerm,
                             apply_term, build_tfim, build_xxz, expectation,
                             ground_space, ground_state)
from vqebench.states import Statevector, zero_state

from conftest import dense_hamiltonian


def test_tfim_term_structure():
    h = build_tfim(2, 1.0, 1.0, "open")
    zz = [t for t in h.terms if len(t.operators) == 2]
    xs = [t for t in h.terms if len(t.operators) == 1]
    assert len(zz) == 1 and zz[0].coefficient == -1.0
    assert len(xs) == 2 and all(t.coefficient == -1.0 for t in xs)
    assert all(p == "X" for t in xs for _, p in t.operators)


def test_tfim_periodic_adds_wraparound_bond():
    assert len(build_tfim(4, boundary="periodic").terms) == 8
    assert len(build_tfim(4, boundary="open").terms) == 7


def test_tfim_ground_energy_matches_closed_form():
    e0, _ = ground_state(build_tfim(2, 1.0, 1.0, "open"))
    assert e0 == pytest.approx(-np.sqrt(5), abs=1e-9)
    # closed form -sqrt(1 + 4 h^2) for the 2-site open chain
    e0b, _ = ground_state(build_tfim(2, 1.0, 0.5, "open"))
    assert e0b == pytest.approx(-np.sqrt(2), abs=1e-9)


def test_classical_ising_ground_energy():
    e0, _ = ground_state(build_tfim(4, 1.0, 0.0, "open"))
    assert e0 == pytest.approx(-3.0, abs=1e-9)


def test_xxz_examples():
    e0, _ = ground_state(build_xxz(2, 1.0, 1.0, "open"))
    assert e0 == pytest.approx(-3.0, abs=1e-9)
    e0, _ = ground_state(build_xxz(2, 1.0, 0.0, "open"))
    assert e0 == pytest.approx(-2.0, abs=1e-9)
    assert len(build_xxz(3, 1.0, 1.0, "open").terms) == 6


def test_invalid_sizes_rejected():
    with pytest.raises(ValueError):
        build_tfim(1)
    with pytest.raises(ValueError):
        build_xxz(1)
    with pytest.raises(ValueError):
        build_tfim(4, boundary="ring")


def test_duplicate_terms_merge():
    h = Hamiltonian(2, [PauliTerm(1.0, {0: "Z"}), PauliTerm(2.5, {0: "Z"})])
    assert len(h.terms) == 1
    assert h.terms[0].coefficient == 3.5


def test_term_validation():
    with pytest.raises(ValueError):
        PauliTerm(float("inf"), {0: "Z"})
    with pytest.raises(ValueError):
        PauliTerm(1.0, {0: "Q"})
    with pytest.raises(ValueError):
        PauliTerm(1.0, [(0, "Z"), (0, "X")])
    with pytest.raises(ValueError):
        Hamiltonian(2, [PauliTerm(1.0, {3: "Z"})])


def test_apply_term_examples():
    assert np.allclose(apply_term(PauliTerm(1.0, {0: "Z"}),
                                  zero_state(1)).amplitudes, [1, 0])
    assert np.allclose(apply_term(PauliTerm(1.0, {0: "X"}),
                                  zero_state(1)).amplitudes, [0, 1])
    assert np.allclose(apply_term(PauliTerm(2.0, {0: "Y"}),
                                  zero_state(1)).amplitudes, [0, 2j])


def test_apply_term_wire_check_and_norm(rng):
    with pytest.raises(ValueError):
        apply_term(PauliTerm(1.0, {2: "X"}), zero_state(2))
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = Statevector(3, v / np.linalg.norm(v))
    out = apply_term(PauliTerm(-1.7, {0: "X", 2: "Y"}), state)
    assert out.norm() == pytest.approx(1.7, abs=1e-12)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)  # input untouched


def test_apply_term_involution(rng):
    """P^2 = I for unit-coefficient strings."""
    for _ in range(10):
        n = rng.integers(2, 5)
        ops = {int(q): rng.choice(["X", "Y", "Z"])
               for q in rng.choice(n, size=rng.integers(1, n + 1),
                                   replace=False)}
        term = PauliTerm(1.0, ops)
        v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        state = Statevector(int(n), v / np.linalg.norm(v))
        twice = apply_term(term, apply_term(term, state))
        assert np.allclose(twice.amplitudes, state.amplitudes, atol=1e-12)


def test_expectation_examples():
    assert expectation(build_tfim(2), zero_state(2)) == pytest.approx(-1.0)
    singlet = Statevector(2, np.array([0, 1, -1, 0]) / np.sqrt(2))
    assert expectation(build_xxz(2), singlet) == pytest.approx(-3.0)
    plus3 = Statevector(3, np.full(8, 1 / np.sqrt(8), dtype=complex))
    assert expectation(build_tfim(3), plus3) == pytest.approx(-3.0)


def test_expectation_bounded_by_coefficient_sum(rng):
    for n in (2, 3, 4):
        h = build_xxz(n, 1.3, 0.7)
        for _ in range(5):
            v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            state = Statevector(n, v / np.linalg.norm(v))
            assert abs(expectation(h, state)) <= h.norm_bound + 1e-9


def test_expectation_rejects_bad_input(rng):
    h = build_tfim(2)
    with pytest.raises(ValueError):
        expectation(h, zero_state(3))
    with pytest.raises(ValueError):
        expectation(h, Statevector(2, [1.0, 1.0, 0, 0]))


@pytest.mark.parametrize("n", [2, 3, 4, 6, 8])
def test_ground_state_matches_dense_oracle(n):
    for h in (build_tfim(n), build_xxz(n)):
        e0, g = ground_state(h)
        w = np.linalg.eigvalsh(dense_hamiltonian(h))
        assert e0 == pytest.approx(w[0], abs=1e-8)
        assert expectation(h, g) == pytest.approx(e0, abs=1e-8)
        residual = np.linalg.norm(h.apply(g.amplitudes) - e0 * g.amplitudes)
        assert residual <= 1e-9


def test_ground_space_degenerate_classical_ising():
    # h = 0: the two ferromagnetic product states are both ground states
    e0, basis = ground_space(build_tfim(4, 1.0, 0.0, "open"))
    assert e0 == pytest.approx(-3.0, abs=1e-9)
    assert len(basis) == 2
    overlap = np.vdot(basis[0].amplitudes, basis[1].amplitudes)
    assert abs(overlap) < 1e-8


def test_ground_state_size_cap():
    h = build_tfim(2)
    h.num_qubits = 17  # simulate an oversized register
    with pytest.raises(ValueError):
        ground_state(h)


def test_json_round_trip(tmp_path):
    h = build_xxz(3, 0.8, 0.3)
    path = tmp_path / "h.json"
    h.save(path)
    doc = json.loads(path.read_text())
    assert doc["num_qubits"] == 3
    assert {"coeff", "paulis"} == set(doc["terms"][0])
    h2 = Hamiltonian.load(path)
    assert h2.num_qubits == h.num_qubits
    assert sorted(t.key for t in h2.terms) == sorted(t.key for t in h.terms)
    for t in h.terms:
        match = [u for u in h2.terms if u.key == t.key]
        assert match[0].coefficient == t.coefficient
