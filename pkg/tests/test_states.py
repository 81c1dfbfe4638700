import math

import numpy as np
import pytest

from vqebench.states import (DensityMatrix, GateOp, Statevector, apply_gate,
                             basis_state, effective_dimension,
                             entanglement_entropy, fidelity, hamming_mass,
                             load_state, purity, random_haar_state,
                             reduced_density_matrix, renyi2_entropy,
                             save_state, schmidt_values, zero_state)


def bell():
    return Statevector(2, np.array([1, 0, 0, 1]) / np.sqrt(2))


def ghz(n):
    amp = np.zeros(1 << n, dtype=complex)
    amp[0] = amp[-1] = 1 / np.sqrt(2)
    return Statevector(n, amp)


def test_zero_state():
    assert np.allclose(zero_state(1).amplitudes, [1, 0])
    assert np.allclose(zero_state(2).amplitudes, [1, 0, 0, 0])
    assert zero_state(14).norm() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        zero_state(0)
    with pytest.raises(ValueError):
        zero_state(17)


def test_qubit_zero_is_most_significant_bit():
    flipped = apply_gate(zero_state(3), GateOp("rx", (0,), param_slot=0),
                         np.pi / 2)
    # |100> lives at index 4 under the pinned ordering
    assert abs(flipped.amplitudes[4]) == pytest.approx(1.0, abs=1e-12)


def test_rx_full_angle_convention():
    out = apply_gate(zero_state(1), GateOp("rx", (0,), param_slot=0), np.pi / 2)
    assert np.allclose(out.amplitudes, [0, -1j], atol=1e-12)


def test_cnot_example():
    out = apply_gate(basis_state(2, 0b10), GateOp("cnot", (0, 1)))
    assert np.allclose(out.amplitudes, basis_state(2, 0b11).amplitudes)


def test_zz_rotation_on_eigenstate_is_global_phase():
    theta = 0.37
    out = apply_gate(zero_state(2), GateOp("pauli_rot", (0, 1), param_slot=0,
                                           paulis="ZZ"), theta)
    assert out.amplitudes[0] == pytest.approx(np.exp(-1j * theta), abs=1e-12)
    assert np.allclose(np.abs(out.amplitudes) ** 2,
                       np.abs(zero_state(2).amplitudes) ** 2, atol=1e-12)


def test_gate_parameter_contract():
    with pytest.raises(ValueError):
        apply_gate(zero_state(1), GateOp("rx", (0,), param_slot=0))  # missing
    with pytest.raises(ValueError):
        apply_gate(zero_state(2), GateOp("h", (0,)), 0.3)  # extra
    with pytest.raises(ValueError):
        apply_gate(zero_state(1), GateOp("cnot", (0, 1)))  # wire range
    with pytest.raises(ValueError):
        GateOp("cnot", (1, 1))
    with pytest.raises(ValueError):
        GateOp("pauli_rot", (0, 1), param_slot=0, paulis="ZQ")


def test_gate_unitarity_and_inverse(rng):
    gates = [
        (GateOp("rx", (0,), param_slot=0), 0.7),
        (GateOp("ry", (1,), param_slot=0), -1.2),
        (GateOp("rz", (2,), param_slot=0), 2.9),
        (GateOp("pauli_rot", (0, 2), param_slot=0, paulis="XY"), 0.4),
        (GateOp("cnot", (1, 0)), None),
        (GateOp("cz", (0, 2)), None),
        (GateOp("h", (1,)), None),
    ]
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = Statevector(3, v / np.linalg.norm(v))
    for gate, theta in gates:
        out = apply_gate(state, gate, theta)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)
        if gate.parameterized:
            back = apply_gate(out, gate, -theta)
        elif gate.kind in ("cnot", "cz", "h"):
            back = apply_gate(out, gate)
        assert np.allclose(back.amplitudes, state.amplitudes, atol=1e-10)


def test_fidelity_examples():
    one = apply_gate(zero_state(1), GateOp("rx", (0,), param_slot=0), np.pi / 2)
    plus = apply_gate(zero_state(1), GateOp("h", (0,)))
    assert fidelity(zero_state(1), zero_state(1)) == pytest.approx(1.0)
    assert fidelity(zero_state(1), one) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(zero_state(1), plus) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fidelity(zero_state(1), zero_state(2))


def test_reduced_density_matrix_examples():
    rho = reduced_density_matrix(bell(), [0])
    assert np.allclose(rho.matrix, np.eye(2) / 2, atol=1e-12)
    rho = reduced_density_matrix(basis_state(2, 0b01), [0])
    assert np.allclose(rho.matrix, [[1, 0], [0, 0]], atol=1e-12)
    with pytest.raises(ValueError):
        reduced_density_matrix(bell(), [])
    with pytest.raises(ValueError):
        reduced_density_matrix(bell(), [0, 1])


def test_partial_trace_properties(rng):
    for _ in range(5):
        state = random_haar_state(4, rng)
        keep = [0, 2]
        rho = reduced_density_matrix(state, keep)
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
        rho.validate_psd()


def test_entropy_examples():
    assert entanglement_entropy(bell(), [0]) == pytest.approx(math.log(2))
    assert entanglement_entropy(bell(), [0], unit="bits") == pytest.approx(1.0)
    assert entanglement_entropy(zero_state(4), [0, 1]) == pytest.approx(0.0)
    assert entanglement_entropy(ghz(4), [0, 1]) == pytest.approx(math.log(2))


def test_entropy_symmetric_under_complement(rng):
    state = random_haar_state(5, rng)
    cut = [0, 3]
    complement = [1, 2, 4]
    assert entanglement_entropy(state, cut) == pytest.approx(
        entanglement_entropy(state, complement), abs=1e-10)


def test_purity_examples(rng):
    assert purity(DensityMatrix(1, np.eye(2) / 2)) == pytest.approx(0.5)
    state = random_haar_state(3, rng)
    proj = np.outer(state.amplitudes, state.amplitudes.conj())
    assert purity(DensityMatrix(3, proj)) == pytest.approx(1.0)
    assert purity(DensityMatrix(6, np.eye(64) / 64)) == pytest.approx(1 / 64)


def test_purity_matches_schmidt_weights(rng):
    """Tr(rho_A^2) equals the sum of squared Schmidt weights (SVD route)."""
    for _ in range(5):
        state = random_haar_state(5, rng)
        cut = [1, 2]
        lam = schmidt_values(state, cut)
        assert purity(reduced_density_matrix(state, cut)) == pytest.approx(
            float(np.sum(lam ** 2)), abs=1e-10)
        assert renyi2_entropy(state, cut) == pytest.approx(
            -math.log(float(np.sum(lam ** 2))), abs=1e-10)


def test_hamming_mass_examples():
    assert np.allclose(hamming_mass(zero_state(3)), [1, 0, 0, 0])
    plus2 = apply_gate(apply_gate(zero_state(2), GateOp("h", (0,))),
                       GateOp("h", (1,)))
    assert np.allclose(hamming_mass(plus2), [0.25, 0.5, 0.25])
    assert np.allclose(hamming_mass(ghz(3)), [0.5, 0, 0, 0.5])


def test_hamming_mass_sums_to_one(rng):
    for n in (2, 5, 9):
        mass = hamming_mass(random_haar_state(n, rng))
        assert mass.sum() == pytest.approx(1.0, abs=1e-10)


def test_effective_dimension_examples(rng):
    assert effective_dimension(zero_state(8), 1e-6) == 1
    assert effective_dimension(ghz(4), 1e-6) == 16
    # |+>^4 against a direct enumeration oracle
    state = zero_state(4)
    for q in range(4):
        state = apply_gate(state, GateOp("h", (q,)))
    probs = np.abs(state.amplitudes) ** 2
    weights = np.array([bin(i).count("1") for i in range(16)])
    cutoff = 0.5
    by_weight = [probs[weights == w].sum() for w in range(5)]
    cum = np.cumsum(by_weight)
    w_star = int(np.argmax(cum >= 1 - cutoff))
    expected = int(sum(math.comb(4, w) for w in range(w_star + 1)))
    assert effective_dimension(state, cutoff) == expected
    with pytest.raises(ValueError):
        effective_dimension(state, 0.0)


def test_norm_preserved_over_long_gate_sequence(rng):
    state = zero_state(6)
    kinds = ["rx", "ry", "rz", "h", "cnot", "cz"]
    for i in range(200):
        kind = kinds[i % len(kinds)]
        q = int(rng.integers(0, 6))
        if kind in ("cnot", "cz"):
            q2 = (q + 1) % 6
            state = apply_gate(state, GateOp(kind, (q, q2)))
        elif kind == "h":
            state = apply_gate(state, GateOp(kind, (q,)))
        else:
            state = apply_gate(state, GateOp(kind, (q,), param_slot=0),
                               float(rng.uniform(-np.pi, np.pi)))
    assert abs(state.norm() - 1.0) <= 1e-10 * 200


def test_state_dump_round_trip(tmp_path, rng):
    state = random_haar_state(5, rng)
    path = tmp_path / "state.bin"
    save_state(state, path)
    raw = path.read_bytes()
    assert len(raw) == 16 + 32 * 16  # header + 2^5 pairs of f8
    assert raw[:8] == b"VQBSTATE"
    loaded = load_state(path)
    assert loaded.num_qubits == 5
    assert np.array_equal(loaded.amplitudes, state.amplitudes)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(1, np.array([[0.6, 0], [0, 0.6]]))  # trace
    with pytest.raises(ValueError):
        DensityMatrix(1, np.array([[0.5, 0.3], [0.1, 0.5]]))  # hermiticity
