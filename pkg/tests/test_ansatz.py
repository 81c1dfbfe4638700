import json

import numpy as np
import pytest

from vqebench.ansatz import (AnsatzSpec, InitSpec, build_ansatz,
                             draw_parameters, execute, localization_budget)
from vqebench.states import fidelity, zero_state


def test_gate_and_parameter_counts():
    spec = build_ansatz("HEFT", 2, 1, "cnot_ladder")
    assert spec.num_params == 4
    assert sum(1 for g in spec.gates if g.kind == "cnot") == 1

    spec = build_ansatz("HEA", 4, 3, "cnot_ladder")
    assert spec.num_params == 24
    assert sum(1 for g in spec.gates if g.kind == "cnot") == 9

    spec = build_ansatz("HEFT", 3, 2, "pauli_zz_rotation")
    assert spec.num_params == 16  # 2*3*2 rotations + 2 bonds * 2 layers


def test_param_slots_contiguous_and_budget():
    for fam, n, l, ent in [("HEFT", 5, 3, "cz_ladder"),
                           ("HEA", 4, 2, "pauli_zz_rotation")]:
        spec = build_ansatz(fam, n, l, ent)
        slots = sorted(g.param_slot for g in spec.gates if g.parameterized)
        assert slots == list(range(spec.num_params))
        assert spec.m_tot <= 3 * l * n
        assert spec.m_tot_two_qubit == (n - 1) * l


def test_build_rejects_bad_sizes():
    with pytest.raises(ValueError):
        build_ansatz("HEFT", 1, 1)
    with pytest.raises(ValueError):
        build_ansatz("HEFT", 4, 0)
    with pytest.raises(ValueError):
        build_ansatz("XYZ", 4, 1)
    with pytest.raises(ValueError):
        build_ansatz("HEFT", 4, 1, "ring")


def test_sigma_formula():
    init = InitSpec(kappa=1.0)
    assert init.sigma(12, 14) == pytest.approx(1.0 / 168.0)
    assert InitSpec(kappa=0.5).sigma(10, 4) == pytest.approx(0.0125)


def test_gaussian_draw_scale():
    spec = build_ansatz("HEFT", 4, 4)
    big = np.concatenate([
        draw_parameters(spec, InitSpec(kappa=1.0, seed=s))
        for s in range(100_000 // spec.num_params + 1)
    ])
    assert big.std() == pytest.approx(1 / 16, rel=0.02)
    assert abs(big.mean()) < 3 * big.std() / np.sqrt(big.size)


def test_uniform_draw_variance():
    spec = build_ansatz("HEA", 4, 4)
    big = np.concatenate([
        draw_parameters(spec, InitSpec(family="hea_uniform", seed=s))
        for s in range(100_000 // spec.num_params + 1)
    ])
    assert big.var() == pytest.approx(np.pi ** 2 / 3, rel=0.02)
    assert big.min() >= -np.pi and big.max() < np.pi


def test_draw_is_bitwise_deterministic():
    spec = build_ansatz("HEFT", 6, 3)
    a = draw_parameters(spec, InitSpec(kappa=1.0, seed=42))
    b = draw_parameters(spec, InitSpec(kappa=1.0, seed=42))
    assert np.array_equal(a, b)
    c = draw_parameters(spec, InitSpec(kappa=1.0, seed=43))
    assert not np.array_equal(a, c)


def test_tail_bound_over_many_draws():
    # P(|theta| > 6 sigma) is ~2e-9 per draw; 1e4 draws should stay inside
    spec = build_ansatz("HEFT", 5, 2)
    init = InitSpec(kappa=1.0)
    sigma = init.sigma(5, 2)
    draws = np.concatenate([
        draw_parameters(spec, init.with_seed(s))
        for s in range(10_000 // spec.num_params + 1)
    ])
    assert np.max(np.abs(draws)) <= 6 * sigma


def test_family_mismatch_rejected():
    spec = build_ansatz("HEFT", 4, 2)
    with pytest.raises(ValueError):
        draw_parameters(spec, InitSpec(family="hea_uniform"))


def test_coupling_priors_rescale_families():
    spec = build_ansatz("HEFT", 4, 2, "pauli_zz_rotation")
    base = draw_parameters(spec, InitSpec(kappa=1.0, seed=7))
    scaled = draw_parameters(spec, InitSpec(
        kappa=1.0, seed=7,
        coupling_priors={"ry": 2.0, "rz": 1.0, "entangler": 0.5}))
    fams = spec.slot_gate_family
    ratio = scaled / base
    assert np.allclose(ratio[[i for i, f in enumerate(fams) if f == "ry"]], 2.0)
    assert np.allclose(ratio[[i for i, f in enumerate(fams) if f == "rz"]], 1.0)
    assert np.allclose(
        ratio[[i for i, f in enumerate(fams) if f == "entangler"]], 0.5)


def test_layer_scale_multiplier():
    spec = build_ansatz("HEFT", 3, 3)
    flat = draw_parameters(spec, InitSpec(kappa=1.0, gamma=1.0, seed=5))
    decayed = draw_parameters(spec, InitSpec(kappa=1.0, gamma=0.5, seed=5))
    layers = np.array(spec.slot_layer)
    assert np.allclose(decayed, flat * 0.5 ** layers)


def test_execute_identity_at_zero_angles():
    for ent in ("cnot_ladder", "cz_ladder"):
        spec = build_ansatz("HEFT", 4, 3, ent)
        out = execute(spec, np.zeros(spec.num_params))
        assert np.array_equal(out.amplitudes, zero_state(4).amplitudes)
    spec = build_ansatz("HEFT", 4, 3, "pauli_zz_rotation")
    out = execute(spec, np.zeros(spec.num_params))
    assert fidelity(out, zero_state(4)) == pytest.approx(1.0, abs=1e-12)


def test_execute_single_ry_against_closed_form():
    spec = build_ansatz("HEFT", 2, 1)
    for theta in (0.3, np.pi, -1.2):
        params = np.zeros(spec.num_params)
        params[0] = theta  # RY on qubit 0, full-angle convention
        out = execute(spec, params)
        assert fidelity(out, zero_state(2)) == pytest.approx(
            np.cos(theta) ** 2, abs=1e-12)


def test_execute_validates_lengths():
    spec = build_ansatz("HEFT", 3, 1)
    with pytest.raises(ValueError):
        execute(spec, np.zeros(spec.num_params + 1))
    with pytest.raises(ValueError):
        execute(spec, np.zeros(spec.num_params), zero_state(4))


def test_localization_budget_arithmetic():
    spec = build_ansatz("HEFT", 2, 1)  # 4 params
    b = localization_budget(np.zeros(4), spec)
    assert (b.epsilon, b.delta, b.sum_abs) == (0.0, 0.0, 0.0)
    b = localization_budget(np.array([0.01, -0.02, 0.0, 0.0]), spec)
    assert b.epsilon == pytest.approx(0.02)
    assert b.delta == pytest.approx(4 * 0.02)
    assert b.sum_abs == pytest.approx(0.03)


def test_localization_budget_median_against_monte_carlo():
    """Median delta over seeds matches a direct-simulation oracle."""
    spec = build_ansatz("HEFT", 8, 8)
    init = InitSpec(kappa=1.0)
    sigma = init.sigma(8, 8)
    deltas = [localization_budget(draw_parameters(spec, init.with_seed(s)),
                                  spec).delta for s in range(1000)]
    rng = np.random.default_rng(99)
    oracle = [spec.m_tot * np.max(np.abs(
        rng.normal(0, sigma, spec.num_params))) for _ in range(1000)]
    assert np.median(deltas) == pytest.approx(np.median(oracle), rel=0.05)


def test_spec_json_round_trip(tmp_path):
    spec = build_ansatz("HEA", 3, 2, "pauli_zz_rotation")
    path = tmp_path / "spec.json"
    spec.save(path)
    doc = json.loads(path.read_text())
    assert doc["family"] == "HEA"
    assert doc["num_params"] == spec.num_params
    assert len(doc["gates"]) == len(spec.gates)
    init = InitSpec(family="hea_uniform", seed=9)
    assert init.to_json_dict()["seed"] == 9


def test_spec_rejects_slot_gaps():
    from vqebench.states import GateOp
    with pytest.raises(ValueError):
        AnsatzSpec("HEFT", 2, 1, "cnot_ladder",
                   (GateOp("ry", (0,), param_slot=1),), 1, (0,), ("ry",), (0,))
