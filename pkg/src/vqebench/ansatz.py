"""Layered ansatz construction and parameter initialization.

Both circuit families share one topology (per layer: RY + RZ on every qubit,
then a linear entangling chain); they differ only in how initial angles are
drawn. That keeps the initialization scheme the single experimental variable
when the families are compared.

Initialization families:
  * heft_gaussian  -- theta = alpha * c_f with alpha ~ N(0, sigma_l^2),
                      sigma_l = kappa / (layers * qubits) * gamma**layer;
                      c_f is a per-gate-family coupling prior (default 1).
  * hea_uniform    -- theta ~ U[-pi, pi), the conventional wide baseline.

Parameter draws use counter-based Philox streams keyed by the seed, so
per-seed campaigns are reproducible and order-free.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .states import (
    GateOp,
    Statevector,
    gate_generator,
    zero_state,
)

FAMILIES = ("HEFT", "HEA")
ENTANGLERS = ("cnot_ladder", "cz_ladder", "pauli_zz_rotation")
INIT_FAMILIES = ("heft_gaussian", "hea_uniform")
GATE_FAMILIES = ("ry", "rz", "entangler")

# explicit constant of the parameterized-gate budget M_tot <= C1 * L * N
C1_GATE_BUDGET = 3


class _Compiled:
    """Kernel-ready gate arrays for one AnsatzSpec."""

    __slots__ = ("kinds", "q0", "q1", "slots", "gflip", "gzmask", "gphase",
                 "layers", "num_params", "n")

    def __init__(self, spec):
        gates = spec.gates
        m = len(gates)
        n = spec.num_qubits
        self.n = n
        self.num_params = spec.num_params
        self.kinds = np.empty(m, dtype=np.int8)
        self.q0 = np.empty(m, dtype=np.int8)
        self.q1 = np.full(m, -1, dtype=np.int8)
        self.slots = np.full(m, -1, dtype=np.int64)
        self.gflip = np.zeros(m, dtype=np.int64)
        self.gzmask = np.zeros(m, dtype=np.int64)
        self.gphase = np.ones(m, dtype=np.complex128)
        self.layers = np.asarray(spec.gate_layers, dtype=np.int64)
        kind_code = {"rx": K.KIND_RX, "ry": K.KIND_RY, "rz": K.KIND_RZ,
                     "h": K.KIND_H, "cnot": K.KIND_CNOT, "cz": K.KIND_CZ,
                     "pauli_rot": K.KIND_RP2}
        for g, gate in enumerate(gates):
            self.kinds[g] = kind_code[gate.kind]
            self.q0[g] = gate.wires[0]
            if len(gate.wires) == 2:
                self.q1[g] = gate.wires[1]
            if gate.parameterized:
                self.slots[g] = gate.param_slot
                self.gflip[g], self.gzmask[g], self.gphase[g] = \
                    gate_generator(gate, n)

    def thetas(self, params):
        th = np.zeros(len(self.kinds), dtype=np.float64)
        mask = self.slots >= 0
        th[mask] = params[self.slots[mask]]
        return th


@dataclass
class AnsatzSpec:
    """Ordered gate list plus slot metadata for one layered circuit."""

    family: str
    num_qubits: int
    num_layers: int
    entangler: str
    gates: tuple
    num_params: int
    gate_layers: tuple        # layer index per gate
    slot_gate_family: tuple   # "ry" | "rz" | "entangler" per parameter slot
    slot_layer: tuple         # layer index per parameter slot

    def __post_init__(self):
        self._compiled = None
        slots = [g.param_slot for g in self.gates if g.parameterized]
        if sorted(slots) != list(range(self.num_params)):
            raise ValueError("parameter slots must be exactly 0..num_params-1")
        if self.num_params > C1_GATE_BUDGET * self.num_layers * self.num_qubits:
            raise ValueError("parameterized-gate budget exceeded")

    def compiled(self):
        if self._compiled is None:
            self._compiled = _Compiled(self)
        return self._compiled

    @property
    def m_tot(self):
        """Parameterized-gate count (conservative budget; all rotations)."""
        return self.num_params

    @property
    def m_tot_two_qubit(self):
        """Two-qubit-gate count, the narrower budget reading."""
        return sum(1 for g in self.gates if len(g.wires) == 2)

    @property
    def rotations_only(self):
        return all(g.parameterized for g in self.gates)

    def to_json_dict(self):
        return {
            "family": self.family,
            "num_qubits": self.num_qubits,
            "num_layers": self.num_layers,
            "entangler": self.entangler,
            "num_params": self.num_params,
            "gates": [
                {"kind": g.kind, "wires": list(g.wires),
                 "param_slot": g.param_slot, "paulis": g.paulis}
                for g in self.gates
            ],
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@dataclass(frozen=True)
class InitSpec:
    """Initialization family plus its scale knobs; see module docstring."""

    family: str = "heft_gaussian"
    kappa: float = 1.0
    gamma: float = 1.0
    coupling_priors: tuple = (("ry", 1.0), ("rz", 1.0), ("entangler", 1.0))
    seed: int = 0

    def __post_init__(self):
        if self.family not in INIT_FAMILIES:
            raise ValueError(f"unknown init family {self.family!r}")
        if isinstance(self.coupling_priors, dict):
            object.__setattr__(
                self, "coupling_priors",
                tuple(sorted(self.coupling_priors.items())))
        priors = dict(self.coupling_priors)
        if set(priors) - set(GATE_FAMILIES):
            raise ValueError(f"unknown gate families in priors: {priors}")
        if self.family == "heft_gaussian":
            if self.kappa <= 0:
                raise ValueError(f"kappa must be positive, got {self.kappa}")
            if self.gamma <= 0:
                raise ValueError(f"gamma must be positive, got {self.gamma}")

    def sigma(self, num_qubits, num_layers):
        """Base Gaussian scale kappa / (L * N)."""
        return self.kappa / (num_layers * num_qubits)

    def prior(self, gate_family):
        return dict(self.coupling_priors).get(gate_family, 1.0)

    def with_seed(self, seed):
        return InitSpec(self.family, self.kappa, self.gamma,
                        self.coupling_priors, int(seed))

    def to_json_dict(self):
        return {
            "family": self.family,
            "kappa": self.kappa,
            "gamma": self.gamma,
            "coupling_priors": dict(self.coupling_priors),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class LocalizationBudget:
    epsilon: float      # max |theta_k|
    delta: float        # m_tot * epsilon
    sum_abs: float      # sum |theta_k|, the tighter budget


def build_ansatz(family, n, l, entangler="cnot_ladder") -> AnsatzSpec:
    """Layered circuit: per layer RY+RZ on each qubit, then an entangling chain."""
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if entangler not in ENTANGLERS:
        raise ValueError(f"entangler must be one of {ENTANGLERS}, got {entangler!r}")
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    if l < 1:
        raise ValueError(f"need at least 1 layer, got {l}")
    gates = []
    layers = []
    slot_fams = []
    slot_layers = []
    slot = 0
    for layer in range(l):
        for q in range(n):
            gates.append(GateOp("ry", (q,), param_slot=slot))
            layers.append(layer)
            slot_fams.append("ry")
            slot_layers.append(layer)
            slot += 1
        for q in range(n):
            gates.append(GateOp("rz", (q,), param_slot=slot))
            layers.append(layer)
            slot_fams.append("rz")
            slot_layers.append(layer)
            slot += 1
        for q in range(n - 1):
            if entangler == "cnot_ladder":
                gates.append(GateOp("cnot", (q, q + 1)))
            elif entangler == "cz_ladder":
                gates.append(GateOp("cz", (q, q + 1)))
            else:
                gates.append(GateOp("pauli_rot", (q, q + 1),
                                    param_slot=slot, paulis="ZZ"))
                slot_fams.append("entangler")
                slot_layers.append(layer)
                slot += 1
            layers.append(layer)
    return AnsatzSpec(
        family=family,
        num_qubits=n,
        num_layers=l,
        entangler=entangler,
        gates=tuple(gates),
        num_params=slot,
        gate_layers=tuple(layers),
        slot_gate_family=tuple(slot_fams),
        slot_layer=tuple(slot_layers),
    )


def parameter_rng(seed, *stream):
    """Philox generator for (seed, *stream); independent across stream keys."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))))


def draw_parameters(spec: AnsatzSpec, init: InitSpec) -> np.ndarray:
    """Initial angles for `spec` drawn from `init`; deterministic in init.seed."""
    expected = "heft_gaussian" if spec.family == "HEFT" else "hea_uniform"
    if init.family != expected:
        raise ValueError(
            f"init family {init.family!r} does not match ansatz family "
            f"{spec.family!r}")
    rng = parameter_rng(init.seed)
    if init.family == "hea_uniform":
        return rng.uniform(-np.pi, np.pi, spec.num_params)
    sigma = init.sigma(spec.num_qubits, spec.num_layers)
    scales = np.array([
        sigma * init.gamma ** layer * init.prior(fam)
        for fam, layer in zip(spec.slot_gate_family, spec.slot_layer)
    ])
    return rng.normal(0.0, 1.0, spec.num_params) * scales


def execute(spec: AnsatzSpec, params, input_state: Statevector = None) -> Statevector:
    """Run the circuit on `input_state` (default |0...0>)."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (spec.num_params,):
        raise ValueError(
            f"expected {spec.num_params} parameters, got shape {params.shape}")
    if input_state is None:
        state = zero_state(spec.num_qubits)
    else:
        if input_state.num_qubits != spec.num_qubits:
            raise ValueError("input state size does not match the circuit")
        state = input_state.copy()
    c = spec.compiled()
    K.run_circuit(state.amplitudes, c.n, c.kinds, c.q0, c.q1,
                  c.gflip, c.gzmask, c.gphase, c.thetas(params))
    return state


def localization_budget(params, spec: AnsatzSpec) -> LocalizationBudget:
    """Small-angle budgets: epsilon = max|theta|, delta = m_tot * epsilon."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (spec.num_params,):
        raise ValueError(
            f"expected {spec.num_params} parameters, got shape {params.shape}")
    if params.size == 0:
        return LocalizationBudget(0.0, 0.0, 0.0)
    eps = float(np.max(np.abs(params)))
    return LocalizationBudget(eps, spec.m_tot * eps, float(np.sum(np.abs(params))))
