"""Depolarizing noise: exact channel evolution and trajectory unraveling.

The density-matrix backend composes gates and single-qubit depolarizing
channels exactly (memory 4^n, capped at n = 10). The trajectory backend
applies a sampled Pauli after each noise insertion on a pure state; its
observable averages converge to the channel result, which is what the
small-n property tests pin down.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .ansatz import AnsatzSpec
from .paulis import Hamiltonian
from .states import DensityMatrix, zero_state

MAX_DENSITY_QUBITS = 10

PLACEMENTS = ("after_each_gate_on_touched_wires", "after_each_layer_all_wires")


@dataclass(frozen=True)
class NoiseModel:
    p_depol: float
    placement: str = "after_each_gate_on_touched_wires"

    def __post_init__(self):
        if not 0.0 <= self.p_depol < 1.0:
            raise ValueError(f"p_depol must be in [0, 1), got {self.p_depol}")
        if self.placement not in PLACEMENTS:
            raise ValueError(f"unknown placement {self.placement!r}")


@dataclass
class TrajectoryEstimate:
    """Monte Carlo observable average over noise trajectories."""

    mean: float
    stderr: float
    count: int
    energies: np.ndarray = None


_SQ = 1 / math.sqrt(2)
_MATS_1Q = {
    "h": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=np.complex128),
}
_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def gate_matrix(gate, theta=None):
    """Dense matrix of one gate (2x2 or 4x4), full-angle rotation convention."""
    if gate.kind in ("rx", "ry", "rz"):
        p = _PAULI[gate.kind[1].upper()]
        return math.cos(theta) * np.eye(2) - 1j * math.sin(theta) * p
    if gate.kind == "h":
        return _MATS_1Q["h"]
    if gate.kind == "cnot":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                         [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128)
    if gate.kind == "cz":
        return np.diag([1, 1, 1, -1]).astype(np.complex128)
    if gate.kind == "pauli_rot":
        p = np.kron(_PAULI[gate.paulis[0]], _PAULI[gate.paulis[1]])
        return math.cos(theta) * np.eye(4) - 1j * math.sin(theta) * p
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _conjugate(rho_tensor, mat, axes, n):
    """rho -> (U rho U^dag) on the tensor view with 2n binary axes."""
    k = len(axes)
    m = mat.reshape([2] * (2 * k))
    # row side: contract the ket axes
    rho_tensor = np.tensordot(m, rho_tensor, axes=(list(range(k, 2 * k)), axes))
    rho_tensor = np.moveaxis(rho_tensor, list(range(k)), axes)
    # column side: bra axes pick up the conjugate
    col_axes = [n + q for q in axes]
    rho_tensor = np.tensordot(m.conj(), rho_tensor,
                              axes=(list(range(k, 2 * k)), col_axes))
    return np.moveaxis(rho_tensor, list(range(k)), col_axes)


def _depolarize_tensor(rho_tensor, q, n, p):
    """Single-qubit depolarizing on the tensor view, in block form."""
    t = np.moveaxis(rho_tensor, (q, n + q), (0, 1))
    a = t[0, 0].copy()
    d = t[1, 1].copy()
    t[0, 1] *= 1 - 4 * p / 3
    t[1, 0] *= 1 - 4 * p / 3
    t[0, 0] = (1 - 2 * p / 3) * a + (2 * p / 3) * d
    t[1, 1] = (1 - 2 * p / 3) * d + (2 * p / 3) * a
    return np.moveaxis(t, (0, 1), (q, n + q))


def apply_depolarizing(rho: DensityMatrix, qubit, p) -> DensityMatrix:
    """(1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) on one qubit."""
    n = rho.num_qubits
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0, 1), got {p}")
    t = rho.matrix.reshape([2] * (2 * n)).copy()
    t = _depolarize_tensor(t, qubit, n, p)
    return DensityMatrix(n, t.reshape(rho.matrix.shape))


def execute_density(spec: AnsatzSpec, params, noise: NoiseModel) -> DensityMatrix:
    """Exact noisy evolution of |0..0><0..0| through the circuit."""
    n = spec.num_qubits
    if n > MAX_DENSITY_QUBITS:
        raise ValueError(
            f"density backend capped at {MAX_DENSITY_QUBITS} qubits, got {n}")
    params = np.asarray(params, dtype=np.float64)
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    t = rho.reshape([2] * (2 * n))
    per_gate = noise.placement == "after_each_gate_on_touched_wires"
    prev_layer = 0
    for gate, layer in zip(spec.gates, spec.gate_layers):
        if not per_gate and layer != prev_layer:
            for q in range(n):
                t = _depolarize_tensor(t, q, n, noise.p_depol)
            prev_layer = layer
        theta = params[gate.param_slot] if gate.parameterized else None
        t = _conjugate(t, gate_matrix(gate, theta), list(gate.wires), n)
        if per_gate:
            for q in gate.wires:
                t = _depolarize_tensor(t, q, n, noise.p_depol)
    if not per_gate:
        for q in range(n):
            t = _depolarize_tensor(t, q, n, noise.p_depol)
    rho = t.reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(n, rho)


def expectation_density(h: Hamiltonian, rho: DensityMatrix) -> float:
    """Tr(H rho) via per-term index gathers (matrix-free in H)."""
    if h.num_qubits != rho.num_qubits:
        raise ValueError("size mismatch")
    n = rho.num_qubits
    idx = np.arange(1 << n)
    total = 0.0 + 0.0j
    for term in h.terms:
        flip, zmask, phase = term.masks(n)
        rows = idx ^ flip
        signs = 1.0 - 2.0 * (np.bitwise_count(rows & zmask) & 1)
        total += term.coefficient * phase * np.sum(signs * rho.matrix[rows, idx])
    if abs(total.imag) > 1e-9:
        raise RuntimeError(f"Tr(H rho) has imaginary residue {total.imag:.3e}")
    return float(total.real)


def execute_trajectories(spec: AnsatzSpec, params, noise: NoiseModel,
                         h: Hamiltonian, count, seed=0) -> TrajectoryEstimate:
    """Average <H> over `count` sampled-Pauli noise trajectories."""
    if count < 1:
        raise ValueError("need at least one trajectory")
    params = np.asarray(params, dtype=np.float64)
    c = spec.compiled()
    thetas = c.thetas(params)
    flips, zmasks, phases, coeffs = h.encoded()
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
    n = spec.num_qubits
    energies = np.empty(count)
    per_gate = noise.placement == "after_each_gate_on_touched_wires"
    if per_gate:
        uniforms = rng.random((count, 2 * len(spec.gates)))
        for t in range(count):
            amp = zero_state(n).amplitudes
            K.depolarize_trajectory(amp, n, c.kinds, c.q0, c.q1, c.gflip,
                                    c.gzmask, c.gphase, thetas, noise.p_depol,
                                    uniforms[t])
            energies[t] = K.ham_expectation(amp, flips, zmasks, phases,
                                            coeffs).real
    else:
        layer_starts = _layer_slices(spec)
        uniforms = rng.random((count, n * (spec.num_layers + 1)))
        for t in range(count):
            amp = zero_state(n).amplitudes
            u = uniforms[t]
            ui = 0
            for (start, stop) in layer_starts:
                K.run_circuit(amp, n, c.kinds[start:stop], c.q0[start:stop],
                              c.q1[start:stop], c.gflip[start:stop],
                              c.gzmask[start:stop], c.gphase[start:stop],
                              thetas[start:stop])
                for q in range(n):
                    _sample_pauli(amp, n, q, noise.p_depol, u[ui])
                    ui += 1
            energies[t] = K.ham_expectation(amp, flips, zmasks, phases,
                                            coeffs).real
    mean = float(np.mean(energies))
    stderr = float(np.std(energies, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
    return TrajectoryEstimate(mean, stderr, count, energies)


def _layer_slices(spec):
    layers = spec.gate_layers
    slices = []
    start = 0
    for g in range(1, len(layers) + 1):
        if g == len(layers) or layers[g] != layers[g - 1]:
            slices.append((start, g))
            start = g
    return slices


def _sample_pauli(amp, n, q, p, u):
    if u >= p:
        return
    bit = 1 << (n - 1 - q)
    which = int(u / p * 3.0)
    if which == 0:
        K.apply_pauli_inplace(amp, bit, 0, 1.0 + 0.0j)
    elif which == 1:
        K.apply_pauli_inplace(amp, bit, bit, 1.0j)
    else:
        K.apply_pauli_inplace(amp, 0, bit, 1.0 + 0.0j)


def execute_noisy(spec: AnsatzSpec, params, noise: NoiseModel,
                  backend="density_matrix", h: Hamiltonian = None,
                  trajectories=1000, seed=0):
    """Dispatch to the exact channel backend or the trajectory sampler.

    Returns a DensityMatrix for backend="density_matrix"; for
    backend="trajectories" an observable `h` is required and a
    TrajectoryEstimate comes back.
    """
    if backend == "density_matrix":
        return execute_density(spec, params, noise)
    if backend == "trajectories":
        if h is None:
            raise ValueError("trajectory backend needs an observable")
        return execute_trajectories(spec, params, noise, h, trajectories, seed)
    raise ValueError(f"unknown backend {backend!r}")
