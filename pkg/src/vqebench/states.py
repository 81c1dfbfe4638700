"""Dense statevector engine: gates, overlaps, reduced-state analytics.

Qubit 0 is the most significant bit of the amplitude index (pinned by tests;
any consistent choice works but CSV reproducibility needs one). States are
value-semantic: public operations return fresh objects and never alias the
input buffers.
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K

MAX_QUBITS = 16

GATE_KINDS = ("rx", "ry", "rz", "h", "cnot", "cz", "pauli_rot")
PARAMETERIZED_KINDS = ("rx", "ry", "rz", "pauli_rot")

_KIND_CODE = {
    "rx": K.KIND_RX,
    "ry": K.KIND_RY,
    "rz": K.KIND_RZ,
    "h": K.KIND_H,
    "cnot": K.KIND_CNOT,
    "cz": K.KIND_CZ,
    "pauli_rot": K.KIND_RP2,
}


class Statevector:
    """2^n complex amplitudes. `amplitudes` is owned by the instance."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits, amplitudes):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits}")
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << num_qubits,):
            raise ValueError(
                f"expected {1 << num_qubits} amplitudes for {num_qubits} qubits, "
                f"got shape {amplitudes.shape}")
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    @property
    def dim(self):
        return 1 << self.num_qubits

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def copy(self):
        return Statevector(self.num_qubits, self.amplitudes.copy())

    def __repr__(self):
        return f"Statevector(num_qubits={self.num_qubits})"


@dataclass
class DensityMatrix:
    """2^n x 2^n operator; Hermiticity and unit trace checked on build."""

    num_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        d = 1 << self.num_qubits
        if self.matrix.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got {self.matrix.shape}")
        if abs(np.trace(self.matrix) - 1.0) > 1e-10:
            raise ValueError(f"trace must be 1, got {np.trace(self.matrix)}")
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > 1e-10:
            raise ValueError("matrix is not Hermitian within 1e-10")

    def validate_psd(self, tol=1e-9):
        """Eigenvalue check, O(d^3); separate because channels preserve it."""
        w = np.linalg.eigvalsh(self.matrix)
        if w.min() < -tol:
            raise ValueError(f"negative eigenvalue {w.min():.3e}")


@dataclass(frozen=True)
class GateOp:
    """One circuit element.

    `paulis` names the two generator letters of a `pauli_rot` gate (e.g.
    "ZZ" for exp(-i theta Z x Z)) and must be None otherwise. `param_slot`
    indexes into the bound parameter vector; fixed gates carry None.
    """

    kind: str
    wires: tuple
    param_slot: int = None
    paulis: str = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        wires = tuple(int(w) for w in self.wires)
        object.__setattr__(self, "wires", wires)
        expected = 2 if self.kind in ("cnot", "cz", "pauli_rot") else 1
        if len(wires) != expected:
            raise ValueError(f"{self.kind} takes {expected} wire(s), got {wires}")
        if len(set(wires)) != len(wires):
            raise ValueError(f"wires must be distinct, got {wires}")
        if self.parameterized and self.param_slot is None:
            raise ValueError(f"{self.kind} gate needs a param_slot")
        if not self.parameterized and self.param_slot is not None:
            raise ValueError(f"{self.kind} gate takes no parameter")
        if self.kind == "pauli_rot":
            if self.paulis is None or len(self.paulis) != 2 \
                    or any(c not in "XYZ" for c in self.paulis):
                raise ValueError("pauli_rot needs a two-letter axis like 'ZZ'")
        elif self.paulis is not None:
            raise ValueError("only pauli_rot gates carry a pauli axis")

    @property
    def parameterized(self):
        return self.kind in PARAMETERIZED_KINDS


def gate_generator(gate: GateOp, n: int):
    """(flip, zmask, phase) masks of the Pauli generator of a rotation gate.

    The generator P satisfies U(theta) = exp(-i theta P); see _kernels for
    the mask encoding.
    """
    if not gate.parameterized:
        raise ValueError(f"{gate.kind} has no generator")
    if gate.kind == "pauli_rot":
        letters = zip(gate.wires, gate.paulis)
    else:
        letters = [(gate.wires[0], gate.kind[1].upper())]
    flip = 0
    zmask = 0
    n_y = 0
    for q, p in letters:
        bit = 1 << (n - 1 - q)
        if p in ("X", "Y"):
            flip |= bit
        if p in ("Y", "Z"):
            zmask |= bit
        if p == "Y":
            n_y += 1
    return flip, zmask, 1j ** n_y


def zero_state(n):
    """|0...0> on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    amp = np.zeros(1 << n, dtype=np.complex128)
    amp[0] = 1.0
    return Statevector(n, amp)


def basis_state(n, index):
    if not 0 <= index < (1 << n):
        raise ValueError(f"basis index {index} out of range for {n} qubits")
    amp = np.zeros(1 << n, dtype=np.complex128)
    amp[index] = 1.0
    return Statevector(n, amp)


def apply_gate(state: Statevector, gate: GateOp, theta=None) -> Statevector:
    """Apply one gate, returning a new state. theta required iff parameterized."""
    n = state.num_qubits
    for w in gate.wires:
        if not 0 <= w < n:
            raise ValueError(f"wire {w} out of range for {n} qubits")
    if gate.parameterized and theta is None:
        raise ValueError(f"{gate.kind} needs an angle")
    if not gate.parameterized and theta is not None:
        raise ValueError(f"{gate.kind} takes no angle")
    out = state.amplitudes.copy()
    _apply_gate_raw(out, n, gate, 0.0 if theta is None else float(theta))
    return Statevector(n, out)


def _apply_gate_raw(amp, n, gate, theta):
    kind = gate.kind
    if kind == "rx":
        K.apply_rx(amp, gate.wires[0], n, theta)
    elif kind == "ry":
        K.apply_ry(amp, gate.wires[0], n, theta)
    elif kind == "rz":
        K.apply_rz(amp, gate.wires[0], n, theta)
    elif kind == "h":
        K.apply_hadamard(amp, gate.wires[0], n)
    elif kind == "cnot":
        K.apply_cnot(amp, gate.wires[0], gate.wires[1], n)
    elif kind == "cz":
        K.apply_cz(amp, gate.wires[0], gate.wires[1], n)
    else:
        flip, zmask, phase = gate_generator(gate, n)
        K.apply_pauli_rotation(amp, flip, zmask, phase, theta)


def fidelity(a: Statevector, b: Statevector) -> float:
    """|<a|b>|^2."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("dimension mismatch")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def _split_amplitudes(state, part):
    """Reshape amplitudes into a (2^|part|, 2^rest) matrix, part qubits leading."""
    n = state.num_qubits
    part = sorted(set(int(q) for q in part))
    if any(q < 0 or q >= n for q in part):
        raise ValueError(f"qubit subset {part} out of range for {n} qubits")
    if not part or len(part) == n:
        raise ValueError("subset must be a nonempty proper subset of the qubits")
    rest = [q for q in range(n) if q not in part]
    tensor = state.amplitudes.reshape([2] * n)
    tensor = np.transpose(tensor, part + rest)
    return tensor.reshape(1 << len(part), 1 << len(rest))


def reduced_density_matrix(state: Statevector, keep) -> DensityMatrix:
    """Partial trace onto `keep` (ascending qubit order)."""
    m = _split_amplitudes(state, keep)
    rho = m @ m.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(int(math.log2(rho.shape[0])), rho)


def schmidt_values(state: Statevector, cut):
    """Squared Schmidt coefficients across the bipartition (cut | rest)."""
    m = _split_amplitudes(state, cut)
    s = np.linalg.svd(m, compute_uv=False)
    return s ** 2


def entanglement_entropy(state: Statevector, cut, unit="nats") -> float:
    """Von Neumann entropy of the reduced state on `cut`.

    Schmidt weights below 1e-12 contribute zero. `unit` is "nats" or "bits".
    """
    lam = schmidt_values(state, cut)
    lam = lam[lam > 1e-12]
    s = float(-np.sum(lam * np.log(lam)))
    s = max(s, 0.0)
    if unit == "nats":
        return s
    if unit == "bits":
        return s / math.log(2)
    raise ValueError(f"unknown unit {unit!r}")


def renyi2_entropy(state: Statevector, cut) -> float:
    """-ln Tr(rho_cut^2), recorded alongside the von Neumann value."""
    lam = schmidt_values(state, cut)
    return float(-np.log(np.sum(lam ** 2)))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2); equals the Frobenius norm squared for Hermitian rho."""
    return float(np.vdot(rho.matrix, rho.matrix).real)


def hamming_mass(state: Statevector) -> np.ndarray:
    """Probability mass per Hamming weight of the basis index, length n+1."""
    n = state.num_qubits
    weights = np.bitwise_count(np.arange(1 << n, dtype=np.uint32))
    probs = np.abs(state.amplitudes) ** 2
    return np.bincount(weights, weights=probs, minlength=n + 1)


def effective_dimension(state: Statevector, mass_cutoff: float) -> int:
    """Count of basis states in the Hamming shells holding 1 - cutoff of the mass.

    Returns sum_{w<=w*} C(n, w) where w* is the smallest weight whose
    cumulative mass reaches 1 - mass_cutoff.
    """
    if not 0.0 < mass_cutoff < 1.0:
        raise ValueError(f"mass_cutoff must be in (0, 1), got {mass_cutoff}")
    mass = hamming_mass(state)
    cum = np.cumsum(mass)
    n = state.num_qubits
    w_star = n
    for w in range(n + 1):
        if cum[w] >= 1.0 - mass_cutoff:
            w_star = w
            break
    return sum(math.comb(n, w) for w in range(w_star + 1))


def random_haar_state(n, rng) -> Statevector:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return Statevector(n, v / np.linalg.norm(v))


_DUMP_MAGIC = b"VQBSTATE"
_DUMP_VERSION = 1


def save_state(state: Statevector, path):
    """Binary dump: 16-byte header (magic, version, n) + little-endian
    (real, imag) float64 pairs."""
    header = struct.pack("<8sII", _DUMP_MAGIC, _DUMP_VERSION, state.num_qubits)
    pairs = np.empty((state.dim, 2), dtype="<f8")
    pairs[:, 0] = state.amplitudes.real
    pairs[:, 1] = state.amplitudes.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(pairs.tobytes())


def load_state(path) -> Statevector:
    with open(path, "rb") as fh:
        header = fh.read(16)
        magic, version, n = struct.unpack("<8sII", header)
        if magic != _DUMP_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        if version != _DUMP_VERSION:
            raise ValueError(f"unsupported dump version {version}")
        pairs = np.frombuffer(fh.read(), dtype="<f8").reshape(1 << n, 2)
    return Statevector(n, pairs[:, 0] + 1j * pairs[:, 1])
