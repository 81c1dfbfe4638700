"""Pauli-string algebra and spin-chain Hamiltonians.

Hamiltonians are kept as weighted Pauli strings and applied matrix-free;
nothing here ever materializes the 2^n x 2^n operator. Ground states come
from implicitly-restarted Lanczos (ARPACK) on the matrix-free apply, with a
dense fallback only for dimensions too small for ARPACK to be happy.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from . import _kernels as K
from .states import Statevector

_PAULI_LETTERS = ("X", "Y", "Z")

MAX_GROUND_QUBITS = 16


class ConvergenceError(RuntimeError):
    """Eigensolver failed to reach the requested residual."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class PauliTerm:
    """coefficient * tensor product of Pauli letters on the listed qubits."""

    coefficient: float
    operators: tuple  # sorted tuple of (qubit, letter)

    def __init__(self, coefficient, operators):
        if not math.isfinite(coefficient):
            raise ValueError(f"coefficient must be finite, got {coefficient}")
        if isinstance(operators, dict):
            items = operators.items()
        else:
            items = operators
        ops = tuple(sorted((int(q), str(p).upper()) for q, p in items))
        qubits = [q for q, _ in ops]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubit index in {ops}")
        for q, p in ops:
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if p not in _PAULI_LETTERS:
                raise ValueError(f"unknown Pauli letter {p!r}")
        object.__setattr__(self, "coefficient", float(coefficient))
        object.__setattr__(self, "operators", ops)

    @property
    def key(self):
        return self.operators

    def max_qubit(self):
        return max((q for q, _ in self.operators), default=-1)

    def masks(self, n):
        """(flip, zmask, phase) encoding for the kernels; see _kernels."""
        flip = 0
        zmask = 0
        n_y = 0
        for q, p in self.operators:
            bit = 1 << (n - 1 - q)
            if p in ("X", "Y"):
                flip |= bit
            if p in ("Y", "Z"):
                zmask |= bit
            if p == "Y":
                n_y += 1
        return flip, zmask, 1j ** n_y


@dataclass
class Hamiltonian:
    """Sum of PauliTerms on a fixed register. Duplicate strings are merged."""

    num_qubits: int
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"need at least 1 qubit, got {self.num_qubits}")
        merged = {}
        for t in self.terms:
            if t.max_qubit() >= self.num_qubits:
                raise ValueError(
                    f"term {t.operators} exceeds register of {self.num_qubits} qubits")
            merged[t.key] = merged.get(t.key, 0.0) + t.coefficient
        self.terms = [PauliTerm(c, ops) for ops, c in merged.items() if c != 0.0]
        self._arrays = None

    @property
    def norm_bound(self):
        """sum |c_i|, an operator-norm upper bound."""
        return float(sum(abs(t.coefficient) for t in self.terms))

    def encoded(self):
        """Kernel-ready (flips, zmasks, phases, coeffs) arrays, cached."""
        if self._arrays is None:
            n = self.num_qubits
            flips = np.empty(len(self.terms), dtype=np.int64)
            zmasks = np.empty(len(self.terms), dtype=np.int64)
            phases = np.empty(len(self.terms), dtype=np.complex128)
            coeffs = np.empty(len(self.terms), dtype=np.float64)
            for i, t in enumerate(self.terms):
                flips[i], zmasks[i], phases[i] = t.masks(n)
                coeffs[i] = t.coefficient
            self._arrays = (flips, zmasks, phases, coeffs)
        return self._arrays

    def apply(self, amplitudes, out=None):
        """H @ amplitudes on raw arrays (matrix-free)."""
        flips, zmasks, phases, coeffs = self.encoded()
        if out is None:
            out = np.zeros_like(amplitudes)
        K.ham_apply(out, amplitudes, flips, zmasks, phases, coeffs)
        return out

    def to_json_dict(self):
        return {
            "num_qubits": self.num_qubits,
            "terms": [
                {"coeff": t.coefficient,
                 "paulis": {str(q): p for q, p in t.operators}}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json_dict(cls, doc):
        terms = [
            PauliTerm(entry["coeff"], {int(q): p for q, p in entry["paulis"].items()})
            for entry in doc["terms"]
        ]
        return cls(int(doc["num_qubits"]), terms)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def build_tfim(n, coupling_j=1.0, field_h=1.0, boundary="open") -> Hamiltonian:
    """Transverse-field Ising chain: H = -J sum Z_i Z_{i+1} - h sum X_i."""
    if n < 2:
        raise ValueError(f"chain needs at least 2 sites, got {n}")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"boundary must be open or periodic, got {boundary!r}")
    terms = []
    bonds = n if boundary == "periodic" else n - 1
    for i in range(bonds):
        terms.append(PauliTerm(-coupling_j, {i: "Z", (i + 1) % n: "Z"}))
    for i in range(n):
        terms.append(PauliTerm(-field_h, {i: "X"}))
    return Hamiltonian(n, terms)


def build_xxz(n, coupling_j=1.0, delta=1.0, boundary="open") -> Hamiltonian:
    """Heisenberg XXZ chain: H = J sum (X X + Y Y + delta Z Z) on bonds."""
    if n < 2:
        raise ValueError(f"chain needs at least 2 sites, got {n}")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"boundary must be open or periodic, got {boundary!r}")
    terms = []
    bonds = n if boundary == "periodic" else n - 1
    for i in range(bonds):
        j = (i + 1) % n
        terms.append(PauliTerm(coupling_j, {i: "X", j: "X"}))
        terms.append(PauliTerm(coupling_j, {i: "Y", j: "Y"}))
        if delta != 0.0:
            terms.append(PauliTerm(coupling_j * delta, {i: "Z", j: "Z"}))
    return Hamiltonian(n, terms)


def apply_term(term: PauliTerm, state: Statevector) -> Statevector:
    """coefficient * P |state>; the input is left untouched."""
    n = state.num_qubits
    if term.max_qubit() >= n:
        raise ValueError(
            f"term acts on qubit {term.max_qubit()} but state has {n} qubits")
    flip, zmask, phase = term.masks(n)
    out = state.amplitudes.copy()
    K.apply_pauli_inplace(out, flip, zmask, phase)
    out *= term.coefficient
    return Statevector(n, out)


def expectation(h: Hamiltonian, state: Statevector) -> float:
    """<state| H |state> as a real number."""
    if h.num_qubits != state.num_qubits:
        raise ValueError(
            f"Hamiltonian on {h.num_qubits} qubits, state on {state.num_qubits}")
    if abs(state.norm() - 1.0) > 1e-10:
        raise ValueError(f"state is not normalized (norm {state.norm()!r})")
    flips, zmasks, phases, coeffs = h.encoded()
    val = K.ham_expectation(state.amplitudes, flips, zmasks, phases, coeffs)
    if abs(val.imag) > 1e-10:
        raise RuntimeError(
            f"expectation has imaginary residue {val.imag:.3e}; "
            "Hermiticity bug somewhere upstream")
    return float(val.real)


def _linear_operator(h: Hamiltonian):
    dim = 1 << h.num_qubits
    buf = np.empty(dim, dtype=np.complex128)

    def matvec(v):
        return h.apply(np.ascontiguousarray(v, dtype=np.complex128), buf).copy()

    return spla.LinearOperator((dim, dim), matvec=matvec, dtype=np.complex128)


def _dense_from_apply(h: Hamiltonian):
    dim = 1 << h.num_qubits
    cols = np.zeros((dim, dim), dtype=np.complex128)
    e = np.zeros(dim, dtype=np.complex128)
    for k in range(dim):
        e[:] = 0.0
        e[k] = 1.0
        cols[:, k] = h.apply(e)
    return cols


def ground_state(h: Hamiltonian, tol=1e-9):
    """(E0, |g>) with residual ||H g - E0 g|| <= tol."""
    energies, vectors = _lowest_eigenpairs(h, k=1, tol=tol)
    state = Statevector(h.num_qubits, vectors[:, 0])
    return float(energies[0]), state


def ground_space(h: Hamiltonian, tol=1e-9, degeneracy_tol=1e-8, max_dim=6):
    """(E0, orthonormal basis list) of the (possibly degenerate) ground space."""
    dim = 1 << h.num_qubits
    k = min(max_dim, dim - 1)
    energies, vectors = _lowest_eigenpairs(h, k=k, tol=tol)
    e0 = energies[0]
    span = max(degeneracy_tol, degeneracy_tol * abs(e0))
    basis = [Statevector(h.num_qubits, vectors[:, i])
             for i in range(len(energies)) if energies[i] - e0 <= span]
    return float(e0), basis


def _lowest_eigenpairs(h, k, tol):
    if h.num_qubits > MAX_GROUND_QUBITS:
        raise ValueError(
            f"ground-state solve capped at {MAX_GROUND_QUBITS} qubits")
    dim = 1 << h.num_qubits
    if dim <= 16 or k >= dim - 1:
        dense = _dense_from_apply(h)
        w, v = np.linalg.eigh(dense)
        order = np.argsort(w)[:k]
        energies, vectors = w[order], v[:, order]
    else:
        w, v = spla.eigsh(_linear_operator(h), k=k, which="SA",
                          ncv=min(dim, max(24, 3 * k + 8)), maxiter=8000)
        order = np.argsort(w)
        energies, vectors = w[order], v[:, order]
    for i in range(vectors.shape[1]):
        vec = vectors[:, i].astype(np.complex128)
        vec /= np.linalg.norm(vec)
        residual = float(np.linalg.norm(h.apply(vec) - energies[i] * vec))
        if residual > max(tol, 1e-12):
            raise ConvergenceError(
                f"eigenpair {i} residual {residual:.3e} exceeds {tol:.3e}",
                residual)
        vectors[:, i] = vec
    return energies, vectors
