"""Parameter-shift gradients and gradient-variance experiments.

Every parameterized gate here is a Pauli rotation exp(-i theta P) with
P^2 = I, so the cost is a degree-2 trigonometric polynomial in each angle
and the shift rule is exact:

    dC/dtheta_j = C(theta + pi/4 e_j) - C(theta - pi/4 e_j).

The prefactor (1, for full-angle rotations) is re-verified at import time
against a central finite difference on a one-qubit probe; the half-angle
convention would silently halve every gradient otherwise.

Two evaluation paths produce identical values:
  * "shifted" runs the two displaced circuits per parameter (the defining
    form, O(params * circuit) work);
  * "fused" computes every displaced-cost difference in one backward sweep
    using R(+-pi/4) = (I -+ i P)/sqrt(2), O(circuit) work. Tests pin the
    two paths together to 1e-12.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .ansatz import AnsatzSpec, InitSpec, build_ansatz, draw_parameters
from .paulis import Hamiltonian, build_tfim, build_xxz
from .states import zero_state

SHIFT = math.pi / 4

J_POLICIES = ("first", "middle", "last", "all_mean")


@dataclass
class GradientEstimate:
    """Gradient vector (energy per radian) plus the cost at the point.

    When a single component was requested, the other entries are zero by
    construction, not computed; `component` records which one is live.
    """

    values: np.ndarray
    cost_at_point: float
    component: int = None


@dataclass
class ScanRow:
    family: str
    hamiltonian: str
    n: int
    l: int
    sigma: float
    kappa: float
    seeds: int
    j_policy: str
    grad_mean: float
    grad_var: float


@dataclass
class VarianceScan:
    rows: list = field(default_factory=list)

    CSV_COLUMNS = ("family", "hamiltonian", "n", "l", "sigma", "kappa",
                   "seeds", "j_policy", "grad_mean", "grad_var")

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(self.CSV_COLUMNS)
            for r in self.rows:
                w.writerow([r.family, r.hamiltonian, r.n, r.l,
                            repr(r.sigma), repr(r.kappa), r.seeds, r.j_policy,
                            repr(r.grad_mean), repr(r.grad_var)])

    @classmethod
    def from_csv(cls, path):
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for rec in csv.DictReader(fh):
                rows.append(ScanRow(
                    rec["family"], rec["hamiltonian"], int(rec["n"]),
                    int(rec["l"]), float(rec["sigma"]), float(rec["kappa"]),
                    int(rec["seeds"]), rec["j_policy"],
                    float(rec["grad_mean"]), float(rec["grad_var"])))
        return cls(rows)


def cost(h: Hamiltonian, spec: AnsatzSpec, params) -> float:
    """C(theta) = <0| U(theta)^dag H U(theta) |0>."""
    c = spec.compiled()
    state = zero_state(spec.num_qubits)
    K.run_circuit(state.amplitudes, c.n, c.kinds, c.q0, c.q1,
                  c.gflip, c.gzmask, c.gphase, c.thetas(np.asarray(params, dtype=np.float64)))
    flips, zmasks, phases, coeffs = h.encoded()
    val = K.ham_expectation(state.amplitudes, flips, zmasks, phases, coeffs)
    return float(val.real)


def _grad_component_shifted(h, spec, params, j):
    params = np.asarray(params, dtype=np.float64)
    plus = params.copy()
    plus[j] += SHIFT
    minus = params.copy()
    minus[j] -= SHIFT
    return cost(h, spec, plus) - cost(h, spec, minus)


def _grad_all_shifted(h, spec, params):
    return np.array([_grad_component_shifted(h, spec, params, j)
                     for j in range(spec.num_params)])


def _grad_all_fused(h, spec, params):
    c = spec.compiled()
    thetas = c.thetas(np.asarray(params, dtype=np.float64))
    a = zero_state(spec.num_qubits).amplitudes
    K.run_circuit(a, c.n, c.kinds, c.q0, c.q1, c.gflip, c.gzmask, c.gphase,
                  thetas)
    b = h.apply(a)
    energy = float(np.vdot(a, b).real)
    grads = np.zeros(spec.num_params)
    K.shift_rule_sweep(a, b, c.n, c.kinds, c.q0, c.q1, c.slots,
                       c.gflip, c.gzmask, c.gphase, thetas, grads)
    return grads, energy


def parameter_shift_grad(h: Hamiltonian, spec: AnsatzSpec, params,
                         j="all", method="auto") -> GradientEstimate:
    """Exact gradient by the shift rule; `j` is a slot index or "all".

    method: "auto" picks the fused sweep for full gradients and the literal
    two-evaluation form for a single component; "shifted" forces the literal
    form everywhere (slower, used for cross-checks).
    """
    _verify_shift_prefactor()
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (spec.num_params,):
        raise ValueError(
            f"expected {spec.num_params} parameters, got shape {params.shape}")
    if method not in ("auto", "shifted", "fused"):
        raise ValueError(f"unknown method {method!r}")
    if j == "all":
        if method == "shifted":
            values = _grad_all_shifted(h, spec, params)
            return GradientEstimate(values, cost(h, spec, params))
        values, energy = _grad_all_fused(h, spec, params)
        return GradientEstimate(values, energy)
    j = int(j)
    if not 0 <= j < spec.num_params:
        raise ValueError(f"parameter index {j} out of range")
    if method == "fused":
        values, energy = _grad_all_fused(h, spec, params)
        single = np.zeros(spec.num_params)
        single[j] = values[j]
        return GradientEstimate(single, energy, component=j)
    values = np.zeros(spec.num_params)
    values[j] = _grad_component_shifted(h, spec, params, j)
    return GradientEstimate(values, cost(h, spec, params), component=j)


def finite_difference_grad(h: Hamiltonian, spec: AnsatzSpec, params,
                           step=1e-4, j="all"):
    """Central-difference oracle, independent of the shift rule."""
    params = np.asarray(params, dtype=np.float64)
    indices = range(spec.num_params) if j == "all" else [int(j)]
    out = np.zeros(spec.num_params)
    for idx in indices:
        plus = params.copy()
        plus[idx] += step
        minus = params.copy()
        minus[idx] -= step
        out[idx] = (cost(h, spec, plus) - cost(h, spec, minus)) / (2 * step)
    return out


_PREFACTOR_CHECKED = False


def _verify_shift_prefactor():
    """Guard against the full-angle vs half-angle convention trap.

    One-qubit probe: RY circuit with H = Z has C(theta) = cos(2 theta); the
    shift-rule value must match the finite difference at a generic angle.
    """
    global _PREFACTOR_CHECKED
    if _PREFACTOR_CHECKED:
        return
    _PREFACTOR_CHECKED = True  # set first; cost() below re-enters
    from .paulis import PauliTerm
    h = Hamiltonian(2, [PauliTerm(1.0, {0: "Z"})])
    spec = build_ansatz("HEFT", 2, 1)
    params = np.zeros(spec.num_params)
    params[0] = 0.3
    shift_val = _grad_component_shifted(h, spec, params, 0)
    fd_val = finite_difference_grad(h, spec, params, j=0)[0]
    if abs(shift_val - fd_val) > 1e-6:
        raise AssertionError(
            f"shift-rule prefactor broken: shifted {shift_val} vs finite "
            f"difference {fd_val}")


_HAM_BUILDERS = {"tfim": build_tfim, "xxz": build_xxz}


def _resolve_hamiltonian(hamiltonian, n):
    if callable(hamiltonian):
        return hamiltonian(n), getattr(hamiltonian, "__name__", "custom")
    if hamiltonian in _HAM_BUILDERS:
        return _HAM_BUILDERS[hamiltonian](n), hamiltonian
    raise ValueError(f"unknown hamiltonian {hamiltonian!r}")


def _policy_indices(policy, num_params):
    if policy == "first":
        return [0]
    if policy == "middle":
        return [num_params // 2]
    if policy == "last":
        return [num_params - 1]
    if policy == "all_mean":
        return list(range(num_params))
    raise ValueError(f"unknown j_policy {policy!r}; choose from {J_POLICIES}")


def _sigma_of(init, n, l):
    if init.family == "hea_uniform":
        return float("nan")
    return init.sigma(n, l)


def variance_scan(hamiltonian, family, n_list, l_policy, init: InitSpec,
                  num_seeds, j_policy="first", entangler="cnot_ladder",
                  master_seed=0) -> VarianceScan:
    """Sample gradient variance per system size.

    For each n: `num_seeds` independent draws, gradient component(s) per
    `j_policy`, unbiased (n-1) sample variance across seeds. `l_policy` is
    "equal_n" (L = n) or a fixed integer depth. With j_policy "all_mean" the
    per-component variances are averaged.
    """
    if num_seeds < 2:
        raise ValueError("variance needs at least 2 seeds")
    scan = VarianceScan()
    for n in n_list:
        l = n if l_policy == "equal_n" else int(l_policy)
        h, ham_name = _resolve_hamiltonian(hamiltonian, n)
        spec = build_ansatz(family, n, l, entangler)
        indices = _policy_indices(j_policy, spec.num_params)
        use_fused = len(indices) > 1
        samples = np.empty((num_seeds, len(indices)))
        for s in range(num_seeds):
            seed = np.random.SeedSequence(master_seed, spawn_key=(n, s))
            params = draw_parameters(spec, init.with_seed(
                seed.generate_state(1)[0]))
            if use_fused:
                grad = parameter_shift_grad(h, spec, params).values
                samples[s] = grad[indices]
            else:
                samples[s, 0] = _grad_component_shifted(h, spec, params,
                                                        indices[0])
        var = float(np.mean(np.var(samples, axis=0, ddof=1)))
        mean = float(np.mean(samples))
        scan.rows.append(ScanRow(family, ham_name, n, l,
                                 _sigma_of(init, n, l), init.kappa
                                 if init.family == "heft_gaussian" else float("nan"),
                                 num_seeds, j_policy, mean, var))
    return scan


def init_scale_sweep(sigma_list, n, l, num_seeds, hamiltonian="tfim",
                     j_policy="first", entangler="cnot_ladder",
                     master_seed=0) -> VarianceScan:
    """Gradient variance as a function of the Gaussian init scale sigma.

    Uses the small-angle topology with kappa chosen so that
    kappa / (L * N) equals each requested sigma.
    """
    scan = VarianceScan()
    h, ham_name = _resolve_hamiltonian(hamiltonian, n)
    spec = build_ansatz("HEFT", n, l, entangler)
    indices = _policy_indices(j_policy, spec.num_params)
    use_fused = len(indices) > 1
    for sigma in sigma_list:
        if sigma <= 0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        init = InitSpec(family="heft_gaussian", kappa=sigma * l * n)
        samples = np.empty((num_seeds, len(indices)))
        for s in range(num_seeds):
            seed = np.random.SeedSequence(master_seed,
                                          spawn_key=(int(1e6 * sigma) & 0xFFFFFFFF, s))
            params = draw_parameters(spec, init.with_seed(
                seed.generate_state(1)[0]))
            if use_fused:
                grad = parameter_shift_grad(h, spec, params).values
                samples[s] = grad[indices]
            else:
                samples[s, 0] = _grad_component_shifted(h, spec, params,
                                                        indices[0])
        var = float(np.mean(np.var(samples, axis=0, ddof=1)))
        scan.rows.append(ScanRow("HEFT", ham_name, n, l, float(sigma),
                                 init.kappa, num_seeds, j_policy,
                                 float(np.mean(samples)), var))
    return scan
