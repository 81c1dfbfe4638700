"""Classical optimization loop over the circuit energy.

Adam, SGD and RMSProp are implemented directly (standard update rules); the
gradient comes from the shift rule (exact mode), from shot-sampled shifted
costs, or from shifted noisy-channel expectations when a NoiseModel is given.
Stopping: gradient norm below grad_tol, energy flat over a trailing window,
or max_steps.
"""

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, InitSpec, build_ansatz, draw_parameters, execute
from .gradients import SHIFT, cost, parameter_shift_grad
from .paulis import Hamiltonian, expectation, ground_space, ground_state
from .states import Statevector, fidelity

OPTIMIZER_KINDS = ("adam", "sgd", "rmsprop")


class DivergenceError(RuntimeError):
    """Energy became non-finite; carries the last good step index."""

    def __init__(self, message, last_good_step):
        super().__init__(message)
        self.last_good_step = last_good_step


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "adam"
    learning_rate: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    eps_stability: float = 1e-8
    decay: float = 0.9
    max_steps: int = 500
    grad_tol: float = 1e-6
    energy_tol: float = 1e-9
    energy_window: int = 25

    def __post_init__(self):
        if self.kind not in OPTIMIZER_KINDS:
            raise ValueError(f"unknown optimizer {self.kind!r}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        for name in ("beta1", "beta2", "decay"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise ValueError(f"{name} must be in [0, 1), got {v}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class TraceStep:
    step: int
    energy: float
    grad_norm: float
    wall_time: float


@dataclass
class TrainingTrace:
    spec: AnsatzSpec
    steps: list = field(default_factory=list)
    final_params: np.ndarray = None
    final_energy: float = None
    final_fidelity: float = None
    stop_reason: str = None

    def final_state(self) -> Statevector:
        return execute(self.spec, self.final_params)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "energy", "grad_norm"])
            for s in self.steps:
                w.writerow([s.step, repr(s.energy), repr(s.grad_norm)])

    def summary_dict(self):
        return {
            "num_steps": len(self.steps),
            "final_energy": self.final_energy,
            "final_fidelity": self.final_fidelity,
            "stop_reason": self.stop_reason,
            "wall_time_s": sum(s.wall_time for s in self.steps),
        }


class _Updater:
    """Standard first-order update rules, written out explicitly."""

    def __init__(self, cfg: OptimizerConfig, num_params):
        self.cfg = cfg
        self.t = 0
        self.m = np.zeros(num_params)
        self.v = np.zeros(num_params)

    def step(self, params, grads):
        cfg = self.cfg
        self.t += 1
        if cfg.kind == "sgd":
            return params - cfg.learning_rate * grads
        if cfg.kind == "rmsprop":
            self.v = cfg.decay * self.v + (1 - cfg.decay) * grads ** 2
            return params - cfg.learning_rate * grads / (
                np.sqrt(self.v) + cfg.eps_stability)
        self.m = cfg.beta1 * self.m + (1 - cfg.beta1) * grads
        self.v = cfg.beta2 * self.v + (1 - cfg.beta2) * grads ** 2
        m_hat = self.m / (1 - cfg.beta1 ** self.t)
        v_hat = self.v / (1 - cfg.beta2 ** self.t)
        return params - cfg.learning_rate * m_hat / (
            np.sqrt(v_hat) + cfg.eps_stability)


def _exact_eval(h, spec):
    def evaluate(params):
        est = parameter_shift_grad(h, spec, params)
        return est.values, est.cost_at_point
    return evaluate


def _shot_eval(h, spec, shot_cfg):
    from .shots import shot_expectation, shot_parameter_shift

    call = iter(range(10 ** 9))

    def evaluate(params):
        step = next(call)  # fresh shot noise every optimizer step
        grads = np.array([
            shot_parameter_shift(h, spec, params, j, shot_cfg.stream(step, j))
            for j in range(spec.num_params)
        ])
        energy = shot_expectation(h, execute(spec, params),
                                  shot_cfg.stream(step, spec.num_params)).estimate
        return grads, energy
    return evaluate


def _noisy_eval(h, spec, noise):
    from .noise import execute_noisy, expectation_density

    def noisy_cost(params):
        rho = execute_noisy(spec, params, noise, backend="density_matrix")
        return expectation_density(h, rho)

    def evaluate(params):
        grads = np.empty(spec.num_params)
        for j in range(spec.num_params):
            plus = params.copy()
            plus[j] += SHIFT
            minus = params.copy()
            minus[j] -= SHIFT
            grads[j] = noisy_cost(plus) - noisy_cost(minus)
        return grads, noisy_cost(params)
    return evaluate


def minimize(h: Hamiltonian, spec: AnsatzSpec, init: InitSpec,
             opt: OptimizerConfig = OptimizerConfig(), grad_source="exact",
             noise=None, shot_config=None, params0=None) -> TrainingTrace:
    """Minimize the circuit energy; returns the full per-step trace.

    grad_source "exact" uses shift-rule gradients on pure statevectors;
    "shot_based" samples every shifted cost (shot_config required). A
    NoiseModel turns both cost and gradient into density-matrix channel
    expectations (N <= 10).
    """
    if grad_source not in ("exact", "shot_based"):
        raise ValueError(f"unknown grad_source {grad_source!r}")
    if h.num_qubits != spec.num_qubits:
        raise ValueError("Hamiltonian and ansatz sizes differ")
    params = (np.asarray(params0, dtype=np.float64).copy()
              if params0 is not None else draw_parameters(spec, init))
    if grad_source == "shot_based":
        if shot_config is None:
            raise ValueError("shot_based gradients need a shot_config")
        if noise is not None:
            raise ValueError("shot-based noisy training is not supported; "
                             "pick one error source")
        evaluate = _shot_eval(h, spec, shot_config)
    elif noise is not None:
        evaluate = _noisy_eval(h, spec, noise)
    else:
        evaluate = _exact_eval(h, spec)

    trace = TrainingTrace(spec=spec)
    updater = _Updater(opt, spec.num_params)
    energies = []
    stop = None
    for step in range(opt.max_steps):
        t0 = time.perf_counter()
        grads, energy = evaluate(params)
        if not np.isfinite(energy) or not np.all(np.isfinite(grads)):
            raise DivergenceError(
                f"non-finite energy/gradient at step {step}", step - 1)
        grad_norm = float(np.linalg.norm(grads))
        trace.steps.append(TraceStep(step, float(energy), grad_norm,
                                     time.perf_counter() - t0))
        energies.append(float(energy))
        if grad_norm < opt.grad_tol:
            stop = "grad_tol"
            break
        w = opt.energy_window
        if len(energies) > w and \
                max(energies[-w:]) - min(energies[-w:]) < opt.energy_tol:
            stop = "energy_window"
            break
        params = updater.step(params, grads)
    trace.stop_reason = stop or "max_steps"
    trace.final_params = params
    if grad_source == "exact" and noise is None:
        trace.final_energy = cost(h, spec, params)
    else:
        _, trace.final_energy = evaluate(params)
    return trace


def fidelity_vs_exact(trace: TrainingTrace, h: Hamiltonian) -> float:
    """Overlap of the final state with the (possibly degenerate) ground space."""
    if h.num_qubits > 14:
        raise ValueError("ground-space fidelity capped at 14 qubits")
    _, basis = ground_space(h)
    final = trace.final_state()
    return float(sum(fidelity(g, final) for g in basis))


def landscape_scan(h: Hamiltonian, spec: AnsatzSpec, params, axis_i, axis_j,
                   grid=((-np.pi, np.pi), 41)) -> np.ndarray:
    """Energy over a 2-d slice: offsets from `params` along two parameter axes.

    `grid` is ((lo, hi), resolution); resolution 1 degenerates to the
    midpoint offset, i.e. the energy at `params` for a symmetric range.
    Returns a (resolution, resolution) matrix, axis_i varying along rows.
    """
    axis_i = int(axis_i)
    axis_j = int(axis_j)
    if axis_i == axis_j:
        raise ValueError("landscape axes must differ")
    for ax in (axis_i, axis_j):
        if not 0 <= ax < spec.num_params:
            raise ValueError(f"axis {ax} out of range")
    (lo, hi), res = grid
    if res < 1:
        raise ValueError("resolution must be at least 1")
    offsets = np.linspace(lo, hi, res) if res > 1 else np.array([(lo + hi) / 2])
    params = np.asarray(params, dtype=np.float64)
    out = np.empty((res, res))
    work = params.copy()
    for a, da in enumerate(offsets):
        for b, db in enumerate(offsets):
            work[axis_i] = params[axis_i] + da
            work[axis_j] = params[axis_j] + db
            out[a, b] = cost(h, spec, work)
    return out


@dataclass
class EfficiencyRow:
    num_layers: int
    num_params: int
    best_error: float


def parameter_efficiency_curve(h: Hamiltonian, family, l_list, init: InitSpec,
                               opt: OptimizerConfig, num_seeds=5,
                               entangler="cnot_ladder", master_seed=0):
    """Best relative energy error over seeds, per circuit depth."""
    if any(l < 1 for l in l_list):
        raise ValueError("layer counts must be at least 1")
    e0, _ = ground_state(h)
    rows = []
    for l in l_list:
        spec = build_ansatz(family, h.num_qubits, l, entangler)
        best = np.inf
        for s in range(num_seeds):
            seed = np.random.SeedSequence(master_seed, spawn_key=(l, s))
            trace = minimize(h, spec, init.with_seed(seed.generate_state(1)[0]),
                             opt)
            err = (trace.final_energy - e0) / abs(e0)
            best = min(best, err)
        rows.append(EfficiencyRow(l, spec.num_params, float(best)))
    return rows
