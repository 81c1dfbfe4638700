"""Built-in experiment collections.

"smoke": every experiment kind at trivial scale (n <= 4, few seeds); the
determinism acceptance check reruns it and compares bytes. "desk": the
desk-scale campaign behind the acceptance criteria.
"""

from .config import validate_config
from .manifest import BENCHMARKS, MANIFEST_VERSION

SUITES = ("smoke", "desk")


def _smoke_configs():
    ham4 = {"kind": "tfim", "n": 4}
    raw = [
        {"kind": "gradvar", "name": "smoke_gradvar", "hamiltonian": {"kind": "tfim"},
         "seeds": 8, "gradvar": {"n_list": [2, 3, 4], "j_policy": "first"}},
        {"kind": "init_sweep", "name": "smoke_init_sweep",
         "hamiltonian": ham4, "ansatz": {"layers": 2}, "seeds": 8,
         "init_sweep": {"sigma_list": [0.01, 0.1, 1.0]}},
        {"kind": "vqe", "name": "smoke_vqe",
         "hamiltonian": {"kind": "tfim", "n": 2}, "ansatz": {"layers": 2},
         "seeds": 3, "optimizer": {"max_steps": 400}},
        {"kind": "landscape", "name": "smoke_landscape", "hamiltonian": ham4,
         "ansatz": {"layers": 2}, "landscape": {"resolution": 9}},
        {"kind": "noise", "name": "smoke_noise", "hamiltonian": ham4,
         "ansatz": {"layers": 2}, "noise": {"p": 0.01, "trajectories": 400}},
        {"kind": "shots", "name": "smoke_shots", "hamiltonian": ham4,
         "ansatz": {"layers": 2}, "shots": {"shots_list": [50, 200],
                                            "repetitions": 20}},
        {"kind": "shot_noise", "name": "smoke_shot_noise", "hamiltonian": ham4,
         "ansatz": {"layers": 2}, "shot_noise": {"shots": 200, "steps": 10}},
        {"kind": "entanglement", "name": "smoke_entanglement",
         "hamiltonian": {"kind": "tfim"}, "ansatz": {"layers": 2}, "seeds": 6,
         "entanglement": {"n_list": [2, 4]}},
        {"kind": "purity", "name": "smoke_purity",
         "hamiltonian": {"kind": "tfim"}, "ansatz": {"layers": 2}, "seeds": 6,
         "purity": {"n_list": [2, 4]}},
        {"kind": "fidelity", "name": "smoke_fidelity",
         "hamiltonian": {"kind": "tfim", "n": 3}, "ansatz": {"layers": 2},
         "seeds": 3, "optimizer": {"max_steps": 150}},
        {"kind": "param_efficiency", "name": "smoke_param_efficiency",
         "hamiltonian": ham4, "ansatz": {"family": "HEFT"}, "seeds": 2,
         "optimizer": {"max_steps": 120},
         "param_efficiency": {"l_list": [1, 2]}},
        {"kind": "theory", "name": "smoke_theory",
         "hamiltonian": {"kind": "tfim"}, "seeds": 10,
         "theory": {"n_l_pairs": [[3, 3], [4, 4]], "n_list": [3, 4]}},
        {"kind": "framepotential", "name": "smoke_framepotential",
         "hamiltonian": {"kind": "tfim", "n": 3}, "ansatz": {"layers": 2},
         "framepotential": {"pairs": 60}},
        {"kind": "stats_compare", "name": "smoke_stats_compare",
         "hamiltonian": ham4, "ansatz": {"layers": 2}, "seeds": 10,
         "optimizer": {"max_steps": 60}},
        {"kind": "size_scaling", "name": "smoke_size_scaling",
         "hamiltonian": {"kind": "tfim"}, "ansatz": {"layers": 2}, "seeds": 2,
         "optimizer": {"max_steps": 80}, "size_scaling": {"n_list": [2, 4]}},
        {"kind": "optimizer_robustness", "name": "smoke_optimizer_robustness",
         "hamiltonian": ham4, "ansatz": {"layers": 2, "family": "HEFT"},
         "optimizer": {"max_steps": 120},
         "optimizer_robustness": {"optimizers": ["adam", "sgd", "rmsprop"]}},
    ]
    return raw


def _desk_configs():
    """Desk-scale analog of the full campaign (acceptance-criterion sizes)."""
    raw = [
        {"kind": "gradvar", "name": "desk_gradvar_tfim",
         "hamiltonian": {"kind": "tfim"}, "seeds": 200,
         "gradvar": {"n_list": [4, 6, 8, 10, 12], "j_policy": "last"}},
        {"kind": "gradvar", "name": "desk_gradvar_xxz",
         "hamiltonian": {"kind": "xxz"}, "seeds": 200,
         "gradvar": {"n_list": [4, 6, 8, 10], "j_policy": "last"}},
        {"kind": "init_sweep", "name": "desk_init_sweep",
         "hamiltonian": {"kind": "tfim", "n": 8}, "ansatz": {"layers": 8},
         "seeds": 100,
         "init_sweep": {"sigma_list": [0.001, 0.003, 0.01, 0.03, 0.1, 0.3,
                                       1.0, 3.141592653589793]}},
        {"kind": "vqe", "name": "desk_vqe",
         "hamiltonian": {"kind": "tfim", "n": 10}, "ansatz": {"layers": 10},
         "seeds": 50, "optimizer": {"max_steps": 400}},
        {"kind": "fidelity", "name": "desk_fidelity",
         "hamiltonian": {"kind": "tfim", "n": 10}, "ansatz": {"layers": 10},
         "seeds": 20, "optimizer": {"max_steps": 400}},
        {"kind": "landscape", "name": "desk_landscape",
         "hamiltonian": {"kind": "tfim", "n": 6}, "ansatz": {"layers": 6},
         "landscape": {"resolution": 41}},
        {"kind": "noise", "name": "desk_noise",
         "hamiltonian": {"kind": "tfim", "n": 4}, "ansatz": {"layers": 2},
         "noise": {"p": 0.01, "trajectories": 100000}},
        {"kind": "shots", "name": "desk_shots",
         "hamiltonian": {"kind": "tfim", "n": 4}, "ansatz": {"layers": 2},
         "shots": {"shots_list": [100, 1000, 10000], "repetitions": 400}},
        {"kind": "shot_noise", "name": "desk_shot_noise",
         "hamiltonian": {"kind": "tfim", "n": 6}, "ansatz": {"layers": 6},
         "shot_noise": {"shots": 1000, "steps": 60}},
        {"kind": "entanglement", "name": "desk_entanglement",
         "hamiltonian": {"kind": "tfim"}, "seeds": 20,
         "entanglement": {"n_list": [4, 6, 8, 10]}},
        {"kind": "purity", "name": "desk_purity",
         "hamiltonian": {"kind": "tfim"}, "ansatz": {"layers": 14},
         "seeds": 50, "purity": {"n_list": [4, 6, 8, 10, 12]}},
        {"kind": "param_efficiency", "name": "desk_param_efficiency",
         "hamiltonian": {"kind": "tfim", "n": 6}, "seeds": 5,
         "optimizer": {"max_steps": 200},
         "param_efficiency": {"l_list": [1, 2, 3, 4, 5, 6]}},
        {"kind": "theory", "name": "desk_theory",
         "hamiltonian": {"kind": "tfim"}, "seeds": 100,
         "init": {"kappa": 1.0},
         "theory": {"n_l_pairs": [[4, 4], [6, 6], [8, 8]],
                    "n_list": [4, 6, 8, 10, 12]}},
        {"kind": "framepotential", "name": "desk_framepotential",
         "hamiltonian": {"kind": "tfim", "n": 4}, "ansatz": {"layers": 4},
         "framepotential": {"pairs": 10000}},
        {"kind": "stats_compare", "name": "desk_stats_compare",
         "hamiltonian": {"kind": "tfim", "n": 10}, "ansatz": {"layers": 10},
         "seeds": 50, "optimizer": {"max_steps": 400}},
        {"kind": "size_scaling", "name": "desk_size_scaling",
         "hamiltonian": {"kind": "tfim"}, "seeds": 10,
         "optimizer": {"max_steps": 300},
         "size_scaling": {"n_list": [4, 6, 8, 10]}},
        {"kind": "optimizer_robustness", "name": "desk_optimizer_robustness",
         "hamiltonian": {"kind": "tfim", "n": 4}, "ansatz": {"layers": 4,
                                                             "family": "HEFT"},
         "optimizer": {"max_steps": 2000},
         "optimizer_robustness": {"optimizers": ["adam", "sgd", "rmsprop"]}},
    ]
    return raw


def suite_configs(name):
    if name == "smoke":
        raw = _smoke_configs()
    elif name == "desk":
        raw = _desk_configs()
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return [validate_config(c) for c in raw]


def manifest_dict():
    return {"version": MANIFEST_VERSION, "benchmarks": list(BENCHMARKS)}
