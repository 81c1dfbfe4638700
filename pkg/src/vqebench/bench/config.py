"""Experiment config schema and strict validation.

Configs are JSON objects; unknown keys are rejected and every error names
the offending field path, so a typo fails fast instead of silently running
the wrong experiment.
"""

import hashlib
import json

EXPERIMENT_KINDS = (
    "gradvar", "init_sweep", "vqe", "landscape", "noise", "shots",
    "shot_noise", "entanglement", "purity", "fidelity", "param_efficiency",
    "theory", "framepotential", "stats_compare", "size_scaling",
    "optimizer_robustness",
)


class ConfigError(ValueError):
    """Invalid experiment config; message carries the field path."""


def _fail(path, message):
    raise ConfigError(f"{path}: {message}")


def _check_keys(obj, path, allowed, required=()):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    unknown = set(obj) - set(allowed)
    if unknown:
        _fail(path, f"unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")
    for key in required:
        if key not in obj:
            _fail(path, f"missing required key {key!r}")


def _number(obj, path, key, default=None, low=None, high=None):
    if key not in obj:
        if default is None:
            _fail(path, f"missing required key {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(f"{path}.{key}", f"expected a number, got {v!r}")
    if low is not None and v < low:
        _fail(f"{path}.{key}", f"must be >= {low}, got {v}")
    if high is not None and v > high:
        _fail(f"{path}.{key}", f"must be <= {high}, got {v}")
    return v


def _integer(obj, path, key, default=None, low=None, high=None):
    v = _number(obj, path, key, default, low, high)
    if v != int(v):
        _fail(f"{path}.{key}", f"expected an integer, got {v!r}")
    return int(v)


def _choice(obj, path, key, choices, default=None):
    v = obj.get(key, default)
    if v is None:
        _fail(path, f"missing required key {key!r}")
    if v not in choices:
        _fail(f"{path}.{key}", f"must be one of {list(choices)}, got {v!r}")
    return v


def _int_list(obj, path, key, default=None, low=None):
    if key not in obj:
        if default is None:
            _fail(path, f"missing required key {key!r}")
        return list(default)
    v = obj[key]
    if not isinstance(v, list) or not v:
        _fail(f"{path}.{key}", "expected a nonempty list")
    out = []
    for i, item in enumerate(v):
        if isinstance(item, bool) or not isinstance(item, int):
            _fail(f"{path}.{key}[{i}]", f"expected an integer, got {item!r}")
        if low is not None and item < low:
            _fail(f"{path}.{key}[{i}]", f"must be >= {low}, got {item}")
        out.append(item)
    return out


def _validate_hamiltonian(obj, path, require_n=True):
    _check_keys(obj, path, ("kind", "n", "coupling", "field", "delta",
                            "boundary"), ("kind",))
    kind = _choice(obj, path, "kind", ("tfim", "xxz"))
    out = {
        "kind": kind,
        "coupling": _number(obj, path, "coupling", 1.0),
        "field": _number(obj, path, "field", 1.0),
        "delta": _number(obj, path, "delta", 1.0),
        "boundary": _choice(obj, path, "boundary", ("open", "periodic"), "open"),
    }
    if require_n:
        out["n"] = _integer(obj, path, "n", low=2, high=16)
    elif "n" in obj:
        out["n"] = _integer(obj, path, "n", low=2, high=16)
    return out


def _validate_ansatz(obj, path, default_family="both"):
    _check_keys(obj, path, ("layers", "entangler", "family"))
    layers = obj.get("layers", "equal_n")
    if layers != "equal_n":
        if isinstance(layers, bool) or not isinstance(layers, int) or layers < 1:
            _fail(f"{path}.layers", f'expected "equal_n" or a positive integer, got {layers!r}')
    return {
        "layers": layers,
        "entangler": _choice(obj, path, "entangler",
                             ("cnot_ladder", "cz_ladder", "pauli_zz_rotation"),
                             "cnot_ladder"),
        "family": _choice(obj, path, "family", ("HEFT", "HEA", "both"),
                          default_family),
    }


def _validate_init(obj, path):
    _check_keys(obj, path, ("kappa", "gamma"))
    return {
        "kappa": _number(obj, path, "kappa", 1.0, low=1e-12),
        "gamma": _number(obj, path, "gamma", 1.0, low=1e-12),
    }


def _validate_optimizer(obj, path):
    _check_keys(obj, path, ("kind", "learning_rate", "beta1", "beta2",
                            "eps_stability", "decay", "max_steps", "grad_tol",
                            "energy_tol", "energy_window"))
    return {
        "kind": _choice(obj, path, "kind", ("adam", "sgd", "rmsprop"), "adam"),
        "learning_rate": _number(obj, path, "learning_rate", 0.05, low=1e-12),
        "beta1": _number(obj, path, "beta1", 0.9, low=0.0, high=0.999999),
        "beta2": _number(obj, path, "beta2", 0.999, low=0.0, high=0.999999),
        "eps_stability": _number(obj, path, "eps_stability", 1e-8, low=0.0),
        "decay": _number(obj, path, "decay", 0.9, low=0.0, high=0.999999),
        "max_steps": _integer(obj, path, "max_steps", 300, low=1),
        "grad_tol": _number(obj, path, "grad_tol", 1e-6, low=0.0),
        "energy_tol": _number(obj, path, "energy_tol", 1e-9, low=0.0),
        "energy_window": _integer(obj, path, "energy_window", 25, low=2),
    }


_KIND_SECTIONS = {
    "gradvar": ("n_list", "j_policy"),
    "init_sweep": ("sigma_list", "n"),
    "vqe": (),
    "landscape": ("axis_i", "axis_j", "lo", "hi", "resolution"),
    "noise": ("p", "placement", "trajectories"),
    "shots": ("shots_list", "repetitions"),
    "shot_noise": ("p", "shots", "steps"),
    "entanglement": ("n_list",),
    "purity": ("n_list",),
    "fidelity": (),
    "param_efficiency": ("l_list",),
    "theory": ("n_l_pairs", "n_list"),
    "framepotential": ("pairs", "ensembles"),
    "stats_compare": (),
    "size_scaling": ("n_list",),
    "optimizer_robustness": ("optimizers",),
}


def validate_config(doc):
    """Validate and normalize one experiment config; raises ConfigError."""
    top_allowed = ("kind", "name", "master_seed", "seeds", "hamiltonian",
                   "ansatz", "init", "optimizer") + tuple(_KIND_SECTIONS)
    _check_keys(doc, "config", top_allowed, ("kind", "hamiltonian"))
    kind = _choice(doc, "config", "kind", EXPERIMENT_KINDS)
    for section in _KIND_SECTIONS:
        if section in doc and section != kind and section not in (
                "hamiltonian", "ansatz", "init", "optimizer"):
            _fail(f"config.{section}",
                  f"section does not belong to experiment kind {kind!r}")
    scan_kinds = ("gradvar", "entanglement", "purity", "theory",
                  "size_scaling")
    ham = _validate_hamiltonian(doc["hamiltonian"], "config.hamiltonian",
                                require_n=kind not in scan_kinds)
    cfg = {
        "kind": kind,
        "name": doc.get("name", kind),
        "master_seed": _integer(doc, "config", "master_seed", 0, low=0),
        "seeds": _integer(doc, "config", "seeds", 10, low=1),
        "hamiltonian": ham,
        "ansatz": _validate_ansatz(doc.get("ansatz", {}), "config.ansatz"),
        "init": _validate_init(doc.get("init", {}), "config.init"),
        "optimizer": _validate_optimizer(doc.get("optimizer", {}),
                                         "config.optimizer"),
    }
    if not isinstance(cfg["name"], str) or not cfg["name"]:
        _fail("config.name", "expected a nonempty string")
    section = doc.get(kind, {})
    path = f"config.{kind}"
    _check_keys(section, path, _KIND_SECTIONS[kind])
    if kind == "gradvar":
        cfg[kind] = {
            "n_list": _int_list(section, path, "n_list", [4, 6, 8], low=2),
            "j_policy": _choice(section, path, "j_policy",
                                ("first", "middle", "last", "all_mean"),
                                "first"),
        }
    elif kind == "init_sweep":
        sigmas = section.get("sigma_list")
        if not isinstance(sigmas, list) or not sigmas or \
                any(not isinstance(s, (int, float)) or s <= 0 for s in sigmas):
            _fail(f"{path}.sigma_list", "expected a list of positive numbers")
        cfg[kind] = {"sigma_list": [float(s) for s in sigmas]}
    elif kind == "landscape":
        cfg[kind] = {
            "axis_i": _integer(section, path, "axis_i", 0, low=0),
            "axis_j": _integer(section, path, "axis_j", 1, low=0),
            "lo": _number(section, path, "lo", -3.141592653589793),
            "hi": _number(section, path, "hi", 3.141592653589793),
            "resolution": _integer(section, path, "resolution", 41, low=1),
        }
    elif kind == "noise":
        cfg[kind] = {
            "p": _number(section, path, "p", 0.01, low=0.0, high=0.999),
            "placement": _choice(section, path, "placement",
                                 ("after_each_gate_on_touched_wires",
                                  "after_each_layer_all_wires"),
                                 "after_each_gate_on_touched_wires"),
            "trajectories": _integer(section, path, "trajectories", 2000, low=1),
        }
    elif kind == "shots":
        cfg[kind] = {
            "shots_list": _int_list(section, path, "shots_list",
                                    [100, 1000, 10000], low=1),
            "repetitions": _integer(section, path, "repetitions", 100, low=2),
        }
    elif kind == "shot_noise":
        cfg[kind] = {
            "p": _number(section, path, "p", 0.01, low=0.0, high=0.999),
            "shots": _integer(section, path, "shots", 1000, low=1),
            "steps": _integer(section, path, "steps", 60, low=1),
        }
    elif kind in ("entanglement", "purity", "size_scaling"):
        cfg[kind] = {"n_list": _int_list(section, path, "n_list",
                                         [4, 6, 8], low=2)}
    elif kind == "param_efficiency":
        cfg[kind] = {"l_list": _int_list(section, path, "l_list",
                                         [1, 2, 3, 4], low=1)}
    elif kind == "theory":
        pairs = section.get("n_l_pairs", [[4, 4], [6, 6]])
        if not isinstance(pairs, list) or not pairs or any(
                not isinstance(p, list) or len(p) != 2 for p in pairs):
            _fail(f"{path}.n_l_pairs", "expected a list of [n, l] pairs")
        cfg[kind] = {
            "n_l_pairs": [[int(a), int(b)] for a, b in pairs],
            "n_list": _int_list(section, path, "n_list", [4, 6, 8], low=2),
        }
    elif kind == "framepotential":
        ensembles = section.get("ensembles", ["heft", "hea_uniform", "haar"])
        for e in ensembles:
            if e not in ("heft", "hea_uniform", "haar"):
                _fail(f"{path}.ensembles", f"unknown ensemble {e!r}")
        cfg[kind] = {
            "pairs": _integer(section, path, "pairs", 1000, low=2),
            "ensembles": list(ensembles),
        }
    elif kind == "optimizer_robustness":
        opts = section.get("optimizers", ["adam", "sgd", "rmsprop"])
        for o in opts:
            if o not in ("adam", "sgd", "rmsprop"):
                _fail(f"{path}.optimizers", f"unknown optimizer {o!r}")
        cfg[kind] = {"optimizers": list(opts)}
    else:  # vqe, fidelity, stats_compare carry no extra section
        cfg[kind] = {}
    return cfg


def canonical_json(cfg):
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def config_hash(cfg):
    """sha256 of the canonical JSON form."""
    return hashlib.sha256(canonical_json(cfg).encode()).hexdigest()


def content_hash(cfg):
    """git-style blob hash of the canonical config text."""
    body = canonical_json(cfg).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: not valid JSON ({exc})") from exc
    return validate_config(doc)
