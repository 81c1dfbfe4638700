"""Implementations of the sixteen benchmark experiment kinds.

Each runner takes a validated config and returns
    {"tables": {stem: (columns, rows)}, "metrics": {...}}
where rows hold plain Python scalars (floats serialized via repr for exact
round-trips). The bench runner owns persistence and hashing.
"""

import numpy as np

from ..ansatz import InitSpec, build_ansatz, draw_parameters, execute
from ..gradients import init_scale_sweep, parameter_shift_grad, variance_scan
from ..noise import (NoiseModel, execute_density, execute_trajectories,
                     expectation_density)
from ..paulis import build_tfim, build_xxz, expectation, ground_state
from ..shots import ShotConfig, mse_vs_shots, shot_expectation
from ..states import (entanglement_entropy, purity, random_haar_state,
                      reduced_density_matrix, renyi2_entropy)
from ..stats import mann_whitney_u, summarize, welch_t_test
from ..theory import (effective_dimension_scaling, frame_potential_t2,
                      variance_lower_bound_check, verify_hamming_decay,
                      verify_localization)
from ..vqe import OptimizerConfig, fidelity_vs_exact, landscape_scan, minimize, \
    parameter_efficiency_curve


def lubkin_purity(dim_a, dim_b):
    """Average half-cut purity of a Haar-random bipartite pure state."""
    return (dim_a + dim_b) / (dim_a * dim_b + 1.0)


def _hamiltonian(hcfg, n=None):
    n = hcfg.get("n") if n is None else n
    if hcfg["kind"] == "tfim":
        return build_tfim(n, hcfg["coupling"], hcfg["field"], hcfg["boundary"])
    return build_xxz(n, hcfg["coupling"], hcfg["delta"], hcfg["boundary"])


def _layers(cfg, n):
    layers = cfg["ansatz"]["layers"]
    return n if layers == "equal_n" else layers


def _families(cfg):
    fam = cfg["ansatz"]["family"]
    names = ("HEFT", "HEA") if fam == "both" else (fam,)
    out = []
    for name in names:
        if name == "HEFT":
            out.append((name, InitSpec(family="heft_gaussian",
                                       kappa=cfg["init"]["kappa"],
                                       gamma=cfg["init"]["gamma"])))
        else:
            out.append((name, InitSpec(family="hea_uniform")))
    return out


def _optimizer(cfg):
    return OptimizerConfig(**cfg["optimizer"])


def _seed_for(master, *key):
    return int(np.random.SeedSequence(
        master, spawn_key=tuple(int(k) for k in key)).generate_state(1)[0])


def run_gradvar(cfg):
    section = cfg["gradvar"]
    rows = []
    scans = []
    for family, init in _families(cfg):
        scan = variance_scan(
            cfg["hamiltonian"]["kind"], family, section["n_list"],
            "equal_n" if cfg["ansatz"]["layers"] == "equal_n"
            else cfg["ansatz"]["layers"],
            init, cfg["seeds"], section["j_policy"],
            cfg["ansatz"]["entangler"], cfg["master_seed"])
        scans.append(scan)
        for r in scan.rows:
            rows.append([r.family, r.hamiltonian, r.n, r.l, r.sigma, r.kappa,
                         r.seeds, r.j_policy, r.grad_mean, r.grad_var])
    metrics = {}
    if len(section["n_list"]) >= 4:
        merged = scans[0]
        for s in scans[1:]:
            merged.rows.extend(s.rows)
        for verdict in variance_lower_bound_check(merged):
            metrics[f"{verdict.family}_winner"] = verdict.winner
            metrics[f"{verdict.family}_exp_rate"] = verdict.exponential.rate
            metrics[f"{verdict.family}_poly_rate"] = verdict.polynomial.rate
    columns = ["family", "hamiltonian", "n", "l", "sigma", "kappa", "seeds",
               "j_policy", "grad_mean", "grad_var"]
    return {"tables": {"scan": (columns, rows)}, "metrics": metrics}


def run_init_sweep(cfg):
    section = cfg["init_sweep"]
    n = cfg["hamiltonian"]["n"]
    scan = init_scale_sweep(section["sigma_list"], n, _layers(cfg, n),
                            cfg["seeds"], cfg["hamiltonian"]["kind"],
                            entangler=cfg["ansatz"]["entangler"],
                            master_seed=cfg["master_seed"])
    rows = [[r.sigma, r.kappa, r.n, r.l, r.seeds, r.grad_mean, r.grad_var]
            for r in scan.rows]
    variances = [r.grad_var for r in scan.rows]
    peak = int(np.argmax(variances))
    return {
        "tables": {"sweep": (["sigma", "kappa", "n", "l", "seeds",
                              "grad_mean", "grad_var"], rows)},
        "metrics": {"peak_sigma": scan.rows[peak].sigma,
                    "monotone_after_peak": all(
                        variances[i] >= variances[i + 1]
                        for i in range(peak, len(variances) - 1))},
    }


def _campaign(cfg, with_fidelity):
    """Shared multi-seed VQE campaign over the configured families."""
    n = cfg["hamiltonian"]["n"]
    h = _hamiltonian(cfg["hamiltonian"])
    e0, _ = ground_state(h)
    opt = _optimizer(cfg)
    summary_rows = []
    traces = {}
    finals = {}
    fidelities = {}
    for family, init in _families(cfg):
        spec = build_ansatz(family, n, _layers(cfg, n),
                            cfg["ansatz"]["entangler"])
        finals[family] = []
        fidelities[family] = []
        for s in range(cfg["seeds"]):
            trace = minimize(h, spec, init.with_seed(
                _seed_for(cfg["master_seed"], s)), opt)
            rel = (trace.final_energy - e0) / abs(e0)
            fid = fidelity_vs_exact(trace, h) if with_fidelity else float("nan")
            summary_rows.append([family, s, trace.final_energy, rel, fid,
                                 len(trace.steps), trace.stop_reason])
            finals[family].append(trace.final_energy)
            fidelities[family].append(fid)
            if s == 0:
                traces[family] = trace
    return h, e0, summary_rows, traces, finals, fidelities


def run_vqe(cfg):
    _, e0, summary_rows, traces, finals, _ = _campaign(cfg, with_fidelity=False)
    tables = {"summary": (["family", "seed", "final_energy", "rel_error",
                           "fidelity", "steps", "stop_reason"], summary_rows)}
    for family, trace in traces.items():
        tables[f"trace_{family}"] = (
            ["step", "energy", "grad_norm"],
            [[s.step, s.energy, s.grad_norm] for s in trace.steps])
    metrics = {"ground_energy": e0}
    for family, vals in finals.items():
        metrics[f"{family}_mean_final_energy"] = float(np.mean(vals))
        metrics[f"{family}_mean_rel_error"] = float(
            np.mean((np.array(vals) - e0) / abs(e0)))
    if len(finals) == 2:
        w = welch_t_test(finals["HEFT"], finals["HEA"])
        metrics["welch_t"] = w.t
        metrics["welch_p_two_sided"] = w.p_two_sided
        metrics["welch_log10_p"] = w.log10_p_two_sided
    return {"tables": tables, "metrics": metrics}


def run_fidelity(cfg):
    _, e0, summary_rows, _, _, fidelities = _campaign(cfg, with_fidelity=True)
    metrics = {"ground_energy": e0}
    for family, vals in fidelities.items():
        metrics[f"{family}_mean_fidelity"] = float(np.mean(vals))
    if len(fidelities) == 2:
        metrics["fidelity_ratio"] = (metrics["HEFT_mean_fidelity"]
                                     / max(metrics["HEA_mean_fidelity"], 1e-300))
    return {"tables": {"summary": (["family", "seed", "final_energy",
                                    "rel_error", "fidelity", "steps",
                                    "stop_reason"], summary_rows)},
            "metrics": metrics}


def run_stats_compare(cfg):
    _, e0, summary_rows, _, finals, _ = _campaign(cfg, with_fidelity=False)
    if len(finals) != 2:
        raise ValueError("stats_compare needs both families")
    w = welch_t_test(finals["HEFT"], finals["HEA"])
    mwu = mann_whitney_u(finals["HEFT"], finals["HEA"])
    metrics = {
        "welch_t": w.t, "welch_dof": w.dof,
        "welch_p_two_sided": w.p_two_sided,
        "welch_p_one_sided": w.p_one_sided,
        "welch_log10_p": w.log10_p_two_sided,
        "mann_whitney_u": mwu.u, "mann_whitney_p": mwu.p,
        "mann_whitney_method": mwu.method,
    }
    for family, vals in finals.items():
        s = summarize(vals)
        metrics[f"{family}_mean"] = s.mean
        metrics[f"{family}_variance"] = s.unbiased_variance
    return {"tables": {"summary": (["family", "seed", "final_energy",
                                    "rel_error", "fidelity", "steps",
                                    "stop_reason"], summary_rows)},
            "metrics": metrics}


def run_landscape(cfg):
    section = cfg["landscape"]
    n = cfg["hamiltonian"]["n"]
    h = _hamiltonian(cfg["hamiltonian"])
    tables = {}
    metrics = {}
    for family, init in _families(cfg):
        spec = build_ansatz(family, n, _layers(cfg, n),
                            cfg["ansatz"]["entangler"])
        params = draw_parameters(spec, init.with_seed(
            _seed_for(cfg["master_seed"], 0)))
        grid = landscape_scan(h, spec, params, section["axis_i"],
                              section["axis_j"],
                              ((section["lo"], section["hi"]),
                               section["resolution"]))
        offsets = (np.linspace(section["lo"], section["hi"],
                               section["resolution"])
                   if section["resolution"] > 1
                   else np.array([(section["lo"] + section["hi"]) / 2]))
        rows = [[float(offsets[i]), float(offsets[j]), float(grid[i, j])]
                for i in range(grid.shape[0]) for j in range(grid.shape[1])]
        tables[f"grid_{family}"] = (["offset_i", "offset_j", "energy"], rows)
        metrics[f"{family}_grid_std"] = float(grid.std())
        metrics[f"{family}_grid_min"] = float(grid.min())
    return {"tables": tables, "metrics": metrics}


def run_noise(cfg):
    section = cfg["noise"]
    n = cfg["hamiltonian"]["n"]
    h = _hamiltonian(cfg["hamiltonian"])
    noise = NoiseModel(section["p"], section["placement"])
    rows = []
    metrics = {}
    for family, init in _families(cfg):
        spec = build_ansatz(family, n, _layers(cfg, n),
                            cfg["ansatz"]["entangler"])
        params = draw_parameters(spec, init.with_seed(
            _seed_for(cfg["master_seed"], 1)))
        exact = expectation(h, execute(spec, params))
        rho = execute_density(spec, params, noise)
        e_dm = expectation_density(h, rho)
        rows.append([family, "density_matrix", section["p"], 0, 0,
                     e_dm, 0.0, exact, abs(e_dm - exact)])
        traj = execute_trajectories(spec, params, noise, h,
                                    section["trajectories"],
                                    _seed_for(cfg["master_seed"], 2))
        rows.append([family, "trajectories", section["p"],
                     section["trajectories"], 0, traj.mean, traj.stderr,
                     e_dm, abs(traj.mean - e_dm)])
        metrics[f"{family}_traj_z"] = (
            (traj.mean - e_dm) / traj.stderr if traj.stderr > 0 else 0.0)
        metrics[f"{family}_noisy_purity"] = purity(rho)
    columns = ["family", "backend", "p", "trajectories", "shots",
               "estimate", "stderr", "exact", "abs_error"]
    return {"tables": {"noise": (columns, rows)}, "metrics": metrics}


def run_shots(cfg):
    section = cfg["shots"]
    n = cfg["hamiltonian"]["n"]
    h = _hamiltonian(cfg["hamiltonian"])
    rows = []
    metrics = {}
    for family, init in _families(cfg):
        spec = build_ansatz(family, n, _layers(cfg, n),
                            cfg["ansatz"]["entangler"])
        mse_rows = mse_vs_shots(h, spec, init.with_seed(
            _seed_for(cfg["master_seed"], 3)), section["shots_list"],
            section["repetitions"], cfg["master_seed"])
        for r in mse_rows:
            rows.append([family, r.shots, r.repetitions, r.mse, r.exact])
        scaled = [r.mse * r.shots for r in mse_rows]
        geo = float(np.exp(np.mean(np.log(scaled))))
        metrics[f"{family}_inv_shots_deviation"] = float(
            np.mean([abs(s / geo - 1.0) for s in scaled]))
    return {"tables": {"mse": (["family", "shots", "repetitions", "mse",
                                "exact"], rows)},
            "metrics": metrics}


def run_shot_noise(cfg):
    """Short shot-gradient training runs under depolarizing noise pressure.

    Small scale by construction: this is the regime where wide uniform
    initialization actually stalls (sampling noise drowns the gradient).
    """
    section = cfg["shot_noise"]
    n = cfg["hamiltonian"]["n"]
    h = _hamiltonian(cfg["hamiltonian"])
    e0, _ = ground_state(h)
    opt = OptimizerConfig(**{**cfg["optimizer"], "max_steps": section["steps"]})
    tables = {}
    metrics = {"ground_energy": e0}
    for family, init in _families(cfg):
        spec = build_ansatz(family, n, _layers(cfg, n),
                            cfg["ansatz"]["entangler"])
        shot_cfg = ShotConfig(section["shots"],
                              _seed_for(cfg["master_seed"], 4))
        trace = minimize(h, spec, init.with_seed(
            _seed_for(cfg["master_seed"], 5)), opt,
            grad_source="shot_based", shot_config=shot_cfg)
        tables[f"trace_{family}"] = (
            ["step", "energy", "grad_norm"],
            [[s.step, s.energy, s.grad_norm] for s in trace.steps])
        metrics[f"{family}_final_rel_error"] = (
            (trace.final_energy - e0) / abs(e0))
    return {"tables": tables, "metrics": metrics}


def run_entanglement(cfg):
    section = cfg["entanglement"]
    rows = []
    for family, init in _families(cfg):
        for n in section["n_list"]:
            spec = build_ansatz(family, n, _layers(cfg, n),
                                cfg["ansatz"]["entangler"])
            cut = list(range(n // 2))
            ent, ren = [], []
            for s in range(cfg["seeds"]):
                params = draw_parameters(spec, init.with_seed(
                    _seed_for(cfg["master_seed"], n, s)))
                state = execute(spec, params)
                ent.append(entanglement_entropy(state, cut))
                ren.append(renyi2_entropy(state, cut))
            rows.append([family, n, _layers(cfg, n), cfg["seeds"],
                         float(np.mean(ent)),
                         float(np.mean(ent)) / np.log(2.0),
                         float(np.mean(ren))])
    columns = ["family", "n", "l", "seeds", "entropy_nats", "entropy_bits",
               "renyi2_nats"]
    return {"tables": {"entanglement": (columns, rows)}, "metrics": {}}


def run_purity(cfg):
    section = cfg["purity"]
    rows = []
    for family, init in _families(cfg):
        for n in section["n_list"]:
            spec = build_ansatz(family, n, _layers(cfg, n),
                                cfg["ansatz"]["entangler"])
            cut = list(range(n // 2))
            vals = []
            for s in range(cfg["seeds"]):
                params = draw_parameters(spec, init.with_seed(
                    _seed_for(cfg["master_seed"], n, s)))
                vals.append(purity(reduced_density_matrix(
                    execute(spec, params), cut)))
            d_a = 1 << (n // 2)
            d_b = 1 << (n - n // 2)
            rows.append([family, n, _layers(cfg, n), cfg["seeds"],
                         float(np.mean(vals)), lubkin_purity(d_a, d_b)])
    columns = ["family", "n", "l", "seeds", "mean_purity", "haar_limit"]
    return {"tables": {"purity": (columns, rows)}, "metrics": {}}


def run_param_efficiency(cfg):
    section = cfg["param_efficiency"]
    h = _hamiltonian(cfg["hamiltonian"])
    opt = _optimizer(cfg)
    rows = []
    metrics = {}
    for family, init in _families(cfg):
        curve = parameter_efficiency_curve(
            h, family, section["l_list"], init, opt, cfg["seeds"],
            cfg["ansatz"]["entangler"], cfg["master_seed"])
        for r in curve:
            rows.append([family, r.num_layers, r.num_params, r.best_error])
        metrics[f"{family}_best_error"] = min(r.best_error for r in curve)
    return {"tables": {"efficiency": (["family", "num_layers", "num_params",
                                       "best_error"], rows)},
            "metrics": metrics}


def run_theory(cfg):
    section = cfg["theory"]
    loc_rows = []
    violations = 0
    for n, l in section["n_l_pairs"]:
        spec = build_ansatz("HEFT", n, l, "pauli_zz_rotation")
        init = InitSpec(kappa=cfg["init"]["kappa"], gamma=cfg["init"]["gamma"])
        for rep in verify_localization(
                spec, init,
                [_seed_for(cfg["master_seed"], n, l, s)
                 for s in range(cfg["seeds"])]):
            loc_rows.append([rep.n, rep.l, rep.kappa, rep.seed, rep.epsilon,
                             rep.delta_theorem, rep.delta_sum, rep.sin_sum,
                             rep.op_norm_dev, rep.fidelity_to_zero,
                             rep.hamming_fit_slope, rep.d_eff,
                             int(rep.op_norm_bound_ok),
                             int(rep.fidelity_bound_ok),
                             int(rep.localized_regime)])
            violations += (not rep.op_norm_bound_ok) + (not rep.fidelity_bound_ok)
    n0, l0 = section["n_l_pairs"][0]
    decay_spec = build_ansatz("HEFT", max(n0, 4), l0, "pauli_zz_rotation")
    decay = verify_hamming_decay(
        decay_spec, InitSpec(kappa=cfg["init"]["kappa"]),
        [_seed_for(cfg["master_seed"], 99, s) for s in range(cfg["seeds"])])
    d_means, d_slope = effective_dimension_scaling(
        section["n_list"], l0, cfg["init"]["kappa"],
        min(cfg["seeds"], 50), master_seed=cfg["master_seed"])
    mass_rows = [[w, float(m)] for w, m in enumerate(decay.mean_mass)]
    deff_rows = [[n, m] for n, m in zip(section["n_list"], d_means)]
    loc_columns = ["n", "l", "kappa", "seed", "epsilon", "delta_theorem",
                   "delta_sum", "sin_sum", "op_norm_dev", "fidelity_to_zero",
                   "hamming_fit_slope", "d_eff", "op_norm_bound_ok",
                   "fidelity_bound_ok", "localized_regime"]
    return {
        "tables": {
            "localization": (loc_columns, loc_rows),
            "hamming_mass": (["weight", "mean_mass"], mass_rows),
            "effective_dimension": (["n", "mean_d_eff"], deff_rows),
        },
        "metrics": {
            "bound_violations": violations,
            "hamming_strictly_decreasing": decay.strictly_decreasing,
            "hamming_fit_slope": decay.fit_slope,
            "hamming_slope_bound": decay.slope_bound,
            "d_eff_loglog_slope": d_slope,
        },
    }


def run_framepotential(cfg):
    section = cfg["framepotential"]
    n = cfg["hamiltonian"]["n"]
    l = _layers(cfg, n)
    rows = []
    metrics = {}
    for ensemble in section["ensembles"]:
        if ensemble == "haar":
            rep = frame_potential_t2(ensemble="haar_reference", n=n,
                                     num_sample_pairs=section["pairs"],
                                     master_seed=cfg["master_seed"])
        elif ensemble == "heft":
            spec = build_ansatz("HEFT", n, l, cfg["ansatz"]["entangler"])
            rep = frame_potential_t2(spec, InitSpec(kappa=cfg["init"]["kappa"]),
                                     section["pairs"],
                                     master_seed=cfg["master_seed"])
        else:
            spec = build_ansatz("HEA", n, l, cfg["ansatz"]["entangler"])
            rep = frame_potential_t2(spec, InitSpec(family="hea_uniform"),
                                     section["pairs"],
                                     master_seed=cfg["master_seed"])
        rows.append([rep.ensemble, rep.n, rep.l, rep.num_samples,
                     rep.frame_potential_t2, rep.stderr, 2.0])
        metrics[f"{ensemble}_frame_potential"] = rep.frame_potential_t2
        metrics[f"{ensemble}_stderr"] = rep.stderr
    columns = ["ensemble", "n", "l", "pairs", "frame_potential_t2", "stderr",
               "haar_value"]
    return {"tables": {"framepotential": (columns, rows)}, "metrics": metrics}


def run_size_scaling(cfg):
    section = cfg["size_scaling"]
    opt = _optimizer(cfg)
    rows = []
    for family, init in _families(cfg):
        for n in section["n_list"]:
            h = _hamiltonian(cfg["hamiltonian"], n)
            e0, _ = ground_state(h)
            spec = build_ansatz(family, n, _layers(cfg, n),
                                cfg["ansatz"]["entangler"])
            finals = []
            for s in range(cfg["seeds"]):
                trace = minimize(h, spec, init.with_seed(
                    _seed_for(cfg["master_seed"], n, s)), opt)
                finals.append(trace.final_energy)
            rows.append([family, n, _layers(cfg, n), cfg["seeds"], e0,
                         float(np.mean(finals)),
                         float(np.mean((np.array(finals) - e0) / abs(e0)))])
    columns = ["family", "n", "l", "seeds", "ground_energy",
               "mean_final_energy", "mean_rel_error"]
    return {"tables": {"size_scaling": (columns, rows)}, "metrics": {}}


def run_optimizer_robustness(cfg):
    section = cfg["optimizer_robustness"]
    n = cfg["hamiltonian"]["n"]
    h = _hamiltonian(cfg["hamiltonian"])
    e0, _ = ground_state(h)
    tables = {}
    metrics = {"ground_energy": e0}
    rows = []
    for family, init in _families(cfg):
        spec = build_ansatz(family, n, _layers(cfg, n),
                            cfg["ansatz"]["entangler"])
        for opt_kind in section["optimizers"]:
            opt = OptimizerConfig(**{**cfg["optimizer"], "kind": opt_kind})
            trace = minimize(h, spec, init.with_seed(
                _seed_for(cfg["master_seed"], 6)), opt)
            rel = (trace.final_energy - e0) / abs(e0)
            rows.append([family, opt_kind, trace.final_energy, rel,
                         len(trace.steps), trace.stop_reason])
            tables[f"trace_{family}_{opt_kind}"] = (
                ["step", "energy", "grad_norm"],
                [[s.step, s.energy, s.grad_norm] for s in trace.steps])
            metrics[f"{family}_{opt_kind}_rel_error"] = rel
    tables["summary"] = (["family", "optimizer", "final_energy", "rel_error",
                          "steps", "stop_reason"], rows)
    return {"tables": tables, "metrics": metrics}


RUNNERS = {
    "gradvar": run_gradvar,
    "init_sweep": run_init_sweep,
    "vqe": run_vqe,
    "landscape": run_landscape,
    "noise": run_noise,
    "shots": run_shots,
    "shot_noise": run_shot_noise,
    "entanglement": run_entanglement,
    "purity": run_purity,
    "fidelity": run_fidelity,
    "param_efficiency": run_param_efficiency,
    "theory": run_theory,
    "framepotential": run_framepotential,
    "stats_compare": run_stats_compare,
    "size_scaling": run_size_scaling,
    "optimizer_robustness": run_optimizer_robustness,
}
