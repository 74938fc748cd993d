"""Command-line entry point.

Verbs: synth, train, eval, bound, corr, duality-check, sweep.  Every verb
takes --config (flat key = value file, keys namespaced per module), --seed
(overrides the config's ``seed``), and --out (output directory).  Commands
validate the whole config before writing anything; results land as a JSON
report plus CSV series and rendered PNG figures.

Exit codes: 0 success, 1 config error, 2 runtime or numeric error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from pathlib import Path

import numpy as np

from . import plots
from .complexity import ClassBudget, FeatureBatch, bound_report
from .datasets import Dataset, GaussianSpec, LabeledTestSet, UniversumSet, generate_gaussian, \
    load_csv, save_csv, synthetic_preset
from .duality import map_to_nu, solve_nu_svm, solve_oneclass_dual, verify_boundary_coincidence
from .evaluation import correlation_diagnostic, evaluate, margin_slacks
from .models import FeatureMapSpec, forward, frobenius_sq, load_model, save_model
from .reports import ConfigError, build_report, check_known_keys, get_float, get_float_list, \
    get_int, get_int_list, get_path, get_str, parse_config, write_csv, write_report
from .training import Hyperparams, OptimizerSpec, train, train_binary_baseline

PRESET_SYNTH = "paper-synthetic"

_MODEL_KEYS = {"model.kind", "model.layer_widths", "model.leaky_slope", "model.init_seed"}
_TRAIN_KEYS = {"train.objective", "train.c", "train.c_u", "train.delta", "train.loss",
               "train.iterations", "train.batch_train", "train.batch_univ",
               "train.optimizer", "train.learning_rate"}
_DATA_KEYS = {"data.train", "data.test", "data.universum", "data.model"}


def _echo(settings: dict, seed: int) -> dict:
    echoed = dict(sorted(settings.items()))
    echoed["seed"] = seed
    return echoed


def _load_unlabeled(path, key: str) -> Dataset:
    loaded = load_csv(path)
    if isinstance(loaded, LabeledTestSet):
        raise ConfigError(f"{key} must point to an unlabeled csv, got a labeled one: {path}")
    return loaded


def _load_labeled(path, key: str) -> LabeledTestSet:
    loaded = load_csv(path)
    if not isinstance(loaded, LabeledTestSet):
        raise ConfigError(f"{key} must point to a labeled csv (label column): {path}")
    return loaded


def _feature_spec(settings: dict, seed: int) -> FeatureMapSpec:
    kind = get_str(settings, "model.kind", "identity", choices={"identity", "mlp"})
    widths = tuple(get_int_list(settings, "model.layer_widths", []))
    return FeatureMapSpec(kind=kind, layer_widths=widths,
                          leaky_slope=get_float(settings, "model.leaky_slope", 0.01),
                          seed=get_int(settings, "model.init_seed", seed))


def _hyperparams(settings: dict, seed: int, c_u: float, delta: float) -> Hyperparams:
    optimizer = OptimizerSpec(kind=get_str(settings, "train.optimizer", "adam",
                                           choices={"sgd", "adam"}),
                              learning_rate=get_float(settings, "train.learning_rate", 0.01))
    return Hyperparams(c=get_float(settings, "train.c"), c_u=c_u, delta=delta,
                       train_loss=get_str(settings, "train.loss", "hinge",
                                          choices={"hinge", "softplus"}),
                       optimizer=optimizer,
                       iterations=get_int(settings, "train.iterations", 500),
                       batch_train=get_int(settings, "train.batch_train", 256),
                       batch_univ=get_int(settings, "train.batch_univ",
                                          get_int(settings, "train.batch_train", 256)),
                       seed=seed)


# ------------------------------------------------------------------ commands


def cmd_synth(settings: dict, seed: int, out: Path):
    check_known_keys(settings, {"synth": {
        "synth.preset",
        "synth.train_mu", "synth.train_sigma", "synth.train_count",
        "synth.test_pos_mu", "synth.test_pos_sigma", "synth.test_pos_count",
        "synth.test_neg_mu", "synth.test_neg_sigma", "synth.test_neg_count",
        "synth.univ_mu", "synth.univ_sigma", "synth.univ_count",
    }})
    preset = settings.get("synth.preset")
    if preset is not None:
        if preset != PRESET_SYNTH:
            raise ConfigError(f"unknown preset {preset!r}, available: {PRESET_SYNTH}")

        def generate():
            return synthetic_preset(seed)
    else:
        specs = {}
        for i, block in enumerate(("train", "test_pos", "test_neg", "univ")):
            specs[block] = GaussianSpec(
                mu=get_float_list(settings, f"synth.{block}_mu"),
                sigma=get_float_list(settings, f"synth.{block}_sigma"),
                count=get_int(settings, f"synth.{block}_count"),
                seed=seed + i)

        def generate():
            train_d = generate_gaussian(specs["train"])
            pos = generate_gaussian(specs["test_pos"]).x
            neg = generate_gaussian(specs["test_neg"]).x
            test = LabeledTestSet(np.vstack([pos, neg]),
                                  np.concatenate([np.ones(len(pos)), -np.ones(len(neg))]))
            univ = UniversumSet(generate_gaussian(specs["univ"]).x)
            return train_d, test, univ

    def execute():
        started = time.time()
        train_d, test, univ = generate()
        out.mkdir(parents=True, exist_ok=True)
        save_csv(out / "train.csv", train_d.x)
        save_csv(out / "test.csv", test.x, labels=test.y)
        save_csv(out / "universum.csv", univ.x)
        results = {"files": ["train.csv", "test.csv", "universum.csv"],
                   "rows": {"train": train_d.n, "test": len(test.y), "universum": univ.m}}
        report = build_report("synth", _echo(settings, seed), results,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


def cmd_train(settings: dict, seed: int, out: Path):
    check_known_keys(settings, {"train": _TRAIN_KEYS, "model": _MODEL_KEYS, "data": _DATA_KEYS})
    objective = get_str(settings, "train.objective", choices={"doc", "doc3", "binary"})
    warnings = []
    c_u = get_float(settings, "train.c_u", 0.0)
    delta = get_float(settings, "train.delta", 0.0)
    if objective == "doc" and "train.c_u" in settings:
        warnings.append("train.c_u is ignored for objective=doc (no universum term)")
        c_u = 0.0
    if objective == "doc3" and c_u <= 0.0:
        raise ConfigError("objective=doc3 requires train.c_u > 0")
    needs_univ = objective in ("doc3", "binary")
    if needs_univ and "data.universum" not in settings:
        raise ConfigError(f"objective={objective} requires data.universum")
    hp = _hyperparams(settings, seed, c_u=c_u if objective == "doc3" else 0.0, delta=delta)
    spec = _feature_spec(settings, seed)
    train_data = _load_unlabeled(get_path(settings, "data.train"), "data.train")
    univ = None
    if needs_univ:
        univ = UniversumSet(_load_unlabeled(get_path(settings, "data.universum"),
                                            "data.universum").x)

    def execute():
        started = time.time()
        if objective == "binary":
            trace = train_binary_baseline(train_data, univ, hp, spec)
            threshold = 0.0
        else:
            trace = train(train_data, univ if objective == "doc3" else None, hp, spec)
            threshold = 1.0
        out.mkdir(parents=True, exist_ok=True)
        save_model(trace.model, out / "model.txt")
        iters = np.arange(1, hp.iterations + 1)
        write_csv(out / "trace.csv",
                  ["iteration", "objective", "loss_train", "loss_univ", "regularizer"],
                  zip(iters, trace.objective, trace.loss_train, trace.loss_univ,
                      trace.regularizer))
        plots.trace_figure(trace.objective, trace.loss_train, trace.loss_univ,
                           out / "trace.png")
        results = {
            "objective": objective,
            "threshold": threshold,
            "initial_objective": trace.initial_objective,
            "final_objective": float(trace.objective[-1]),
            "final_loss_train": float(trace.loss_train[-1]),
            "final_loss_univ": float(trace.loss_univ[-1]),
            "frobenius_sq": frobenius_sq(trace.model),
            "files": ["model.txt", "trace.csv", "trace.png"],
        }
        report = build_report("train", _echo(settings, seed), results, warnings,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


def _eval_inputs(settings: dict):
    model = load_model(get_path(settings, "data.model"))
    test = _load_labeled(get_path(settings, "data.test"), "data.test")
    train_data = univ = None
    if "data.train" in settings:
        train_data = _load_unlabeled(get_path(settings, "data.train"), "data.train")
    if "data.universum" in settings:
        univ = UniversumSet(_load_unlabeled(get_path(settings, "data.universum"),
                                            "data.universum").x)
    return model, test, train_data, univ


def cmd_eval(settings: dict, seed: int, out: Path):
    check_known_keys(settings, {"eval": {"eval.threshold"}, "data": _DATA_KEYS})
    threshold = get_float(settings, "eval.threshold", 1.0)
    model, test, train_data, univ = _eval_inputs(settings)

    def execute():
        started = time.time()
        report_metrics = evaluate(model, test, univ=univ, train=train_data,
                                  threshold=threshold)
        scores, _ = forward(model, test.x)
        fpr, tpr = plots.roc_points(scores[test.y > 0], scores[test.y < 0])
        out.mkdir(parents=True, exist_ok=True)
        files = ["roc.csv", "roc.png"]
        write_csv(out / "roc.csv", ["fpr", "tpr"], zip(fpr, tpr))
        plots.roc_figure(fpr, tpr, report_metrics.auc, out / "roc.png")
        if model.input_dim == 2:
            stacked = np.vstack([test.x] + ([univ.x] if univ is not None else []))
            xs = np.linspace(stacked[:, 0].min() - 1.0, stacked[:, 0].max() + 1.0, 80)
            ys = np.linspace(stacked[:, 1].min() - 1.0, stacked[:, 1].max() + 1.0, 80)
            grid = plots.boundary_grid(model, xs, ys)
            gx, gy = np.meshgrid(xs, ys)
            write_csv(out / "boundary.csv", ["x", "y", "score"],
                      zip(gx.ravel(), gy.ravel(), grid.ravel()))
            plots.boundary_figure(model, threshold,
                                  train_data.x if train_data is not None else test.x[:0],
                                  test, univ.x if univ is not None else None,
                                  out / "boundary.png")
            files += ["boundary.csv", "boundary.png"]
        xi = report_metrics.xi
        results = {
            "auc": report_metrics.auc,
            "accuracy": report_metrics.accuracy,
            "tp_rate": report_metrics.tp_rate,
            "tn_rate": report_metrics.tn_rate,
            "threshold": threshold,
            "xi_mean": float(xi.mean()),
            "xi_max": float(xi.max()),
            "xi_zero_fraction": float(np.mean(xi == 0.0)),
            "sigma_inf_raw": report_metrics.sigma_inf_raw,
            "sigma_inf_features": report_metrics.sigma_inf_features,
            "files": files,
        }
        report = build_report("eval", _echo(settings, seed), results,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


def cmd_corr(settings: dict, seed: int, out: Path):
    check_known_keys(settings, {"data": _DATA_KEYS})
    model = load_model(get_path(settings, "data.model"))
    train_data = _load_unlabeled(get_path(settings, "data.train"), "data.train")
    univ = UniversumSet(_load_unlabeled(get_path(settings, "data.universum"),
                                        "data.universum").x)

    def execute():
        started = time.time()
        raw, features = correlation_diagnostic(model, train_data, univ)
        out.mkdir(parents=True, exist_ok=True)
        results = {"sigma_inf_raw": raw, "sigma_inf_features": features}
        report = build_report("corr", _echo(settings, seed), results,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


def cmd_bound(settings: dict, seed: int, out: Path):
    check_known_keys(settings, {"bound": {
        "bound.kappa", "bound.eta", "bound.delta", "bound.lambda_policy",
        "bound.lambda_cap", "bound.gamma_grid", "bound.draws",
    }, "data": _DATA_KEYS})
    kappa = get_float(settings, "bound.kappa", 1.0)
    eta = get_float(settings, "bound.eta", 0.05)
    if kappa <= 0.0:
        raise ConfigError(f"bound.kappa must be positive, got {kappa}")
    if not 0.0 < eta < 1.0:
        raise ConfigError(f"bound.eta must lie in (0, 1), got {eta}")
    delta = get_float(settings, "bound.delta", 0.0)
    policy = get_str(settings, "bound.lambda_policy", "achieved",
                     choices={"achieved", "fixed"})
    lam_fixed = None
    if policy == "fixed":
        lam_fixed = get_float(settings, "bound.lambda_cap")
    draws = get_int(settings, "bound.draws", 200)
    grid = settings.get("bound.gamma_grid")
    gamma_grid = None if grid is None else get_float_list(settings, "bound.gamma_grid")
    if gamma_grid is not None and 0.0 not in gamma_grid:
        raise ConfigError("bound.gamma_grid must contain 0, the plain-ceiling entry")
    model = load_model(get_path(settings, "data.model"))
    train_data = _load_unlabeled(get_path(settings, "data.train"), "data.train")
    univ = UniversumSet(_load_unlabeled(get_path(settings, "data.universum"),
                                        "data.universum").x)

    def execute():
        started = time.time()
        _, z_feat = forward(model, train_data.x)
        _, u_feat = forward(model, univ.x)
        lam = lam_fixed if lam_fixed is not None else float(np.sqrt(frobenius_sq(model)))
        budget = ClassBudget(lambda_cap=lam, delta=delta)
        batch = FeatureBatch(z=z_feat, u=u_feat)
        xi = margin_slacks(model, train_data)
        kwargs = {} if gamma_grid is None else {"gamma_grid": tuple(gamma_grid)}
        rep = bound_report(batch, budget, draws=draws, seed=seed,
                           xi=xi, kappa=kappa, eta=eta, **kwargs)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "sigma_curve.csv", ["gamma", "sigma"], rep.sigma_gamma_curve)
        plots.sigma_curve_figure([g for g, _ in rep.sigma_gamma_curve],
                                 [s for _, s in rep.sigma_gamma_curve],
                                 rep.sigma_inf, out / "sigma_curve.png")
        results = {
            "lambda_policy": policy,
            "lambda_cap": rep.lambda_cap,
            "delta": rep.delta,
            "erc_ind_mc": rep.erc_ind_mc,
            "erc_ind_stderr": rep.erc_ind_stderr,
            "erc_univ_mc": rep.erc_univ_mc,
            "erc_univ_stderr": rep.erc_univ_stderr,
            "bound_bi": rep.bound_bi,
            "bound_bii": rep.bound_bii,
            "gamma_star": rep.gamma_star,
            "sigma_inf": rep.sigma_inf,
            "theorem1_rhs": rep.theorem1_rhs,
            "kappa": kappa,
            "eta": eta,
            "draws": draws,
            "files": ["sigma_curve.csv", "sigma_curve.png"],
        }
        report = build_report("bound", _echo(settings, seed), results,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


def cmd_duality_check(settings: dict, seed: int, out: Path):
    check_known_keys(settings, {"duality": {
        "duality.c", "duality.n", "duality.d", "duality.probes",
    }, "data": _DATA_KEYS})
    c = get_float(settings, "duality.c")
    probes_count = get_int(settings, "duality.probes", 10000)
    if probes_count < 1:
        raise ConfigError(f"duality.probes must be positive, got {probes_count}")
    if "data.train" in settings:
        data = _load_unlabeled(get_path(settings, "data.train"), "data.train")
    else:
        n = get_int(settings, "duality.n")
        d = get_int(settings, "duality.d")
        if n < 1 or d < 1:
            raise ConfigError("duality.n and duality.d must be positive")
        data = Dataset(np.random.default_rng(seed).normal(size=(n, d)))

    def execute():
        started = time.time()
        solution = solve_oneclass_dual(data, c, seed=seed)
        slack = np.maximum(0.0, 1.0 - data.x @ solution.w)
        gap_oneclass = (0.5 * solution.w @ solution.w + c * slack.sum()) - solution.objective
        mapping = map_to_nu(solution, c, data.n)
        nu_solution = solve_nu_svm(data, mapping.nu)
        center = data.x.mean(axis=0)
        spread = data.x.std(axis=0) + 1.0
        probes = np.random.default_rng(seed + 1).normal(center, 3.0 * spread,
                                                        size=(probes_count, data.d))
        warnings = []
        disagreements = None
        if nu_solution.rho_ambiguous:
            warnings.append("boundary offset ambiguous (no interior support vectors); "
                            "coincidence check skipped")
        else:
            coincidence = verify_boundary_coincidence(solution.w, nu_solution.w_hat,
                                                      nu_solution.rho, probes)
            disagreements = len(coincidence.disagreements)
        out.mkdir(parents=True, exist_ok=True)
        results = {
            "n": data.n, "d": data.d, "c": c,
            "nu": mapping.nu,
            "delta_scalar": mapping.delta_scalar,
            "rho_mapped": mapping.rho,
            "rho_solver": nu_solution.rho,
            "rho_ambiguous": nu_solution.rho_ambiguous,
            "gap_oneclass": float(gap_oneclass),
            "gap_nu": nu_solution.gap,
            "probes_checked": 0 if disagreements is None else probes_count,
            "disagreements": disagreements,
        }
        report = build_report("duality-check", _echo(settings, seed), results, warnings,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


def cmd_sweep(settings: dict, seed: int, out: Path):
    sweep_keys = {"sweep.objective", "sweep.c", "sweep.c_u", "sweep.delta", "sweep.repeats"}
    check_known_keys(settings, {"sweep": sweep_keys, "train": _TRAIN_KEYS - {"train.c"},
                                "model": _MODEL_KEYS, "data": _DATA_KEYS})
    objective = get_str(settings, "sweep.objective", choices={"doc", "doc3", "binary"})
    grid_c = get_float_list(settings, "sweep.c")
    grid_cu = get_float_list(settings, "sweep.c_u", [0.0])
    grid_delta = get_float_list(settings, "sweep.delta", [0.0])
    repeats = get_int(settings, "sweep.repeats", 1)
    if repeats < 1:
        raise ConfigError(f"sweep.repeats must be positive, got {repeats}")
    spec_settings = dict(settings)
    train_data = _load_unlabeled(get_path(settings, "data.train"), "data.train")
    test = _load_labeled(get_path(settings, "data.test"), "data.test")
    univ = None
    if objective in ("doc3", "binary"):
        if "data.universum" not in settings:
            raise ConfigError(f"sweep.objective={objective} requires data.universum")
        univ = UniversumSet(_load_unlabeled(get_path(settings, "data.universum"),
                                            "data.universum").x)
    threshold = 0.0 if objective == "binary" else 1.0

    def execute():
        started = time.time()
        points = []
        for c, c_u, delta in itertools.product(grid_c, grid_cu, grid_delta):
            aucs, errors = [], []
            for rep in range(repeats):
                run_seed = seed + rep
                try:
                    run_settings = dict(spec_settings)
                    run_settings["train.c"] = repr(c)
                    hp = _hyperparams(run_settings, run_seed,
                                      c_u=c_u if objective == "doc3" else 0.0, delta=delta)
                    spec = _feature_spec(run_settings, run_seed)
                    if objective == "binary":
                        trace = train_binary_baseline(train_data, univ, hp, spec)
                    else:
                        trace = train(train_data, univ if objective == "doc3" else None,
                                      hp, spec)
                    metrics = evaluate(trace.model, test, threshold=threshold)
                    aucs.append(metrics.auc)
                except Exception as exc:  # record, keep sweeping
                    errors.append(f"seed {run_seed}: {exc}")
            point = {"c": c, "c_u": c_u, "delta": delta, "runs_ok": len(aucs)}
            if aucs:
                point["auc_mean"] = float(np.mean(aucs))
                point["auc_std"] = float(np.std(aucs, ddof=1)) if len(aucs) > 1 else 0.0
            if errors:
                point["errors"] = errors
            points.append(point)
        scored = [p for p in points if "auc_mean" in p]
        best = max(scored, key=lambda p: p["auc_mean"]) if scored else None
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "sweep.csv",
                  ["c", "c_u", "delta", "auc_mean", "auc_std", "runs_ok"],
                  [(p["c"], p["c_u"], p["delta"], p.get("auc_mean", ""),
                    p.get("auc_std", ""), p["runs_ok"]) for p in points])
        if scored:
            labels = [f"c={p['c']:g},cu={p['c_u']:g},d={p['delta']:g}" for p in scored]
            plots.sweep_figure(labels, [p["auc_mean"] for p in scored],
                               [p["auc_std"] for p in scored], out / "sweep.png")
        results = {"objective": objective, "repeats": repeats,
                   "points": points, "best": best,
                   "files": ["sweep.csv"] + (["sweep.png"] if scored else [])}
        report = build_report("sweep", _echo(settings, seed), results,
                              timing_seconds=time.time() - started)
        write_report(out / "report.json", report)
        return report

    return execute


COMMANDS = {
    "synth": cmd_synth,
    "train": cmd_train,
    "eval": cmd_eval,
    "bound": cmd_bound,
    "corr": cmd_corr,
    "duality-check": cmd_duality_check,
    "sweep": cmd_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocuniv",
        description="One-class training with contradictions: data synthesis, "
                    "training, evaluation, capacity bounds, duality checks, sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="flat key = value settings file")
        cmd.add_argument("--seed", type=int, default=None,
                         help="overrides the config's seed (default 0)")
        cmd.add_argument("--out", default=".", help="output directory")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        settings = parse_config(args.config)
        seed = args.seed if args.seed is not None else get_int(settings, "seed", 0)
        execute = COMMANDS[args.command](settings, seed, Path(args.out))
    except Exception as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        report = execute()
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary = {k: v for k, v in report["results"].items()
               if isinstance(v, (int, float, str)) and k != "files"}
    print(f"{args.command}: report written to {Path(args.out) / 'report.json'}")
    for key, value in summary.items():
        print(f"  {key} = {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
