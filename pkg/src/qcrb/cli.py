"""Batch command-line front door.

Six subcommands, one JSON config document per run, machine-readable
output files in a requested directory:

    qcrb bound           closed-form floor and competitor curves
    qcrb qfi-check       analytic-vs-numeric score verification table
    qcrb appendix-check  covariance asymptotics by quadrature + synthesis
    qcrb simulate        one estimator Monte Carlo run
    qcrb compare         floor vs claimed curves vs simulated reports
    qcrb plot            SVG overlay from previously written reports

The CLI performs no arithmetic of its own: every number in a report is
produced by a library operation.  Unknown config keys are errors.

Exit codes: 0 success, 2 configuration problem, 3 numerical failure
(quadrature non-convergence, cutoff escalation), 4 invariant violation
(a simulated estimator flagged below the bound, or an asymptotics
assertion failing).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .estimators import ExperimentConfig, run_experiment
from .fisher import (
    bound_report,
    competitor_sensitivities,
    refutation_summary,
    score_check_row,
)
from .modal import (
    AppendixQuadratureConfig,
    QuadratureConvergenceError,
    asymptote_deviation_stats,
    build_mode_set,
    modal_covariance_matrix,
)
from .physics import SourceSpec
from .reporting import read_json, write_csv, write_json
from .rng import PURPOSE_BOOTSTRAP, substream
from .states import CutoffEscalationError
from .stats import covariance_entry_sigma, entrywise_agreement
from .synthesis import modal_projection_ensemble

#: documented default seed; fixed (never time-derived) for reproducibility
DEFAULT_SEED = 271828

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INVARIANT = 4


class ConfigError(ValueError):
    """Bad or missing run configuration."""


def _load_config(path) -> dict:
    try:
        raw = read_json(path)
    except FileNotFoundError as err:
        raise ConfigError(f"config file not found: {path}") from err
    except ValueError as err:
        raise ConfigError(f"config file is not valid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    return raw


def _check_keys(section, mapping, required, optional=()):
    unknown = set(mapping) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"unknown keys in {section}: {sorted(unknown)}")
    missing = set(required) - set(mapping)
    if missing:
        raise ConfigError(f"missing keys in {section}: {sorted(missing)}")


def _spec_from_config(mapping) -> SourceSpec:
    _check_keys("spec", mapping, required=("nu0", "delta_nu", "T_obs"), optional=("n0", "T_s"))
    has_n0, has_ts = "n0" in mapping, "T_s" in mapping
    if has_n0 == has_ts:
        raise ConfigError("spec requires exactly one of 'n0' or 'T_s'")
    try:
        if has_n0:
            return SourceSpec.from_occupation(
                n0=float(mapping["n0"]),
                nu0=float(mapping["nu0"]),
                delta_nu=float(mapping["delta_nu"]),
                T_obs=float(mapping["T_obs"]),
            )
        return SourceSpec.from_temperature(
            T_s=float(mapping["T_s"]),
            nu0=float(mapping["nu0"]),
            delta_nu=float(mapping["delta_nu"]),
            T_obs=float(mapping["T_obs"]),
        )
    except ValueError as err:
        raise ConfigError(f"invalid spec: {err}") from err


def _spec_payload(spec: SourceSpec) -> dict:
    return {
        "T_s": spec.T_s,
        "nu0": spec.nu0,
        "delta_nu": spec.delta_nu,
        "T_obs": spec.T_obs,
        "n0": spec.n0,
        "tau_c": spec.tau_c,
        "M": spec.M,
        "long_observation": spec.long_observation,
    }


def _grid_values(grid) -> np.ndarray:
    _check_keys("grid", grid, required=("start", "stop", "points"), optional=("scale", "parameter"))
    points = int(grid["points"])
    if points < 2:
        raise ConfigError("grid needs at least 2 points")
    scale = grid.get("scale", "log")
    if scale == "log":
        return np.logspace(np.log10(float(grid["start"])), np.log10(float(grid["stop"])), points)
    if scale == "linear":
        return np.linspace(float(grid["start"]), float(grid["stop"]), points)
    raise ConfigError(f"unknown grid scale {scale!r}")


def _curve_row(spec, T_samp):
    report = bound_report(spec)
    row = {
        "n0": spec.n0,
        "T_obs": spec.T_obs,
        "qfi_total": report.qfi_total,
        "var_bound": report.var_bound,
        "rel_sens_bound": report.rel_sens_bound,
        "temp_rel_sens_bound": report.temp_rel_sens_bound,
    }
    if T_samp is not None:
        curves = competitor_sensitivities(spec, T_samp)
        row.update(
            radiometer=curves.radiometer,
            claimed_fast_sampling=curves.claimed_fast_sampling,
            photon_counting=curves.photon_counting,
        )
    return row


def _respec(spec, parameter, value):
    if parameter == "n0":
        return SourceSpec.from_occupation(
            n0=value, nu0=spec.nu0, delta_nu=spec.delta_nu, T_obs=spec.T_obs
        )
    if parameter == "T_obs":
        return SourceSpec.from_occupation(
            n0=spec.n0, nu0=spec.nu0, delta_nu=spec.delta_nu, T_obs=value
        )
    raise ConfigError(f"grid parameter must be 'n0' or 'T_obs', not {parameter!r}")


def cmd_bound(config, out_dir, fmt, seed, workers):
    spec_keys = {"nu0", "delta_nu", "T_obs", "n0", "T_s"}
    _check_keys("bound config", config, required=(), optional=spec_keys | {"T_samp", "grid"})
    spec = _spec_from_config({k: config[k] for k in spec_keys & set(config)})
    T_samp = float(config["T_samp"]) if "T_samp" in config else None

    rows = []
    if "grid" in config:
        parameter = config["grid"].get("parameter", "n0")
        for value in _grid_values(config["grid"]):
            rows.append(_curve_row(_respec(spec, parameter, float(value)), T_samp))
    payload = {
        "manifest": {"command": "bound", "seed": seed, "format": fmt},
        "spec": _spec_payload(spec),
        "bound": bound_report(spec).to_dict(),
        "grid": rows,
    }
    if T_samp is not None:
        payload["competitors"] = competitor_sensitivities(spec, T_samp).to_dict()
    if fmt == "csv":
        table = rows or [_curve_row(spec, T_samp)]
        write_csv(table, list(table[0].keys()), Path(out_dir) / "bound.csv")
    else:
        write_json(payload, Path(out_dir) / "bound.json")
    return EXIT_OK


def cmd_qfi_check(config, out_dir, fmt, seed, workers):
    _check_keys("qfi-check config", config, required=("n0_values",), optional=("cutoffs",))
    n0_values = [float(v) for v in config["n0_values"]]
    cutoffs = config.get("cutoffs")
    if cutoffs is not None and len(cutoffs) != len(n0_values):
        raise ConfigError("cutoffs must match n0_values in length")
    rows = []
    for i, n0 in enumerate(n0_values):
        cutoff = None if cutoffs is None or cutoffs[i] is None else int(cutoffs[i])
        rows.append(score_check_row(n0, cutoff))
    payload = {
        "manifest": {"command": "qfi-check", "seed": seed, "format": fmt},
        "rows": rows,
        "all_passed": all(row["passed"] for row in rows),
    }
    if fmt == "csv":
        write_csv(rows, list(rows[0].keys()), Path(out_dir) / "qfi_check.csv")
    else:
        write_json(payload, Path(out_dir) / "qfi_check.json")
    return EXIT_OK if payload["all_passed"] else EXIT_INVARIANT


def cmd_appendix_check(config, out_dir, fmt, seed, workers):
    _check_keys(
        "appendix-check config",
        config,
        required=("n0", "nu0_index"),
        optional=("products", "quadrature", "synthesis"),
    )
    n0 = float(config["n0"])
    nu0_index = int(config["nu0_index"])
    products = [int(p) for p in config.get("products", (16, 32, 64))]

    quad_cfg = config.get("quadrature", {})
    _check_keys(
        "quadrature",
        quad_cfg,
        required=(),
        optional=("c", "panels_zeta", "panels_tau", "gl_order", "rel_tol", "max_doublings"),
    )
    cfg = AppendixQuadratureConfig(**quad_cfg)

    synth_cfg = config.get("synthesis", {})
    _check_keys(
        "synthesis", synth_cfg, required=(), optional=("realizations", "oversample", "record_factor")
    )
    realizations = int(synth_cfg.get("realizations", 10_000))
    oversample = int(synth_cfg.get("oversample", 8))
    record_factor = float(synth_cfg.get("record_factor", 2.0))

    rows = []
    for product in products:
        spec = SourceSpec.from_occupation(
            n0=n0, nu0=float(nu0_index), delta_nu=float(product), T_obs=1.0
        )
        mode_set = build_mode_set(spec)
        matrix, info = modal_covariance_matrix(spec, mode_set, cfg)
        quad_stats = asymptote_deviation_stats(spec, mode_set, matrix)

        amps = modal_projection_ensemble(
            spec,
            mode_set,
            realizations=realizations,
            master_seed=seed,
            oversample=oversample,
            record_length=record_factor * spec.T_obs,
        )
        boot = substream(seed, purpose=PURPOSE_BOOTSTRAP, index=product)
        point, sigma = covariance_entry_sigma(amps, boot)
        synth_stats = asymptote_deviation_stats(spec, mode_set, point)
        agree_ok, agree_worst = entrywise_agreement(
            point, matrix, sigma, z=5.0, slack=cfg.rel_tol * n0
        )
        rows.append(
            {
                "product": product,
                "panels_zeta": info["panels_zeta"],
                "panels_tau": info["panels_tau"],
                "quad_max_diag_dev": quad_stats["max_diag_dev_interior"],
                "quad_max_offdiag": quad_stats["max_offdiag_interior"],
                "quad_max_dev": quad_stats["max_dev_interior"],
                "fitted_constant": quad_stats["fitted_constant"],
                "allowed_dev": quad_stats["allowed_dev"],
                "edge_mode_values": quad_stats["edge_mode_values"],
                "synth_realizations": realizations,
                "synth_max_dev": synth_stats["max_dev_interior"],
                "paths_agree": agree_ok,
                "agreement_worst_excess": agree_worst,
            }
        )

    devs = [row["quad_max_dev"] for row in rows]
    decreasing = all(b < a for a, b in zip(devs, devs[1:]))
    within = all(row["quad_max_dev"] <= row["allowed_dev"] for row in rows)
    agree = all(row["paths_agree"] for row in rows)
    payload = {
        "manifest": {"command": "appendix-check", "seed": seed, "format": fmt},
        "n0": n0,
        "nu0_index": nu0_index,
        "rows": rows,
        "deviation_decreasing": decreasing,
        "deviation_within_bound": within,
        "synthesis_agrees": agree,
    }
    if fmt == "csv":
        flat = [
            {k: v for k, v in row.items() if k != "edge_mode_values"} for row in rows
        ]
        write_csv(flat, list(flat[0].keys()), Path(out_dir) / "appendix_check.csv")
    else:
        write_json(payload, Path(out_dir) / "appendix_check.json")
    return EXIT_OK if (decreasing and within and agree) else EXIT_INVARIANT


def cmd_simulate(config, out_dir, fmt, seed, workers):
    _check_keys(
        "simulate config",
        config,
        required=("spec", "kind", "trials"),
        optional=("master_seed", "T_samp"),
    )
    spec = _spec_from_config(config["spec"])
    try:
        exp = ExperimentConfig(
            spec=spec,
            kind=config["kind"],
            trials=int(config["trials"]),
            master_seed=int(config.get("master_seed", seed)),
            T_samp=float(config["T_samp"]) if "T_samp" in config else None,
        )
    except ValueError as err:
        raise ConfigError(f"invalid experiment: {err}") from err
    report = run_experiment(exp, workers=workers)
    payload = {
        "manifest": {"command": "simulate", "seed": exp.master_seed, "format": fmt},
        "spec": _spec_payload(spec),
        "kind": exp.kind.value,
        "trials": exp.trials,
        "report": report.to_dict(),
    }
    if fmt == "csv":
        row = report.to_dict()
        write_csv([row], list(row.keys()), Path(out_dir) / "simulate.csv")
    else:
        write_json(payload, Path(out_dir) / "simulate.json")
    flags_ok = report.bound_satisfied and report.bias_consistent is not False
    return EXIT_OK if flags_ok else EXIT_INVARIANT


def cmd_compare(config, out_dir, fmt, seed, workers):
    _check_keys(
        "compare config",
        config,
        required=("spec", "T_samp"),
        optional=("n0_grid", "simulate_reports"),
    )
    spec = _spec_from_config(config["spec"])
    T_samp = float(config["T_samp"])
    summary = refutation_summary(spec, T_samp)

    rows = []
    if "n0_grid" in config:
        for value in _grid_values(config["n0_grid"]):
            rows.append(_curve_row(_respec(spec, "n0", float(value)), T_samp))

    simulated = []
    for path in config.get("simulate_reports", []):
        try:
            sim = read_json(path)
        except FileNotFoundError as err:
            raise ConfigError(f"simulate report not found: {path}") from err
        simulated.append(
            {
                "kind": sim["report"]["kind"],
                "n0": sim["spec"]["n0"],
                "rel_sensitivity": sim["report"]["rel_sensitivity"],
                "bootstrap_sigma": sim["report"]["bootstrap_sigma"],
                "bound": sim["report"]["bound"],
                "ratio_to_bound": sim["report"]["ratio_to_bound"],
                "bound_satisfied": sim["report"]["bound_satisfied"],
            }
        )
    payload = {
        "manifest": {"command": "compare", "seed": seed, "format": fmt},
        "spec": _spec_payload(spec),
        "summary": summary,
        "grid": rows,
        "simulated": simulated,
        "all_simulated_at_or_above_bound": all(s["bound_satisfied"] for s in simulated),
    }
    if fmt == "csv":
        table = rows or [dict(summary)]
        write_csv(table, list(table[0].keys()), Path(out_dir) / "compare.csv")
    else:
        write_json(payload, Path(out_dir) / "compare.json")
    return EXIT_OK if payload["all_simulated_at_or_above_bound"] else EXIT_INVARIANT


def cmd_plot(config, out_dir, fmt, seed, workers):
    from .plotting import sensitivity_overlay

    _check_keys(
        "plot config",
        config,
        required=("bound_report",),
        optional=("simulate_reports", "name"),
    )
    try:
        source = read_json(config["bound_report"])
    except FileNotFoundError as err:
        raise ConfigError(f"report not found: {config['bound_report']}") from err
    grid = source.get("grid", [])
    points = []
    for path in config.get("simulate_reports", []):
        try:
            sim = read_json(path)
        except FileNotFoundError as err:
            raise ConfigError(f"simulate report not found: {path}") from err
        points.append(
            {
                "kind": sim["report"]["kind"],
                "n0": sim["spec"]["n0"],
                "rel_sensitivity": sim["report"]["rel_sensitivity"],
                "bootstrap_sigma": sim["report"]["bootstrap_sigma"],
            }
        )
    name = config.get("name", "overlay")
    sensitivity_overlay(grid, points, Path(out_dir) / f"{name}.svg")
    return EXIT_OK


_COMMANDS = {
    "bound": cmd_bound,
    "qfi-check": cmd_qfi_check,
    "appendix-check": cmd_appendix_check,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcrb",
        description="Quantum Cramér-Rao floor for thermal-source radiometry: "
        "bounds, oracle checks, and estimator simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON config document")
        cmd.add_argument("--out", required=True, help="output directory")
        cmd.add_argument(
            "--seed",
            type=int,
            default=DEFAULT_SEED,
            help=f"master seed (default {DEFAULT_SEED}; never time-derived)",
        )
        cmd.add_argument("--format", choices=("json", "csv"), default="json")
        cmd.add_argument("--workers", type=int, default=1, help="parallelism cap")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = _load_config(args.config)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](config, out_dir, args.format, args.seed, args.workers)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureConvergenceError, CutoffEscalationError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
