"""Command-line entry points: reproducible runs with CSV/plain-text artifacts.

Every run writes its outputs plus ``run_manifest.json`` recording the resolved
configuration, its hash, the seed, and library versions.  CSV bodies are
deterministic for a fixed config+seed; timestamps only ever appear in the
manifest.  Value precedence: command-line flags > config file > LOCSCAPE_*
environment variables > built-in defaults.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
"""

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bifurcation, experiments, landscape, runstats
from .errors import LocscapeError, ParameterError
from .operator import BoundaryCondition, assemble
from .potential import DistributionSpec, GridSpec, sample_potential, save_potential
from .regions import zero_components
from .solver import smallest_eigenpairs
from .stochastic import PathConfig, estimate_landscape_mc, probe_points_for


class ConfigError(Exception):
    pass


# schema: key -> (type, default); None default means required has a computed fallback
_POTENTIAL_KEYS = {
    "dim": (int, 1),
    "n_cells": (int, 50),
    "nodes_per_cell": (int, None),        # 8 in 1D, 4 in 2D
    "dist": (str, "bernoulli"),
    "dist_params": (list, [0.5]),
}
_BC_KEYS = {"bc": (str, "neumann"), "h": (float, 0.0)}

SCHEMAS = {
    "potential": {**_POTENTIAL_KEYS},
    "solve": {**_POTENTIAL_KEYS, **_BC_KEYS, "K": (float, 8000.0), "n_modes": (int, 4)},
    "landscape": {**_POTENTIAL_KEYS, **_BC_KEYS, "K": (float, 8000.0)},
    "valleys": {**_POTENTIAL_KEYS, **_BC_KEYS, "K": (float, 8000.0)},
    "boundary-prob": {**_POTENTIAL_KEYS, **_BC_KEYS, "K": (float, 5e4), "predicate": (str, "boundary")},
    "multimodal-prob": {**_POTENTIAL_KEYS, **_BC_KEYS, "K": (float, 3e6)},
    "dist-study": {"h_list": (list, [0.01, 1.0]), "dims": (list, [1]), "K": (float, 1e4)},
    "fk-check": {**_POTENTIAL_KEYS, **_BC_KEYS, "K": (float, 8000.0), "dt": (float, 2e-5),
                 "n_paths": (int, 10_000), "probes": (list, [])},
    "bifurcation": {"L1": (float, bifurcation.REFERENCE_PARAMS.L1), "L2": (float, bifurcation.REFERENCE_PARAMS.L2),
                    "L3": (float, bifurcation.REFERENCE_PARAMS.L3), "L4": (float, bifurcation.REFERENCE_PARAMS.L4),
                    "nodes_per_unit": (int, 3000), "sweep": (bool, True)},
    "scaling": {"axes": (list, ["P1", "P2", "P3"]), "n_points": (int, 30),
                "P1": (float, 0.25), "P2": (float, 0.4), "P3": (float, 0.1)},
}


def _env_default(name, cast, fallback):
    raw = os.environ.get(f"LOCSCAPE_{name}")
    return cast(raw) if raw is not None else fallback


def _load_config(command, path, overrides):
    merged = {k: default for k, (_, default) in SCHEMAS[command].items()}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        for key, value in data.items():
            if key not in SCHEMAS[command]:
                raise ConfigError(f"unknown config key {key!r} for {command}")
            want = SCHEMAS[command][key][0]
            if want in (int, float) and isinstance(value, (int, float)):
                value = want(value)
            if want is not type(value) and not isinstance(value, want):
                raise ConfigError(f"config key {key!r} must be {want.__name__}")
            merged[key] = value
    merged.update({k: v for k, v in overrides.items() if v is not None})
    if merged.get("nodes_per_cell") is None and "dim" in merged:
        merged["nodes_per_cell"] = 8 if merged["dim"] == 1 else 4
    return merged


_DIST_MAKERS = {
    "bernoulli": DistributionSpec.bernoulli,
    "uniform": DistributionSpec.uniform,
    "normal": DistributionSpec.normal,
    "gamma": DistributionSpec.gamma,
}


def _grid_dist(cfg):
    grid = GridSpec(cfg["dim"], cfg["n_cells"], cfg["nodes_per_cell"])
    if cfg["dist"] not in _DIST_MAKERS:
        raise ConfigError(f"unknown distribution {cfg['dist']!r}")
    dist = _DIST_MAKERS[cfg["dist"]](*(float(v) for v in cfg["dist_params"]))
    return grid, dist


def _bc(cfg):
    kind = cfg["bc"]
    if kind == "robin":
        return BoundaryCondition.robin(cfg["h"])
    if kind in ("dirichlet", "neumann", "periodic"):
        return BoundaryCondition(kind)
    raise ConfigError(f"unknown bc {kind!r}")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _manifest(out, command, cfg, seed):
    payload = json.dumps({"command": command, "config": cfg, "seed": seed}, sort_keys=True)
    doc = {
        "command": command,
        "config": cfg,
        "seed": seed,
        "config_sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "versions": {"locscape": __version__, "numpy": np.__version__,
                     "python": sys.version.split()[0]},
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    (out / "run_manifest.json").write_text(json.dumps(doc, indent=2) + "\n")


# --- subcommand bodies ------------------------------------------------------------

def _cmd_potential(cfg, seed, trials, threads, out):
    grid, dist = _grid_dist(cfg)
    fieldv = sample_potential(grid, dist, seed)
    save_potential(fieldv, out / "potential.txt")


def _cmd_solve(cfg, seed, trials, threads, out):
    grid, dist = _grid_dist(cfg)
    bc = _bc(cfg)
    fieldv = sample_potential(grid, dist, seed)
    op = assemble(grid, fieldv, cfg["K"], bc)
    pairs = smallest_eigenpairs(op, k=cfg["n_modes"])
    ls = landscape.landscape_from_operator(op)
    rows = []
    for j, pair in enumerate(pairs, start=1):
        full = op.embed(pair.mode)
        flat = int(np.argmax(np.abs(full)))
        cell = tuple(min(int(c * grid.cells_per_side / (grid.nodes_per_axis - 1)),
                         grid.cells_per_side - 1)
                     for c in (np.unravel_index(flat, full.shape)))
        rows.append((j, pair.eigenvalue, pair.residual,
                     " ".join(str(c) for c in cell), pair.cluster))
    _write_csv(out / "eigenpairs.csv", ["mode", "eigenvalue", "residual", "argmax_cell", "cluster"], rows)
    landscape.save_grid(op.embed(ls.w), out / "landscape.txt")
    modes = np.column_stack([op.embed(p.mode).ravel() for p in pairs])
    with open(out / "modes.txt", "w") as fh:
        for row in modes:
            fh.write(" ".join(repr(v) for v in row) + "\n")


def _cmd_landscape(cfg, seed, trials, threads, out):
    grid, dist = _grid_dist(cfg)
    fieldv = sample_potential(grid, dist, seed)
    ls = landscape.compute_landscape(grid, fieldv, cfg["K"], _bc(cfg))
    landscape.save_grid(ls.op.embed(ls.w), out / "landscape.txt")


def _cmd_valleys(cfg, seed, trials, threads, out):
    grid, dist = _grid_dist(cfg)
    fieldv = sample_potential(grid, dist, seed)
    ls = landscape.compute_landscape(grid, fieldv, cfg["K"], _bc(cfg))
    part = landscape.valley_partition(ls)
    landscape.save_grid(part.labels, out / "valley_labels.txt")
    rows = [(r.id, r.size, r.measure, " ".join("1" if t else "0" for t in r.touches),
             int(r.touches_corner)) for r in part.regions]
    _write_csv(out / "regions.csv", ["region", "nodes", "measure", "touches_sides", "corner"], rows)
    if fieldv.is_binary:
        comp = zero_components(fieldv)
        landscape.save_grid(comp.labels, out / "zero_component_labels.txt")


def _ensemble_cmd(cfg, seed, trials, threads, out, predicate):
    grid, dist = _grid_dist(cfg)
    bc = _bc(cfg)
    spec = experiments.ExperimentSpec(grid, dist, cfg["K"], bc, trials, seed, predicate)
    spec_hash = hashlib.sha256(repr(spec).encode()).hexdigest()[:16]
    est, records = experiments.run_ensemble(spec, workers=threads)
    _write_csv(out / "trials.csv", ["trial", "seed", "eigenvalue", "hit", "failed"],
               [(r.trial, r.seed, r.eigenvalue, int(r.hit), int(r.failed)) for r in records])
    analytic = float("nan")
    if grid.dim == 1 and dist.kind == "bernoulli":
        model = runstats.RunModel(dist.params[0], grid.cells_per_side)
        if predicate == "boundary":
            analytic = runstats.boundary_localization_prob(model)
        elif predicate == "multimodal":
            analytic = (runstats.multimodal_prob_dirichlet(model) if bc.kind == "dirichlet"
                        else runstats.multimodal_prob_neumann(model))
    _write_csv(out / "summary.csv",
               ["spec_hash", "predicate", "p_hat", "ci_low", "ci_high",
                "n_trials", "n_hits", "n_failures", "analytic"],
               [(spec_hash, predicate, est.p_hat, est.ci_low, est.ci_high,
                 est.n_trials, est.n_hits, est.n_failures, analytic)])


def _cmd_boundary_prob(cfg, seed, trials, threads, out):
    _ensemble_cmd(cfg, seed, trials, threads, out, cfg.get("predicate", "boundary"))


def _cmd_multimodal_prob(cfg, seed, trials, threads, out):
    _ensemble_cmd(cfg, seed, trials, threads, out, "multimodal")


def _cmd_dist_study(cfg, seed, trials, threads, out):
    rows = experiments.distribution_study([float(h) for h in cfg["h_list"]],
                                          dims=tuple(int(d) for d in cfg["dims"]),
                                          K=cfg["K"], n_trials=trials, seed=seed,
                                          workers=threads)
    table = []
    for r in rows:
        corner = r.corner.p_hat if r.corner is not None else float("nan")
        table.append((r.dim, r.kind, r.sigma, r.h, r.boundary.p_hat,
                      r.boundary.ci_low, r.boundary.ci_high, corner))
    _write_csv(out / "dist_study.csv",
               ["dim", "dist", "sigma", "h", "p_boundary", "ci_low", "ci_high", "p_corner"],
               table)


def _cmd_fk_check(cfg, seed, trials, threads, out):
    grid, dist = _grid_dist(cfg)
    bc = _bc(cfg)
    fieldv = sample_potential(grid, dist, seed)
    op = assemble(grid, fieldv, cfg["K"], bc)
    w = landscape.landscape_from_operator(op).w
    probes = np.asarray([float(p) for p in cfg["probes"]]) if cfg["probes"] else probe_points_for(fieldv)
    pcfg = PathConfig(dt=cfg["dt"], n_paths=cfg["n_paths"], seed=seed)
    rows = []
    for x in probes:
        est = estimate_landscape_mc(x, fieldv, cfg["K"], bc, pcfg)
        node = int(np.argmin(np.abs(op.axes[0] - x)))
        rows.append((x, est.mean, est.std_error, w[node],
                     (est.mean - w[node]) / est.std_error if est.std_error else 0.0))
    _write_csv(out / "fk_check.csv",
               ["probe_x", "mc_mean", "mc_std_error", "fd_landscape", "deviation_sigmas"], rows)


def _cmd_bifurcation(cfg, seed, trials, threads, out):
    params = bifurcation.TwoWellParams(cfg["L1"], cfg["L2"], cfg["L3"], cfg["L4"])
    cp = bifurcation.critical_point(params)
    rows = [("analytic", cp.K_c, cp.lambda_c)]
    sweep_rows = []
    if cfg["sweep"]:
        sw = bifurcation.critical_coupling_sweep(params, nodes_per_unit=cfg["nodes_per_unit"])
        rows.append(("sweep", sw.K_c, float("nan")))
        rows.append(("relative_gap", abs(sw.K_c - cp.K_c) / sw.K_c, float("nan")))
        sweep_rows = list(zip(sw.K_grid, sw.ratios))
    _write_csv(out / "critical.csv", ["quantity", "K", "lambda"], rows)
    if sweep_rows:
        _write_csv(out / "sweep.csv", ["K", "peak_height_ratio"], sweep_rows)


def _cmd_scaling(cfg, seed, trials, threads, out):
    base = bifurcation.ShapeRatios(cfg["P1"], cfg["P2"], cfg["P3"])
    summary = []
    for axis in cfg["axes"]:
        fit = bifurcation.scaling_study(axis, n_points=cfg["n_points"], seed=seed, base=base)
        _write_csv(out / f"scaling_{axis}.csv", ["P", "K_c"], list(fit.samples))
        summary.append((axis, fit.model, fit.slope, fit.intercept, fit.r2,
                        len(fit.samples), len(fit.skipped)))
    _write_csv(out / "regression_summary.csv",
               ["axis", "model", "slope", "intercept", "r2", "n_fit", "n_skipped"], summary)


_COMMANDS = {
    "potential": _cmd_potential,
    "solve": _cmd_solve,
    "landscape": _cmd_landscape,
    "valleys": _cmd_valleys,
    "boundary-prob": _cmd_boundary_prob,
    "multimodal-prob": _cmd_multimodal_prob,
    "dist-study": _cmd_dist_study,
    "fk-check": _cmd_fk_check,
    "bifurcation": _cmd_bifurcation,
    "scaling": _cmd_scaling,
}


def _parser():
    ap = argparse.ArgumentParser(prog="locscape",
                                 description="Localization-landscape experiments")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None, help="JSON config file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--trials", type=int, default=None)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (JSON-encoded value)")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        overrides = {}
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set needs KEY=VALUE, got {item!r}")
            key, _, raw = item.partition("=")
            try:
                overrides[key] = json.loads(raw)
            except json.JSONDecodeError:
                overrides[key] = raw
        cfg = _load_config(args.command, args.config, overrides)
        seed = args.seed if args.seed is not None else _env_default("SEED", int, 0)
        trials = args.trials if args.trials is not None else _env_default("TRIALS", int, 200)
        threads = args.threads if args.threads is not None else _env_default(
            "THREADS", int, os.cpu_count() or 1)
        out = Path(args.out if args.out is not None else _env_default("OUT", str, "locscape-out"))
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        out.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](cfg, seed, trials, threads, out)
        _manifest(out, args.command, cfg, seed)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LocscapeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
