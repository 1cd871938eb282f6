"""Command-line front end.

Subcommands: recover, phase-transition, ab-compare, constants, verify,
frame-stats, rbop-trend.  Exit codes: 0 on success, 2 on configuration
errors (including unknown flags and malformed config files), 1 on runtime
errors.  Outputs are deterministic for a fixed seed; the runtime column of
experiment CSVs stays zeroed unless --timing is passed, so reruns are byte
identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import matio
from .certificates import constants_report, run_lemma_suite
from .errors import ConfigError, ObPursuitError
from .experiments import (ExperimentConfig, ab_comparison, load_config,
                          phase_transition, rbop_trend, write_grid_csv,
                          write_grid_json, write_plot_data)
from .frames import (build_density, frame_operator_stats, masked_fourier_frame,
                     partial_dft_frame, synthetic_biorthogonal_frame)
from .pursuits import ALGORITHMS, PursuitConfig, run_pursuit


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obpursuit",
                                description="Greedy sparse recovery with oblique projections")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("recover", help="run one pursuit on matrices from disk")
    r.add_argument("--alg", required=True, choices=ALGORITHMS)
    r.add_argument("--oblique", action="store_true",
                   help="use the dual matrix (needs psi_tilde.csv in --input)")
    r.add_argument("--sparsity", type=int, required=True)
    r.add_argument("--max-iter", type=int, default=None)
    r.add_argument("--tol", type=float, default=1e-8)
    r.add_argument("--input", required=True,
                   help="directory holding psi.csv, y.csv and optionally psi_tilde.csv")
    r.add_argument("--output", default=None, help="JSON result path (stdout if omitted)")

    for name in ("phase-transition", "ab-compare"):
        e = sub.add_parser(name, help=f"run the {name} experiment grid")
        e.add_argument("--config", default=None, help="flat key=value config file")
        e.add_argument("--seed", type=int, default=None)
        e.add_argument("--n", type=int, default=None)
        e.add_argument("--reps", type=int, default=None)
        e.add_argument("--kappa", type=float, default=None)
        e.add_argument("--snr-db", default=None,
                       help="measurement SNR in dB, or 'none' for noiseless")
        e.add_argument("--algs", default=None, help="comma list of algorithm tags")
        e.add_argument("--variants", default=None,
                       choices=("conventional", "oblique", "both"))
        e.add_argument("--output", default=None,
                       help="output basename (writes <base>.csv and <base>.json)")
        e.add_argument("--timing", action="store_true",
                       help="fill the runtime column (breaks byte determinism)")
        e.add_argument("--emit-plot-data", action="store_true",
                       help="also write per-algorithm success matrices")

    c = sub.add_parser("constants", help="enumerate restricted constants of a pair")
    c.add_argument("--psi", required=True)
    c.add_argument("--psi-tilde", default=None)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--budget", type=int, default=1_000_000)
    c.add_argument("--samples", type=int, default=None,
                   help="Monte-Carlo subset count (lower-bound mode)")
    c.add_argument("--output", default=None)

    v = sub.add_parser("verify", help="run the randomized lemma suite")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--output", default=None, help="also write the table as JSON")

    f = sub.add_parser("frame-stats", help="frame-operator and density statistics")
    f.add_argument("--frame", default="synthetic",
                   choices=("synthetic", "partial-dft", "masked-fourier"))
    f.add_argument("--d", type=int, default=64)
    f.add_argument("--kappa", type=float, default=2.0)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--density", default="uniform",
                   help="uniform | power:<alpha> | custom:<w;w;...>")
    f.add_argument("--output", default=None)

    t = sub.add_parser("rbop-trend", help="constants-vs-m trend study")
    t.add_argument("--config", default=None)
    t.add_argument("--seed", type=int, default=None)
    t.add_argument("--density", default=None)
    t.add_argument("--kappa", type=float, default=None)
    t.add_argument("--output", default=None)
    return p


def _experiment_config(args) -> ExperimentConfig:
    overrides = {
        "seed": args.seed, "n": args.n, "reps": args.reps, "kappa": args.kappa,
        "variants": args.variants, "output": args.output,
    }
    if args.snr_db is not None:
        overrides["snr_db"] = None if str(args.snr_db).lower() in ("none", "noiseless") \
            else float(args.snr_db)
    if args.algs is not None:
        overrides["algorithms"] = tuple(a.strip() for a in args.algs.split(",") if a.strip())
    if args.config:
        return load_config(args.config, overrides)
    clean = {k: v for k, v in overrides.items() if v is not None}
    return ExperimentConfig(**clean)


def _cmd_recover(args) -> int:
    psi, _ = matio.load_matrix(os.path.join(args.input, "psi.csv"))
    y = matio.load_vector(os.path.join(args.input, "y.csv"))
    psi_tilde = None
    tilde_path = os.path.join(args.input, "psi_tilde.csv")
    if args.oblique:
        if not os.path.exists(tilde_path):
            raise ConfigError(f"--oblique needs {tilde_path}")
        psi_tilde, _ = matio.load_matrix(tilde_path)
    cfg = PursuitConfig(sparsity=args.sparsity, algorithm=args.alg,
                        oblique=args.oblique, max_iter=args.max_iter, tol=args.tol)
    result = run_pursuit(psi, y, cfg, psi_tilde=psi_tilde)
    _emit(result.as_dict(), args.output)
    return 0


def _cmd_experiment(args, kind: str) -> int:
    config = _experiment_config(args)
    base = config.output or kind.replace("-", "_")
    if kind == "phase-transition":
        grid = phase_transition(config)
        write_grid_csv(grid, base + ".csv", timing=args.timing)
        write_grid_json(grid, base + ".json", timing=args.timing)
    else:
        report = ab_comparison(config)
        grid = report["grid"]
        write_grid_csv(grid, base + ".csv", timing=args.timing, with_rel_error=True)
        payload = {"aggregate": report["aggregate"], "paired": report["paired"],
                   "instance_digest": report["instance_digest"]}
        with open(base + ".json", "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.emit_plot_data:
        write_plot_data(grid, base)
    sys.stdout.write(f"wrote {base}.csv and {base}.json\n")
    return 0


def _cmd_constants(args) -> int:
    psi, _ = matio.load_matrix(args.psi)
    if args.psi_tilde:
        psit, _ = matio.load_matrix(args.psi_tilde)
    else:
        psit = psi
    report = constants_report(psi, psit, args.s, budget=args.budget, samples=args.samples)
    _emit(report.as_dict(), args.output)
    return 0


def _cmd_verify(args) -> int:
    checks = run_lemma_suite(trials=args.trials, seed=args.seed)
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        sys.stdout.write(
            f"{c.name:<{width}}  {status}  trials={c.trials:<4d} "
            f"violations={c.violations:<4d} worst_slack={c.worst_slack:+.3e}\n")
    if args.output:
        _emit({"checks": [c.as_dict() for c in checks]}, args.output)
    return 0


def _cmd_frame_stats(args) -> int:
    if args.frame == "partial-dft":
        fam = partial_dft_frame(args.d)
    elif args.frame == "masked-fourier":
        rng = np.random.default_rng(args.seed)
        fam = masked_fourier_frame(args.d, 1.0 + 0.5 * rng.random(args.d))
    else:
        fam = synthetic_biorthogonal_frame(args.d, kappa=args.kappa, seed=args.seed)
    stats = frame_operator_stats(fam)
    if args.density == "uniform":
        density = build_density("uniform", fam.grid_size)
    elif args.density.startswith("power:"):
        density = build_density("variable-power", fam.grid_size,
                                alpha=float(args.density.split(":")[1]))
    elif args.density.startswith("custom:"):
        density = build_density("custom", fam.grid_size,
                                weights=[float(w) for w in args.density.split(":")[1].split(";")])
    else:
        raise ConfigError(f"unknown density spec {args.density!r}")
    payload = {
        "frame": args.frame, "d": args.d,
        "theta_d": stats["theta_d"], "kappa": stats["kappa"], "scale": stats["scale"],
        "nu_min": density.nu_min, "nu_max": density.nu_max,
    }
    _emit(payload, args.output)
    return 0


def _cmd_rbop_trend(args) -> int:
    overrides = {"seed": args.seed, "density": args.density, "kappa": args.kappa}
    if args.config:
        config = load_config(args.config, overrides)
    else:
        config = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    report = rbop_trend(config)
    _emit(report, args.output)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "recover":
            return _cmd_recover(args)
        if args.command in ("phase-transition", "ab-compare"):
            return _cmd_experiment(args, args.command)
        if args.command == "constants":
            return _cmd_constants(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "frame-stats":
            return _cmd_frame_stats(args)
        if args.command == "rbop-trend":
            return _cmd_rbop_trend(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except (ObPursuitError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
