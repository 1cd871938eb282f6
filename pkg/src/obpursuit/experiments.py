"""Reproducible experiment harnesses: phase transitions, paired A/B runs,
and constant-vs-measurement trend studies.

Every experiment is a pure function of (config, master seed): trial t of
cell c draws from the Philox stream keyed (seed, c, t), so serial and
parallel execution, or re-running a single cell, all reproduce identical
aggregates.  Within a trial, the conventional and oblique variants consume
the same matrices, signal, and noise (the paired design removes draw
variance; the per-trial instance digest is tracked so pairing is
checkable).

The phase-transition benchmark draws the conditioned biorthogonal pair
    Phi = U S V^T (rows),  dual rows from U S^{-1} V^T,
with S increasing linearly between sqrt(1-theta) and sqrt(1+theta),
theta = (kappa-1)/(kappa+1); a uniformly selected set of m distinct rows,
scaled by sqrt(n/m) (the partial-isometry row normalization, under which
the single-draw expectation of A^*A is the conditioned Gram itself and
that of At^*A is the identity), forms (A, At).  The planted signal has
unit-magnitude random-sign entries; success means exact support recovery.
"""

from __future__ import annotations

import hashlib
import json
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import matio
from .certificates import (restricted_biorthogonality_constant,
                           restricted_isometry_constant)
from .dictionaries import make_dictionary
from .errors import ConfigError
from .frames import (build_density, expected_dual_gram, expected_plain_gram,
                     partial_dft_frame, masked_fourier_frame,
                     sample_sensing_pair, synthetic_biorthogonal_frame)
from .linalg import spectral_norm
from .pursuits import ALGORITHMS, PursuitConfig, run_pursuit
from .seeding import stream

SCHEMA_VERSION = "pt-v1"
GRID_COLUMNS = ("m_over_n", "s_over_m", "alg", "oblique", "successes", "trials",
                "mean_iters", "mean_runtime_ms")
AB_COLUMNS = GRID_COLUMNS + ("mean_rel_error",)

DEFAULT_M_OVER_N = tuple(round(0.1 * k, 2) for k in range(1, 10))
DEFAULT_S_OVER_M = tuple(round(0.05 * k, 2) for k in range(1, 11))


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "phase-transition"
    n: int = 256
    m_over_n: tuple = DEFAULT_M_OVER_N
    s_over_m: tuple = DEFAULT_S_OVER_M
    reps: int = 50
    snr_db: float | None = 30.0
    frame: str = "synthetic"
    kappa: float = 2.0
    density: str = "uniform"
    dictionary: str = "identity"
    algorithms: tuple = ALGORITHMS
    variants: str = "both"
    seed: int = 0
    output: str | None = None
    max_iter: int | None = None
    trend_m: tuple = (16, 32, 64)
    trend_n: int = 64
    trend_s: int = 2
    trend_reps: int = 20

    def __post_init__(self):
        if not self.m_over_n or not self.s_over_m:
            raise ConfigError("ratio grids must be nonempty")
        for r in tuple(self.m_over_n) + tuple(self.s_over_m):
            if not 0.0 < r <= 1.0:
                raise ConfigError(f"grid ratio {r} outside (0, 1]")
        if self.reps < 1:
            raise ConfigError("repetitions must be >= 1")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {a!r}")
        if self.variants not in ("conventional", "oblique", "both"):
            raise ConfigError(f"unknown variants selector {self.variants!r}")


# ---------------------------------------------------------------------------
# config file parsing (flat key=value)
# ---------------------------------------------------------------------------

_LIST_KEYS = {"m_over_n", "s_over_m", "algorithms", "trend_m"}
_INT_KEYS = {"n", "reps", "seed", "max_iter", "trend_n", "trend_s", "trend_reps"}
_FLOAT_KEYS = {"kappa"}


def _parse_value(key: str, raw: str, lineno: int):
    raw = raw.strip()
    try:
        if key in _LIST_KEYS:
            items = [tok.strip() for tok in raw.split(",") if tok.strip()]
            if key == "algorithms":
                return tuple(items)
            if key == "trend_m":
                return tuple(int(t) for t in items)
            return tuple(float(t) for t in items)
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "snr_db":
            return None if raw.lower() in ("none", "noiseless") else float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad value {raw!r} for key {key!r}") from exc


def parse_config_text(text: str, overrides: dict | None = None) -> ExperimentConfig:
    """Parse the flat key=value experiment format; CLI overrides win."""
    values: dict = {}
    valid = set(ExperimentConfig.__dataclass_fields__)
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in valid:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw, lineno)
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), overrides)


# ---------------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------------

def _parse_dictionary_spec(spec: str, n: int, seed: int):
    if spec == "identity":
        return None
    if spec == "orthonormal":
        return make_dictionary("orthonormal", n, n, seed=seed)
    if spec.startswith("invertible:"):
        return make_dictionary("invertible", n, n, kappa=float(spec.split(":")[1]), seed=seed)
    if spec.startswith("block:"):
        _, b, k = spec.split(":")
        return make_dictionary("block-diagonal", n, n, kappa=float(k),
                               block_size=int(b), seed=seed)
    raise ConfigError(f"unknown dictionary spec {spec!r}")


def _parse_density_spec(spec: str, size: int):
    if spec == "uniform":
        return build_density("uniform", size)
    if spec.startswith("power:"):
        return build_density("variable-power", size, alpha=float(spec.split(":")[1]))
    if spec.startswith("custom:"):
        weights = [float(t) for t in spec.split(":")[1].split(";")]
        return build_density("custom", size, weights=weights)
    raise ConfigError(f"unknown density spec {spec!r}")


@dataclass
class TrialInstance:
    psi: np.ndarray
    psi_tilde: np.ndarray
    y: np.ndarray
    x_true: np.ndarray
    support: set
    digest: str


def _conditioned_row_pair(n: int, kappa: float, rng) -> tuple[np.ndarray, np.ndarray]:
    theta = (kappa - 1.0) / (kappa + 1.0)
    sv = np.linspace(np.sqrt(1.0 - theta), np.sqrt(1.0 + theta), n)
    U, r1 = np.linalg.qr(rng.standard_normal((n, n)))
    U *= np.sign(np.diagonal(r1))
    V, r2 = np.linalg.qr(rng.standard_normal((n, n)))
    V *= np.sign(np.diagonal(r2))
    return (U * sv) @ V.T, (U / sv) @ V.T


def draw_trial_instance(config: ExperimentConfig, m: int, s: int, rng) -> TrialInstance:
    n = config.n
    if config.frame == "synthetic":
        rows, dual_rows = _conditioned_row_pair(n, config.kappa, rng)
        idx = rng.permutation(n)[:m]
        A = rows[idx] * np.sqrt(n / m)
        At = dual_rows[idx] * np.sqrt(n / m)
    else:
        if config.frame == "partial-dft":
            fam = partial_dft_frame(n)
        elif config.frame == "masked-fourier":
            mask_rng = stream(config.seed, 0xA5)
            fam = masked_fourier_frame(n, 1.0 + 0.5 * mask_rng.random(n), grid_size=2 * n)
        else:
            raise ConfigError(f"unknown frame {config.frame!r}")
        density = _parse_density_spec(config.density, fam.grid_size)
        pair = sample_sensing_pair(fam, density, m, seed=int(rng.integers(0, 2**31)))
        A, At = pair.A, pair.A_tilde
    dic = _parse_dictionary_spec(config.dictionary, n, config.seed)
    if dic is None:
        psi, psit = A, At
    else:
        psi, psit = A @ dic.D, At @ dic.D_tilde
    J = np.sort(rng.choice(n, size=s, replace=False))
    x = np.zeros(n, dtype=np.complex128)
    x[J] = rng.choice([-1.0, 1.0], size=s)
    y0 = psi @ x
    if config.snr_db is None:
        y = y0
    else:
        if np.abs(psi.imag).max() > 0:
            z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        else:
            z = rng.standard_normal(m).astype(np.complex128)
        z *= np.linalg.norm(y0) / np.linalg.norm(z) * 10.0 ** (-config.snr_db / 20.0)
        y = y0 + z
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    psit = np.ascontiguousarray(psit, dtype=np.complex128)
    h = hashlib.blake2b(digest_size=12)
    for part in (psi, psit, x, y):
        h.update(np.ascontiguousarray(part).tobytes())
    return TrialInstance(psi=psi, psi_tilde=psit, y=y, x_true=x,
                         support=set(J.tolist()), digest=h.hexdigest())


# ---------------------------------------------------------------------------
# grid runner
# ---------------------------------------------------------------------------

@dataclass
class CellResult:
    m_over_n: float
    s_over_m: float
    m: int
    s: int
    alg: str
    oblique: bool
    successes: int = 0
    trials: int = 0
    iters_sum: int = 0
    runtime_sum_s: float = 0.0
    rel_err_sum: float = 0.0

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def row(self, timing: bool) -> dict:
        mean_rt = 1000.0 * self.runtime_sum_s / self.trials if (timing and self.trials) else 0.0
        return {
            "m_over_n": self.m_over_n, "s_over_m": self.s_over_m,
            "alg": self.alg, "oblique": self.oblique,
            "successes": self.successes, "trials": self.trials,
            "mean_iters": self.iters_sum / self.trials if self.trials else 0.0,
            "mean_runtime_ms": mean_rt,
            "mean_rel_error": self.rel_err_sum / self.trials if self.trials else 0.0,
        }


@dataclass
class ExperimentGrid:
    config: ExperimentConfig
    cells: dict = field(default_factory=dict)       # (mn, sm, alg, oblique) -> CellResult
    skipped: list = field(default_factory=list)
    digest: str = ""

    def cell(self, m_over_n, s_over_m, alg, oblique) -> CellResult:
        return self.cells[(m_over_n, s_over_m, alg, bool(oblique))]

    def success_area(self, alg, oblique, threshold: float = 0.5) -> int:
        return sum(1 for c in self.cells.values()
                   if c.alg == alg and c.oblique == bool(oblique)
                   and c.trials > 0 and c.success_rate >= threshold)

    def rows(self, timing: bool = False) -> list:
        out = [self.cells[k].row(timing) for k in sorted(self.cells)]
        return out


def _variant_flags(variants: str) -> tuple:
    return {"conventional": (False,), "oblique": (True,), "both": (False, True)}[variants]


def run_grid(config: ExperimentConfig) -> ExperimentGrid:
    """Run the configured algorithms over the (m/n, s/m) grid.

    All algorithm variants of a trial share one drawn instance.
    """
    grid = ExperimentGrid(config=config)
    flags = _variant_flags(config.variants)
    n = config.n
    running = hashlib.blake2b(digest_size=12)
    for ci, mn in enumerate(config.m_over_n):
        m = int(round(mn * n))
        for cj, sm in enumerate(config.s_over_m):
            s = int(round(sm * m))
            cell_id = ci * len(config.s_over_m) + cj
            if not (1 <= s <= m <= n):
                grid.skipped.append({"m_over_n": mn, "s_over_m": sm,
                                     "reason": f"infeasible cell (m={m}, s={s}, n={n})"})
                continue
            for alg in config.algorithms:
                for ob in flags:
                    grid.cells[(mn, sm, alg, ob)] = CellResult(mn, sm, m, s, alg, ob)
            for t in range(config.reps):
                rng = stream(config.seed, cell_id, t)
                inst = draw_trial_instance(config, m, s, rng)
                running.update(inst.digest.encode())
                for alg in config.algorithms:
                    if alg == "mp" and s > m:
                        continue
                    for ob in flags:
                        cfg = PursuitConfig(sparsity=s, algorithm=alg, oblique=ob,
                                            max_iter=config.max_iter)
                        t0 = time.perf_counter()
                        with warnings.catch_warnings():
                            # the grid deliberately scans past the 3s/4s <= m
                            # recommendations; per-cell warnings are noise here
                            warnings.simplefilter("ignore", RuntimeWarning)
                            res = run_pursuit(inst.psi, inst.y, cfg,
                                              psi_tilde=inst.psi_tilde)
                        dt = time.perf_counter() - t0
                        cell = grid.cells[(mn, sm, alg, ob)]
                        cell.trials += 1
                        cell.iters_sum += res.iterations
                        cell.runtime_sum_s += dt
                        ok = set(res.support.tolist()) == inst.support
                        cell.successes += int(ok)
                        err = np.linalg.norm(res.estimate.to_dense() - inst.x_true)
                        xn = np.linalg.norm(inst.x_true)
                        if np.isfinite(err):
                            cell.rel_err_sum += float(err / xn)
                        else:
                            cell.rel_err_sum += float("inf")
    grid.digest = running.hexdigest()
    return grid


def phase_transition(config: ExperimentConfig) -> ExperimentGrid:
    """Support-recovery phase transition over the configured grid."""
    return run_grid(config)


def ab_comparison(config: ExperimentConfig) -> dict:
    """Paired conventional-vs-oblique comparison on identical instances.

    Returns per-cell rows (with relative errors), per-algorithm aggregate
    success rates, and the paired-design instance digest.
    """
    cfg = replace(config, variants="both")
    grid = run_grid(cfg)
    aggregate: dict = {}
    for cell in grid.cells.values():
        key = (cell.alg, cell.oblique)
        agg = aggregate.setdefault(key, {"successes": 0, "trials": 0, "rel_err_sum": 0.0})
        agg["successes"] += cell.successes
        agg["trials"] += cell.trials
        agg["rel_err_sum"] += cell.rel_err_sum
    agg_rows = [
        {"alg": alg, "oblique": ob,
         "success_rate": v["successes"] / v["trials"] if v["trials"] else 0.0,
         "mean_rel_error": v["rel_err_sum"] / v["trials"] if v["trials"] else 0.0,
         "successes": v["successes"], "trials": v["trials"]}
        for (alg, ob), v in sorted(aggregate.items())
    ]
    return {"grid": grid, "aggregate": agg_rows, "paired": True,
            "instance_digest": grid.digest}


def rbop_trend(config: ExperimentConfig) -> dict:
    """Medians of enumerated constants versus m, plus the exact one-draw
    isotropy contrast computed by summing over the whole grid."""
    fam = synthetic_biorthogonal_frame(config.trend_n, kappa=config.kappa, seed=config.seed)
    density = _parse_density_spec(config.density, fam.grid_size)
    d = config.trend_n
    eye = np.eye(d)
    exact = {
        "plain_isotropy_gap": spectral_norm(expected_plain_gram(fam, density) - eye),
        "dual_isotropy_gap": spectral_norm(expected_dual_gram(fam, density) - eye),
        "nu_min": density.nu_min,
        "nu_max": density.nu_max,
    }
    rows = []
    for mi, m in enumerate(config.trend_m):
        thetas, deltas = [], []
        for t in range(config.trend_reps):
            rng = stream(config.seed, 7000 + mi, t)
            trial_fam = synthetic_biorthogonal_frame(d, kappa=config.kappa,
                                                     seed=int(rng.integers(0, 2**31)))
            pair = sample_sensing_pair(trial_fam, density, m,
                                       seed=int(rng.integers(0, 2**31)))
            thetas.append(restricted_biorthogonality_constant(
                pair.A, pair.A_tilde, config.trend_s).value)
            deltas.append(restricted_isometry_constant(pair.A, config.trend_s).value)
        rows.append({"m": int(m), "median_theta": float(np.median(thetas)),
                     "median_delta": float(np.median(deltas)),
                     "reps": config.trend_reps, "s": config.trend_s})
    return {"exact": exact, "medians": rows, "n": d, "schema_version": SCHEMA_VERSION}


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_grid_csv(grid: ExperimentGrid, path: str, timing: bool = False,
                   with_rel_error: bool = False) -> None:
    """Write the fixed-schema CSV.  Timing is off by default so reruns with
    the same seed are byte identical; pass timing=True to fill the runtime
    column with measured wall clock."""
    cols = AB_COLUMNS if with_rel_error else GRID_COLUMNS
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in grid.rows(timing=timing):
            fh.write(",".join(_format_cell(row[c]) for c in cols) + "\n")


def write_grid_json(grid: ExperimentGrid, path: str, timing: bool = False) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": grid.config.kind,
        "n": grid.config.n,
        "seed": grid.config.seed,
        "snr_db": grid.config.snr_db,
        "kappa": grid.config.kappa,
        "reps": grid.config.reps,
        "instance_digest": grid.digest,
        "skipped": grid.skipped,
        "cells": grid.rows(timing=timing),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_plot_data(grid: ExperimentGrid, basepath: str) -> None:
    """Per-algorithm success-rate matrices (rows: s/m, cols: m/n) for
    external heatmap plotting, plus an axes sidecar."""
    mns = sorted({k[0] for k in grid.cells})
    sms = sorted({k[1] for k in grid.cells})
    algs = sorted({(k[2], k[3]) for k in grid.cells})
    for alg, ob in algs:
        mat = np.full((len(sms), len(mns)), np.nan)
        for (mn, sm, a, o), cell in grid.cells.items():
            if a == alg and o == ob and cell.trials:
                mat[sms.index(sm), mns.index(mn)] = cell.success_rate
        tag = ("ob" if ob else "") + alg
        matio.save_matrix(f"{basepath}_{tag}.csv", np.nan_to_num(mat, nan=-1.0))
    with open(f"{basepath}_axes.json", "w") as fh:
        json.dump({"m_over_n": list(mns), "s_over_m": list(sms),
                   "missing_value": -1.0}, fh, indent=2)
        fh.write("\n")
