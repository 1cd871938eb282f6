"""Restricted constants, coherence functionals, and guarantee checkers.

Exact restricted constants are computed by enumerating all s-subsets
(vectorized in chunks); beyond the combination budget a Monte-Carlo subset
sampler returns a clearly labeled lower bound.  The spectral-norm-of-
submatrix formulation is used throughout; the bilinear definition is kept
as a test oracle only.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DegenerateFrameError, EnumerationBudgetError
from .linalg import (as_matrix, as_vector, build_oblique_projector,
                     normalize_support, spectral_norm, SparseSignal)
from .seeding import stream

DEFAULT_BUDGET = 1_000_000
_CHUNK = 32768

# algorithm -> (sparsity-order multiplier k, linear-convergence threshold on theta_{ks})
TABLE_THRESHOLDS = {
    "cosamp": (4, 0.384),
    "sp": (3, 0.325),
    "iht": (3, 0.5),
    "htp": (3, 0.577),
}


# ---------------------------------------------------------------------------
# subset enumeration
# ---------------------------------------------------------------------------

def _subset_chunks(n: int, s: int, chunk: int = _CHUNK):
    it = itertools.combinations(range(n), s)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.intp)


def _sampled_subsets(n: int, s: int, samples: int, seed: int, chunk: int = _CHUNK):
    rng = stream(seed, 0xCE)
    remaining = samples
    while remaining > 0:
        k = min(chunk, remaining)
        block = np.empty((k, s), dtype=np.intp)
        for i in range(k):
            block[i] = np.sort(rng.choice(n, size=s, replace=False))
        remaining -= k
        yield block


@dataclass(frozen=True)
class ConstantEstimate:
    """A restricted constant with the subset attaining it."""

    value: float
    subset: np.ndarray
    exact: bool
    enumerated: int


def _max_over_subsets(values: np.ndarray, subsets: np.ndarray, best):
    i = int(np.argmax(values))
    if values[i] > best[0]:
        return (float(values[i]), subsets[i].copy())
    return best


def _check_budget(n, s, budget, samples):
    count = comb(n, s)
    if count > budget and samples is None:
        raise EnumerationBudgetError(
            f"C({n},{s}) = {count} exceeds the enumeration budget {budget}; "
            "pass samples=... for a Monte-Carlo lower bound",
            count=count, budget=budget)
    return count


def restricted_isometry_constant(psi, s: int, budget: int = DEFAULT_BUDGET,
                                 samples: int | None = None, seed: int = 0) -> ConstantEstimate:
    """delta_s: worst eigenvalue deviation of s-column Grams from identity.

    Exact when C(n, s) fits the budget; with `samples` set, a sampled
    lower bound is returned instead (exact=False).
    """
    psi = as_matrix(psi)
    n = psi.shape[1]
    if not 1 <= s <= n:
        raise ValueError(f"s={s} out of range for n={n}")
    count = _check_budget(n, s, budget, samples)
    G = psi.conj().T @ psi
    exact = samples is None
    chunks = _subset_chunks(n, s) if exact else _sampled_subsets(n, s, samples, seed)
    best = (-np.inf, None)
    seen = 0
    for Js in chunks:
        sub = G[Js[:, :, None], Js[:, None, :]]
        ev = np.linalg.eigvalsh(sub)
        dev = np.maximum(ev[:, -1].real - 1.0, 1.0 - ev[:, 0].real)
        best = _max_over_subsets(dev, Js, best)
        seen += Js.shape[0]
    return ConstantEstimate(best[0], best[1], exact, seen if exact else seen)


def theta_of_gram(M, s: int, budget: int = DEFAULT_BUDGET,
                  samples: int | None = None, seed: int = 0) -> ConstantEstimate:
    """theta_s of a square matrix: max spectral norm of M_JJ - I over s-subsets."""
    M = as_matrix(M)
    n = M.shape[0]
    if M.shape[1] != n:
        raise ValueError("theta_s needs a square matrix")
    if not 1 <= s <= n:
        raise ValueError(f"s={s} out of range for n={n}")
    _check_budget(n, s, budget, samples)
    eye = np.eye(s)
    exact = samples is None
    chunks = _subset_chunks(n, s) if exact else _sampled_subsets(n, s, samples, seed)
    best = (-np.inf, None)
    seen = 0
    for Js in chunks:
        B = M[Js[:, :, None], Js[:, None, :]] - eye
        BtB = np.einsum("cij,cik->cjk", B.conj(), B)
        sig = np.sqrt(np.maximum(np.linalg.eigvalsh(BtB)[:, -1].real, 0.0))
        best = _max_over_subsets(sig, Js, best)
        seen += Js.shape[0]
    return ConstantEstimate(best[0], best[1], exact, seen)


def restricted_biorthogonality_constant(psi, psi_tilde, s: int,
                                        budget: int = DEFAULT_BUDGET,
                                        samples: int | None = None,
                                        seed: int = 0) -> ConstantEstimate:
    """theta_s of psi_tilde^* psi; equals delta_s(psi) when the pair coincides."""
    psi = as_matrix(psi)
    psi_tilde = as_matrix(psi_tilde)
    if psi.shape != psi_tilde.shape:
        raise ValueError("pair must share a shape")
    return theta_of_gram(psi_tilde.conj().T @ psi, s, budget=budget,
                         samples=samples, seed=seed)


@dataclass(frozen=True)
class ConstantsReport:
    """delta/theta constants of a sensing pair with attaining subsets."""

    s: int
    delta_psi: float
    delta_psi_subset: list
    delta_psi_tilde: float
    delta_psi_tilde_subset: list
    theta: float
    theta_subset: list
    exact: bool
    enumerated: int
    wall_clock_s: float

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "delta_psi": self.delta_psi,
            "delta_psi_subset": self.delta_psi_subset,
            "delta_psi_tilde": self.delta_psi_tilde,
            "delta_psi_tilde_subset": self.delta_psi_tilde_subset,
            "theta": self.theta,
            "theta_subset": self.theta_subset,
            "exact": self.exact,
            "enumerated": self.enumerated,
            "wall_clock_s": self.wall_clock_s,
        }


def constants_report(psi, psi_tilde, s: int, budget: int = DEFAULT_BUDGET,
                     samples: int | None = None, seed: int = 0) -> ConstantsReport:
    t0 = time.perf_counter()
    d1 = restricted_isometry_constant(psi, s, budget, samples, seed)
    d2 = restricted_isometry_constant(psi_tilde, s, budget, samples, seed)
    th = restricted_biorthogonality_constant(psi, psi_tilde, s, budget, samples, seed)
    return ConstantsReport(
        s=s,
        delta_psi=d1.value, delta_psi_subset=d1.subset.tolist(),
        delta_psi_tilde=d2.value, delta_psi_tilde_subset=d2.subset.tolist(),
        theta=th.value, theta_subset=th.subset.tolist(),
        exact=d1.exact and d2.exact and th.exact,
        enumerated=d1.enumerated + d2.enumerated + th.enumerated,
        wall_clock_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# coherence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossBabelReport:
    mu1: float
    min_diag: float
    ratio: float
    ratio_below_half: bool
    attaining_column: int


def cross_babel(psi, psi_tilde, s: int) -> CrossBabelReport:
    """Cumulative cross-coherence mu1_tilde(s) and its normalized ratio.

    mu1_tilde = max over columns k of the sum of the s largest
    |<psi_tilde_j, psi_k>| with j ranging over s-subsets excluding k.
    The ratio divides by min_j |<psi_tilde_j, psi_j>|; a ratio below 1/2
    is the classical sufficient condition for forward greedy selection.
    """
    psi = as_matrix(psi)
    psi_tilde = as_matrix(psi_tilde)
    n = psi.shape[1]
    if not 1 <= s < n:
        raise ValueError(f"s={s} must satisfy 1 <= s < n={n}")
    C = np.abs(psi_tilde.conj().T @ psi)
    diag = np.diagonal(C).copy()
    if np.any(diag == 0):
        raise DegenerateFrameError("zero diagonal inner product in the pair")
    off = C.copy()
    np.fill_diagonal(off, -np.inf)
    top = -np.sort(-off, axis=0)[:s, :]
    sums = top.sum(axis=0)
    k = int(np.argmax(sums))
    mu1 = float(sums[k])
    ratio = mu1 / float(diag.min())
    return CrossBabelReport(mu1=mu1, min_diag=float(diag.min()), ratio=ratio,
                            ratio_below_half=bool(ratio < 0.5), attaining_column=k)


# ---------------------------------------------------------------------------
# sufficient conditions
# ---------------------------------------------------------------------------

def dynamic_range_functional(values) -> float:
    """min over nonempty subsets J of ||x_J||_inf / ||x_J||_2.

    The minimizer always takes, for some magnitude level a, every entry
    with magnitude <= a; so only the sorted prefix sums need checking.
    """
    mag = np.sort(np.abs(as_vector(values)))
    if mag.size == 0 or mag[-1] == 0:
        raise ValueError("dynamic range needs a nonzero vector")
    csum = np.cumsum(mag ** 2)
    return float(np.min(mag / np.sqrt(csum)))


def check_sufficient_conditions(psi, psi_tilde, x_star, z_norm: float = 0.0,
                                budget: int = DEFAULT_BUDGET) -> dict:
    """Evaluate the exact-recovery conditions for the thresholding and
    forward-greedy pursuits, plus the linear-convergence thresholds for the
    iterative ones, on a concrete planted signal.

    Returns a nested dict with satisfied flags and slacks (positive slack
    means satisfied with margin).
    """
    psi = as_matrix(psi)
    psi_tilde = as_matrix(psi_tilde)
    if isinstance(x_star, SparseSignal):
        xs = x_star
    else:
        xs = SparseSignal.from_dense(x_star)
    s = xs.nnz
    if s == 0:
        raise ValueError("x_star must have at least one nonzero")
    n = psi.shape[1]
    Jstar = xs.support
    theta = theta_of_gram(psi_tilde.conj().T @ psi, min(s + 1, n), budget=budget).value
    max_dual = float(np.max(np.linalg.norm(psi_tilde, axis=0)))
    min_mag = float(np.min(np.abs(xs.values)))
    x_norm = float(np.linalg.norm(xs.values))
    dyn = dynamic_range_functional(xs.values)
    norm_psi_J = spectral_norm(psi[:, Jstar])
    norm_psit_J = spectral_norm(psi_tilde[:, Jstar])

    thres_rhs = 2.0 * theta * x_norm + 2.0 * max_dual * z_norm
    thres = {
        "lhs": min_mag, "rhs": thres_rhs,
        "satisfied": bool(min_mag > thres_rhs),
        "slack": min_mag - thres_rhs,
    }

    mp_lhs = min_mag * (dyn - 2.0 * theta)
    if theta < 1.0:
        mp_rhs = (norm_psi_J * norm_psit_J / (1.0 - theta)) * 2.0 * max_dual * z_norm
    else:
        mp_rhs = np.inf
    mp = {
        "lhs": mp_lhs, "rhs": mp_rhs,
        "satisfied": bool(mp_lhs > mp_rhs),
        "slack": mp_lhs - mp_rhs,
    }

    iterative = {}
    for alg, (k, thr) in TABLE_THRESHOLDS.items():
        order = min(k * s, n)
        th = theta_of_gram(psi_tilde.conj().T @ psi, order, budget=budget).value
        iterative[alg] = {
            "order": order, "theta": th, "threshold": thr,
            "satisfied": bool(th < thr), "slack": thr - th,
        }

    return {
        "s": s,
        "theta_s_plus_1": theta,
        "max_dual_column_norm": max_dual,
        "min_signal_magnitude": min_mag,
        "signal_norm": x_norm,
        "dynamic_range": dyn,
        "norm_psi_on_support": norm_psi_J,
        "norm_psi_tilde_on_support": norm_psit_J,
        "noise_norm": z_norm,
        "obthres": thres,
        "obmp": mp,
        "iterative": iterative,
    }


# ---------------------------------------------------------------------------
# convergence constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceConstants:
    algorithm: str
    theta: float
    rho: float
    tau: float
    rho_bar: float | None
    tau_bar: float | None
    threshold: float
    satisfied: bool


def convergence_constants(algorithm: str, theta: float, delta_psi: float = 0.0,
                          delta_psi_tilde: float = 0.0,
                          delta_psi_tilde_bar: float | None = None) -> ConvergenceConstants:
    """Closed-form per-iteration constants for the iterative pursuits.

    `theta` is theta_{ks} at the algorithm's order (4s for cosamp, 3s for
    sp/iht/htp).  `delta_psi` is delta_s(psi) (used by sp only);
    `delta_psi_tilde` is the restricted constant of psi_tilde at the order
    each tau formula calls for (4s for cosamp, 2s for sp/htp/iht);
    `delta_psi_tilde_bar` feeds the missed-energy constants (4s for
    sp/htp) and defaults to `delta_psi_tilde`.
    """
    alg = algorithm.lower().removeprefix("ob")
    if alg not in TABLE_THRESHOLDS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"convergence constants undefined for theta={theta} >= 1")
    t = float(theta)
    dp = float(delta_psi)
    dt = float(delta_psi_tilde)
    db = dt if delta_psi_tilde_bar is None else float(delta_psi_tilde_bar)
    _, threshold = TABLE_THRESHOLDS[alg]

    if alg == "cosamp":
        rho = np.sqrt(4 * t**2 * (1 + 3 * t**2) / (1 - t**2))
        tau = (np.sqrt(2 * (1 + 3 * t**2) / (1 - t**2))
               + np.sqrt(1 + 3 * t**2) / (1 - t) + np.sqrt(3.0)) * np.sqrt(1 + dt)
        rho_bar = np.sqrt((1 + 3 * t**2) / (1 - t**2))
        tau_bar = (np.sqrt(1 + 3 * t**2) / (1 - t) + np.sqrt(3.0)) * np.sqrt(1 + db)
    elif alg == "sp":
        big = max(1.0 / (1 - t)**2, 2.0 / (1 + 2 * t + 2 * t**2))
        rho = t * np.sqrt(1 + t) / np.sqrt(1 - t) * big
        tau = (np.sqrt(1 + dt) / (1 - t)
               + np.sqrt(1 + dt) / ((1 - t) * np.sqrt(1 - t**2))
               + (2 * np.sqrt(1 + dp) * (1 + dt) * np.sqrt(1 + t)
                  / (np.sqrt(1 - t) * (1 - t))) * big)
        rho_bar = 1.0 / np.sqrt(1 - t**2)
        tau_bar = np.sqrt(1 + db) / (1 - t)
    elif alg == "htp":
        rho = np.sqrt(2 * t**2 / (1 - t**2))
        tau = (np.sqrt(2 / (1 - t**2)) + 1.0 / (1 - t)) * np.sqrt(1 + dt)
        rho_bar = 1.0 / np.sqrt(1 - t**2)
        tau_bar = np.sqrt(1 + db) / (1 - t)
    else:  # iht: no least-squares step, no missed-energy constants
        rho = 2 * t
        tau = 2 * np.sqrt(1 + dt)
        rho_bar = None
        tau_bar = None

    return ConvergenceConstants(algorithm=alg, theta=t, rho=float(rho), tau=float(tau),
                                rho_bar=None if rho_bar is None else float(rho_bar),
                                tau_bar=None if tau_bar is None else float(tau_bar),
                                threshold=threshold, satisfied=bool(t < threshold))


# ---------------------------------------------------------------------------
# iteration bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IterationBound:
    profile: int
    bands: dict
    threshold: float
    extra_iterations: int


def component_bands(x_star) -> dict:
    """Dyadic magnitude bands: index i lands in band j when
    2^-(j+1) ||x||^2 < |x_i| <= 2^-j ||x||^2."""
    if isinstance(x_star, SparseSignal):
        vals = x_star.values
        idx = x_star.support
    else:
        x = as_vector(x_star)
        idx = np.flatnonzero(x)
        vals = x[idx]
    if idx.size == 0:
        raise ValueError("empty signal has no bands")
    e = float(np.sum(np.abs(vals) ** 2))
    bands: dict[int, list[int]] = {}
    for i, v in zip(idx, np.abs(vals)):
        j = int(np.floor(-np.log2(v / e)))
        if not (2.0 ** (-(j + 1)) * e < v <= 2.0 ** (-j) * e):  # float-edge fixup
            j += 1 if v <= 2.0 ** (-(j + 1)) * e else -1
        bands.setdefault(j, []).append(int(i))
    return bands


def iteration_bound(x_star, rho: float, tau: float, rho_bar: float, tau_bar: float,
                    eta: float, extra_iterations: int = 0) -> IterationBound:
    """Iteration-count threshold from the profile of the planted signal.

    Requires rho + eta < 1.  The threshold is
    L + p * ln(1 + 2 [rho_bar + (tau/tau_bar)(1 - rho - eta)] sqrt(s/p))
      / ln(1/(1 - eta))
    with p the number of nonempty bands and L = extra_iterations.
    """
    if rho + eta >= 1.0:
        raise ValueError(f"bound undefined: rho + eta = {rho + eta} >= 1")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    bands = component_bands(x_star)
    p = len(bands)
    s = sum(len(v) for v in bands.values())
    inner = 1.0 + 2.0 * (rho_bar + (tau / tau_bar) * (1.0 - rho - eta)) * np.sqrt(s / p)
    thr = extra_iterations + p * np.log(inner) / np.log(1.0 / (1.0 - eta))
    return IterationBound(profile=p, bands=bands, threshold=float(thr),
                          extra_iterations=extra_iterations)


# ---------------------------------------------------------------------------
# measurement-bound constants
# ---------------------------------------------------------------------------

def bound_constants_K(case: str, nu_min: float, nu_max: float, delta_d: float,
                      theta_d: float, K: float = 1.0, one_norm: float = 1.0,
                      sup_phi_norm: float = 0.0, max_atom_norm: float = 0.0) -> dict:
    """Closed-form constants entering the measurement bounds.

    case 'rip': K0 for the plain restricted-isometry bound of A D.
    case 'biortho': K1/K2 for the biorthogonal pair with a full-rank
        dictionary (delta_d is the full-order constant of D; one_norm is
        the induced-l1 norm of (D^*D)^{-1}).
    case 'overcomplete': K1/K2 when the dictionary itself satisfies a
        restricted isometry (delta_d at the working order) and is reused
        as its own dual.
    """
    if nu_min <= 0:
        raise ValueError("nu_min must be positive")
    if not (0.0 <= delta_d < 1.0 and 0.0 <= theta_d < 1.0):
        raise ValueError("delta_d and theta_d must lie in [0, 1)")
    if case == "rip":
        k0 = max(1.0 - nu_min, nu_max - 1.0) + nu_max * (delta_d + theta_d + delta_d * theta_d)
        return {"K0": float(k0)}
    base = max(1.0 - 1.0 / nu_max, 1.0 / nu_min - 1.0)
    amp = max(nu_max, 1.0 / nu_min)
    tfrac = theta_d / (1.0 - theta_d)
    if case == "biortho":
        dfrac = delta_d / (1.0 - delta_d)
        k1 = base + amp * (1.0 + dfrac + tfrac + dfrac * tfrac)
        k2 = one_norm / nu_min**2 * (K + sup_phi_norm * tfrac * max_atom_norm)
        return {"K1": float(k1), "K2": float(k2)}
    if case == "overcomplete":
        k1 = base + amp * (1.0 + delta_d + tfrac + delta_d * tfrac)
        k2 = (K + sup_phi_norm * tfrac * max_atom_norm) / nu_min
        return {"K1": float(k1), "K2": float(k2)}
    raise ValueError(f"unknown case {case!r}")


# ---------------------------------------------------------------------------
# projection preservation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PreservationReport:
    trials: int
    skipped: int
    violations: int
    worst_slack: float
    violations_bumped_order: int
    worst_slack_bumped_order: float


def verify_projection_preservation(psi, psi_tilde, s: int, trials: int = 100,
                                   seed: int = 0, budget: int = DEFAULT_BUDGET,
                                   tol: float = 1e-9) -> PreservationReport:
    """Check whether theta_s survives the oblique projection update.

    For random anchor sets Jhat with |Jhat| < s this compares
    theta_s(psi_tilde_rest^* E psi_rest) against (a) theta_s of the
    original pair, the same-order comparison, and (b) theta_{s+|Jhat|},
    the order-bumped comparison that accounts for the anchor set.  Both
    violation counts and worst slacks are reported; trials whose anchor
    Gram is rank deficient are recorded as skipped.
    """
    psi = as_matrix(psi)
    psi_tilde = as_matrix(psi_tilde)
    n = psi.shape[1]
    if s < 2:
        raise ValueError("need s >= 2 so that |Jhat| >= 1 is possible")
    rng = stream(seed, 0x9E)
    M = psi_tilde.conj().T @ psi
    th_same = theta_of_gram(M, s, budget=budget).value
    th_bumped_cache: dict[int, float] = {}
    skipped = viol = violb = 0
    worst = worstb = -np.inf
    done = 0
    while done < trials:
        k = int(rng.integers(1, s))
        Jh = np.sort(rng.choice(n, size=k, replace=False))
        rest = np.setdiff1d(np.arange(n), Jh)
        try:
            E = build_oblique_projector(psi, psi_tilde, Jh).matrix()
        except Exception:
            skipped += 1
            done += 1
            continue
        Mp = psi_tilde[:, rest].conj().T @ E @ psi[:, rest]
        th_p = theta_of_gram(Mp, s, budget=budget).value
        if k not in th_bumped_cache:
            th_bumped_cache[k] = theta_of_gram(M, min(s + k, n), budget=budget).value
        gap = th_p - th_same
        gapb = th_p - th_bumped_cache[k]
        worst = max(worst, gap)
        worstb = max(worstb, gapb)
        viol += (gap > tol)
        violb += (gapb > tol)
        done += 1
    return PreservationReport(trials=trials, skipped=skipped, violations=viol,
                              worst_slack=float(worst),
                              violations_bumped_order=violb,
                              worst_slack_bumped_order=float(worstb))


# ---------------------------------------------------------------------------
# lemma suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaCheck:
    name: str
    trials: int
    violations: int
    worst_slack: float
    tolerance: float
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "violations", int(self.violations))
        object.__setattr__(self, "worst_slack", float(self.worst_slack))

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {"name": self.name, "trials": self.trials, "violations": self.violations,
                "worst_slack": self.worst_slack, "tolerance": self.tolerance,
                "passed": self.passed, "note": self.note}


def _random_projector_instance(rng):
    m = int(rng.integers(6, 14))
    n = int(rng.integers(3, m))
    k = int(rng.integers(1, min(n, m - 1) + 1))
    psi = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    psi_tilde = psi + 0.4 * (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)))
    J = np.sort(rng.choice(n, size=k, replace=False))
    return psi, psi_tilde, J


def check_idempotence(trials: int = 100, seed: int = 0, tol: float = 1e-10) -> LemmaCheck:
    rng = stream(seed, 1)
    viol = 0
    worst = -np.inf
    for _ in range(trials):
        psi, psit, J = _random_projector_instance(rng)
        try:
            E = build_oblique_projector(psi, psit, J).matrix()
        except Exception:
            continue
        slack = spectral_norm(E @ E - E) - tol * max(1.0, spectral_norm(E))
        worst = max(worst, slack)
        viol += (slack > 0)
    return LemmaCheck("idempotence", trials, viol, float(worst), tol)


def check_norm_identity(trials: int = 100, seed: int = 0, tol: float = 1e-8) -> LemmaCheck:
    rng = stream(seed, 2)
    viol = 0
    worst = -np.inf
    for _ in range(trials):
        psi, psit, J = _random_projector_instance(rng)
        try:
            proj = build_oblique_projector(psi, psit, J)
        except Exception:
            continue
        E = proj.matrix()
        nE = spectral_norm(E)
        if nE < 1e-12 or spectral_norm(E - np.eye(E.shape[0])) < 1e-12:
            continue
        slack = abs(nE - spectral_norm(np.eye(E.shape[0]) - E)) - tol * nE
        worst = max(worst, slack)
        viol += (slack > 0)
    return LemmaCheck("norm identity ||E|| = ||I-E||", trials, viol, float(worst), tol)


def shift_identity_gap(M) -> float:
    """|| M - I || minus max(1 - sigma_min(M), sigma_max(M) - 1)."""
    M = as_matrix(M)
    sv = np.linalg.svd(M, compute_uv=False)
    lhs = spectral_norm(M - np.eye(M.shape[0]))
    return float(lhs - max(1.0 - sv[-1], sv[0] - 1.0))


def check_shift_identity(trials: int = 100, seed: int = 0, tol: float = 1e-10,
                         matrix_class: str = "general") -> LemmaCheck:
    """Equality of ||M - I|| with the singular-value shift formula.

    matrix_class 'general' draws unstructured square Gaussians; 'hpsd'
    draws Hermitian positive semidefinite Grams, for which the formula is
    an identity.  (The shift formula is only a lower bound for general M;
    the general-class check measures how far equality fails.)
    """
    rng = stream(seed, 3)
    viol = 0
    worst = -np.inf
    for _ in range(trials):
        k = int(rng.integers(2, 9))
        G = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        if matrix_class == "hpsd":
            M = G @ G.conj().T / k
        else:
            M = G / np.sqrt(2 * k)
        slack = abs(shift_identity_gap(M)) - tol
        worst = max(worst, slack)
        viol += (slack > 0)
    return LemmaCheck(f"shift identity ({matrix_class} M)", trials, viol, float(worst), tol)


def check_schur_interlacing(trials: int = 100, seed: int = 0, tol: float = 1e-9,
                            claims: str = "full") -> LemmaCheck:
    """Singular values of a Schur complement against those of the matrix.

    claims 'full' checks both sigma_1(M) >= sigma_1(M/M22) and
    sigma_j(M/M22) >= sigma_{j+q}(M); claims 'lower' checks only the
    second family, which holds for every nonsingular M.  (The first can
    fail when M22 is nearly singular relative to the off-diagonal blocks.)
    """
    rng = stream(seed, 4)
    viol = 0
    worst = -np.inf
    for _ in range(trials):
        k = int(rng.integers(3, 10))
        q = int(rng.integers(1, k - 1))
        M = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        M22 = M[k - q:, k - q:]
        S = M[:k - q, :k - q] - M[:k - q, k - q:] @ np.linalg.solve(M22, M[k - q:, :k - q])
        sv_m = np.linalg.svd(M, compute_uv=False)
        sv_s = np.linalg.svd(S, compute_uv=False)
        slack = float(np.max(sv_m[q:] - sv_s))
        if claims == "full":
            slack = max(slack, sv_s[0] - sv_m[0])
        slack -= tol
        worst = max(worst, slack)
        viol += (slack > 0)
    return LemmaCheck(f"schur interlacing ({claims})", trials, viol, float(worst), tol)


def _preservation_pairs(count: int, seed: int, m: int = 10, n: int = 20, s: int = 3,
                        max_attempts: int = 20000):
    """Random (m x n) pairs with theta_s < 1, drawn by rejection from a
    conditioned biorthogonal frame construction."""
    from .frames import synthetic_biorthogonal_frame, dual_frame  # local import, no cycle

    rng = stream(seed, 5)
    found = 0
    attempts = 0
    while found < count and attempts < max_attempts:
        attempts += 1
        fam = synthetic_biorthogonal_frame(n, kappa=2.0, seed=int(rng.integers(0, 2**31)))
        phi, dualv = dual_frame(fam)
        idx = rng.integers(0, n, size=m)
        psi = phi[:, idx].conj().T / np.sqrt(m)
        psit = dualv[:, idx].conj().T / np.sqrt(m)
        if theta_of_gram(psit.conj().T @ psi, s).value < 1.0:
            found += 1
            yield psi, psit


def check_rbop_preservation(trials: int = 100, seed: int = 0, tol: float = 1e-9,
                            order: str = "same") -> LemmaCheck:
    """Preservation of theta_s under the oblique projection update.

    order 'same' compares against theta_s of the original pair (the
    same-order form, whose hypothesis is theta_s < 1); order 'bumped'
    compares against theta_{s+|Jhat|}, which accounts for the anchor set
    and accordingly requires theta_{s+|Jhat|} < 1 of its instances.
    """
    rng = stream(seed, 6)
    s = 3
    viol = 0
    worst = -np.inf
    done = 0
    for psi, psit in _preservation_pairs(trials, seed):
        n = psi.shape[1]
        M = psit.conj().T @ psi
        k = int(rng.integers(1, s))
        Jh = np.sort(rng.choice(n, size=k, replace=False))
        rest = np.setdiff1d(np.arange(n), Jh)
        try:
            E = build_oblique_projector(psi, psit, Jh).matrix()
        except Exception:
            continue
        ref = theta_of_gram(M, s if order == "same" else min(s + k, n)).value
        if order == "bumped" and ref >= 1.0:
            continue
        th_p = theta_of_gram(psit[:, rest].conj().T @ E @ psi[:, rest], s).value
        slack = th_p - ref - tol
        worst = max(worst, slack)
        viol += (slack > 0)
        done += 1
    return LemmaCheck(f"rbop preservation ({order} order)", done, viol, float(worst), tol)


def run_lemma_suite(trials: int = 100, seed: int = 0) -> list[LemmaCheck]:
    """All randomized lemma checks, including the corrected-form variants."""
    return [
        check_idempotence(trials, seed),
        check_norm_identity(trials, seed),
        check_shift_identity(trials, seed, matrix_class="general"),
        check_shift_identity(trials, seed, matrix_class="hpsd"),
        check_schur_interlacing(trials, seed, claims="full"),
        check_schur_interlacing(trials, seed, claims="lower"),
        check_rbop_preservation(trials, seed, order="same"),
        check_rbop_preservation(trials, seed, order="bumped"),
    ]
