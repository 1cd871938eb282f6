"""The greedy pursuit family, in oblique and conventional flavors.

Every algorithm is implemented once, in terms of a matrix pair
(psi, psi_tilde); the conventional variants are the psi_tilde = psi
specialization of the same code path (run_pursuit with oblique=False).

Stopping (iterative algorithms): exact fit (residual below
exact_fit_tol * ||y||), residual-change stall (change below tol * ||y||,
which also covers a revisited support state, since the trajectory of the
least-squares-driven algorithms is a deterministic function of the
support), divergence (residual beyond divergence_factor * ||y|| or
non-finite), or the iteration cap (default 3*(s+1)).  The least-squares-
driven algorithms report the smallest-residual iterate they visited as
the estimate; the fixed-step iteration reports its last iterate, so
divergence stays visible.  Setting both tolerances to zero disables every
early stop and pins estimate = last iterate, for iterate-by-iterate
comparisons.  The forward greedy pursuit runs exactly s selection steps
and never reselects an index.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidSparsityError, RankDeficiencyError
from .linalg import (SparseSignal, _solve_gram, as_matrix, as_vector,
                     top_support)

ALGORITHMS = ("thres", "mp", "cosamp", "sp", "iht", "htp")

TERMINATIONS = ("max-iter", "residual-stall", "exact-fit", "rank-failure", "diverged")

# Precompute the full cross Gram when the column count is at most this;
# iterative solves then reduce to indexing plus a small LU.
_GRAM_CACHE_LIMIT = 2048


@dataclass(frozen=True)
class PursuitConfig:
    sparsity: int
    algorithm: str = "sp"
    oblique: bool = True
    max_iter: int | None = None
    tol: float = 1e-8
    exact_fit_tol: float = 1e-12
    sing_floor: float = 1e-12
    divergence_factor: float = 1e9
    record_iterates: bool = False

    def __post_init__(self):
        if self.sparsity < 1:
            raise InvalidSparsityError(f"sparsity must be >= 1, got {self.sparsity}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm tag {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.max_iter is not None and self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if self.tol < 0 or self.exact_fit_tol < 0:
            raise ConfigError("tolerances must be >= 0")

    def resolved_max_iter(self) -> int:
        if self.max_iter is not None:
            return self.max_iter
        return 3 * (self.sparsity + 1)


@dataclass
class RecoveryResult:
    estimate: SparseSignal
    iterations: int
    residual_norms: list
    support_history: list
    termination: str
    rank_failure_rcond: float | None = None
    iterates: list = field(default_factory=list)

    @property
    def support(self) -> np.ndarray:
        return self.estimate.support

    def as_dict(self) -> dict:
        x = self.estimate.to_dense()
        return {
            "n": self.estimate.n,
            "estimate_real": x.real.tolist(),
            "estimate_imag": x.imag.tolist(),
            "support": self.estimate.support.tolist(),
            "iterations": self.iterations,
            "residual_norms": [float(r) for r in self.residual_norms],
            "support_history": [list(map(int, s)) for s in self.support_history],
            "termination": self.termination,
            "rank_failure_rcond": self.rank_failure_rcond,
        }


class _Engine:
    """Shared state for one pursuit run."""

    def __init__(self, psi, psi_tilde, y, config: PursuitConfig):
        self.psi = as_matrix(psi)
        self.psit = self.psi if psi_tilde is None else as_matrix(psi_tilde)
        if self.psit.shape != self.psi.shape:
            raise ValueError("psi and psi_tilde must share a shape")
        self.y = as_vector(y)
        if self.y.size != self.psi.shape[0]:
            raise ValueError("y length must match the row count")
        self.cfg = config
        self.m, self.n = self.psi.shape
        self.s = config.sparsity
        if self.s > self.n:
            raise InvalidSparsityError(f"sparsity {self.s} exceeds column count {self.n}")
        self.ynorm = float(np.linalg.norm(self.y))
        self._gram = None
        self._rhs = None
        if self.n <= _GRAM_CACHE_LIMIT and config.algorithm in ("mp", "cosamp", "sp", "htp"):
            self._gram = self.psit.conj().T @ self.psi
            self._rhs = self.psit.conj().T @ self.y

    def proxy(self, x_dense) -> np.ndarray:
        return self.psit.conj().T @ (self.y - self.psi @ x_dense)

    def wls_dense(self, J) -> np.ndarray:
        """Weighted LS on J, returned as a dense vector."""
        J = np.asarray(J, dtype=np.intp)
        if self._gram is not None:
            G = self._gram[np.ix_(J, J)]
            b = self._rhs[J]
        else:
            G = self.psit[:, J].conj().T @ self.psi[:, J]
            b = self.psit[:, J].conj().T @ self.y
        vals = _solve_gram(G, b, self.cfg.sing_floor)
        x = np.zeros(self.n, dtype=np.complex128)
        x[J] = vals
        return x

    def residual_norm(self, x_dense) -> float:
        return float(np.linalg.norm(self.y - self.psi @ x_dense))


def _finalize(eng: _Engine, x, iterations, residuals, supports, iterates, reason,
              rcond=None) -> RecoveryResult:
    est = SparseSignal.from_dense(x)
    return RecoveryResult(estimate=est, iterations=iterations,
                          residual_norms=residuals, support_history=supports,
                          termination=reason, rank_failure_rcond=rcond,
                          iterates=iterates)


def _iterate(eng: _Engine, step, stateful: bool) -> RecoveryResult:
    """Generic loop: `step(x) -> (x_next, state_key)`.

    `stateful` algorithms terminate when a support state repeats (their
    trajectory is a function of the state, so a revisit means a cycle) and
    return the smallest-residual iterate visited, so a run that cycles
    through the right support does not hand back an arbitrary cycle
    member.  Early stopping is disabled entirely when both tolerances are
    zero.
    """
    cfg = eng.cfg
    research_mode = cfg.tol == 0.0 and cfg.exact_fit_tol == 0.0
    x = np.zeros(eng.n, dtype=np.complex128)
    residuals = [eng.ynorm]
    supports = []
    iterates = []
    seen = set()
    reason = "max-iter"
    rcond = None
    best_rn = np.inf
    best_x = x
    t = 0
    for t in range(1, cfg.resolved_max_iter() + 1):
        try:
            x_next, key = step(x)
        except RankDeficiencyError as exc:
            reason = "rank-failure"
            rcond = exc.rcond
            t -= 1
            break
        rn = eng.residual_norm(x_next)
        residuals.append(rn)
        supports.append(np.flatnonzero(x_next))
        if cfg.record_iterates:
            iterates.append(x_next.copy())
        prev = residuals[-2]
        x = x_next
        if np.isfinite(rn) and rn < best_rn:
            best_rn = rn
            best_x = x_next
        if not np.isfinite(rn) or rn > cfg.divergence_factor * max(eng.ynorm, 1e-300):
            reason = "diverged"
            break
        if not research_mode:
            if rn <= cfg.exact_fit_tol * eng.ynorm:
                reason = "exact-fit"
                break
            if abs(prev - rn) < cfg.tol * eng.ynorm:
                reason = "residual-stall"
                break
            if stateful and key is not None:
                if key in seen:
                    reason = "residual-stall"
                    break
                seen.add(key)
    final = best_x if (stateful and not research_mode) else x
    return _finalize(eng, final, t, residuals, supports, iterates, reason, rcond)


# ---------------------------------------------------------------------------
# the six algorithms
# ---------------------------------------------------------------------------

def oblique_thresholding(psi, psi_tilde, y, config: PursuitConfig) -> RecoveryResult:
    """One-shot support estimate from the thresholded dual proxy, followed
    by a weighted least-squares debias on that support.

    Support-recovery metrics should use the returned support; the debias
    only makes the estimate comparable to the other algorithms'.
    """
    eng = _Engine(psi, psi_tilde, y, config)
    proxy = eng.psit.conj().T @ eng.y
    J = top_support(proxy, eng.s)
    try:
        x = eng.wls_dense(J)
        reason, rcond = "max-iter", None
    except RankDeficiencyError as exc:
        x = np.zeros(eng.n, dtype=np.complex128)
        x[J] = proxy[J]
        reason, rcond = "rank-failure", exc.rcond
    rn = eng.residual_norm(x)
    if reason == "max-iter" and rn <= config.exact_fit_tol * eng.ynorm:
        reason = "exact-fit"
    est = SparseSignal(eng.n, J, x[J])
    return RecoveryResult(estimate=est, iterations=1, residual_norms=[eng.ynorm, rn],
                          support_history=[J], termination=reason,
                          rank_failure_rcond=rcond,
                          iterates=[x.copy()] if config.record_iterates else [])


def oblique_mp(psi, psi_tilde, y, config: PursuitConfig) -> RecoveryResult:
    """Forward greedy pursuit: one new index per step, weighted LS refit.

    Runs exactly min(s, max_iter) steps with no early stopping and never
    reselects an index.
    """
    eng = _Engine(psi, psi_tilde, y, config)
    if eng.s > eng.m:
        raise InvalidSparsityError(f"forward pursuit needs s <= m (s={eng.s}, m={eng.m})")
    steps = min(eng.s, eng.cfg.resolved_max_iter())
    x = np.zeros(eng.n, dtype=np.complex128)
    residuals = [eng.ynorm]
    supports = []
    iterates = []
    selected: list[int] = []
    reason = "max-iter"
    rcond = None
    t = 0
    for t in range(1, steps + 1):
        proxy = eng.proxy(x)
        mags = np.abs(proxy)
        mags[selected] = -np.inf
        k_star = int(np.argmax(mags))
        selected.append(k_star)
        J = np.sort(np.asarray(selected, dtype=np.intp))
        try:
            x = eng.wls_dense(J)
        except RankDeficiencyError as exc:
            selected.pop()
            reason = "rank-failure"
            rcond = exc.rcond
            t -= 1
            break
        residuals.append(eng.residual_norm(x))
        supports.append(J)
        if config.record_iterates:
            iterates.append(x.copy())
    return _finalize(eng, x, t, residuals, supports, iterates, reason, rcond)


def oblique_cosamp(psi, psi_tilde, y, config: PursuitConfig) -> RecoveryResult:
    """Per iteration: augment the support with the 2s strongest proxy
    entries, weighted LS on the union, then prune back to s."""
    eng = _Engine(psi, psi_tilde, y, config)
    if 4 * eng.s > eng.m:
        warnings.warn(f"cosamp works best with 4s <= m (s={eng.s}, m={eng.m})",
                      RuntimeWarning, stacklevel=2)
    width = min(2 * eng.s, eng.n)

    def step(x):
        proxy = eng.proxy(x)
        J_aug = np.union1d(np.flatnonzero(x), top_support(proxy, width)).astype(np.intp)
        key = tuple(J_aug.tolist())
        x_tilde = eng.wls_dense(J_aug)
        J_new = top_support(x_tilde, eng.s)
        x_next = np.zeros(eng.n, dtype=np.complex128)
        x_next[J_new] = x_tilde[J_new]
        return x_next, key

    return _iterate(eng, step, stateful=True)


def oblique_sp(psi, psi_tilde, y, config: PursuitConfig) -> RecoveryResult:
    """Per iteration: augment by the s strongest proxy entries, weighted LS
    on the union, prune to s, and refit on the pruned support."""
    eng = _Engine(psi, psi_tilde, y, config)
    if 3 * eng.s > eng.m:
        warnings.warn(f"subspace pursuit works best with 3s <= m (s={eng.s}, m={eng.m})",
                      RuntimeWarning, stacklevel=2)

    def step(x):
        proxy = eng.proxy(x)
        J_aug = np.union1d(np.flatnonzero(x), top_support(proxy, eng.s)).astype(np.intp)
        x_tilde = eng.wls_dense(J_aug)
        J_new = top_support(x_tilde, eng.s)
        x_next = eng.wls_dense(J_new)
        return x_next, tuple(J_new.tolist())

    return _iterate(eng, step, stateful=True)


def oblique_iht(psi, psi_tilde, y, config: PursuitConfig) -> RecoveryResult:
    """Fixed unit-step gradient-style update followed by hard thresholding."""
    eng = _Engine(psi, psi_tilde, y, config)

    def step(x):
        v = x + eng.proxy(x)
        J = top_support(v, eng.s)
        x_next = np.zeros(eng.n, dtype=np.complex128)
        x_next[J] = v[J]
        return x_next, None

    return _iterate(eng, step, stateful=False)


def oblique_htp(psi, psi_tilde, y, config: PursuitConfig) -> RecoveryResult:
    """Support from the unit-step thresholded update, then a weighted LS
    refit on that support."""
    eng = _Engine(psi, psi_tilde, y, config)

    def step(x):
        v = x + eng.proxy(x)
        J = top_support(v, eng.s)
        x_next = eng.wls_dense(J)
        return x_next, tuple(J.tolist())

    return _iterate(eng, step, stateful=True)


_DISPATCH = {
    "thres": oblique_thresholding,
    "mp": oblique_mp,
    "cosamp": oblique_cosamp,
    "sp": oblique_sp,
    "iht": oblique_iht,
    "htp": oblique_htp,
}


def run_pursuit(psi, y, config: PursuitConfig, psi_tilde=None) -> RecoveryResult:
    """Dispatch on the configured algorithm tag.

    `psi` may be a SensingPair, in which case its two matrices are used;
    otherwise pass the pair explicitly.  With oblique=False the dual matrix
    is ignored and the conventional variant (psi_tilde := psi) runs.
    """
    if hasattr(psi, "A") and hasattr(psi, "A_tilde"):
        pair = psi
        psi = pair.A
        if psi_tilde is None:
            psi_tilde = pair.A_tilde
    if not config.oblique:
        psi_tilde = None
    return _DISPATCH[config.algorithm](psi, psi_tilde, y, config)
