"""Dense field-generic linear algebra shared by all pursuits.

Scalars are complex128 throughout; real inputs are embedded with a zero
imaginary part.  Linear solves go through a pivoted LU factorization with
an explicit reciprocal-condition floor: singular systems raise
:class:`~obpursuit.errors.RankDeficiencyError` instead of being silently
regularized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import InvalidSparsityError, RankDeficiencyError

DEFAULT_SING_FLOOR = 1e-12


def as_matrix(a) -> np.ndarray:
    """View `a` as a 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return m


def as_vector(a) -> np.ndarray:
    """View `a` as a 1-d complex128 array."""
    v = np.asarray(a, dtype=np.complex128)
    if v.ndim == 2 and 1 in v.shape:
        v = v.ravel()
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got ndim={v.ndim}")
    return v


def normalize_support(indices, n: int) -> np.ndarray:
    """Sorted, duplicate-free int array of column indices, all in [0, n)."""
    J = np.unique(np.asarray(indices, dtype=np.intp).ravel())
    if J.size and (J[0] < 0 or J[-1] >= n):
        raise IndexError(f"support index out of range for dimension {n}")
    return J


def spectral_norm(a) -> float:
    """Largest singular value, by dense SVD."""
    m = np.atleast_2d(np.asarray(a))
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


@dataclass(frozen=True)
class SparseSignal:
    """An exactly sparse coefficient vector with explicit support."""

    n: int
    support: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.support, dtype=np.intp)
        v = np.asarray(self.values, dtype=np.complex128)
        if J.ndim != 1 or v.ndim != 1 or J.size != v.size:
            raise ValueError("support and values must be 1-d and of equal length")
        if J.size and (np.any(np.diff(J) <= 0) or J[0] < 0 or J[-1] >= self.n):
            raise ValueError("support must be strictly increasing and within range")
        object.__setattr__(self, "support", J)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_dense(cls, x) -> "SparseSignal":
        x = as_vector(x)
        J = np.flatnonzero(x)
        return cls(x.size, J, x[J])

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.n, dtype=np.complex128)
        x[self.support] = self.values
        return x

    @property
    def nnz(self) -> int:
        return int(self.support.size)


def hard_threshold(x, s: int) -> SparseSignal:
    """Best s-sparse approximation: keep the s largest-magnitude entries.

    Ties in magnitude are broken toward the lowest index, so the result is
    deterministic.
    """
    x = as_vector(x)
    n = x.size
    if not 1 <= s <= n:
        raise InvalidSparsityError(f"sparsity {s} not in [1, {n}]")
    order = np.argsort(-np.abs(x), kind="stable")[:s]
    J = np.sort(order)
    vals = x[J]
    keep = vals != 0
    return SparseSignal(n, J[keep], vals[keep])


def top_support(x, s: int) -> np.ndarray:
    """Indices of the s largest-magnitude entries (lowest-index tie-break)."""
    x = np.asarray(x)
    if not 1 <= s <= x.size:
        raise InvalidSparsityError(f"sparsity {s} not in [1, {x.size}]")
    return np.sort(np.argsort(-np.abs(x), kind="stable")[:s])


def coordinate_project(x, J) -> np.ndarray:
    """Zero out every entry of `x` outside the index set `J`."""
    x = as_vector(x)
    J = normalize_support(J, x.size)
    out = np.zeros_like(x)
    out[J] = x[J]
    return out


def _solve_gram(G: np.ndarray, b: np.ndarray, sing_floor: float) -> np.ndarray:
    """Solve G x = b by pivoted LU, raising on near-singularity.

    `sing_floor` is relative: the system is rejected when the estimated
    reciprocal condition number falls below it.
    """
    k = G.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.complex128)
    anorm = float(np.abs(G).sum(axis=0).max())
    if anorm == 0.0 or not np.isfinite(anorm):
        raise RankDeficiencyError("gram matrix is zero or non-finite", rcond=0.0)
    lu, piv, info = lapack.zgetrf(G)
    if info > 0:
        raise RankDeficiencyError("gram matrix is exactly singular", rcond=0.0)
    rcond, _ = lapack.zgecon(lu, anorm, norm="1")
    if not np.isfinite(rcond) or rcond < sing_floor:
        raise RankDeficiencyError(
            f"gram matrix nearly singular (rcond={rcond:.3e} < floor={sing_floor:.3e})",
            rcond=float(rcond),
        )
    x, info = lapack.zgetrs(lu, piv, b.reshape(k, -1))
    return x.ravel()


def weighted_ls_solve(psi, psi_tilde, y, J, sing_floor: float = DEFAULT_SING_FLOOR) -> SparseSignal:
    """Solve the weighted least-squares problem on support `J`.

    Returns the x supported on J with psi_tilde_J^* (y - psi x) = 0, i.e.
    x_J = (psi_tilde_J^* psi_J)^{-1} psi_tilde_J^* y.  With psi_tilde equal
    to psi this is the ordinary least-squares solution restricted to J.
    """
    psi = as_matrix(psi)
    psi_tilde = as_matrix(psi_tilde)
    y = as_vector(y)
    J = normalize_support(J, psi.shape[1])
    G = psi_tilde[:, J].conj().T @ psi[:, J]
    b = psi_tilde[:, J].conj().T @ y
    vals = _solve_gram(G, b, sing_floor)
    keep = vals != 0
    return SparseSignal(psi.shape[1], J[keep], vals[keep])


@dataclass(frozen=True)
class ObliqueProjector:
    """Oblique projector pair built from columns psi_J and duals psi_tilde_J.

    `apply` is E = I - psi_J (psi_tilde_J^* psi_J)^{-1} psi_tilde_J^*, the
    projector onto range(psi_tilde_J)^perp along range(psi_J);
    `apply_complement` is I - E.  `rcond` reports the conditioning of the
    cached psi_tilde_J^* psi_J factorization.
    """

    basis: np.ndarray
    dual: np.ndarray
    rcond: float
    _lu: np.ndarray
    _piv: np.ndarray

    def apply(self, v) -> np.ndarray:
        v = as_vector(v)
        coef, _ = lapack.zgetrs(self._lu, self._piv, (self.dual.conj().T @ v).reshape(-1, 1))
        return v - self.basis @ coef.ravel()

    def apply_complement(self, v) -> np.ndarray:
        v = as_vector(v)
        return v - self.apply(v)

    def matrix(self) -> np.ndarray:
        m = self.basis.shape[0]
        return np.eye(m, dtype=np.complex128) - self.complement_matrix()

    def complement_matrix(self) -> np.ndarray:
        coef, _ = lapack.zgetrs(self._lu, self._piv, self.dual.conj().T)
        return self.basis @ coef


def build_oblique_projector(psi, psi_tilde, J, sing_floor: float = DEFAULT_SING_FLOOR) -> ObliqueProjector:
    """Construct the oblique projector associated with support `J`."""
    psi = as_matrix(psi)
    psi_tilde = as_matrix(psi_tilde)
    J = normalize_support(J, psi.shape[1])
    B = psi[:, J]
    D = psi_tilde[:, J]
    G = D.conj().T @ B
    k = G.shape[0]
    if k == 0:
        raise ValueError("projector needs a nonempty support")
    anorm = float(np.abs(G).sum(axis=0).max())
    if anorm == 0.0:
        raise RankDeficiencyError("psi_tilde_J^* psi_J is zero", rcond=0.0)
    lu, piv, info = lapack.zgetrf(G)
    if info > 0:
        raise RankDeficiencyError("psi_tilde_J^* psi_J is singular", rcond=0.0)
    rcond, _ = lapack.zgecon(lu, anorm, norm="1")
    if not np.isfinite(rcond) or rcond < sing_floor:
        raise RankDeficiencyError(
            f"psi_tilde_J^* psi_J nearly singular (rcond={rcond:.3e})", rcond=float(rcond)
        )
    return ObliqueProjector(basis=B, dual=D, rcond=float(rcond), _lu=lu, _piv=piv)


def lstsq_dense(A, b) -> np.ndarray:
    """Plain SVD least squares, kept separate from the Gram-based path."""
    return np.linalg.lstsq(as_matrix(A), as_vector(b), rcond=None)[0]
