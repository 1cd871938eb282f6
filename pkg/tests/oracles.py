"""Independent reference implementations used only as test oracles.

Nothing here imports the package's pursuit or certificate code paths: the
pursuits are rewritten against numpy's SVD least squares, the restricted
constants against power iteration and alternating bilinear ascent, and the
small functionals against brute-force subset enumeration.
"""

from itertools import combinations

import numpy as np


def top_s(v, s):
    return np.sort(np.argsort(-np.abs(v), kind="stable")[:s])


def ls_on(A, y, J):
    x = np.zeros(A.shape[1], dtype=np.complex128)
    if len(J):
        x[J] = np.linalg.lstsq(A[:, J], y, rcond=None)[0]
    return x


# ---------------------------------------------------------------------------
# conventional pursuits (psi only), fixed iteration count, recorded iterates
# ---------------------------------------------------------------------------

def thres_oracle(A, y, s):
    J = top_s(A.conj().T @ y, s)
    return [ls_on(A, y, J)]


def omp_oracle(A, y, s):
    iterates = []
    x = np.zeros(A.shape[1], dtype=np.complex128)
    chosen = []
    for _ in range(s):
        corr = np.abs(A.conj().T @ (y - A @ x))
        corr[chosen] = -np.inf
        chosen.append(int(np.argmax(corr)))
        x = ls_on(A, y, sorted(chosen))
        iterates.append(x.copy())
    return iterates


def cosamp_oracle(A, y, s, iters):
    n = A.shape[1]
    iterates = []
    x = np.zeros(n, dtype=np.complex128)
    for _ in range(iters):
        proxy = A.conj().T @ (y - A @ x)
        J = np.union1d(np.flatnonzero(x), top_s(proxy, min(2 * s, n)))
        w = ls_on(A, y, J.astype(int))
        keep = top_s(w, s)
        x = np.zeros(n, dtype=np.complex128)
        x[keep] = w[keep]
        iterates.append(x.copy())
    return iterates


def sp_oracle(A, y, s, iters):
    n = A.shape[1]
    iterates = []
    x = np.zeros(n, dtype=np.complex128)
    for _ in range(iters):
        proxy = A.conj().T @ (y - A @ x)
        J = np.union1d(np.flatnonzero(x), top_s(proxy, s)).astype(int)
        w = ls_on(A, y, J)
        J2 = top_s(w, s)
        x = ls_on(A, y, J2)
        iterates.append(x.copy())
    return iterates


def iht_oracle(A, y, s, iters):
    n = A.shape[1]
    iterates = []
    x = np.zeros(n, dtype=np.complex128)
    for _ in range(iters):
        v = x + A.conj().T @ (y - A @ x)
        J = top_s(v, s)
        x = np.zeros(n, dtype=np.complex128)
        x[J] = v[J]
        iterates.append(x.copy())
    return iterates


def htp_oracle(A, y, s, iters):
    iterates = []
    x = np.zeros(A.shape[1], dtype=np.complex128)
    for _ in range(iters):
        v = x + A.conj().T @ (y - A @ x)
        x = ls_on(A, y, top_s(v, s))
        iterates.append(x.copy())
    return iterates


# ---------------------------------------------------------------------------
# restricted-constant oracles
# ---------------------------------------------------------------------------
# Both oracles use iterated matrix-vector products (power iteration and
# alternating bilinear ascent), batched across all subsets; no eigensolver
# or SVD is invoked, keeping them independent of the enumeration path they
# check.

def _all_sub_blocks(M, s):
    n = M.shape[0]
    Js = np.asarray(list(combinations(range(n), s)))
    return M[Js[:, :, None], Js[:, None, :]] - np.eye(s)


def _rows_normalized(v):
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return v / norms


def ric_oracle(psi, s, seed=0, iters=200):
    """delta_s by power iteration on (Gram_J - I)^2 over every subset."""
    rng = np.random.default_rng(seed)
    B = _all_sub_blocks(psi.conj().T @ psi, s)
    B2 = np.matmul(B, B)      # Hermitian blocks: squared dominant eigenvalue
    C = B.shape[0]
    v = _rows_normalized(rng.standard_normal((C, s)) + 1j * rng.standard_normal((C, s)))
    for _ in range(iters):
        v = _rows_normalized(np.matmul(B2, v[:, :, None])[:, :, 0])
    rq = np.real(np.einsum("cs,cs->c", v.conj(), np.matmul(B2, v[:, :, None])[:, :, 0]))
    return float(np.sqrt(np.maximum(rq, 0.0).max()))


def rboc_oracle(psi, psi_tilde, s, seed=0, iters=200, starts=2):
    """theta_s by alternating maximization of |<y, (M_J - I) x>| over unit
    pairs, batched over every subset."""
    rng = np.random.default_rng(seed)
    B = _all_sub_blocks(psi_tilde.conj().T @ psi, s)
    Bh = B.conj().transpose(0, 2, 1)
    C = B.shape[0]
    best = 0.0
    for _ in range(starts):
        x = _rows_normalized(rng.standard_normal((C, s)) + 1j * rng.standard_normal((C, s)))
        for _ in range(iters):
            y = _rows_normalized(np.matmul(B, x[:, :, None])[:, :, 0])
            x = _rows_normalized(np.matmul(Bh, y[:, :, None])[:, :, 0])
        sigma = np.linalg.norm(np.matmul(B, x[:, :, None])[:, :, 0], axis=1)
        best = max(best, float(sigma.max()))
    return best


def rboc_dense_sampling_oracle(psi, psi_tilde, s, grid=4000):
    """theta_s for real pairs at s=2 by dense sweep of unit x; the optimal
    y is closed form (B x / ||B x||)."""
    assert s == 2
    M = (psi_tilde.conj().T @ psi).real
    n = M.shape[0]
    angles = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    X = np.vstack([np.cos(angles), np.sin(angles)])
    best = 0.0
    for J in combinations(range(n), 2):
        B = M[np.ix_(list(J), list(J))] - np.eye(2)
        best = max(best, float(np.linalg.norm(B @ X, axis=0).max()))
    return best


def babel_oracle(psi, psi_tilde, s):
    """Exhaustive cross-Babel enumeration over columns and subsets."""
    C = np.abs(psi_tilde.conj().T @ psi)
    n = C.shape[1]
    best = 0.0
    for k in range(n):
        others = [j for j in range(n) if j != k]
        for J in combinations(others, s):
            best = max(best, float(C[list(J), k].sum()))
    return best


def dynamic_range_oracle(values):
    """min over nonempty subsets of ||x_J||_inf / ||x_J||_2, brute force."""
    vals = np.abs(np.asarray(values))
    idx = range(len(vals))
    best = np.inf
    for r in range(1, len(vals) + 1):
        for J in combinations(idx, r):
            sub = vals[list(J)]
            best = min(best, sub.max() / np.linalg.norm(sub))
    return float(best)


def normal_equations_ls(A, y, J):
    """Dense normal-equations LS oracle on support J."""
    AJ = A[:, list(J)]
    x = np.zeros(A.shape[1], dtype=np.complex128)
    x[list(J)] = np.linalg.solve(AJ.conj().T @ AJ, AJ.conj().T @ y)
    return x
