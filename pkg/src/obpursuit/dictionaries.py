"""Sparsifying dictionaries and their biorthogonal duals.

Non-orthonormal dictionaries are generated at the symmetric spectral
placement: the squared singular values run linearly between 1 - theta and
1 + theta with theta = (kappa^2 - 1)/(kappa^2 + 1), so the Gram D^*D has
extreme eigenvalues summing to 2 and deviation ||D^*D - I|| = theta.  For
a target condition number kappa this gives the full-order restricted
constant exactly: kappa = 2 yields 0.6.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import matio
from .certificates import restricted_isometry_constant
from .errors import DegenerateFrameError
from .linalg import as_matrix
from .seeding import stream

DICTIONARY_KINDS = ("orthonormal", "invertible", "block-diagonal", "rip-overcomplete")


@dataclass(frozen=True)
class DictionaryPair:
    D: np.ndarray
    D_tilde: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.D.shape

    def describe(self) -> dict:
        out = {"kind": self.kind, "d": int(self.D.shape[0]), "n": int(self.D.shape[1])}
        out.update({k: v for k, v in self.params.items() if np.isscalar(v)})
        return out


def _haar_unitary(k: int, rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return (q * np.sign(np.diagonal(r))).astype(np.complex128)


def _conditioned_square(k: int, kappa: float, rng) -> np.ndarray:
    theta = (kappa**2 - 1.0) / (kappa**2 + 1.0)
    sv = (np.linspace(np.sqrt(1.0 - theta), np.sqrt(1.0 + theta), k)
          if k > 1 else np.array([1.0]))
    U = _haar_unitary(k, rng)
    V = _haar_unitary(k, rng)
    return (U * sv) @ V.conj().T


def dictionary_dual(D) -> np.ndarray:
    """Biorthogonal dual D (D^*D)^{-1}; satisfies dual^* D = I."""
    D = as_matrix(D)
    G = D.conj().T @ D
    ev = np.linalg.eigvalsh(G)
    if ev[0] <= 1e-14 * max(ev[-1].real, 1.0):
        raise DegenerateFrameError(f"rank-deficient dictionary (lambda_min={ev[0]:.3e})")
    return np.linalg.solve(G.conj().T, D.conj().T).conj().T


def dictionary_one_norm(D) -> float:
    """Induced l1 -> l1 norm of (D^*D)^{-1}: the max absolute column sum."""
    D = as_matrix(D)
    G = D.conj().T @ D
    ev = np.linalg.eigvalsh(G)
    if ev[0] <= 1e-14 * max(ev[-1].real, 1.0):
        raise DegenerateFrameError("singular dictionary Gram")
    inv = np.linalg.inv(G)
    return float(np.abs(inv).sum(axis=0).max())


def make_dictionary(kind: str, d: int, n: int, kappa: float = 1.0,
                    block_size: int | None = None, seed: int = 0,
                    rip_order: int = 2, rip_target: float = 0.75,
                    max_tries: int = 200) -> DictionaryPair:
    """Generate a dictionary of the requested structure.

    orthonormal: d >= n, orthonormal columns; self-dual.
    invertible: d == n, condition number kappa under the symmetric
        spectral placement.
    block-diagonal: d == n, block_size | d, each block an independent
        invertible draw at the same per-block kappa.
    rip-overcomplete: n > d, unit-norm columns, rejection-sampled until
        the brute-force restricted constant at order rip_order falls below
        rip_target; reused as its own dual.
    """
    rng = stream(seed, 0xD1C)
    if kind == "orthonormal":
        if d < n:
            raise ValueError("orthonormal needs d >= n")
        Q = _haar_unitary(d, rng)[:, :n]
        return DictionaryPair(Q, Q.copy(), kind, {"seed": seed})
    if kind == "invertible":
        if d != n:
            raise ValueError("invertible needs d == n")
        if kappa < 1:
            raise ValueError("kappa must be >= 1")
        D = _conditioned_square(d, kappa, rng)
        return DictionaryPair(D, dictionary_dual(D), kind, {"kappa": kappa, "seed": seed})
    if kind == "block-diagonal":
        if d != n:
            raise ValueError("block-diagonal needs d == n")
        if not block_size or d % block_size:
            raise ValueError(f"block size must divide d (d={d}, b={block_size})")
        D = np.zeros((d, d), dtype=np.complex128)
        for i in range(d // block_size):
            sl = slice(i * block_size, (i + 1) * block_size)
            D[sl, sl] = _conditioned_square(block_size, kappa, rng)
        return DictionaryPair(D, dictionary_dual(D), kind,
                              {"kappa": kappa, "block_size": block_size, "seed": seed})
    if kind == "rip-overcomplete":
        if n <= d:
            raise ValueError("rip-overcomplete needs n > d")
        for _ in range(max_tries):
            D = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
            D /= np.linalg.norm(D, axis=0)
            if restricted_isometry_constant(D, rip_order).value < rip_target:
                return DictionaryPair(D, D.copy(), kind,
                                      {"seed": seed, "rip_order": rip_order,
                                       "rip_target": rip_target})
        raise DegenerateFrameError(
            f"no draw reached delta_{rip_order} < {rip_target} in {max_tries} tries")
    raise ValueError(f"unknown dictionary kind {kind!r}")


def save_dictionary(pair: DictionaryPair, basepath: str) -> None:
    matio.save_matrix(f"{basepath}_D.csv", pair.D)
    matio.save_matrix(f"{basepath}_Dtilde.csv", pair.D_tilde)
    with open(f"{basepath}.json", "w") as fh:
        json.dump(pair.describe(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_dictionary(basepath: str) -> tuple[np.ndarray, np.ndarray, dict]:
    D, _ = matio.load_matrix(f"{basepath}_D.csv")
    Dt, _ = matio.load_matrix(f"{basepath}_Dtilde.csv")
    with open(f"{basepath}.json") as fh:
        meta = json.load(fh)
    return D, Dt, meta
