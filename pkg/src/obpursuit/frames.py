"""Frame families, sampling densities, and random frame sensing pairs.

A frame family lives on a finite grid of size N; its synthesis matrix has
the frame vectors as columns and the frame operator is the grid average
(1/N) * sum_w phi_w phi_w^*, i.e. the uniform measure on the grid is a
probability measure.  The "continuous" Fourier family is realized on a
fine grid (8x the signal dimension by default) so that discretization
error stays below test tolerances at desk scale.

Sensing pairs follow the row constructions

    A[k]  = conj(phi_{w_k}) / sqrt(m)
    At[k] = conj(dual_{w_k}) / (weight(w_k) * sqrt(m))

with the indices (w_k) drawn i.i.d. with replacement from the sampling
density, reused for both rows.  Summing over the grid exactly (instead of
sampling) the pair satisfies E[At^* A] = I for any strictly positive
density, while E[A^* A] drifts from the identity as the density and the
frame deviate from uniform/tight.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import matio
from .errors import DegenerateFrameError, InvalidDensityError
from .linalg import as_matrix
from .seeding import stream

DEFAULT_CONTINUOUS_OVERSAMPLING = 8


# ---------------------------------------------------------------------------
# sampling densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplingDensity:
    """Density dnu/dmu on a size-N grid, normalized to average 1."""

    weights: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if w.size < 1:
            raise InvalidDensityError("density grid must have at least one point")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise InvalidDensityError("density weights must be positive and finite")
        w = w / w.mean()
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def nu_min(self) -> float:
        return float(self.weights.min())

    @property
    def nu_max(self) -> float:
        return float(self.weights.max())

    def probabilities(self) -> np.ndarray:
        return self.weights / self.weights.sum()

    def describe(self) -> dict:
        return {"kind": self.kind, "size": self.size, **self.params}


def build_density(kind: str, size: int, *, alpha: float = 1.0, weights=None,
                  center: float = 0.0) -> SamplingDensity:
    """Construct a sampling density on a grid of `size` points.

    kind 'uniform': all weights 1.
    kind 'variable-power': weight proportional to (1 + N*dist)^(-alpha)
        where dist is circular distance on the unit frequency circle from
        `center`; heavier near the center frequency.
    kind 'custom': explicit positive weights, normalized to mean 1.
    """
    if size < 1:
        raise InvalidDensityError("grid size must be >= 1")
    if kind == "uniform":
        return SamplingDensity(np.ones(size), kind="uniform")
    if kind == "variable-power":
        if alpha < 0:
            raise InvalidDensityError("alpha must be >= 0")
        pos = np.arange(size) / size
        d = np.abs(pos - center) % 1.0
        d = np.minimum(d, 1.0 - d)
        w = (1.0 + size * d) ** (-alpha)
        return SamplingDensity(w, kind="variable-power", params={"alpha": alpha, "center": center})
    if kind == "custom":
        if weights is None:
            raise InvalidDensityError("custom density needs explicit weights")
        return SamplingDensity(np.asarray(weights, dtype=np.float64), kind="custom")
    raise InvalidDensityError(f"unknown density kind {kind!r}")


# ---------------------------------------------------------------------------
# frame families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameFamily:
    """A finite frame: columns of `vectors` are the frame vectors."""

    variant: str
    d: int
    vectors: np.ndarray          # (d, N)
    params: dict = field(default_factory=dict)

    @property
    def grid_size(self) -> int:
        return int(self.vectors.shape[1])

    def frame_operator(self) -> np.ndarray:
        v = self.vectors
        return (v @ v.conj().T) / self.grid_size

    def describe(self) -> dict:
        out = {"variant": self.variant, "d": self.d, "grid_size": self.grid_size}
        out.update({k: v for k, v in self.params.items() if np.isscalar(v)})
        return out


def _fourier_atoms(d: int, omegas: np.ndarray) -> np.ndarray:
    return np.exp(-2j * np.pi * np.outer(np.arange(d), omegas))


def partial_dft_frame(d: int) -> FrameFamily:
    """The DFT frame on its natural d-point grid; tight with operator I."""
    omegas = np.arange(d) / d
    return FrameFamily("partial-dft", d, _fourier_atoms(d, omegas).astype(np.complex128))


def masked_fourier_frame(d: int, mask, grid_size: int | None = None) -> FrameFamily:
    """Fourier atoms under a pointwise sensitivity mask, on a fine grid.

    All mask entries must be nonzero; the frame operator equals
    diag(|mask|^2).
    """
    lam = np.asarray(mask, dtype=np.complex128).ravel()
    if lam.size != d:
        raise DegenerateFrameError(f"mask length {lam.size} != dimension {d}")
    if np.any(lam == 0):
        raise DegenerateFrameError("mask entries must be nonzero")
    N = grid_size or DEFAULT_CONTINUOUS_OVERSAMPLING * d
    if N < d:
        raise DegenerateFrameError("grid must have at least d points")
    omegas = np.arange(N) / N - 0.5
    vecs = lam.conj()[:, None] * _fourier_atoms(d, omegas)
    return FrameFamily("masked-fourier", d, vecs, params={"grid_size": N})


def synthetic_biorthogonal_frame(d: int, kappa: float = 2.0, seed: int = 0,
                                 factors=None) -> FrameFamily:
    """Random frame with prescribed frame-operator condition number.

    Built from unitary factors U, V and a diagonal S whose entries increase
    linearly between the symmetric endpoints sqrt(1-theta), sqrt(1+theta),
    theta = (kappa-1)/(kappa+1), so the frame operator has extreme
    eigenvalues 1 -/+ theta (condition number kappa, centered at 1).  The
    frame vector at grid point w is sqrt(d) times the conjugated w-th row
    of U S V^*.
    """
    if kappa < 1:
        raise DegenerateFrameError("condition number must be >= 1")
    if factors is not None:
        U, S, V = factors
        U = as_matrix(U); V = as_matrix(V)
        S = np.asarray(S, dtype=np.float64).ravel()
    else:
        rng = stream(seed, 0xF0A)
        theta = (kappa - 1.0) / (kappa + 1.0)
        S = np.sqrt(np.linspace(1.0 - theta, 1.0 + theta, d))
        U, _ = np.linalg.qr(rng.standard_normal((d, d)))
        V, _ = np.linalg.qr(rng.standard_normal((d, d)))
        U = U.astype(np.complex128); V = V.astype(np.complex128)
    if np.any(S <= 0):
        raise DegenerateFrameError("singular values must be positive")
    R = (U * S) @ V.conj().T                      # U S V^*
    vecs = np.sqrt(d) * R.conj().T                # column w = sqrt(d) conj(row w)
    return FrameFamily("synthetic-biorthogonal", d, vecs,
                       params={"kappa": float(kappa), "seed": int(seed),
                               "U": U, "S": S, "V": V})


def dual_frame(family: FrameFamily) -> tuple[np.ndarray, np.ndarray]:
    """Return (Phi, Phi_tilde): the synthesis matrix and its canonical dual.

    Phi_tilde = (Phi Phi^*)^{-1} Phi under the grid-average frame operator,
    so that the biorthogonality (1/N) Phi_tilde Phi^* = I holds exactly.
    Tight unit-scaled frames are self-dual.
    """
    S = family.frame_operator()
    ev = np.linalg.eigvalsh(S)
    if ev[0] <= 1e-14 * max(ev[-1], 1.0):
        raise DegenerateFrameError(f"frame operator singular (lambda_min={ev[0]:.3e})")
    dual = np.linalg.solve(S, family.vectors)
    return family.vectors, dual


def frame_operator_stats(family: FrameFamily) -> dict:
    """Condition number, deviation-from-identity, and the rescale factor.

    The reported scale c places the frame operator at the symmetric
    optimum: c * lambda_max = 1 + theta and c * lambda_min = 1 - theta
    with theta = (kappa - 1)/(kappa + 1); theta is then both the
    deviation ||c * FrameOp - I|| and (kappa-1)/(kappa+1).
    """
    S = family.frame_operator()
    ev = np.linalg.eigvalsh(S)
    lmin, lmax = float(ev[0]), float(ev[-1])
    if lmin <= 1e-14 * max(lmax, 1.0):
        raise DegenerateFrameError("degenerate frame operator")
    kappa = lmax / lmin
    theta = (kappa - 1.0) / (kappa + 1.0)
    return {
        "kappa": kappa,
        "theta_d": theta,
        "scale": 2.0 / (lmax + lmin),
        "lambda_min": lmin,
        "lambda_max": lmax,
    }


# ---------------------------------------------------------------------------
# sensing pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SensingPair:
    """Random frame sensing matrices (A, At) with their provenance."""

    A: np.ndarray
    A_tilde: np.ndarray
    indices: np.ndarray
    family: FrameFamily
    density: SamplingDensity
    seed: int

    @property
    def m(self) -> int:
        return int(self.A.shape[0])


def sample_sensing_pair(family: FrameFamily, density: SamplingDensity, m: int,
                        seed: int) -> SensingPair:
    """Draw m grid indices i.i.d. from the density and fill both matrices.

    The same indices are used for A and At; the draw is a pure function of
    the seed.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if density.size != family.grid_size:
        raise InvalidDensityError(
            f"density grid ({density.size}) != frame grid ({family.grid_size})")
    w = density.weights
    if np.any(w <= 0):
        raise InvalidDensityError("dual construction needs strictly positive weights")
    rng = stream(seed, 0x5A)
    idx = rng.choice(family.grid_size, size=m, replace=True, p=density.probabilities())
    phi, dual = dual_frame(family)
    A = phi[:, idx].conj().T / np.sqrt(m)
    At = (dual[:, idx].conj() / w[idx]).T / np.sqrt(m)
    return SensingPair(A=A, A_tilde=At, indices=idx, family=family,
                       density=density, seed=int(seed))


def preconditioned_matrix(pair: SensingPair) -> np.ndarray:
    """Reweight rows of A by weight^(-1/2); restores plain isotropy for
    tight frames under any strictly positive density."""
    w = pair.density.weights[pair.indices]
    return pair.A / np.sqrt(w)[:, None]


def expected_plain_gram(family: FrameFamily, density: SamplingDensity) -> np.ndarray:
    """Exact single-draw E[A^* A], summed over the grid (no sampling)."""
    v = family.vectors
    return (v * density.weights) @ v.conj().T / family.grid_size


def expected_dual_gram(family: FrameFamily, density: SamplingDensity) -> np.ndarray:
    """Exact single-draw E[At^* A]; the density weights cancel."""
    phi, dual = dual_frame(family)
    del density  # cancels exactly; kept in the signature for symmetry
    return dual @ phi.conj().T / family.grid_size


def expected_preconditioned_gram(family: FrameFamily, density: SamplingDensity) -> np.ndarray:
    """Exact single-draw E[Ahat^* Ahat] = frame operator (density cancels)."""
    del density
    return family.frame_operator()


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def save_sensing_pair(pair: SensingPair, basepath: str) -> None:
    matio.save_matrix(f"{basepath}_A.csv", pair.A)
    matio.save_matrix(f"{basepath}_Atilde.csv", pair.A_tilde)
    meta = {
        "seed": pair.seed,
        "m": pair.m,
        "indices": pair.indices.tolist(),
        "family": pair.family.describe(),
        "density": pair.density.describe(),
    }
    with open(f"{basepath}.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_sensing_pair(basepath: str) -> tuple[np.ndarray, np.ndarray, dict]:
    A, _ = matio.load_matrix(f"{basepath}_A.csv")
    At, _ = matio.load_matrix(f"{basepath}_Atilde.csv")
    with open(f"{basepath}.json") as fh:
        meta = json.load(fh)
    return A, At, meta
