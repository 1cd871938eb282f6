"""Walkthrough: recovering a sparse signal with conventional and oblique pursuits.

We build a conditioned biorthogonal frame whose operator has condition
number 2, sample a sensing pair from it, and compare what happens when the
proxy matrix matches the analysis matrix versus when it uses the dual.

Run:  python demos/demo_recovery.py
"""

import numpy as np

from obpursuit import (PursuitConfig, build_density, run_pursuit,
                       sample_sensing_pair, synthetic_biorthogonal_frame)

rng = np.random.default_rng(7)

d, m, s = 64, 48, 4
family = synthetic_biorthogonal_frame(d, kappa=2.0, seed=1)
density = build_density("variable-power", d, alpha=1.0)
pair = sample_sensing_pair(family, density, m, seed=3)

# plant an s-sparse signal with unit-magnitude random-sign entries
support = np.sort(rng.choice(d, size=s, replace=False))
x_true = np.zeros(d, dtype=complex)
x_true[support] = rng.choice([-1.0, 1.0], size=s)
y = pair.A @ x_true

print(f"planted support: {support.tolist()}")
print(f"{'algorithm':<10} {'variant':<13} {'support hit':<12} {'rel error':<12} reason")
for alg in ("thres", "mp", "cosamp", "sp", "iht", "htp"):
    for oblique in (False, True):
        cfg = PursuitConfig(sparsity=s, algorithm=alg, oblique=oblique)
        res = run_pursuit(pair, y, cfg)
        hit = set(res.support.tolist()) == set(support.tolist())
        err = np.linalg.norm(res.estimate.to_dense() - x_true) / np.linalg.norm(x_true)
        label = "oblique" if oblique else "conventional"
        print(f"{alg:<10} {label:<13} {str(hit):<12} {err:<12.3e} {res.termination}")

print()
print("The dual-matrix proxy pays off once the frame stops being tight:")
print("the conventional fixed-step iteration sees an operator whose")
print("expectation is a conditioned Gram rather than the identity, while")
print("the oblique one is unbiased by construction.")
