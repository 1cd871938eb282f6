"""Walkthrough: why the dual-matrix construction matters.

The expectation of A^*A under variable-density sampling drifts away from
the identity, and no amount of averaging fixes that; the pair (A, At)
built with the inverse-density-weighted dual satisfies E[At^* A] = I
identically.  Both expectations are computed here exactly, by summing
over the whole grid, so there is no Monte-Carlo noise in the comparison.

Run:  python demos/demo_isotropy_contrast.py
"""

import numpy as np

from obpursuit import (build_density, expected_dual_gram, expected_plain_gram,
                       expected_preconditioned_gram, partial_dft_frame,
                       spectral_norm)

d = 32
family = partial_dft_frame(d)
eye = np.eye(d)

print(f"{'density':<28} {'||E A*A - I||':<16} {'||E At*A - I||':<16} {'||E Ah*Ah - I||'}")
for label, density in [
    ("uniform", build_density("uniform", d)),
    ("two-level (ratio 2)", build_density("custom", d, weights=[4 / 3, 2 / 3] * (d // 2))),
    ("variable power (alpha=1)", build_density("variable-power", d, alpha=1.0)),
]:
    plain = spectral_norm(expected_plain_gram(family, density) - eye)
    dual = spectral_norm(expected_dual_gram(family, density) - eye)
    precond = spectral_norm(expected_preconditioned_gram(family, density) - eye)
    print(f"{label:<28} {plain:<16.3e} {dual:<16.3e} {precond:.3e}")

print()
print("The plain expectation degrades with the density spread (first")
print("column), the dual-weighted pair is exactly unbiased for every")
print("strictly positive density (second column), and for a tight frame")
print("the inverse-sqrt-density preconditioning also restores isotropy")
print("(third column).")
