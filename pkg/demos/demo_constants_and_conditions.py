"""Walkthrough: exact restricted constants and guarantee checking.

Small problems admit exact certification: every s-subset of columns is
enumerated (vectorized) and the worst Gram deviation is reported together
with the subset attaining it.  On top of the constants sit the recovery
conditions: given a planted signal, each pursuit's sufficient condition is
evaluated with its exact slack.

Run:  python demos/demo_constants_and_conditions.py
"""

import numpy as np

from obpursuit import (build_density, check_sufficient_conditions,
                       constants_report, convergence_constants, cross_babel,
                       iteration_bound, partial_dft_frame, sample_sensing_pair)

d, m, s = 12, 96, 2
family = partial_dft_frame(d)
pair = sample_sensing_pair(family, build_density("uniform", d), m, seed=5)

report = constants_report(pair.A, pair.A_tilde, s)
print(f"enumerated {report.enumerated} subsets in {report.wall_clock_s * 1e3:.1f} ms")
print(f"delta_{s}(A)        = {report.delta_psi:.4f}  attained by {report.delta_psi_subset}")
print(f"delta_{s}(A~)       = {report.delta_psi_tilde:.4f}")
print(f"theta_{s}(A~* A)    = {report.theta:.4f}  attained by {report.theta_subset}")

babel = cross_babel(pair.A, pair.A_tilde, s)
print(f"cross-coherence mu1({s}) = {babel.mu1:.4f}, ratio = {babel.ratio:.4f} "
      f"({'<' if babel.ratio_below_half else '>='} 1/2)")

# a flat planted signal and the per-algorithm sufficient conditions
rng = np.random.default_rng(0)
x = np.zeros(d, dtype=complex)
x[rng.choice(d, size=s, replace=False)] = 1.0
conds = check_sufficient_conditions(pair.A, pair.A_tilde, x, z_norm=0.0)
print(f"\ntheta_(s+1) = {conds['theta_s_plus_1']:.4f}, "
      f"dynamic range = {conds['dynamic_range']:.4f}")
print(f"thresholding condition satisfied: {conds['obthres']['satisfied']} "
      f"(slack {conds['obthres']['slack']:+.4f})")
print(f"forward greedy condition satisfied: {conds['obmp']['satisfied']} "
      f"(slack {conds['obmp']['slack']:+.4f})")
for alg, row in conds["iterative"].items():
    print(f"{alg:>8}: theta_{row['order']} = {row['theta']:.4f} "
          f"vs threshold {row['threshold']} -> {'ok' if row['satisfied'] else 'violated'}")

# contraction constants and the iteration-count bound they imply
theta3 = conds["iterative"]["iht"]["theta"]
cc = convergence_constants("iht", theta3, delta_psi_tilde=report.delta_psi_tilde)
print(f"\niht contraction: rho = {cc.rho:.3f}, tau = {cc.tau:.3f}")
cc_sp = convergence_constants("sp", conds["iterative"]["sp"]["theta"],
                              delta_psi=report.delta_psi,
                              delta_psi_tilde=report.delta_psi_tilde)
if cc_sp.satisfied:
    bound = iteration_bound(x, cc_sp.rho, cc_sp.tau, cc_sp.rho_bar, cc_sp.tau_bar, eta=0.1)
    print(f"sp profile p = {bound.profile}, iteration threshold = {bound.threshold:.1f}")
