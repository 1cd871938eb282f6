"""Walkthrough: a desk-scale support-recovery phase transition.

A reduced grid keeps this demo under a minute; the full benchmark (default
grids, n = 256, 50 repetitions) is a CLI call away:

    obpursuit phase-transition --seed 20260810 --output pt --emit-plot-data

Success means the estimate's support equals the planted one exactly.  The
thresholding and fixed-step families gain the most from the dual proxy;
the least-squares-driven pursuits are already scale-free and stay at
parity.

Run:  python demos/demo_phase_transition.py
"""

from obpursuit import ExperimentConfig, phase_transition

config = ExperimentConfig(
    n=128,
    m_over_n=(0.3, 0.6, 0.9),
    s_over_m=(0.05, 0.1, 0.2),
    reps=8,
    snr_db=30.0,
    kappa=2.0,
    algorithms=("thres", "iht", "sp"),
    variants="both",
    seed=42,
)

grid = phase_transition(config)

header = "  ".join(f"{mn:>4.2f}" for mn in config.m_over_n)
for alg in config.algorithms:
    print(f"\n{alg}: success rate by cell (rows: s/m, cols: m/n = {header})")
    for variant, ob in (("conventional", False), ("oblique", True)):
        print(f"  {variant}:")
        for sm in config.s_over_m:
            cells = [grid.cell(mn, sm, alg, ob) for mn in config.m_over_n]
            rates = "  ".join(f"{c.success_rate:4.2f}" for c in cells)
            print(f"    s/m={sm:4.2f}: {rates}")

print("\n>=50% success areas (cells):")
for alg in config.algorithms:
    print(f"  {alg:<6} conventional={grid.success_area(alg, False)} "
          f"oblique={grid.success_area(alg, True)}")
