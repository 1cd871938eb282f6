"""Walkthrough: the randomized matrix-identity suite.

Each check draws random instances and reports violations together with the
worst slack.  Two of the classical-looking identities are checked in two
forms, because the as-stated general versions are not actually true:

* the singular-value shift formula ||M - I|| = max(1 - s_min, s_max - 1)
  is an identity for Hermitian PSD matrices but only a lower bound in
  general (try M = [[0, 2], [0, 0]]);
* a Schur complement can have a LARGER top singular value than its matrix
  when the eliminated minor is nearly singular (try [[0.1, 1], [-1, 0.1]]),
  so only the lower interlacing family survives in general;
* likewise, the restricted-biorthogonality constant of an obliquely
  projected pair is controlled at the order s + |anchor|, not at order s.

The suite reports the as-stated forms (expect FAIL) next to the corrected
forms (expect PASS), so the boundary of validity is visible at a glance.

Run:  python demos/demo_lemma_suite.py
"""

from obpursuit import run_lemma_suite

checks = run_lemma_suite(trials=100, seed=0)
width = max(len(c.name) for c in checks)
print(f"{'check':<{width}}  status  trials  violations  worst slack")
for c in checks:
    status = "PASS" if c.passed else "FAIL"
    print(f"{c.name:<{width}}  {status:<6}  {c.trials:<6}  {c.violations:<10}  {c.worst_slack:+.3e}")
