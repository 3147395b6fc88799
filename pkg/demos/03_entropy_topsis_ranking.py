"""Rank ten classifiers with entropy weights and TOPSIS.

Uses the bundled benchmark decision matrices (ten cough classifiers
evaluated on asymptomatic recordings, training strategy 1).
"""

from pathlib import Path

import numpy as np

from coughrank.mcdm import entropy_weights, topsis
from coughrank.metrics import DEFAULT_CRITERIA
from coughrank.tables import read_decision_matrix

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

dm = read_decision_matrix(
    DATA / "decision_matrix_asymptomatic_strategy1.csv", list(DEFAULT_CRITERIA)
)

wv = entropy_weights(dm)
print("entropy weights (dispersion-based, no subjective input):")
for c, w in zip(dm.criteria, wv.weights):
    print(f"  {c.name:12s} {w:.3f}   ({c.direction})")

result = topsis(dm, wv)
print("\nTOPSIS ranking by relative closeness to the ideal solution:")
order = np.argsort(result.ranks, kind="stable")
for i in order:
    print(
        f"  {result.ranks[i]:2d}. {dm.alternatives[i]:12s}"
        f" C={result.closeness[i]:.3f}"
        f"  S+={result.s_plus[i]:.4f}  S-={result.s_minus[i]:.4f}"
    )
