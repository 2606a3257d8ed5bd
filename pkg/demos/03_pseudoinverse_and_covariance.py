"""Tracking the pseudoinverse and solution covariance alongside the solver.

The solver alone never pays more than O(m r) per observation.  Opt-in
trackers extend each update: the full Moore-Penrose pseudoinverse for O(m n),
and the unit-noise solution covariance A+ (A+)^T for O(m^2).
"""

import numpy as np

from rankrls import (
    CovarianceTracker,
    PseudoinverseTracker,
    RecursiveSolver,
    penrose_residuals,
    pinv_from_scratch,
)

rng = np.random.default_rng(3)

solver = RecursiveSolver(4)
pinv = PseudoinverseTracker(solver)
cov = CovarianceTracker(solver)

A = rng.standard_normal((6, 4))
A[4] = A[0] + A[1]          # two redundant observations
A[5] = 0.5 * A[2]
for row in A:
    solver.update(row, rng.standard_normal())

print("pseudoinverse shape:", pinv.pinv.shape, "(one column per observation)")
print("four Penrose residuals:",
      [f"{r:.2e}" for r in penrose_residuals(A, pinv.pinv)])

# The tracker's factor B reconstructs the full observation history.
C = solver.basis()[0]
print("B C reconstructs A:", np.abs(pinv.coords @ C - A).max())

# Covariance tracker equals the product of the tracked pseudoinverse.
product = pinv.pinv @ pinv.pinv.T
print("covariance equals A+ (A+)^T:", np.abs(cov.covariance - product).max())

# One-call version for a whole matrix, rank-deficient inputs included.
flat = np.array([[1.0, 1.0], [1.0, 1.0]])
print("pinv of the all-ones 2x2:")
print(pinv_from_scratch(flat))
