"""Streaming a least-squares problem one observation at a time.

The solver keeps the minimum-norm solution current after every row, at a cost
proportional to (columns x rank) per row, and tells you whether each row added
new information or was redundant.
"""

import numpy as np

from rankrls import RecursiveSolver, min_norm_lstsq

rng = np.random.default_rng(8)

# Ground truth lives in a 3-dimensional subspace of 6 regressors.
directions = rng.standard_normal((3, 6))
truth = rng.standard_normal(3) @ directions

solver = RecursiveSolver(6)
print("ingesting a redundant stream of 12 observations:")
for i in range(12):
    weights = rng.standard_normal(3)
    row = weights @ directions
    noise = 0.0 if i % 2 else 1e-3 * rng.standard_normal()
    report = solver.update(row, row @ truth + noise)
    x = solver.solution
    print(f"  obs {i:2d}: {report.branch:11s} rank={solver.rank} "
          f"|x|={np.linalg.norm(x):.6f}")

print()
print("rank found:", solver.rank, "(the stream never left the 3-dim subspace)")

# The solution matches a batch SVD solve of everything seen so far.
A = np.array([rng.standard_normal(3) @ directions for _ in range(40)])
y = A @ truth
solver2 = RecursiveSolver(6)
solver2.ingest(A, y)
x_batch = min_norm_lstsq(A, y)
print("difference vs SVD-truncation solve:",
      np.abs(solver2.solution - x_batch).max())

# Minimum-norm means: no component outside the observed row space.
proj = solver2.project(solver2.solution.copy())
print("component of x outside the observed span:",
      float(proj.rejection_sq_norm) ** 0.5)
