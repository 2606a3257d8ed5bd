"""Optional per-update trackers layered on the recursive solver.

The solver itself only maintains the least-squares solution in O(mr) per
observation.  Attaching a :class:`PseudoinverseTracker` additionally maintains
the full Moore-Penrose pseudoinverse (O(mn) per observation) along with the
coordinate factor ``B`` of the rank factorization ``A = B C``; attaching a
:class:`CovarianceTracker` maintains ``V = A^+ (A^+)^T`` in O(m^2).  Trackers
are updated inside the solver's update step, from the same intermediates.
"""

from __future__ import annotations

import numpy as np

from .scalars import FLOAT64
from .solver import RecursiveSolver


class PseudoinverseTracker:
    """Maintains the pseudoinverse of all ingested observations.

    Binds to a solver at construction; every ``solver.update`` extends the
    pseudoinverse by one column and applies a rank-one correction.  Also
    stores the coordinate factor ``B`` (each ingested row expressed in the
    stored basis), which the correction needs.
    """

    def __init__(self, solver):
        self._solver = solver
        kind = solver.scalar
        self._kind = kind
        self._pinv = kind.zeros((solver.num_regressors, 0))
        self._coords = kind.zeros((solver.num_observations, solver.rank))
        if solver.num_observations:
            raise ValueError("attach trackers before ingesting observations")
        solver._trackers.append(self)

    @property
    def pinv(self):
        """Current m x n pseudoinverse (read-only view)."""
        return _readonly(self._pinv)

    @property
    def coords(self):
        """Current n x r coordinate factor B (read-only view)."""
        return _readonly(self._coords)

    def _observe(self, step):
        if step.branch == "independent":
            self.extend_independent(step)
        else:
            self.extend_dependent(step)

    def extend_independent(self, step):
        rank = self._coords.shape[1]
        if step.branch != "independent" or len(step.coords_row) != rank + 1:
            raise ValueError("branch mismatch: step is not an independent update here")
        self._extend_pinv(step)
        n = self._coords.shape[0]
        coords = self._kind.zeros((n + 1, rank + 1))
        coords[:n, :rank] = self._coords
        coords[n] = step.coords_row
        self._coords = coords

    def extend_dependent(self, step):
        rank = self._coords.shape[1]
        if step.branch != "dependent" or len(step.coords_row) != rank:
            raise ValueError("branch mismatch: step is not a dependent update here")
        self._extend_pinv(step)
        n, r = self._coords.shape
        coords = np.empty((n + 1, r), dtype=self._coords.dtype)
        coords[:n] = self._coords
        coords[n] = step.coords_row
        self._coords = coords

    def _extend_pinv(self, step):
        m, n = self._pinv.shape
        if self._coords.shape[1]:
            fitted = np.dot(self._coords, step.z)
        else:
            fitted = self._kind.zeros(n)
        out = np.empty((m, n + 1), dtype=self._pinv.dtype)
        out[:, :n] = self._pinv - np.outer(step.gain, fitted)
        out[:, n] = step.gain
        self._pinv = out


class CovarianceTracker:
    """Maintains ``V = A^+ (A^+)^T`` across solver updates in O(m^2)."""

    def __init__(self, solver):
        self._solver = solver
        self._kind = solver.scalar
        self._cov = solver.scalar.zeros((solver.num_regressors,) * 2)
        if solver.num_observations:
            raise ValueError("attach trackers before ingesting observations")
        solver._trackers.append(self)

    @property
    def covariance(self):
        return _readonly(self._cov)

    def _observe(self, step):
        if step.branch == "dependent":
            # C_tilde is unchanged, so only the Gram correction propagates.
            w = step.gain * step.denom
            self._cov = self._cov - np.outer(w, w / step.denom)
        else:
            if len(step.z):
                w = np.dot(step.dual.T, step.z)
            else:
                w = self._kind.zeros(self._cov.shape[0])
            gain = step.gain
            self._cov = (
                self._cov
                - np.outer(w, gain)
                - np.outer(gain, w)
                + np.outer(gain, gain * step.denom)
            )


def _readonly(array):
    view = array.view()
    view.flags.writeable = False
    return view


def pinv_from_scratch(matrix, *, variant="general", eps=None, scalar=FLOAT64,
                      alpha=1):
    """Pseudoinverse of a whole matrix by streaming its rows.

    Works for any input, including zero and rank-deficient matrices; a zero
    n x m matrix yields the zero m x n result.
    """
    A = scalar.matrix(matrix)
    n, m = A.shape
    solver = RecursiveSolver(m, variant=variant, eps=eps, scalar=scalar, alpha=alpha)
    tracker = PseudoinverseTracker(solver)
    zero = scalar.zero
    for row in A:
        solver.update(row, zero)
    return tracker._pinv.copy()
