"""Recursive minimum-norm least squares over a maintained rank factorization.

The solver ingests observation rows one at a time and keeps four pieces of
state: a stored basis ``C`` of the observation row space (one row per
independent observation), its dual basis ``C_tilde`` with
``C_tilde @ C.T == I``, the inverse Gram factor ``P_inv`` of the coordinates
of all observations in that basis, and the current minimum-norm least-squares
solution ``x``.  Each new row is split into its coordinates in the basis plus
a rejection component; a (numerically) nonzero rejection grows the basis,
otherwise only ``P_inv`` absorbs the row through a rank-one inverse update.
Either way the solution moves by ``gain * (y - row . x)`` and the whole step
costs O(mr) for m regressors at rank r.

Three basis flavors are supported: ``general`` stores raw observation rows,
``orthogonal`` stores (rescaled) rejection vectors so the basis rows are
mutually orthogonal, and ``orthonormal`` additionally normalizes them, which
makes the dual basis coincide with the basis itself but requires square roots
(so it is unavailable for exact rational scalars).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scalars import FLOAT64, CapabilityError, ScalarKind

VARIANTS = ("general", "orthogonal", "orthonormal")


@dataclass(frozen=True)
class EpsPolicy:
    """Threshold policy for classifying a row as dependent or independent.

    ``auto`` scales machine epsilon by the operation count of the rejection
    computation, ``(m^2 r + m r + m) eps_M`` at current rank r.  ``fixed``
    uses a caller-supplied threshold.  ``exact`` means literal zero testing
    and is mandatory for (and exclusive to) exact rational scalars.
    """

    mode: str
    value: float | None = None

    def __post_init__(self):
        if self.mode not in ("auto", "fixed", "exact"):
            raise ValueError(f"unknown eps mode {self.mode!r}")
        if self.mode == "fixed":
            if self.value is None or self.value < 0:
                raise ValueError("fixed eps requires a nonnegative value")
        elif self.value is not None:
            raise ValueError(f"eps mode {self.mode!r} takes no value")

    @classmethod
    def auto(cls):
        return cls("auto")

    @classmethod
    def fixed(cls, value):
        return cls("fixed", float(value))

    @classmethod
    def exact_zero(cls):
        return cls("exact")

    def threshold(self, num_regressors, rank, machine_epsilon):
        if self.mode == "fixed":
            return self.value
        if self.mode == "exact":
            return 0.0
        m, r = num_regressors, rank
        return (m * m * r + m * r + m) * machine_epsilon


@dataclass(frozen=True)
class ProjectionResult:
    """Split of a row into basis coordinates plus out-of-span rejection."""

    coords: np.ndarray
    rejection: np.ndarray
    rejection_sq_norm: object


@dataclass(frozen=True)
class UpdateReport:
    """What one ingested observation did to the solver."""

    branch: str
    gain: np.ndarray
    predicted_residual: object
    new_rank: int


@dataclass(frozen=True)
class _UpdateStep:
    """Intermediates handed to attached trackers before the factor update,
    so trackers see the pre-update basis and Gram factor."""

    branch: str
    row: np.ndarray
    proj: ProjectionResult
    z: np.ndarray
    denom: object
    gain: np.ndarray
    # Row appended to the coordinate factor B: length r for a dependent
    # update, r+1 for an independent one.
    coords_row: np.ndarray
    # Pre-update dual basis (reference, not a copy).
    dual: np.ndarray


def _append_row(matrix, row):
    r, m = matrix.shape
    out = np.empty((r + 1, m), dtype=matrix.dtype)
    out[:r] = matrix
    out[r] = row
    return out


class RecursiveSolver:
    """Online minimum-norm least-squares solver.

    Parameters
    ----------
    num_regressors:
        Number of columns m of the observation matrix.
    variant:
        ``general``, ``orthogonal`` or ``orthonormal`` basis storage.
    eps:
        :class:`EpsPolicy` for the dependency test.  Defaults to ``auto`` for
        float scalars and ``exact`` for rational scalars.
    scalar:
        :class:`~rankrls.scalars.ScalarKind`; float64 or exact rational.
    alpha:
        Rescaling factor for the ``orthogonal`` variant: a nonzero constant,
        or a callable receiving the squared rejection norm.  Defaults to 1,
        which keeps exact rational arithmetic exact.
    """

    def __init__(self, num_regressors, *, variant="general", eps=None,
                 scalar=FLOAT64, alpha=1):
        if not isinstance(num_regressors, (int, np.integer)) or num_regressors < 1:
            raise ValueError(f"num_regressors must be a positive integer, got {num_regressors!r}")
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
        if not isinstance(scalar, ScalarKind):
            raise TypeError(f"scalar must be a ScalarKind, got {scalar!r}")
        if variant == "orthonormal" and not scalar.has_sqrt:
            raise CapabilityError(
                "the orthonormal variant needs square roots, which the "
                f"{scalar.name!r} scalar kind does not provide"
            )
        if eps is None:
            eps = EpsPolicy.exact_zero() if scalar.exact else EpsPolicy.auto()
        if scalar.exact and eps.mode != "exact":
            raise ValueError("exact rational scalars require the exact-zero eps policy")
        if not scalar.exact and eps.mode == "exact":
            raise ValueError("the exact-zero eps policy requires rational scalars")

        self._kind = scalar
        self._variant = variant
        self._eps = eps
        self._alpha = alpha
        self._m = int(num_regressors)
        self._r = 0
        self._n = 0
        self._basis = scalar.zeros((0, self._m))
        self._dual = self._basis if variant == "orthonormal" else scalar.zeros((0, self._m))
        self._gram_inv = scalar.zeros((0, 0))
        self._x = scalar.zeros(self._m)
        self._trackers = []

    # -- read-only access -------------------------------------------------

    @property
    def num_regressors(self):
        return self._m

    @property
    def rank(self):
        return self._r

    @property
    def num_observations(self):
        return self._n

    @property
    def variant(self):
        return self._variant

    @property
    def scalar(self):
        return self._kind

    @property
    def eps_policy(self):
        return self._eps

    @property
    def solution(self):
        """Live read-only view of the current minimum-norm solution."""
        return _readonly(self._x)

    def basis(self):
        """Read-only views of (C, C_tilde, P_inv)."""
        return _readonly(self._basis), _readonly(self._dual), _readonly(self._gram_inv)

    # -- core operations ---------------------------------------------------

    def project(self, row):
        """Coordinates of ``row`` in the stored basis plus its rejection."""
        row = self._kind.vector(row, self._m)
        if self._r == 0:
            coords = self._kind.zeros(0)
            rejection = row.copy()
        else:
            coords = np.dot(self._dual, row)
            rejection = row - np.dot(coords, self._basis)
        return ProjectionResult(coords, rejection, np.dot(rejection, rejection))

    def is_dependent(self, proj, row):
        """Whether the projected row lies (numerically) in the stored span."""
        if self._eps.mode == "exact":
            return not any(v != 0 for v in proj.rejection.flat)
        eps = self._eps.threshold(self._m, self._r, self._kind.machine_epsilon)
        eps_sq = eps * eps
        rej_sq = float(proj.rejection_sq_norm)
        row_sq = float(np.dot(row, row))
        return rej_sq < eps_sq or rej_sq < eps_sq * row_sq

    def update(self, row, target):
        """Ingest one observation and its measured value; returns a report."""
        row = self._kind.vector(row, self._m)
        target = self._kind.coerce(target)
        proj = self.project(row)
        if self.is_dependent(proj, row):
            step = self._dependent_step(row, proj)
        else:
            step = self._independent_step(row, proj)
        for tracker in self._trackers:
            tracker._observe(step)
        if step.branch == "dependent":
            if self._r:
                self._gram_inv -= np.outer(step.z, step.z / step.denom)
        else:
            self._grow(row, proj, step.z, step.denom, step.coords_row)
        residual = target - np.dot(row, self._x)
        self._x += step.gain * residual
        self._n += 1
        return UpdateReport(step.branch, step.gain, residual, self._r)

    def ingest(self, rows, targets):
        """Fold a block of observations; equivalent to ``update`` row by row.

        This is the fast path for float scalars without trackers: input is
        validated once and per-row work runs on reused scratch buffers.  With
        rational scalars or attached trackers it simply loops over ``update``.
        """
        A = self._kind.matrix(rows)
        if A.shape[1] != self._m:
            raise ValueError(f"rows have {A.shape[1]} columns, expected {self._m}")
        y = self._kind.vector(targets, A.shape[0])
        if self._kind.exact or self._trackers:
            for row, target in zip(A, y):
                self.update(row, target)
            return
        row_sq = np.einsum("ij,ij->i", A, A)
        rej = np.empty(self._m)
        gain = np.empty(self._m)
        fixed_eps = self._eps.value if self._eps.mode == "fixed" else None
        eps_m = self._kind.machine_epsilon
        x = self._x
        # rank-sized scratch, rebuilt whenever an independent row grows r
        cap = -1
        coords = z = zs = correction = None
        for i in range(A.shape[0]):
            row = A[i]
            r = self._r
            if r != cap:
                cap = r
                coords = np.empty(r)
                z = np.empty(r)
                zs = np.empty(r)
                correction = np.empty((r, r))
            if r:
                np.dot(self._dual, row, out=coords)
                np.dot(coords, self._basis, out=rej)
                np.subtract(row, rej, out=rej)
            else:
                rej[:] = row
            rej_sq = np.dot(rej, rej)
            eps = fixed_eps
            if eps is None:
                eps = (self._m * self._m * r + self._m * r + self._m) * eps_m
            eps_sq = eps * eps
            if rej_sq < eps_sq or rej_sq < eps_sq * row_sq[i]:
                if r:
                    np.dot(self._gram_inv, coords, out=z)
                    np.divide(z, 1.0 + np.dot(coords, z), out=zs)
                    np.outer(z, zs, out=correction)
                    np.subtract(self._gram_inv, correction, out=self._gram_inv)
                    np.dot(zs, self._dual, out=gain)
                    np.multiply(gain, y[i] - np.dot(row, x), out=gain)
                    np.add(x, gain, out=x)
            else:
                proj = ProjectionResult(coords.copy(), rej.copy(), rej_sq)
                need_z = self._variant != "general"
                if r and need_z:
                    grow_z = np.dot(self._gram_inv, proj.coords)
                    denom = 1.0 + np.dot(proj.coords, grow_z)
                else:
                    grow_z = np.zeros(0) if need_z else None
                    denom = 1.0
                self._grow(row, proj, grow_z, denom, self._coords_row(proj))
                cap = -1
                np.divide(proj.rejection, rej_sq, out=gain)
                np.multiply(gain, y[i] - np.dot(row, x), out=gain)
                np.add(x, gain, out=x)
            self._n += 1

    def _dependent_step(self, row, proj):
        kind = self._kind
        if self._r == 0:
            z = kind.zeros(0)
            denom = kind.one
            gain = kind.zeros(self._m)
        else:
            z = np.dot(self._gram_inv, proj.coords)
            denom = kind.one + np.dot(proj.coords, z)
            gain = np.dot(z / denom, self._dual)
        return _UpdateStep("dependent", row, proj, z, denom, gain, proj.coords,
                           self._dual)

    def _independent_step(self, row, proj):
        kind = self._kind
        gain = proj.rejection / proj.rejection_sq_norm
        need_z = self._variant != "general" or self._trackers
        if self._r == 0 or not need_z:
            z = kind.zeros(0) if need_z else None
            denom = kind.one
        else:
            z = np.dot(self._gram_inv, proj.coords)
            denom = kind.one + np.dot(proj.coords, z)
        return _UpdateStep("independent", row, proj, z, denom, gain,
                           self._coords_row(proj), self._dual)

    def _coords_row(self, proj):
        kind = self._kind
        coords_row = kind.zeros(self._r + 1)
        if self._variant == "general":
            coords_row[self._r] = kind.one
        else:
            coords_row[: self._r] = proj.coords
            coords_row[self._r] = kind.one / self._rescale(proj)
        return coords_row

    def _rescale(self, proj):
        """Rescaling factor applied to the stored rejection row."""
        if self._variant == "orthonormal":
            norm = self._kind.coerce(self._kind.sqrt(proj.rejection_sq_norm))
            return self._kind.one / norm
        alpha = self._alpha(proj.rejection_sq_norm) if callable(self._alpha) else self._alpha
        alpha = self._kind.coerce(alpha)
        if alpha == 0:
            raise ValueError("orthogonal rescaling factor must be nonzero")
        return alpha

    def _grow(self, row, proj, z, denom, coords_row):
        """Factor updates for an independent observation."""
        kind = self._kind
        r = self._r
        gram = kind.zeros((r + 1, r + 1))
        gram[:r, :r] = self._gram_inv
        if self._variant == "general":
            gain = proj.rejection / proj.rejection_sq_norm
            self._basis = _append_row(self._basis, row)
            dual = np.empty((r + 1, self._m), dtype=self._dual.dtype)
            dual[:r] = self._dual - np.outer(proj.coords, gain)
            dual[r] = gain
            self._dual = dual
            gram[r, r] = kind.one
        else:
            alpha = kind.one / coords_row[r]
            self._basis = _append_row(self._basis, alpha * proj.rejection)
            if self._variant == "orthonormal":
                self._dual = self._basis
            else:
                self._dual = _append_row(
                    self._dual, proj.rejection / (alpha * proj.rejection_sq_norm)
                )
            if r:
                edge = -(alpha * z)
                gram[:r, r] = edge
                gram[r, :r] = edge
            gram[r, r] = alpha * alpha * denom
        self._gram_inv = gram
        self._r = r + 1


def _readonly(array):
    view = array.view()
    view.flags.writeable = False
    return view


def solve_batch(matrix, targets, *, variant="general", eps=None, scalar=FLOAT64,
                alpha=1):
    """Fold all rows of a system through the recursive solver.

    Returns ``(x, rank)``: the minimum-norm least-squares solution after the
    final row and the detected rank.
    """
    A = scalar.matrix(matrix)
    y = scalar.vector(targets)
    if A.shape[0] != y.shape[0]:
        raise ValueError(
            f"row count mismatch: matrix has {A.shape[0]} rows, targets {y.shape[0]}"
        )
    solver = RecursiveSolver(A.shape[1], variant=variant, eps=eps, scalar=scalar,
                             alpha=alpha)
    solver.ingest(A, y)
    return solver.solution.copy(), solver.rank
