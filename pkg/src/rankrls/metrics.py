"""Independent numerical oracles: small-matrix SVD, norms, stability metrics.

The SVD is a one-sided Jacobi iteration: slow but simple, provably convergent,
and accurate for small singular values, which is what an oracle needs.  On top
of it sit the 2-norm, the condition number, the pseudoinverse stability factor
and residual error used by the stability harness, the four Penrose-equation
residuals, and an SVD-truncation minimum-norm least-squares solver that serves
as the reference for the recursive solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scalars import FLOAT64


class SvdConvergenceError(RuntimeError):
    """Jacobi sweeps did not converge; carries diagnostic detail."""


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``A = U diag(s) V^T`` with k = min(n, m) columns."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self):
        return (self.u * self.singular_values) @ self.v.T


def svd_small(matrix, tol=1e-14, max_sweeps=60):
    """One-sided Jacobi SVD for desk-scale matrices.

    Columns are rotated pairwise in a fixed cyclic order until every pair is
    orthogonal to ``tol`` relative to the column norms.  Convergence failure
    after ``max_sweeps`` raises :class:`SvdConvergenceError`.
    """
    A = np.asarray(matrix, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    n, m = A.shape
    if n < m:
        flipped = svd_small(A.T, tol=tol, max_sweeps=max_sweeps)
        return SvdResult(flipped.v, flipped.singular_values, flipped.u)

    work = A.copy()
    v = np.eye(m)
    tol_sq = tol * tol
    for _ in range(max_sweeps):
        rotated = False
        for p in range(m - 1):
            for q in range(p + 1, m):
                wp = work[:, p]
                wq = work[:, q]
                app = wp @ wp
                aqq = wq @ wq
                apq = wp @ wq
                if apq * apq <= tol_sq * app * aqq:
                    continue
                rotated = True
                tau = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = c * t
                new_p = c * wp - s * wq
                work[:, q] = s * wp + c * wq
                work[:, p] = new_p
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if not rotated:
            break
    else:
        off = _max_relative_offdiag(work)
        raise SvdConvergenceError(
            f"one-sided Jacobi did not converge in {max_sweeps} sweeps "
            f"on a {n}x{m} matrix (worst relative column coupling {off:.3e})"
        )

    sigma = np.sqrt(np.einsum("ij,ij->j", work, work))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    work = work[:, order]
    v = v[:, order]
    u = np.zeros_like(work)
    nonzero = sigma > 0.0
    u[:, nonzero] = work[:, nonzero] / sigma[nonzero]
    if not nonzero.all():
        _complete_basis(u, np.flatnonzero(~nonzero))
    return SvdResult(u, sigma, v)


def _max_relative_offdiag(work):
    m = work.shape[1]
    norms = np.sqrt(np.einsum("ij,ij->j", work, work))
    worst = 0.0
    for p in range(m - 1):
        for q in range(p + 1, m):
            denom = norms[p] * norms[q]
            if denom > 0:
                worst = max(worst, abs(work[:, p] @ work[:, q]) / denom)
    return worst


def _complete_basis(u, empty_cols):
    """Fill exactly-zero columns of u with unit vectors orthogonal to the rest."""
    n = u.shape[0]
    for col in empty_cols:
        for k in range(n):
            cand = np.zeros(n)
            cand[k] = 1.0
            for _ in range(2):
                cand -= u @ (u.T @ cand)
            norm = math.sqrt(cand @ cand)
            if norm > 0.5:
                u[:, col] = cand / norm
                break
        else:
            raise SvdConvergenceError("could not complete an orthonormal basis")


def two_norm(matrix):
    """Largest singular value."""
    A = np.asarray(matrix, dtype=np.float64)
    if A.size == 0:
        return 0.0
    return float(svd_small(A).singular_values[0])


def cond2(matrix):
    """2-norm condition number sigma_1 / sigma_k, k = min(n, m).

    Exactly singular matrices report ``math.inf``; a zero matrix is an error.
    """
    sigma = svd_small(matrix).singular_values
    if sigma[0] == 0.0:
        raise ValueError("condition number of a zero matrix")
    smallest = float(sigma[-1])
    if smallest == 0.0:
        return math.inf
    return float(sigma[0]) / smallest


def stability_factor(pinv_algo, pinv_ref, matrix, machine_eps=None):
    """Forward-error measure of a computed pseudoinverse.

    ``|algo - ref|_2 / (eps_M |ref|_2 kappa_2(A))``; small constants indicate
    forward stability.
    """
    algo = np.asarray(pinv_algo, dtype=np.float64)
    ref = np.asarray(pinv_ref, dtype=np.float64)
    if algo.shape != ref.shape:
        raise ValueError(f"shape mismatch {algo.shape} vs {ref.shape}")
    ref_norm = two_norm(ref)
    if ref_norm == 0.0:
        raise ValueError("zero reference pseudoinverse")
    if machine_eps is None:
        machine_eps = FLOAT64.machine_epsilon
    return two_norm(algo - ref) / (machine_eps * ref_norm * cond2(matrix))


def residual_error(pinv_algo, matrix):
    """Mixed forward-backward measure ``|P A - I|_2 / (|A|_2 |P|_2)``.

    The identity is on the regressor side (m x m), the only dimensionally
    consistent choice for P of shape m x n.
    """
    A = np.asarray(matrix, dtype=np.float64)
    P = np.asarray(pinv_algo, dtype=np.float64)
    if P.shape != A.shape[::-1]:
        raise ValueError(f"shape mismatch: pinv {P.shape} for matrix {A.shape}")
    p_norm = two_norm(P)
    if p_norm == 0.0:
        raise ValueError("zero pseudoinverse candidate")
    m = A.shape[1]
    return two_norm(P @ A - np.eye(m)) / (two_norm(A) * p_norm)


def penrose_residuals(matrix, pinv_candidate):
    """2-norm residuals of the four Penrose equations, suitably normalized.

    The two product equations (A P A = A, P A P = P) normalize by |A|_2 and
    |P|_2 respectively; the two symmetry equations by the norm of the side
    they constrain.  Zero denominators fall back to the raw residual norm.
    """
    A = np.asarray(matrix, dtype=np.float64)
    P = np.asarray(pinv_candidate, dtype=np.float64)
    ap = A @ P
    pa = P @ A
    a_norm = two_norm(A)
    p_norm = two_norm(P)
    pairs = (
        (ap @ A - A, a_norm),
        (pa @ P - P, p_norm),
        (ap.T - ap, a_norm),
        (pa.T - pa, p_norm),
    )
    return tuple(
        two_norm(res) / denom if denom > 0.0 else two_norm(res)
        for res, denom in pairs
    )


def default_rcond(n, m):
    return FLOAT64.machine_epsilon * max(n, m)


def min_norm_lstsq(matrix, targets, rcond=None):
    """Minimum-norm least-squares solution by SVD truncation.

    Singular values at or below ``rcond * sigma_1`` are treated as zero;
    ``rcond`` defaults to ``eps_M * max(n, m)``.
    """
    A = np.asarray(matrix, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    n, m = A.shape
    if y.shape != (n,):
        raise ValueError(f"targets shape {y.shape} does not match {n} rows")
    if rcond is None:
        rcond = default_rcond(n, m)
    if not 0.0 <= rcond < 1.0:
        raise ValueError(f"rcond must be in [0, 1), got {rcond}")
    res = svd_small(A)
    sigma = res.singular_values
    keep = sigma > rcond * (sigma[0] if sigma.size else 0.0)
    if not keep.any():
        return np.zeros(m)
    coeffs = (res.u[:, keep].T @ y) / sigma[keep]
    return res.v[:, keep] @ coeffs


def pinv_via_svd(matrix, rcond=None):
    """Pseudoinverse by SVD truncation; the fallback stability reference."""
    A = np.asarray(matrix, dtype=np.float64)
    n, m = A.shape
    if rcond is None:
        rcond = default_rcond(n, m)
    res = svd_small(A)
    sigma = res.singular_values
    keep = sigma > rcond * (sigma[0] if sigma.size else 0.0)
    if not keep.any():
        return np.zeros((m, n))
    return (res.v[:, keep] / sigma[keep]) @ res.u[:, keep].T
