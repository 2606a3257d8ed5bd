"""Exact rational linear-algebra oracles.

Everything here works on object arrays of :class:`fractions.Fraction` and is
deliberately independent of the recursive solver: reduced row echelon form by
Gauss-Jordan elimination, exact inverses, an exact Moore-Penrose pseudoinverse
built from a rank factorization, and the exact minimum-norm least-squares
solution.  These are the reference answers the float code is tested against.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .scalars import RATIONAL


def rref(matrix):
    """Reduced row echelon form of a rational matrix.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row of ``R``.
    """
    R = RATIONAL.matrix(matrix).copy()
    n, m = R.shape
    pivots = []
    row = 0
    for col in range(m):
        if row == n:
            break
        pivot = next((i for i in range(row, n) if R[i, col] != 0), None)
        if pivot is None:
            continue
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        R[row] = R[row] / R[row, col]
        for i in range(n):
            if i != row and R[i, col] != 0:
                R[i] = R[i] - R[i, col] * R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def inverse(matrix):
    """Exact inverse by Gauss-Jordan; raises ``ZeroDivisionError`` if singular."""
    A = RATIONAL.matrix(matrix)
    n, m = A.shape
    if n != m:
        raise ValueError(f"matrix is not square: {A.shape}")
    aug = np.hstack([A, RATIONAL.identity(n)])
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def rank_factorization(matrix):
    """Split A into B (full column rank) times C (full row rank), exactly.

    C is the nonzero rows of rref(A) and B the pivot columns of A; the
    product reconstructs A entry for entry.  A zero matrix yields empty
    factors (rank 0).
    """
    A = RATIONAL.matrix(matrix)
    R, pivots = rref(A)
    r = len(pivots)
    C = R[:r, :]
    B = A[:, pivots] if r else np.empty((A.shape[0], 0), dtype=object)
    return B, C


def pinv(matrix):
    """Exact Moore-Penrose pseudoinverse.

    Uses the classical full-rank-factorization identity
    ``A^+ = C^T (C C^T)^-1 (B^T B)^-1 B^T``; exactness is verified in tests by
    checking all four Penrose equations with rational arithmetic.
    """
    A = RATIONAL.matrix(matrix)
    n, m = A.shape
    B, C = rank_factorization(A)
    r = C.shape[0]
    if r == 0:
        return RATIONAL.zeros((m, n))
    gram_c = inverse(np.dot(C, C.T))
    gram_b = inverse(np.dot(B.T, B))
    return np.dot(C.T, np.dot(gram_c, np.dot(gram_b, B.T)))


def lstsq_min_norm(matrix, targets):
    """Exact minimum-norm least-squares solution ``A^+ y``."""
    A = RATIONAL.matrix(matrix)
    y = RATIONAL.vector(targets, A.shape[0])
    return np.dot(pinv(A), y)


def penrose_defects(matrix, candidate):
    """Max-abs entry of each Penrose-equation residual, as exact Fractions.

    All four are zero iff ``candidate`` is the pseudoinverse of ``matrix``.
    """
    A = RATIONAL.matrix(matrix)
    P = RATIONAL.matrix(candidate)
    AP = np.dot(A, P)
    PA = np.dot(P, A)
    residuals = (
        np.dot(AP, A) - A,
        np.dot(PA, P) - P,
        AP.T - AP,
        PA.T - PA,
    )
    return tuple(
        max((abs(v) for v in res.flat), default=Fraction(0)) for res in residuals
    )


def pascal_inverse(n):
    """Exact integer inverse of the symmetric Pascal matrix of size n.

    The symmetric Pascal matrix factors as L L^T with L the lower-triangular
    binomial matrix, whose inverse has entries (-1)^(i+j) binomial(i, j); the
    result therefore has integer entries.
    """
    L_inv = RATIONAL.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            L_inv[i, j] = Fraction((-1) ** (i + j) * math.comb(i, j))
    return np.dot(L_inv.T, L_inv)
