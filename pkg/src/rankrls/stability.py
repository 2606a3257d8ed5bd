"""Stability tables: per-matrix condition numbers, error measures, Penrose residuals.

For each (family, size, variant) cell the harness streams the matrix through
the solver with the pseudoinverse tracker and reports the 2-norm condition
number, the stability factor against a reference pseudoinverse, the residual
error, and the four Penrose residuals.  For the Pascal family it additionally
reruns in exact rational arithmetic and records whether the result matches the
exact integer inverse entry for entry.

Reference pseudoinverses follow a quality hierarchy: exact closed forms where
available (Pascal inverse, Kahan inverse, the known factors of U S V^T), then
exact rational elimination on small inputs (floats convert to rationals
exactly, so this is the true pseudoinverse of the float matrix), then SVD
truncation.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import exact, matrices, metrics
from .scalars import RATIONAL
from .solver import EpsPolicy
from .tracking import pinv_from_scratch

# Above this many entries, the exact-rational reference is too slow and the
# harness falls back to SVD truncation.
EXACT_REFERENCE_LIMIT = 200


@dataclass(frozen=True)
class StabilityRow:
    family: str
    n: int
    m: int
    variant: str
    cond2: float
    stability_factor: float
    residual_error: float
    penrose: tuple
    exact_rational: bool | None
    status: str


def reference_pinv(family, matrix, aux=None, rcond=None):
    """Best available reference pseudoinverse for a family instance.

    Returns ``(pinv, status)`` where status records which reference was used;
    ``(None, "no-reference")`` when nothing trustworthy is available.
    """
    if family == "pascal":
        return exact.pascal_inverse(matrix.shape[0]).astype(np.float64), "exact-closed-form"
    if family in ("kahan", "random-usv") and aux is not None:
        return aux, "exact-closed-form"
    if matrix.size <= EXACT_REFERENCE_LIMIT:
        return exact.pinv(matrix).astype(np.float64), "exact-rational"
    return metrics.pinv_via_svd(matrix, rcond=rcond), "svd-truncation"


def _instance(family, size, c, seed):
    """Materialize one matrix plus any closed-form reference payload."""
    if family == "pascal":
        return matrices.pascal(size).astype(np.float64), None
    if family == "kahan":
        matrix, inverse = matrices.kahan(size, c)
        return matrix, inverse
    if family == "random-standardized":
        return matrices.random_standardized(3 * size, size, size, seed), None
    if family == "random-usv":
        factors = matrices.random_usv(size, seed)
        return factors.matrix, factors.pinv
    if family == "ill-conditioned-power":
        return matrices.ill_conditioned_power(size, seed), None
    raise ValueError(f"unknown family {family!r}")


def stability_rows(family, sizes, *, variants=("general", "orthogonal", "orthonormal"),
                   c=0.2, rcond=None, seed=0, parallel=False):
    """Stability report rows for one family over a size grid.

    ``rcond`` doubles as the solver's fixed dependency threshold and the
    truncation level of SVD-based references, mirroring how such a knob is
    applied per algorithm in practice; ``None`` keeps the automatic policy.
    """
    cells = []
    for size in sizes:
        matrix, aux = _instance(family, size, c, seed)
        exact_match = None
        if family == "pascal":
            rational = pinv_from_scratch(matrices.pascal(size), scalar=RATIONAL)
            exact_match = bool(np.array_equal(rational, exact.pascal_inverse(size)))
        for variant in variants:
            cells.append((matrix, aux, variant, exact_match))

    def evaluate(cell):
        matrix, aux, variant, exact_match = cell
        return _evaluate_cell(family, matrix, aux, variant, exact_match, rcond)

    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(evaluate, cells))
    return [evaluate(cell) for cell in cells]


def _evaluate_cell(family, matrix, aux, variant, exact_match, rcond):
    n, m = matrix.shape
    eps = EpsPolicy.fixed(rcond) if rcond is not None else None
    cond = metrics.cond2(matrix)
    algo = pinv_from_scratch(matrix, variant=variant, eps=eps)
    res = metrics.residual_error(algo, matrix)
    penrose = metrics.penrose_residuals(matrix, algo)
    ref, status = reference_pinv(family, matrix, aux, rcond)
    factor = math.nan
    if ref is not None:
        factor = metrics.stability_factor(algo, ref, matrix)
    return StabilityRow(family, n, m, variant, cond, factor, res, penrose,
                        exact_match, status)


def write_csv(rows, path):
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow([
            "family", "n", "m", "variant", "cond2", "stability_factor",
            "residual_error", "penrose_1", "penrose_2", "penrose_3", "penrose_4",
            "exact_rational", "status",
        ])
        for row in rows:
            writer.writerow([
                row.family, row.n, row.m, row.variant,
                f"{row.cond2:.17g}", f"{row.stability_factor:.17g}",
                f"{row.residual_error:.17g}",
                *(f"{p:.17g}" for p in row.penrose),
                "" if row.exact_rational is None else str(row.exact_rational).lower(),
                row.status,
            ])
