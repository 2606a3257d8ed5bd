"""Deterministic test-matrix families and the shared matrix text format.

Five families cover the stability and scaling experiments: symmetric Pascal
matrices (exact integer entries and inverse), Kahan matrices (extreme yet
analytically invertible ill-conditioning), standardized random matrices of
prescribed rank, random matrices with a known geometric singular spectrum
``U S V^T``, and integer powers of Gaussian square matrices.

Randomness comes from numpy's PCG64 via ``default_rng(seed)``; each generator
call seeds a fresh stream and draws its factors sequentially from it, so the
same spec always reproduces the same matrix bit for bit.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .scalars import FLOAT64, ScalarKind

FAMILIES = (
    "pascal",
    "kahan",
    "random-standardized",
    "random-usv",
    "ill-conditioned-power",
)

# Largest Pascal size whose entries are exactly representable in float64.
PASCAL_FLOAT_EXACT_LIMIT = 30


class ExactnessWarning(UserWarning):
    """Generated entries exceed what float64 can represent exactly."""


@dataclass(frozen=True)
class MatrixSpec:
    """Declarative description of one generated matrix."""

    family: str
    n: int
    m: int | None = None
    r: int | None = None
    c: float | None = None
    seed: int = 0
    power: int = 4

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.family == "random-standardized":
            if self.m is None or self.r is None:
                raise ValueError("random-standardized needs n, m and r")
            if not 1 <= self.r <= min(self.n, self.m):
                raise ValueError(f"rank {self.r} not in [1, min(n, m)]")
        if self.family == "kahan" and not (self.c and 0.0 < self.c < 1.0):
            raise ValueError("kahan needs c in (0, 1)")
        if self.power < 1:
            raise ValueError("power must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def generate(spec):
    """Materialize the matrix described by ``spec``."""
    if spec.family == "pascal":
        return pascal(spec.n)
    if spec.family == "kahan":
        return kahan(spec.n, spec.c)[0]
    if spec.family == "random-standardized":
        return random_standardized(spec.n, spec.m, spec.r, spec.seed)
    if spec.family == "random-usv":
        return random_usv(spec.n, spec.seed).matrix
    return ill_conditioned_power(spec.n, spec.seed, spec.power)


def pascal(n):
    """Symmetric Pascal matrix: entry (i, j) is binomial(i + j, i), 0-based.

    Built by the additive recurrence, with exact integer entries (object
    dtype), so both scalar kinds can consume it without rounding.  Sizes
    beyond 30 exceed exact float64 representation and raise a warning.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > PASCAL_FLOAT_EXACT_LIMIT:
        warnings.warn(
            f"pascal({n}) entries exceed exact float64 range",
            ExactnessWarning,
            stacklevel=2,
        )
    out = np.empty((n, n), dtype=object)
    out[0, :] = [1] * n
    out[:, 0] = [1] * n
    for i in range(1, n):
        for j in range(1, n):
            out[i, j] = out[i - 1, j] + out[i, j - 1]
    return out


def kahan(n, c):
    """Kahan matrix K(c, s) with s = sqrt(1 - c^2), plus its exact-form inverse.

    Row i of the unit upper-triangular matrix with -c off the diagonal is
    scaled by s^i.  The inverse comes from the closed form for such
    triangular matrices and serves as the stability reference.
    """
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must be in (0, 1), got {c}")
    s = math.sqrt(1.0 - c * c)
    scales = s ** np.arange(n)
    tri = np.triu(np.full((n, n), -c), 1) + np.eye(n)
    matrix = scales[:, None] * tri

    # (tri^-1)[i, j] = c (1 + c)^(j - i - 1) above the diagonal.
    tri_inv = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            tri_inv[i, j] = c * (1.0 + c) ** (j - i - 1)
    inverse = tri_inv / scales[None, :]
    return matrix, inverse


def random_standardized(n, m, r, seed):
    """Random n x m matrix of rank exactly r with standardized entries.

    Product of n x r and r x m factors with independent standard-normal
    entries, both drawn sequentially from one PCG64 stream seeded with
    ``seed``.  Small outputs get their numerical rank verified on the spot.
    """
    if not 1 <= r <= min(n, m):
        raise ValueError(f"rank {r} not in [1, min({n}, {m})]")
    rng = np.random.default_rng(seed)
    left = rng.standard_normal((n, r))
    right = rng.standard_normal((r, m))
    out = left @ right
    if max(n, m) <= 32:
        _verify_numerical_rank(out, r)
    return out


def _verify_numerical_rank(matrix, r):
    from .metrics import svd_small

    sigma = svd_small(matrix).singular_values
    if sigma[r - 1] <= sigma[0] * 1e-10 or (r < len(sigma) and sigma[r] > sigma[0] * 1e-10):
        raise RuntimeError(f"generated matrix does not have numerical rank {r}")


@dataclass(frozen=True)
class UsvFactors:
    """A 5n x n product U diag(s) V^T with its known pseudoinverse."""

    matrix: np.ndarray
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    @property
    def pinv(self):
        return (self.v / self.singular_values) @ self.u.T


def random_usv(n, seed):
    """Random column-orthogonal U (5n x n), V (n x n) and s_j = 2^(j/2).

    U and V come from orthogonalizing Gaussian matrices (modified
    Gram-Schmidt with one reorthogonalization pass); the singular spectrum is
    the geometric sequence 1, 2^(1/2), ..., 2^((n-1)/2), so the condition
    number is 2^((n-1)/2) by construction.
    """
    rng = np.random.default_rng(seed)
    u = _orthonormal_columns(rng.standard_normal((5 * n, n)))
    v = _orthonormal_columns(rng.standard_normal((n, n)))
    singular_values = np.sqrt(2.0) ** np.arange(n)
    matrix = (u * singular_values) @ v.T
    return UsvFactors(matrix, u, singular_values, v)


def _orthonormal_columns(matrix):
    """Modified Gram-Schmidt with a second pass for numerical orthogonality."""
    q = np.asarray(matrix, dtype=np.float64).copy()
    cols = q.shape[1]
    for _ in range(2):
        for j in range(cols):
            for i in range(j):
                q[:, j] -= (q[:, i] @ q[:, j]) * q[:, i]
            norm = math.sqrt(q[:, j] @ q[:, j])
            if norm == 0.0:
                raise RuntimeError("degenerate columns during orthogonalization")
            q[:, j] /= norm
    return q


def ill_conditioned_power(n, seed, power=4):
    """Integer matrix power of a seeded Gaussian n x n matrix.

    Conditioning grows roughly like the power of the base condition number,
    which makes these good stress inputs despite having no closed-form
    inverse.
    """
    if power < 1:
        raise ValueError("power must be a positive integer")
    base = np.random.default_rng(seed).standard_normal((n, n))
    out = base
    for _ in range(power - 1):
        out = out @ base
    return out


# -- matrix text format ------------------------------------------------------
#
# Line 1: "n m"; then n lines of m whitespace-separated scalars, each either a
# decimal float or an exact "p/q" rational.  Shared by the CLI and the file
# interfaces.


def format_matrix(matrix, kind=FLOAT64):
    arr = kind.matrix(matrix)
    lines = [f"{arr.shape[0]} {arr.shape[1]}"]
    for row in arr:
        lines.append(" ".join(kind.render(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text, kind=FLOAT64):
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix text must start with 'n m'")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError as err:
        raise ValueError(f"bad matrix header {tokens[:2]!r}") from err
    if n < 0 or m < 0:
        raise ValueError(f"bad matrix dimensions {n} x {m}")
    values = tokens[2:]
    if len(values) != n * m:
        raise ValueError(f"expected {n * m} entries for a {n} x {m} matrix, got {len(values)}")
    out = kind.zeros((n, m))
    for i in range(n):
        for j in range(m):
            out[i, j] = kind.parse(values[i * m + j])
    return out


def write_matrix(path, matrix, kind=FLOAT64):
    data = format_matrix(matrix, kind)
    if isinstance(path, io.TextIOBase):
        path.write(data)
    else:
        with open(path, "w", encoding="ascii") as handle:
            handle.write(data)


def read_matrix(path, kind=FLOAT64):
    if isinstance(path, io.TextIOBase):
        return parse_matrix(path.read(), kind)
    with open(path, "r", encoding="ascii") as handle:
        return parse_matrix(handle.read(), kind)


def read_vector(path, kind=FLOAT64):
    """Read an n x 1 or 1 x n matrix file as a flat vector."""
    out = read_matrix(path, kind)
    if 1 in out.shape or 0 in out.shape:
        return out.reshape(-1)
    raise ValueError(f"expected a vector-shaped file, got {out.shape}")
