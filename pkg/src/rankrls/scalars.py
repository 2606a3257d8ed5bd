"""Scalar domains for the solver: IEEE float64 and exact rationals.

The solver core is written once against numpy arrays; a :class:`ScalarKind`
decides the dtype (float64, or object arrays of :class:`fractions.Fraction`),
the parsing/rendering of values in the shared matrix text format, and the
available capabilities (square roots, machine epsilon).

Rationals are arbitrary precision; ``Fraction`` keeps them canonical (reduced,
positive denominator) and compares by exact cross-multiplication.  Floats are
required to be finite: NaN/Inf inputs are rejected instead of stored.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


class CapabilityError(ValueError):
    """The scalar kind does not support the requested operation."""


class ScalarKind:
    """Arithmetic domain descriptor.

    Two singletons exist: :data:`FLOAT64` and :data:`RATIONAL`.  Arithmetic
    itself is native (Python/numpy operators); the kind supplies coercion,
    array construction, text round-tripping and the sqrt capability.
    """

    def __init__(self, name, *, exact, has_sqrt, dtype, machine_epsilon):
        self.name = name
        self.exact = exact
        self.has_sqrt = has_sqrt
        self.dtype = dtype
        # Unit roundoff of the representation; None for exact kinds.
        self.machine_epsilon = machine_epsilon

    def __repr__(self):
        return f"ScalarKind({self.name!r})"

    @property
    def zero(self):
        return Fraction(0) if self.exact else 0.0

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    def coerce(self, value):
        """Convert ``value`` to this kind's scalar type.

        Floats must be finite.  Float inputs to the rational kind convert
        exactly (every finite float is a dyadic rational).
        """
        if self.exact:
            if isinstance(value, Fraction):
                return value
            return Fraction(value)
        out = float(value)
        if not math.isfinite(out):
            raise ValueError(f"non-finite scalar {value!r}")
        return out

    def sqrt(self, value):
        """Nonnegative square root; only kinds with ``has_sqrt`` support it."""
        if not self.has_sqrt:
            raise CapabilityError(
                f"scalar kind {self.name!r} does not support square roots"
            )
        value = self.coerce(value)
        if value < 0:
            raise ValueError(f"square root of negative value {value!r}")
        return math.sqrt(value)

    def parse(self, text):
        """Parse a scalar token: decimal floats and ``p/q`` are both accepted."""
        text = text.strip()
        if self.exact:
            return Fraction(text)
        if "/" in text:
            return self.coerce(Fraction(text))
        return self.coerce(float(text))

    def render(self, value):
        """Format a scalar for the text format.

        Floats use the shortest round-trip decimal; rationals render as
        ``p/q``, or just ``p`` when the denominator is one.
        """
        if self.exact:
            return str(self.coerce(value))
        return repr(self.coerce(value))

    def zeros(self, shape):
        if self.exact:
            return np.full(shape, Fraction(0), dtype=object)
        return np.zeros(shape, dtype=np.float64)

    def identity(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def asarray(self, data):
        """Coerce ``data`` to an array of this kind, validating every entry."""
        if self.exact:
            raw = np.asarray(data, dtype=object)
            out = np.empty(raw.shape, dtype=object)
            for idx, value in np.ndenumerate(raw):
                out[idx] = self.coerce(value)
            return out
        out = np.asarray(data)
        if out.dtype == object:
            out = np.array([self.coerce(v) for v in out.flat], dtype=np.float64)
            out = out.reshape(np.asarray(data, dtype=object).shape)
        else:
            out = out.astype(np.float64, copy=False)
        if out.size and not np.all(np.isfinite(out)):
            raise ValueError("non-finite entries in float input")
        return out

    def vector(self, data, length=None):
        out = self.asarray(data)
        if out.ndim != 1:
            raise ValueError(f"expected a vector, got shape {out.shape}")
        if length is not None and out.shape[0] != length:
            raise ValueError(f"expected length {length}, got {out.shape[0]}")
        return out

    def matrix(self, data):
        out = self.asarray(data)
        if out.ndim != 2:
            raise ValueError(f"expected a matrix, got shape {out.shape}")
        return out


FLOAT64 = ScalarKind(
    "f64",
    exact=False,
    has_sqrt=True,
    dtype=np.float64,
    machine_epsilon=float(np.finfo(np.float64).eps),
)

RATIONAL = ScalarKind(
    "rational",
    exact=True,
    has_sqrt=False,
    dtype=object,
    machine_epsilon=None,
)

KINDS = {FLOAT64.name: FLOAT64, RATIONAL.name: RATIONAL}
