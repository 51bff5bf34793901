"""Scalar plumbing for the exact (Fraction) and floating (float64) paths.

Arrays on the exact path are numpy ``object`` arrays holding ``Fraction``
entries; everything else is ``float64``.  Mixing the two promotes to float.
"""
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

FLOAT_TOL = 1e-12


class InputError(ValueError):
    """Malformed input: wrong shapes, dimension mismatch, invariant violation."""


class DomainError(ValueError):
    """A closed-form routine was called outside its range of validity."""


class ConventionError(RuntimeError):
    """Computed curvature disagrees with the reference sign convention."""


def _is_exact_scalar(x):
    return isinstance(x, (Integral, Rational)) and not isinstance(x, bool)


def as_array(values, exact=None):
    """Convert nested sequences to an exact or float ndarray.

    With ``exact=None`` the path is chosen from the data: all-rational input
    stays exact.
    """
    if isinstance(values, np.ndarray) and values.dtype != object:
        if exact:
            raise InputError("cannot lift a float array onto the exact path")
        return values.astype(float)
    arr = np.array(values, dtype=object)
    flat = arr.ravel()
    rational = all(_is_exact_scalar(x) for x in flat)
    if exact is None:
        exact = rational
    if exact:
        if not rational:
            raise InputError("exact path requires rational entries")
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = [Fraction(x) for x in flat]
        return out
    return arr.astype(float)


def is_exact(arr):
    return isinstance(arr, np.ndarray) and arr.dtype == object


def promote(*arrays):
    """Bring arrays onto a common path (float wins)."""
    if all(is_exact(a) for a in arrays):
        return arrays
    return tuple(a.astype(float) if is_exact(a) else a for a in arrays)


def zeros(shape, exact):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def eye(n, exact):
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def to_float(arr):
    return np.asarray(arr, dtype=float)


def max_abs(arr):
    """Max-norm of an array; exact zero stays ``Fraction(0)`` on the exact path."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0.0
    if is_exact(arr):
        return max(abs(x) for x in arr.ravel())
    return float(np.max(np.abs(arr)))


def is_zero(value, tol=FLOAT_TOL):
    """Exact comparison for Fractions, absolute tolerance for floats."""
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) < tol


def inverse(m):
    """Matrix inverse on either path; the exact path goes through sympy."""
    if not is_exact(m):
        return np.linalg.inv(m)
    import sympy

    sm = sympy.Matrix(m.shape[0], m.shape[1],
                      [sympy.Rational(x.numerator, x.denominator) for x in m.ravel()])
    if sm.det() == 0:
        raise np.linalg.LinAlgError("singular metric")
    inv = sm.inv()
    out = np.empty(m.shape, dtype=object)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            q = inv[i, j]
            out[i, j] = Fraction(int(q.p), int(q.q))
    return out
