"""Metric Lie algebras, Levi-Civita connection and curvature of left-invariant metrics.

Vectors of the algebra ("algebra vectors") are plain 1-D ndarrays of frame
coefficients.  Indices are 0-based internally; the JSON format is 1-based.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import json

import numpy as np

from ._scalars import (
    FLOAT_TOL,
    InputError,
    as_array,
    eye,
    inverse,
    is_exact,
    max_abs,
    promote,
    to_float,
)


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """Structure constants ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``
    together with an inner product ``metric`` on the frame (identity by default).
    """

    structure: np.ndarray
    metric: np.ndarray = None
    labels: tuple = None
    check_jacobi: bool = field(default=True, repr=False)

    def __post_init__(self):
        c = self.structure
        if not isinstance(c, np.ndarray) or c.dtype == object:
            c = as_array(c)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise InputError(f"structure constants must have shape (d, d, d), got {c.shape}")
        d = c.shape[0]
        g = self.metric
        if g is None:
            g = eye(d, is_exact(c))
        elif not isinstance(g, np.ndarray) or g.dtype == object:
            g = as_array(g)
        if g.shape != (d, d):
            raise InputError(f"metric must be {d}x{d}, got {g.shape}")
        c, g = promote(c, g)
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "metric", g)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(d)))
        elif len(self.labels) != d:
            raise InputError("one label per frame vector required")

        if not self._close(c + np.swapaxes(c, 0, 1)):
            raise InputError("structure constants are not antisymmetric")
        if not self._close(g - g.T):
            raise InputError("metric is not symmetric")
        if np.min(np.linalg.eigvalsh(to_float(g))) <= 0:
            raise InputError("metric is not positive definite")
        if self.check_jacobi and not self._close(self.jacobi_tensor()):
            raise InputError(f"Jacobi identity fails (residual {float(self.jacobi_residual()):.3g})")

    def _close(self, arr):
        r = max_abs(arr)
        return r == 0 if self.exact else r < FLOAT_TOL

    @property
    def dim(self):
        return self.structure.shape[0]

    @property
    def exact(self):
        return is_exact(self.structure)

    @property
    def orthonormal(self):
        return max_abs(self.metric - eye(self.dim, self.exact)) == 0

    def vector(self, coeffs):
        """Validate and convert frame coefficients to an algebra vector."""
        v = coeffs if isinstance(coeffs, np.ndarray) else as_array(coeffs)
        if v.shape != (self.dim,):
            raise InputError(f"expected {self.dim} coefficients, got shape {v.shape}")
        return v

    def basis(self, i):
        v = eye(self.dim, self.exact)[i]
        return v

    def inner(self, x, y):
        x, y, g = promote(x, y, self.metric)
        return x @ g @ y

    def jacobi_tensor(self):
        """J[i, j, k, :] = [[e_i, e_j], e_k] + cyclic."""
        c = self.structure
        t = np.einsum("ijm,mkl->ijkl", c, c)
        return t + np.einsum("jkil->ijkl", t) + np.einsum("kijl->ijkl", t)

    def jacobi_residual(self):
        return max_abs(self.jacobi_tensor())

    def as_float(self):
        if not self.exact:
            return self
        return MetricLieAlgebra(to_float(self.structure), to_float(self.metric), self.labels)

    def orthonormalized(self):
        """Return an equivalent algebra in a g-orthonormal frame and the change of basis.

        ``P`` has the new frame vectors as columns (old coordinates); an algebra
        vector ``x`` in the old frame has coordinates ``solve(P, x)`` in the new one.
        """
        if self.orthonormal:
            return self, eye(self.dim, self.exact)
        g = to_float(self.metric)
        L = np.linalg.cholesky(g)
        P = np.linalg.inv(L).T
        Pinv = np.linalg.inv(P)
        c = np.einsum("ia,jb,ijk,ck->abc", P, P, to_float(self.structure), Pinv)
        return MetricLieAlgebra(c, None, self.labels), P

    @classmethod
    def from_dict(cls, doc):
        try:
            d = int(doc["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("algebra document needs an integer 'dim'") from exc
        if d < 1:
            raise InputError("dim must be positive")
        entries = []
        for item in doc.get("structure", []):
            if len(item) != 4:
                raise InputError(f"structure entry {item!r} is not [i, j, k, value]")
            i, j, k, val = item
            if not all(isinstance(t, int) and 1 <= t <= d for t in (i, j, k)):
                raise InputError(f"structure entry {item!r} has an index outside 1..{d}")
            entries.append((i - 1, j - 1, k - 1, _parse_scalar(val)))
        vals = [e[3] for e in entries]
        metric = doc.get("metric")
        mvals = [] if metric is None else [_parse_scalar(x) for x in metric]
        exact = all(not isinstance(x, float) for x in vals + mvals)
        c = as_array(np.zeros((d, d, d), dtype=int).tolist(), exact=exact)
        for i, j, k, val in entries:
            c[i, j, k] = as_array([val], exact=exact)[0]
            c[j, i, k] = -c[i, j, k]
        g = None
        if metric is not None:
            if len(mvals) != d * d:
                raise InputError(f"metric must have {d * d} row-major entries")
            g = as_array(mvals, exact=exact).reshape(d, d)
        labels = doc.get("labels")
        return cls(c, g, tuple(labels) if labels else None)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        d = self.dim
        c = self.structure
        structure = []
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(d):
                    if c[i, j, k] != 0:
                        structure.append([i + 1, j + 1, k + 1, _dump_scalar(c[i, j, k])])
        doc = {"dim": d, "structure": structure}
        if not self.orthonormal:
            doc["metric"] = [_dump_scalar(x) for x in self.metric.ravel()]
        doc["labels"] = list(self.labels)
        return doc


def _parse_scalar(x):
    if isinstance(x, bool):
        raise InputError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise InputError(f"cannot parse scalar {x!r}") from exc
    raise InputError(f"cannot parse scalar {x!r}")


def _dump_scalar(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return float(x)


def _check_same_dim(alg_dim, *vectors):
    for v in vectors:
        if np.shape(v) != (alg_dim,):
            raise InputError(f"expected a vector of length {alg_dim}, got shape {np.shape(v)}")


def bracket(alg, x, y):
    """Lie bracket of two algebra vectors."""
    _check_same_dim(alg.dim, x, y)
    x, y, c = promote(np.asarray(x), np.asarray(y), alg.structure)
    return np.einsum("i,j,ijk->k", x, y, c)


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """``gamma[i, j] = nabla_{e_i} e_j`` as frame coefficients."""

    gamma: np.ndarray
    algebra: MetricLieAlgebra = field(repr=False)

    def covariant(self, x, y):
        """nabla_x y for left-invariant x, y."""
        x, y, gm = promote(np.asarray(x), np.asarray(y), self.gamma)
        return np.einsum("i,j,ijk->k", x, y, gm)


def koszul_connection(alg):
    """Levi-Civita connection of the left-invariant metric via the Koszul formula.

    2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
    """
    c, g = alg.structure, alg.metric
    cf = np.einsum("ijl,lk->ijk", c, g)  # g([e_i, e_j], e_k)
    half = as_array([1], exact=alg.exact)[0] / 2
    k = half * (cf - np.einsum("jki->ijk", cf) + np.einsum("kij->ijk", cf))
    if alg.orthonormal:
        gamma = k
    else:
        gamma = np.einsum("ijk,kl->ijl", k, inverse(g))
    return ConnectionTable(gamma, alg)


def torsion_defect(conn):
    """max |nabla_i e_j - nabla_j e_i - [e_i, e_j]|."""
    gm = conn.gamma
    return max_abs(gm - np.swapaxes(gm, 0, 1) - conn.algebra.structure)


def metric_compatibility_defect(conn):
    """max |g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)| (constant metric coefficients)."""
    low = np.einsum("ijl,lk->ijk", conn.gamma, conn.algebra.metric)
    return max_abs(low + np.swapaxes(low, 1, 2))


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """``r[i, j, k] = R(e_i, e_j) e_k``.

    Sign convention: R(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_{[X,Y]} Z,
    so that on the oscillator algebra R(e_i, xi)xi = -1/4 e_i.  The operator
    ``standard`` is the opposite sign, [nabla_X, nabla_Y] - nabla_{[X,Y]}.
    """

    r: np.ndarray
    algebra: MetricLieAlgebra = field(repr=False)

    @property
    def standard(self):
        return -self.r


def curvature(alg, conn):
    gm, c = promote(conn.gamma, alg.structure)
    # nabla_i (nabla_j e_k)
    second = np.einsum("jkm,iml->ijkl", gm, gm)
    std = second - np.swapaxes(second, 0, 1) - np.einsum("ijm,mkl->ijkl", c, gm)
    return CurvatureTensor(-std, alg)


def evaluate_curvature(cur, x, y, z):
    """R(x, y) z, trilinear contraction of the stored tensor."""
    _check_same_dim(cur.algebra.dim, x, y, z)
    x, y, z, r = promote(np.asarray(x), np.asarray(y), np.asarray(z), cur.r)
    return np.einsum("i,j,k,ijkl->l", x, y, z, r)


def curvature_defects(cur):
    """Residuals of the algebraic curvature identities (antisymmetry, Bianchi, pair symmetry)."""
    r = cur.r
    low = np.einsum("ijkm,ml->ijkl", r, cur.algebra.metric)  # g(R(e_i,e_j)e_k, e_l)
    return {
        "antisymmetry": max_abs(r + np.swapaxes(r, 0, 1)),
        "bianchi": max_abs(r + np.einsum("jkil->ijkl", r) + np.einsum("kijl->ijkl", r)),
        "pair_symmetry": max_abs(low - np.einsum("klij->ijkl", low)),
    }


def abelian_algebra(dim, metric=None):
    c = as_array(np.zeros((dim, dim, dim), dtype=int).tolist())
    return MetricLieAlgebra(c, metric)
