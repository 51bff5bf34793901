"""Extrinsic geometry of the graph of a left-invariant unit vector field in (T_1 M, g_S).

All routines take the Nomizu data ``A_V X = -nabla_X V`` of a unit field and work
algebraically: every covariant derivative of left-invariant data reduces to the
connection table, so no directional derivatives of coefficients appear.

Frame sums (Laplacian, traces, singular frames) assume the algebra's frame is
orthonormal; ``classify`` orthonormalizes other metrics first.

The curvature terms (harmonicity tensor, second fundamental form, mean
curvature) use the operator ``R(X,Y) = [nabla_X, nabla_Y] - nabla_{[X,Y]}``,
i.e. ``CurvatureTensor.standard``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from ._scalars import (
    FLOAT_TOL,
    InputError,
    eye,
    inverse,
    is_exact,
    max_abs,
    promote,
    to_float,
)
from .lie_metric import MetricLieAlgebra, curvature, koszul_connection

DEFAULT_TOL = 1e-9
SINGULAR_TOL = 1e-10


def _sqrt(x):
    return math.sqrt(float(x))


def _require_orthonormal(alg):
    if not alg.orthonormal:
        raise InputError("frame sums need an orthonormal frame; use MetricLieAlgebra.orthonormalized()")


def _require_unit(alg, v):
    n2 = alg.inner(v, v)
    ok = n2 == 1 if isinstance(n2, Fraction) else abs(n2 - 1) < FLOAT_TOL
    if not ok:
        raise InputError(f"field is not unit: g(V, V) = {float(n2)!r}")


@dataclass(frozen=True, eq=False)
class NomizuData:
    """Matrix of A_V in the frame (column j is A_V e_j) together with V itself."""

    a: np.ndarray
    v: np.ndarray
    algebra: MetricLieAlgebra = field(repr=False)

    @property
    def adjoint(self):
        g = self.algebra.metric
        if self.algebra.orthonormal:
            return self.a.T
        a, g = promote(self.a, g)
        return inverse(g) @ a.T @ g

    def apply(self, x):
        a, x = promote(self.a, np.asarray(x))
        return a @ x

    def norm_sq(self):
        """|A_V|^2 = trace(A^t A)."""
        a = self.a
        return np.einsum("ij,ji->", self.adjoint, a) if not self.algebra.orthonormal else np.sum(a * a)


def nomizu(alg, conn, v):
    v = alg.vector(v)
    _require_unit(alg, v)
    gm, vv = promote(conn.gamma, v)
    a = -np.einsum("jik,i->kj", gm, vv)
    return NomizuData(a, vv, alg)


@dataclass(frozen=True)
class SingularFrame:
    """sigmas descending; ``right[i]`` = e_i, ``left[i]`` = f_i, with ``left[-1]`` = V."""

    sigmas: np.ndarray
    right: np.ndarray
    left: np.ndarray

    @property
    def rank(self):
        return int(np.count_nonzero(self.sigmas))


def singular_frame(nom, tol=SINGULAR_TOL):
    _require_orthonormal(nom.algebra)
    a = to_float(nom.a)
    v = to_float(nom.v)
    d = a.shape[0]
    u, s, wt = np.linalg.svd(a)
    scale = max(1.0, s[0]) if d else 1.0
    rank = int(np.count_nonzero(s > tol * scale))
    # V spans part of ker A^t, so at least one singular value vanishes
    rank = min(rank, d - 1)
    sig = np.where(np.arange(d) < rank, s, 0.0)
    left = np.empty((d, d))
    left[:rank] = u[:, :rank].T
    if d - rank > 1:
        ur = u[:, :rank]
        proj = np.eye(d) - ur @ ur.T - np.outer(v, v)
        _, q = np.linalg.eigh(proj)
        left[rank:d - 1] = q[:, -(d - rank - 1):].T
    left[d - 1] = v
    return SingularFrame(sig, wt.copy(), left)


def reconstruct(sf):
    """A_V rebuilt from the singular frame: sum sigma_a f_a e_a^T."""
    return np.einsum("a,ak,aj->kj", sf.sigmas, sf.left, sf.right)


@dataclass(frozen=True)
class SasakiVector:
    horizontal: np.ndarray
    vertical: np.ndarray

    def inner(self, other):
        """Sasaki inner product for an orthonormal base frame."""
        return float(np.dot(self.horizontal, other.horizontal) + np.dot(self.vertical, other.vertical))


def tangent_normal_framing(nom, sf):
    """Orthonormal tangent frame of V(M) and normal frame, both in T(TM).

    Tangent: V_* e_a = e_a^h - (A_V e_a)^v, normalized.  Normal: n(f_a) =
    (A_V^t f_a)^h + f_a^v, normalized.  The last normal is V^v, the unit normal
    of T_1 M itself; the first ``dim - 1`` normals span the normal space of
    V(M) inside T_1 M.
    """
    tangent, normal = [], []
    for s, e, f in zip(sf.sigmas, sf.right, sf.left):
        c = 1.0 / math.sqrt(1.0 + s * s)
        tangent.append(SasakiVector(c * e, -c * s * f))
        normal.append(SasakiVector(c * s * e, c * f))
    return tangent, normal


def sasaki_gram(vectors):
    return np.array([[p.inner(q) for q in vectors] for p in vectors])


# ---- derivative and curvature tensors -------------------------------------

def _nabla_a(conn, nom):
    """DA[x, y] = (nabla_{e_x} A_V) e_y = nabla_x(A e_y) - A(nabla_x e_y)."""
    gm, a = promote(conn.gamma, nom.a)
    return np.einsum("xmk,my->xyk", gm, a) - np.einsum("km,xym->xyk", a, gm)


def _r_va(cur, nom):
    """T[x, y] = R(V, A_V e_x) e_y."""
    rs, a, v = promote(cur.standard, nom.a, nom.v)
    return np.einsum("i,jx,ijyl->xyl", v, a, rs)


def _bilinear(t, x, y):
    t, x, y = promote(t, np.asarray(x), np.asarray(y))
    return np.einsum("x,y,xyk->k", x, y, t)


def _sym(t):
    return (t + np.swapaxes(t, 0, 1)) / 2


def _frame(alg, frame):
    if frame is None:
        return eye(alg.dim, alg.exact)
    f = np.asarray(frame)
    if f.shape != (alg.dim, alg.dim):
        raise InputError("frame must be dim x dim, one vector per row")
    return f


def hess(conn, nom, x, y):
    """Rough V-Hessian, symmetric in (x, y)."""
    return _bilinear(_sym(_nabla_a(conn, nom)), x, y)


def hm(cur, nom, x, y):
    """V-harmonicity tensor 1/2 (R(V, A x) y + R(V, A y) x)."""
    return _bilinear(_sym(_r_va(cur, nom)), x, y)


def rough_laplacian(conn, nom, frame=None):
    """sum_i (nabla_{e_i} A_V) e_i over an orthonormal frame (rows of ``frame``)."""
    _require_orthonormal(nom.algebra)
    f = _frame(nom.algebra, frame)
    da, f = promote(_nabla_a(conn, nom), f)
    return np.einsum("ri,rj,ijk->k", f, f, da)


def hm_trace(cur, nom, frame=None):
    """sum_i R(V, A_V e_i) e_i."""
    _require_orthonormal(nom.algebra)
    f = _frame(nom.algebra, frame)
    t, f = promote(_r_va(cur, nom), f)
    return np.einsum("ri,rj,ijk->k", f, f, t)


def _sq(vec):
    return np.dot(vec, vec)


def laplacian_defect(conn, nom):
    lap = rough_laplacian(conn, nom)
    lap, v = promote(lap, nom.v)
    return lap - nom.norm_sq() * v


def is_harmonic(conn, nom, tol=DEFAULT_TOL):
    """(verdict, defect) with defect = |lap V - |A_V|^2 V|."""
    d = laplacian_defect(conn, nom)
    return _verdict(_sq(d), tol), _sqrt(_sq(d))


def second_fundamental_form(conn, cur, nom, x, y, z):
    """g(Hess_V(x, y) + A_V Hm_V(x, y), z - g(z, V) V)."""
    alg = nom.algebra
    z = alg.vector(z)
    h = hess(conn, nom, x, y)
    m = nom.apply(hm(cur, nom, x, y))
    zp = z - alg.inner(z, nom.v) * nom.v
    return alg.inner(h + m, zp)


def _tgf_tensor(conn, cur, nom):
    a = nom.a
    hs = _sym(_nabla_a(conn, nom))
    hmt = _sym(_r_va(cur, nom))
    hs, hmt, a, v = promote(hs, hmt, a, nom.v)
    ahm = np.einsum("km,xym->xyk", a, hmt)
    gram = a.T @ a
    return hs + ahm - np.einsum("xy,k->xyk", gram, v)


def tgf_residual(conn, cur, nom):
    """max over frame pairs of |Hess + A Hm - g(A e_i, A e_j) V|; zero iff totally geodesic."""
    _require_orthonormal(nom.algebra)
    return _sqrt(_tgf_sq(conn, cur, nom))


def _tgf_sq(conn, cur, nom):
    t = _tgf_tensor(conn, cur, nom)
    sq = np.einsum("xyk,xyk->xy", t, t)
    return max(sq.ravel())


def _b_tensor(conn, cur, nom):
    """B[x, y] = (nabla_x A) y + A R(V, A x) y; its weighted trace is the H-check vector."""
    da = _nabla_a(conn, nom)
    t = _r_va(cur, nom)
    da, t, a = promote(da, t, nom.a)
    return da + np.einsum("km,xym->xyk", a, t)


def check_h(conn, cur, nom, sf):
    """sum_i [(nabla_{e_i} A) e_i + A R(V, A e_i) e_i] / (1 + sigma_i^2) over the right singular frame."""
    _require_orthonormal(nom.algebra)
    b = to_float(_b_tensor(conn, cur, nom))
    w = 1.0 / (1.0 + sf.sigmas ** 2)
    return np.einsum("a,ai,aj,ijk->k", w, sf.right, sf.right, b)


def check_h_contracted(conn, cur, nom):
    """Same vector as ``check_h`` computed without any singular frame.

    sum_i e_i e_i^T / (1 + sigma_i^2) = (I + A^T A)^{-1}, the inverse of the
    pull-back metric, so the weighted trace is a contraction with that matrix.
    Rational inputs give an exact result.
    """
    _require_orthonormal(nom.algebra)
    a = nom.a
    w = inverse(eye(a.shape[0], is_exact(a)) + a.T @ a)
    b, w = promote(_b_tensor(conn, cur, nom), w)
    return np.einsum("xy,xyk->k", w, b)


def normal_part(vec, v):
    vec, v = promote(vec, v)
    return vec - np.dot(vec, v) * v


def mean_curvature_norm(conn, cur, nom, sf=None):
    """|H_check - g(H_check, V) V|: zero iff V is minimal.

    With ``sf`` the sum runs in the singular frame; without it the frame-free
    contraction is used (exact on rational data).
    """
    h = check_h(conn, cur, nom, sf) if sf is not None else check_h_contracted(conn, cur, nom)
    return _sqrt(_sq(normal_part(h, nom.v)))


def mean_curvature_coefficients(conn, cur, nom, sf, normalized=True):
    """Components of H_V along the unit normals of V(M) in T_1 M.

    Entry a is g(H_check, f_a) / sqrt(1 + sigma_a^2) for a < dim - 1, times
    1/dim when ``normalized``.
    """
    h = check_h(conn, cur, nom, sf)
    d = len(sf.sigmas)
    coef = np.array([np.dot(h, sf.left[a]) / math.sqrt(1 + sf.sigmas[a] ** 2) for a in range(d - 1)])
    return coef / d if normalized else coef


def pullback_metric(nom, x, y):
    """g_V(x, y) = g(x, y) + g(A_V x, A_V y)."""
    alg = nom.algebra
    return alg.inner(x, y) + alg.inner(nom.apply(x), nom.apply(y))


def geodesic_defect(nom):
    """nabla_V V = -A_V V."""
    return -nom.apply(nom.v)


def _verdict(sq, tol):
    if tol is None:
        return sq == 0 if isinstance(sq, Fraction) else math.sqrt(sq) < DEFAULT_TOL
    return _sqrt(sq) < tol


@dataclass(frozen=True)
class GeometryReport:
    mean_curvature_norm: float
    tgf_residual_norm: float
    laplacian_defect_norm: float
    hm_trace_norm: float
    geodesic_defect_norm: float
    singular_values: list
    minimal: bool
    harmonic: bool
    harmonic_map: bool
    totally_geodesic: bool
    geodesic: bool

    @property
    def residuals(self):
        return {
            "mean_curvature": self.mean_curvature_norm,
            "tgf": self.tgf_residual_norm,
            "laplacian_defect": self.laplacian_defect_norm,
            "hm_trace": self.hm_trace_norm,
            "geodesic_defect": self.geodesic_defect_norm,
        }

    @property
    def verdicts(self):
        return {
            "minimal": self.minimal,
            "harmonic": self.harmonic,
            "harmonic_map": self.harmonic_map,
            "totally_geodesic": self.totally_geodesic,
            "geodesic": self.geodesic,
        }


def classify(alg, v, tol=None, conn=None, cur=None):
    """Compute every residual for the unit field ``v`` and threshold them.

    ``tol=None`` means exact comparison with zero on the exact path and
    ``DEFAULT_TOL`` otherwise.  ``conn``/``cur`` may be passed in to reuse them
    across many fields of one algebra.
    """
    v = alg.vector(v)
    if not alg.orthonormal:
        alg, p = alg.orthonormalized()
        v = np.linalg.solve(p, to_float(v))
        conn = cur = None
    if conn is None:
        conn = koszul_connection(alg)
    if cur is None:
        cur = curvature(alg, conn)
    nom = nomizu(alg, conn, v)
    sf = singular_frame(nom)

    if is_exact(nom.a) and is_exact(cur.r):
        h = check_h_contracted(conn, cur, nom)
    else:
        h = check_h(conn, cur, nom, sf)
    mc_sq = _sq(normal_part(h, nom.v))
    tgf_sq = _tgf_sq(conn, cur, nom)
    lap_sq = _sq(laplacian_defect(conn, nom))
    hmt_sq = _sq(hm_trace(cur, nom))
    geo_sq = _sq(geodesic_defect(nom))

    harmonic = _verdict(lap_sq, tol)
    tg = _verdict(tgf_sq, tol)
    minimal = _verdict(mc_sq, tol)
    return GeometryReport(
        mean_curvature_norm=_sqrt(mc_sq),
        tgf_residual_norm=_sqrt(tgf_sq),
        laplacian_defect_norm=_sqrt(lap_sq),
        hm_trace_norm=_sqrt(hmt_sq),
        geodesic_defect_norm=_sqrt(geo_sq),
        singular_values=[float(s) for s in sf.sigmas],
        minimal=minimal,
        harmonic=harmonic,
        harmonic_map=harmonic and _verdict(hmt_sq, tol),
        totally_geodesic=tg,
        geodesic=_verdict(geo_sq, tol),
    )
