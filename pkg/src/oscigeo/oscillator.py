"""Closed forms on the oscillator algebra g_n(lambda) and the Heisenberg algebra h(n, 1).

Frame order: e_1..e_n, e_{n+1}..e_{2n}, xi, zeta (0-based indices 0..2n+1).
The Heisenberg algebra is the same frame without zeta.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._scalars import ConventionError, DomainError, InputError, as_array, is_exact, max_abs, promote, zeros
from .field_geometry import NomizuData
from .lie_metric import MetricLieAlgebra


def _labels(n, with_zeta=True):
    lab = [f"e{i + 1}" for i in range(2 * n)] + ["ξ"]
    return tuple(lab + ["ζ"]) if with_zeta else tuple(lab)


@dataclass(frozen=True)
class OscillatorSpec:
    n: int
    lam: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError("n must be a positive integer")
        lam = tuple(self.lam)
        if len(lam) != self.n:
            raise InputError(f"need {self.n} lambda values, got {len(lam)}")
        if any(x == 0 for x in lam):
            raise InputError("lambda entries must be nonzero")
        object.__setattr__(self, "lam", lam)

    @property
    def dim(self):
        return 2 * self.n + 2

    @property
    def xi(self):
        return 2 * self.n

    @property
    def zeta(self):
        return 2 * self.n + 1

    def lam_array(self):
        return as_array(list(self.lam))

    def e_lambda(self):
        """bold E_lambda = diag(lambda, lambda) on X + Y, zero on xi, zeta."""
        lam = self.lam_array()
        out = zeros(self.dim, is_exact(lam))
        out[: self.n] = lam
        out[self.n: 2 * self.n] = lam
        return out


def oscillator_algebra(spec):
    """[e_i, e_{n+j}] = delta_ij xi, [zeta, e_j] = lambda_j e_{n+j}, [zeta, e_{n+j}] = -lambda_j e_j."""
    n = spec.n
    lam = spec.lam_array()
    c = zeros((spec.dim,) * 3, is_exact(lam))
    xi, ze = spec.xi, spec.zeta
    for i in range(n):
        c[i, n + i, xi] = 1
        c[n + i, i, xi] = -1
        c[ze, i, n + i] = lam[i]
        c[i, ze, n + i] = -lam[i]
        c[ze, n + i, i] = -lam[i]
        c[n + i, ze, i] = lam[i]
    return MetricLieAlgebra(c, labels=_labels(n))


def heisenberg_algebra(n, exact=True):
    if not isinstance(n, int) or n < 1:
        raise InputError("n must be a positive integer")
    d = 2 * n + 1
    c = zeros((d, d, d), exact)
    for i in range(n):
        c[i, n + i, 2 * n] = 1
        c[n + i, i, 2 * n] = -1
    return MetricLieAlgebra(c, labels=_labels(n, with_zeta=False))


def phi_matrix(n, with_zeta=True, exact=True):
    """phi e_i = e_{n+i}, phi e_{n+i} = -e_i, phi xi = phi zeta = 0."""
    d = 2 * n + (2 if with_zeta else 1)
    m = zeros((d, d), exact)
    for i in range(n):
        m[n + i, i] = 1
        m[i, n + i] = -1
    return m


def phi(spec, x):
    m, x = promote(phi_matrix(spec.n), np.asarray(x))
    return m @ x


@dataclass(frozen=True)
class FieldDecomposition:
    """V = V_X + V_Y + eta xi + theta zeta."""

    v_x: np.ndarray
    v_y: np.ndarray
    eta: object
    theta: object

    @classmethod
    def from_vector(cls, spec, v):
        v = v if isinstance(v, np.ndarray) else as_array(v)
        if v.shape != (spec.dim,):
            raise InputError(f"expected {spec.dim} coefficients")
        n = spec.n
        return cls(v[:n].copy(), v[n: 2 * n].copy(), v[spec.xi], v[spec.zeta])

    def to_vector(self):
        return np.concatenate([self.v_x, self.v_y, np.array([self.eta, self.theta], dtype=self.v_x.dtype)])

    def block_weights(self):
        """a_i^2 + a_{n+i}^2 for each block i."""
        return self.v_x * self.v_x + self.v_y * self.v_y

    def on_xy(self, tol=0):
        if is_exact(self.v_x) and tol == 0:
            return self.eta == 0 and self.theta == 0
        return abs(self.eta) <= tol and abs(self.theta) <= tol


def _inner(x, y):
    x, y = promote(np.asarray(x), np.asarray(y))
    return x @ y


def closed_nomizu(spec, dec, z):
    """A_V z = 1/2 eta(V) phi z + 1/2 eta(z) phi V - theta(z) E_lambda phi V + 1/2 g(phi V, z) xi."""
    v = dec.to_vector()
    z = z if isinstance(z, np.ndarray) else as_array(z)
    if z.shape != (spec.dim,):
        raise InputError(f"expected {spec.dim} coefficients")
    v, z, el = promote(v, z, spec.e_lambda())
    pv = phi(spec, v)
    out = dec.eta * phi(spec, z) / 2 + z[spec.xi] * pv / 2 - z[spec.zeta] * el * pv
    out = out.copy()
    out[spec.xi] = out[spec.xi] + _inner(pv, z) / 2
    return out


def nomizu_matrix(spec, dec, algebra=None):
    """Block matrix of A_V in the canonical frame (rows/cols X, Y, xi, zeta)."""
    n = spec.n
    vx, vy = dec.v_x, dec.v_y
    v = dec.to_vector()
    lam = spec.lam_array()
    vx, vy, lam, v = promote(vx, vy, lam, v)
    exact = is_exact(v)
    a = zeros((spec.dim, spec.dim), exact)
    half = Fraction(1, 2) if exact else 0.5
    for i in range(n):
        a[i, n + i] = -half * dec.eta
        a[n + i, i] = half * dec.eta
    a[:n, spec.xi] = -half * vy
    a[:n, spec.zeta] = lam * vy
    a[n: 2 * n, spec.xi] = half * vx
    a[n: 2 * n, spec.zeta] = -lam * vx
    a[spec.xi, :n] = -half * vy
    a[spec.xi, n: 2 * n] = half * vx
    if algebra is None:
        algebra = oscillator_algebra(spec)
    return NomizuData(a, v, algebra)


def closed_curvature(spec, x, y, z, standard=False):
    """R(x, y) z from the invariant five-term expression.

    The five-term expression itself is the operator [nabla_x, nabla_y] - nabla_[x,y]
    (R(e_i, xi) xi = +1/4 e_i); by default it is negated to match
    ``CurvatureTensor.r``, where R(e_i, xi) xi = -1/4 e_i.  ``standard=True``
    returns it unchanged, matching ``CurvatureTensor.standard``.
    """
    x, y, z = (w if isinstance(w, np.ndarray) else as_array(w) for w in (x, y, z))
    for w in (x, y, z):
        if w.shape != (spec.dim,):
            raise InputError(f"expected {spec.dim} coefficients")
    x, y, z = promote(x, y, z)
    exact = is_exact(x)
    q = Fraction(1, 4) if exact else 0.25
    xi_vec = zeros(spec.dim, exact)
    xi_vec[spec.xi] = 1
    ze_vec = zeros(spec.dim, exact)
    ze_vec[spec.zeta] = 1
    px, py, pz = phi(spec, x), phi(spec, y), phi(spec, z)
    ex, ey, ez = x[spec.xi], y[spec.xi], z[spec.xi]
    tx, ty, tz = x[spec.zeta], y[spec.zeta], z[spec.zeta]
    out = (
        2 * q * _inner(px, y) * pz
        + q * (_inner(px, z) * py - _inner(py, z) * px)
        + q * (ey * x - ex * y) * ez
        + q * (ex * _inner(y, z) - ey * _inner(x, z)) * xi_vec
        + q * (ex * ty - ey * tx) * (ez * ze_vec - tz * xi_vec)
    )
    return out if standard else -out


def check_curvature_convention(spec, cur):
    """Raise ConventionError unless ``cur`` has R(e_i, xi) xi = -1/4 e_i for every i."""
    exact = is_exact(cur.r)
    for i in range(2 * spec.n):
        want = zeros(spec.dim, exact)
        want[i] = -(Fraction(1, 4) if exact else 0.25)
        got, want = promote(cur.r[i, spec.xi, spec.xi], want)
        dev = max_abs(got - want)
        if (dev != 0) if exact else (dev > 1e-12):
            raise ConventionError(f"R(e{i + 1}, xi) xi deviates from -1/4 e{i + 1} by {float(dev):.3g}")


def singular_poly(spec, dec):
    """Coefficients (1, b, c) of mu^2 + b mu + c whose roots are the remaining sigma^2."""
    if not dec.on_xy():
        raise DomainError("closed form needs eta(V) = theta(V) = 0")
    lam = spec.lam_array()
    w, lam = promote(dec.block_weights(), lam)
    m1 = np.sum(lam * w)
    m2 = np.sum(lam * lam * w)
    q = Fraction(1, 4) if is_exact(w) else 0.25
    one = Fraction(1) if is_exact(w) else 1.0
    return one, -(q + m2), q * (m2 - m1 * m1)


def singular_poly_coordinate_c(spec, dec):
    """Constant term written as 1/8 sum_{i,j} (lambda_i - lambda_j)^2 w_i w_j."""
    lam = spec.lam_array()
    w, lam = promote(dec.block_weights(), lam)
    diff = lam[:, None] - lam[None, :]
    return np.sum(diff * diff * np.outer(w, w)) / 8


def singular_poly_roots(spec, dec):
    _, b, c = singular_poly(spec, dec)
    b, c = float(b), float(c)
    disc = max(b * b - 4 * c, 0.0)
    r = np.sqrt(disc)
    return sorted([(-b + r) / 2, (-b - r) / 2], reverse=True)


def sigma_squared_closed(spec, dec):
    """Full sigma^2 multiset {0^(2n-1), 1/4} + poly roots, descending."""
    vals = [0.0] * (2 * spec.n - 1) + [0.25] + singular_poly_roots(spec, dec)
    return sorted(vals, reverse=True)


def _weights_tol(w, tol):
    return [wi > tol for wi in w] if tol else [wi != 0 for wi in w]


def block_weight_spread(spec, dec, tol=0):
    """Spread of d_i = 5/4 lambda_i^2 - 1/2 (V^t E V) lambda_i over the blocks V touches."""
    lam = spec.lam_array()
    w, lam = promote(dec.block_weights(), lam)
    exact = is_exact(w)
    m1 = np.sum(lam * w)
    five4 = Fraction(5, 4) if exact else 1.25
    half = Fraction(1, 2) if exact else 0.5
    d = five4 * lam * lam - half * m1 * lam
    support = [di for di, keep in zip(d, _weights_tol(w, tol)) if keep]
    return max(support) - min(support)


def classify_minimal_xy(spec, dec, tol=None):
    """Minimality of a unit V with eta = theta = 0, decided in closed form.

    In the singular frame the mean-curvature check vector reduces to
    c V + D V with D = diag over blocks of 5/4 lambda_i^2 - 1/2 (V^t E V) lambda_i,
    so V is minimal iff that weight is constant on every block V touches.
    With all lambda_i equal this always holds; with lambda_i = +-lambda it
    holds iff V^t E V = 0 or V lives on blocks of one sign.
    """
    if not dec.on_xy(0 if tol is None else tol):
        raise DomainError("closed form needs eta(V) = theta(V) = 0")
    if tol is None:
        tol = 0 if is_exact(dec.v_x) else 1e-9
    spread = block_weight_spread(spec, dec, tol=tol)
    return spread == 0 if tol == 0 else abs(float(spread)) < tol


def minimal_xy_by_modulus(spec, dec, tol=1e-9):
    """The coarser rule: minimal iff all lambda_i^2 agree and, when signs differ,
    V^t E V = 0.  Misses fields supported on a subset of blocks; kept for comparison."""
    if not dec.on_xy(tol):
        raise DomainError("closed form needs eta(V) = theta(V) = 0")
    lam = [float(x) for x in spec.lam]
    if max(x * x for x in lam) - min(x * x for x in lam) > tol:
        return False
    if max(lam) - min(lam) <= tol:
        return True
    w = [float(x) for x in dec.block_weights()]
    return abs(sum(l * wi for l, wi in zip(lam, w))) < tol


def harmonic_map_set_membership(spec, dec, tol=1e-9):
    """V in {+-xi} u {+-zeta} u {V in X+Y: w_i w_j = 0 whenever lambda_i^2 != lambda_j^2}."""
    exact = is_exact(dec.v_x) and tol == 0

    def small(x):
        return x == 0 if exact else abs(float(x)) <= tol

    xy_zero = all(small(x) for x in dec.v_x) and all(small(x) for x in dec.v_y)
    if xy_zero and small(dec.theta) and small(abs(dec.eta) - 1):
        return True
    if xy_zero and small(dec.eta) and small(abs(dec.theta) - 1):
        return True
    if not (small(dec.eta) and small(dec.theta)):
        return False
    w = dec.block_weights()
    lam = spec.lam
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            if lam[i] ** 2 != lam[j] ** 2 and not small(w[i] * w[j]):
                return False
    return True
