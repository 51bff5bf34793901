"""Almost contact data (phi, xi, eta[, zeta, theta]) on left-invariant frames and
the trans-Sasakian checks for constant coefficients."""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from ._scalars import DomainError, InputError, eye, is_exact, max_abs, promote, zeros
from .oscillator import phi_matrix


@dataclass(frozen=True, eq=False)
class ContactData:
    phi: np.ndarray
    xi_index: int
    zeta_index: int = None

    @property
    def dim(self):
        return self.phi.shape[0]

    def _unit(self, i):
        u = zeros(self.dim, is_exact(self.phi))
        u[i] = 1
        return u

    @property
    def xi(self):
        return self._unit(self.xi_index)

    @property
    def zeta(self):
        return None if self.zeta_index is None else self._unit(self.zeta_index)

    def eta(self, x):
        return x[self.xi_index]

    def theta(self, x):
        return 0 if self.zeta_index is None else x[self.zeta_index]

    def identity_defects(self):
        """Residuals of the operator identities, assuming an orthonormal frame."""
        p = self.phi
        exact = is_exact(p)
        d = self.dim
        xi = self.xi
        proj = np.outer(xi, xi)
        if self.zeta_index is not None:
            proj = proj + np.outer(self.zeta, self.zeta)
        i = eye(d, exact)
        out = {
            "phi_squared": max_abs(p @ p + i - proj),
            "phi_xi": max_abs(p @ xi),
            "eta_phi": max_abs(xi @ p),
            "skew": max_abs(p + p.T),
            "compatible_metric": max_abs(p.T @ p - i + proj),
        }
        if self.zeta_index is not None:
            out["phi_zeta"] = max_abs(p @ self.zeta)
            out["theta_phi"] = max_abs(self.zeta @ p)
        keep = [k for k in range(d) if k not in (self.xi_index, self.zeta_index)]
        block = (p.T @ p)[np.ix_(keep, keep)]
        out["orthogonal_on_xy"] = max_abs(block - eye(len(keep), exact))
        return out


@dataclass(frozen=True)
class TransSasakianCoeffs:
    alpha: object
    beta: object

    def __post_init__(self):
        for x in (self.alpha, self.beta):
            if not math.isfinite(float(x)):
                raise InputError("trans-Sasakian coefficients must be finite")


def oscillator_contact(spec):
    return ContactData(phi_matrix(spec.n, with_zeta=True), spec.xi, spec.zeta)


def heisenberg_contact(n):
    return ContactData(phi_matrix(n, with_zeta=False), 2 * n, None)


def trans_sasakian_residual(alg, conn, cd, coeffs):
    """max over frame pairs X, Y in ker(theta) of

    |(nabla_X phi) Y - alpha (g(X,Y) xi - eta(Y) X) - beta (g(phi X, Y) xi - eta(Y) phi X)|.
    """
    if not alg.orthonormal:
        raise InputError("trans-Sasakian check expects an orthonormal frame")
    if cd.dim != alg.dim:
        raise InputError("contact data and algebra dimensions differ")
    gm, p = promote(conn.gamma, cd.phi)
    exact = is_exact(gm)
    al, be = coeffs.alpha, coeffs.beta
    if exact and isinstance(al, (int, Fraction)) and isinstance(be, (int, Fraction)):
        al, be = Fraction(al), Fraction(be)
    else:
        gm, p = gm.astype(float), p.astype(float)
        al, be = float(al), float(be)
    d = alg.dim
    xi = zeros(d, is_exact(gm))
    xi[cd.xi_index] = 1
    frame = [k for k in range(d) if k != cd.zeta_index]
    worst = Fraction(0) if is_exact(gm) else 0.0
    for x in frame:
        for y in frame:
            # (nabla_x phi) e_y = nabla_x(phi e_y) - phi(nabla_x e_y)
            lhs = gm[x].T @ p[:, y] - p @ gm[x, y]
            ex = zeros(d, is_exact(gm))
            ex[x] = 1
            g_xy = 1 if x == y else 0
            eta_y = 1 if y == cd.xi_index else 0
            rhs = al * (g_xy * xi - eta_y * ex) + be * (p[y, x] * xi - eta_y * p[:, x])
            r = lhs - rhs
            worst = max(worst, max_abs(r))
    return worst


def reeb_mean_curvature_formula(dim, coeffs, phi_laplacian_norm=None):
    """|H_xi| of the Reeb field on a trans-Sasakian manifold with constant alpha, beta.

    In dim 3, and in higher dimensions with beta = 0, the gradients of the
    coefficients vanish and so does |H_xi|.  The higher-dimensional alpha = 0
    branch needs |phi lap xi| supplied by the caller.
    """
    if dim < 3 or dim % 2 == 0:
        raise InputError("almost contact manifolds have odd dimension >= 3")
    n = (dim - 1) // 2
    al, be = float(coeffs.alpha), float(coeffs.beta)
    if dim == 3:
        return 0.0
    if be == 0:
        grad_alpha = 0.0  # |phi^2 grad alpha| for constant alpha
        return (1 + (2 * n - 1) * al ** 2) / ((2 * n + 1) * (1 + al ** 2) ** 1.5) * grad_alpha
    if al == 0:
        if phi_laplacian_norm is None:
            raise DomainError("the alpha = 0 branch needs |phi lap xi|")
        return (1 + (2 * n - 1) * be ** 2) / ((2 * n + 1) * (1 + be ** 2) ** 1.5) * phi_laplacian_norm
    raise DomainError("in dim > 3 a trans-Sasakian structure has alpha = 0 or beta = 0")


def reeb_tg_condition(coeffs):
    """Whether xi(M) is totally geodesic for constant (alpha, beta): cosymplectic or Sasakian.

    alpha = -1 is Sasakian for the structure (-phi, xi, eta) and counts as well.
    """
    return coeffs.beta == 0 and coeffs.alpha in (0, 1, -1)
