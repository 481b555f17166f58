"""Eigen-data of hyperbolic 2x2 integer matrices.

Both model families (linear torus maps and affine origami automorphisms)
are driven by a unimodular integer matrix with |trace| > 2.  This module
computes the expansion factor, unit eigenvectors and the dual covectors
used to split displacements into expanding/contracting components.
"""

from dataclasses import dataclass

import numpy as np


class NotUnimodular(ValueError):
    pass


class NotHyperbolic(ValueError):
    pass


@dataclass(frozen=True)
class HyperbolicMatrix:
    """A 2x2 integer matrix with |det| = 1 and |trace| > 2.

    lambda_ is the expansion factor (spectral radius, > 1).  e_u / e_s are
    unit eigenvectors for the expanding / contracting eigenvalues mu_u /
    mu_s (mu may be negative when the trace is).  eta_u / eta_s form the
    dual basis: eta_u(e_u) = 1, eta_u(e_s) = 0 and symmetrically.
    """

    entries: tuple
    lambda_: float
    mu_u: float
    mu_s: float
    e_u: np.ndarray
    e_s: np.ndarray
    eta_u: np.ndarray
    eta_s: np.ndarray

    @property
    def matrix(self):
        return np.array(self.entries, dtype=float)

    @property
    def imatrix(self):
        a, b = self.entries[0]
        c, d = self.entries[1]
        det = a * d - b * c
        return np.array([[d, -b], [-c, a]], dtype=float) / det

    def inverse_entries(self):
        a, b = self.entries[0]
        c, d = self.entries[1]
        det = a * d - b * c
        return ((d * det, -b * det), (-c * det, a * det)) if det == -1 else ((d, -b), (-c, a))


def hyperbolic_matrix(entries) -> HyperbolicMatrix:
    """Validate entries and compute certified eigen-data.

    Raises NotUnimodular when |det| != 1 and NotHyperbolic when
    |trace| <= 2.  Eigenvalues come from the characteristic polynomial
    x^2 - t x + det, solved by the quadratic formula.
    """
    m = [[int(entries[0][0]), int(entries[0][1])],
         [int(entries[1][0]), int(entries[1][1])]]
    a, b = m[0]
    c, d = m[1]
    det = a * d - b * c
    if det not in (1, -1):
        raise NotUnimodular(f"det = {det}, expected +-1")
    tr = a + d
    if abs(tr) <= 2:
        raise NotHyperbolic(f"|trace| = {abs(tr)} <= 2")

    disc = np.sqrt(tr * tr - 4 * det)
    mu1 = (tr + disc) / 2.0
    mu2 = (tr - disc) / 2.0
    # expanding eigenvalue = larger modulus
    if abs(mu1) >= abs(mu2):
        mu_u, mu_s = mu1, mu2
    else:
        mu_u, mu_s = mu2, mu1
    lam = abs(mu_u)

    def eigvec(mu):
        # (a - mu) x + b y = 0 ; pick the better-conditioned row
        r1 = np.array([a - mu, b])
        r2 = np.array([c, d - mu])
        row = r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2
        v = np.array([-row[1], row[0]])
        return v / np.linalg.norm(v)

    e_u = eigvec(mu_u)
    e_s = eigvec(mu_s)
    # dual basis: eta_u = row vector with eta_u(e_u)=1, eta_u(e_s)=0
    basis = np.column_stack([e_u, e_s])
    dual = np.linalg.inv(basis)
    eta_u = dual[0].copy()
    eta_s = dual[1].copy()

    hm = HyperbolicMatrix(
        entries=((a, b), (c, d)),
        lambda_=lam, mu_u=mu_u, mu_s=mu_s,
        e_u=e_u, e_s=e_s, eta_u=eta_u, eta_s=eta_s,
    )
    _check(hm)
    return hm


def _check(hm, tol=1e-12):
    m = hm.matrix
    assert np.linalg.norm(m @ hm.e_u - hm.mu_u * hm.e_u) < tol * hm.lambda_
    assert np.linalg.norm(m @ hm.e_s - hm.mu_s * hm.e_s) < tol * hm.lambda_
    assert abs(hm.eta_u @ hm.e_u - 1.0) < tol
    assert abs(hm.eta_u @ hm.e_s) < tol
    assert abs(hm.eta_s @ hm.e_s - 1.0) < tol
    assert abs(hm.eta_s @ hm.e_u) < tol


def matrix_log(hm: HyperbolicMatrix) -> np.ndarray:
    """Real logarithm V diag(log mu) V^-1; requires positive eigenvalues."""
    if hm.mu_u <= 0 or hm.mu_s <= 0:
        raise ValueError("matrix log needs positive eigenvalues")
    basis = np.column_stack([hm.e_u, hm.e_s])
    return basis @ np.diag([np.log(hm.mu_u), np.log(hm.mu_s)]) @ np.linalg.inv(basis)
