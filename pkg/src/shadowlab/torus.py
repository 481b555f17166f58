"""Linear hyperbolic torus maps, perturbations and the shadowing semiconjugacy.

Everything lives on the plane as the universal cover of the 2-torus.  A
system is a hyperbolic integer matrix together with an identity-isotopic
perturbation; the semiconjugacy onto the model map is evaluated pointwise
by expanding/contracting geometric series with certified truncation error.
"""

from dataclasses import dataclass

import numpy as np

from . import _torus_kernels
from .accel import USING_NUMBA
from .eigen import HyperbolicMatrix, hyperbolic_matrix  # noqa: F401  (re-export)
from .fields import ContractionFlow, RotationFlow, TrigField


class ToleranceUnachievable(ValueError):
    pass


class EmptyFiber(ValueError):
    pass


class NotCommuting(ValueError):
    pass


_TOL_FLOOR = 1e-12


class TorusPerturbation:
    """Doubly periodic displacement with a homeomorphism certificate.

    Parametric fields certify x -> x + u(x) through an analytic Lipschitz
    bound < 1 (construction fails loudly otherwise).  Flow-backed
    displacements are homeomorphisms by construction; they carry a
    round-trip audit instead of a Lipschitz certificate.
    """

    def __init__(self, field, kind="parametric", disk_support=None):
        self.field = field
        self.kind = kind
        self.disk_support = disk_support
        self.lipschitz_bound = field.lip_bound() if kind == "parametric" else None
        if kind == "parametric" and self.lipschitz_bound >= 1.0:
            raise ValueError(
                f"Lipschitz bound {self.lipschitz_bound:.3f} >= 1; "
                "not certified as a homeomorphism")

    def displacement(self, pts):
        return self.field.displacement(pts)

    def sup_bound(self):
        return self.field.sup_bound()

    def eta_sup_bound(self, eta):
        return self.field.eta_sup_bound(eta)

    @staticmethod
    def zero():
        return TorusPerturbation(TrigField([[0.0, 0.0]], [[0, 0]]))


class _PostDisplacement:
    """u(x) = w(A x) for a plane-periodic post-map displacement w.

    Used by the disk construction: F = H o A gives F(x) = A x + w(A x).
    Points are reduced to the fundamental cell around the origin before
    evaluating the (compactly supported) flow displacement.
    """

    def __init__(self, flow, mat):
        self.flow = flow
        self.mat = np.asarray(mat, dtype=float)

    @staticmethod
    def _reduce(pts):
        return pts - np.round(pts)

    def displacement(self, pts):
        y = np.asarray(pts, dtype=float) @ self.mat.T
        return self.flow.displacement(self._reduce(y))

    def post_forward(self, y):
        red = self._reduce(np.asarray(y, dtype=float))
        return y + self.flow.displacement(red)

    def post_inverse(self, y):
        y = np.asarray(y, dtype=float)
        red = self._reduce(y)
        return y + (self.flow.inverse(red) - red)

    def sup_bound(self):
        return self.flow.sup_bound()

    def eta_sup_bound(self, eta):
        return self.flow.eta_sup_bound(eta)


@dataclass(frozen=True)
class SemiconjugacyValue:
    point: np.ndarray
    truncation_error: float


class TorusSystem:
    """Lift F(x) = A x + u(x) of a homeomorphism isotopic to the model map."""

    def __init__(self, matrix: HyperbolicMatrix, perturbation: TorusPerturbation):
        self.matrix = matrix
        self.perturbation = perturbation
        self._mat = matrix.matrix
        self._imat = matrix.imatrix
        u = perturbation
        self._sup_u_u = u.eta_sup_bound(matrix.eta_u)
        self._sup_u_s = u.eta_sup_bound(matrix.eta_s)
        lam = matrix.lambda_
        if u.kind == "parametric":
            # contraction factor of the fixed-point orbit inversion
            self._fp_factor = lam * u.lipschitz_bound
            if self._fp_factor >= 0.9:
                raise ValueError("perturbation too large for certified inversion")

    # -- dynamics ---------------------------------------------------------

    def apply(self, pts):
        pts = np.asarray(pts, dtype=float)
        return pts @ self._mat.T + self.perturbation.displacement(pts)

    def apply_inverse(self, pts):
        pts = np.asarray(pts, dtype=float)
        u = self.perturbation
        if isinstance(u.field, _PostDisplacement):
            return u.field.post_inverse(pts) @ self._imat.T
        z = pts @ self._imat.T
        for _ in range(400):
            z_new = (pts - u.displacement(z)) @ self._imat.T
            moved = np.max(np.abs(z_new - z))
            z = z_new
            if moved < 1e-15:
                break
        return z

    def orbit_residual(self, pts):
        """max |F(F^-1(y)) - y|; audits the orbit inversion."""
        pts = np.asarray(pts, dtype=float)
        return float(np.max(np.abs(self.apply(self.apply_inverse(pts)) - pts)))

    # -- semiconjugacy ----------------------------------------------------

    def _truncation_orders(self, tol):
        if tol <= _TOL_FLOOR:
            raise ToleranceUnachievable(
                f"tol = {tol} at or below the floating-point noise floor {_TOL_FLOOR}")
        lam = self.matrix.lambda_
        ku = 0
        while self._sup_u_u * lam ** (-ku) / (lam - 1.0) > tol / 2.0:
            ku += 1
        ks = 0
        while self._sup_u_s * lam ** (-ks + 1) / (lam - 1.0) > tol / 2.0:
            ks += 1
        err = (self._sup_u_u * lam ** (-ku) / (lam - 1.0)
               + self._sup_u_s * lam ** (-ks + 1) / (lam - 1.0))
        return ku, ks, err

    def semiconjugacy_batch(self, pts, tol):
        """P(x) for an (n, 2) batch, with one shared certified error bound."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        ku, ks, err = self._truncation_orders(tol)
        m = self.matrix
        u = self.perturbation
        if USING_NUMBA and isinstance(u.field, TrigField):
            w = _torus_kernels.trig_series(
                pts, self._mat, self._imat,
                u.field.amps, u.field.waves, u.field.phases,
                m.mu_u, m.mu_s, m.eta_u, m.eta_s, m.e_u, m.e_s,
                ku, ks, 200)
        else:
            w = _torus_kernels.series_numpy(
                pts, self._mat, u.displacement, self.apply_inverse,
                m.mu_u, m.mu_s, m.eta_u, m.eta_s, m.e_u, m.e_s, ku, ks)
        return pts + w, err

    def semiconjugacy_point(self, x, tol) -> SemiconjugacyValue:
        p, err = self.semiconjugacy_batch(np.asarray(x, dtype=float)[None, :], tol)
        return SemiconjugacyValue(point=p[0], truncation_error=err)

    def sup_p_minus_id_bound(self):
        """Analytic geometric-series bound on sup |P - id|."""
        lam = self.matrix.lambda_
        bu = self._sup_u_u / (lam - 1.0)
        bs = self._sup_u_s * lam / (lam - 1.0)
        return float(np.linalg.norm(bu * self.matrix.e_u)
                     + np.linalg.norm(bs * self.matrix.e_s))

    def shadowing_distance(self, x, K, tol=1e-9):
        """max_{|k| <= K} |F^k(x) - A^k(P(x))|.

        A^k P(x) is evaluated as P(F^k x) via the semiconjugacy identity;
        the literal product A^k P(x) would amplify the truncation error of
        P by lambda^k and is numerically meaningless for large K.
        """
        if K < 0:
            raise ValueError("K must be >= 0")
        x = np.asarray(x, dtype=float)
        orbit = [x.copy()]
        y = x.copy()
        for _ in range(K):
            y = self.apply(y[None, :])[0]
            orbit.append(y.copy())
        y = x.copy()
        for _ in range(K):
            y = self.apply_inverse(y[None, :])[0]
            orbit.append(y.copy())
        orbit = np.asarray(orbit)
        p, _ = self.semiconjugacy_batch(orbit, tol)
        return float(np.max(np.linalg.norm(orbit - p, axis=1)))

    def fiber(self, target, grid_n, tol):
        """Grid cells (i, j) whose center has P within torus-distance tol of target."""
        if grid_n < 16:
            raise ValueError("grid_n must be >= 16")
        centers = (np.indices((grid_n, grid_n)).reshape(2, -1).T + 0.5) / grid_n
        p, err = self.semiconjugacy_batch(centers, min(tol / 10.0, 1e-8))
        d = torus_distance(p, np.asarray(target, dtype=float))
        hit = d < tol
        if not np.any(hit):
            raise EmptyFiber(
                f"no cell center within {tol} of target at grid {grid_n}")
        cells = set()
        idx = np.nonzero(hit)[0]
        for k in idx:
            cells.add((int(centers[k, 0] * grid_n), int(centers[k, 1] * grid_n)))
        return cells


def torus_distance(a, b):
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    d = d - np.round(d)
    return np.linalg.norm(d, axis=-1)


# -- disk construction -----------------------------------------------------


class TorusCommutingPair:
    """System with f = id on a disk D around the fixed point 0, plus a twist g.

    f composes the linear model with the time-1 flow of a cutoff
    linearization field, so f = id holds on the eigen-sup-norm disk of
    radius r_disk (up to integration error, audited).  g is a cutoff
    rotation supported strictly inside D; f o g = g o f because f is the
    identity on supp(g) and both preserve D.
    """

    def __init__(self, entries, r_disk=0.055, omega=2.5, steps=384):
        hm = hyperbolic_matrix(entries)
        if hm.mu_u <= 0:
            raise ValueError("disk construction needs positive eigenvalues")
        lam = hm.lambda_
        r_on = lam * r_disk
        r_off = 2.2 * lam * r_disk
        if r_off * np.sqrt(2.0) >= 0.5:
            raise ValueError(f"disk radius {r_disk} too large for the torus")
        self.hm = hm
        self.r_disk = float(r_disk)
        self.flow = ContractionFlow(hm, r_on, r_off, steps=steps)
        post = _PostDisplacement(self.flow, hm.matrix)
        self.system = TorusSystem(hm, TorusPerturbation(
            post, kind="flow", disk_support=("sup-ball", r_disk)))
        self.g_flow = RotationFlow((0.0, 0.0), 0.8 * r_disk, omega, steps=steps)

    def g_apply(self, pts):
        pts = np.asarray(pts, dtype=float)
        red = pts - np.round(pts)
        return pts + self.g_flow.displacement(red)

    def in_disk(self, pts):
        pts = np.asarray(pts, dtype=float)
        red = pts - np.round(pts)
        rho = np.maximum(np.abs(red @ self.hm.eta_u), np.abs(red @ self.hm.eta_s))
        return rho <= self.r_disk

    def audit(self, n_samples=200, seed=0):
        rng = np.random.default_rng(seed)
        pts = rng.random((n_samples, 2)) - 0.5
        id_defect = float(np.max(np.linalg.norm(
            self.system.apply(pts[self.in_disk(pts)]) - pts[self.in_disk(pts)],
            axis=-1))) if np.any(self.in_disk(pts)) else 0.0
        return {
            "flow_roundtrip": self.flow.roundtrip_error(pts),
            "g_roundtrip": self.g_flow.roundtrip_error(pts),
            "identity_on_disk_defect": id_defect,
        }


def commutation_defect(system: TorusSystem, g_apply, samples):
    """max plane distance between G(F(x)) and F(G(x)) over samples.

    Measured on lifts: an identity lift commutes with F exactly, while
    composing with a nontrivial integer translation leaves a constant
    plane defect that the torus metric would hide.
    """
    samples = np.asarray(samples, dtype=float)
    fg = system.apply(g_apply(samples))
    gf = g_apply(system.apply(samples))
    return float(np.max(np.linalg.norm(fg - gf, axis=-1)))


def invariance_check(system: TorusSystem, g_apply, fiber_cells, components,
                     grid_n, tol, commute_tol=1e-6, p_tol=1e-8, seed=0):
    """Theorem-level experiment: does g preserve fiber components and P?

    Requires g to commute with f within commute_tol on a sample grid
    (NotCommuting otherwise).  For each component, reports whether g maps
    its cell centers within distance tol of the component, and globally
    whether P(G(x)) = P(x) within tol over random samples.
    """
    rng = np.random.default_rng(seed)
    probe = rng.random((400, 2))
    defect = commutation_defect(system, g_apply, probe)
    if defect > commute_tol:
        raise NotCommuting(f"commutation defect {defect:.3e} > {commute_tol}")

    h = 1.0 / grid_n
    comp_reports = []
    for comp in components:
        cells = sorted(comp)
        centers = (np.asarray(cells, dtype=float) + 0.5) * h
        images = g_apply(centers) % 1.0
        cell_arr = np.asarray(cells, dtype=float)
        worst = 0.0
        moved = 0.0
        for pt, src in zip(images, centers):
            # distance from pt to the closed union of the component's cells
            lo = cell_arr * h
            d = np.maximum(lo - pt, 0.0) + np.maximum(pt - (lo + h), 0.0)
            d = np.minimum(d, 1.0 - d)  # torus wrap per axis
            dist = float(np.min(np.hypot(d[:, 0], d[:, 1])))
            worst = max(worst, dist)
            moved = max(moved, float(torus_distance(pt, src % 1.0)))
        comp_reports.append({
            "cells": len(cells),
            "min_cell": list(map(int, cells[0])),
            "max_escape": worst,
            "preserved": bool(worst <= tol),
            "max_sample_motion": moved,
        })

    samples = rng.random((1000, 2))
    p_g, err = system.semiconjugacy_batch(g_apply(samples), p_tol)
    p_x, _ = system.semiconjugacy_batch(samples, p_tol)
    fiber_defect = float(np.max(torus_distance(p_g, p_x)))
    return {
        "commutation_defect": defect,
        "components": comp_reports,
        "p_of_g_defect": fiber_defect,
        "p_truncation_error": err,
        "all_preserved": all(c["preserved"] for c in comp_reports),
    }
