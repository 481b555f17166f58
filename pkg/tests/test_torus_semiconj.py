import numpy as np
import pytest

from shadowlab import _torus_kernels
from shadowlab.eigen import hyperbolic_matrix
from shadowlab.fields import TrigField
from shadowlab.torus import (ToleranceUnachievable, TorusPerturbation,
                             TorusSystem, torus_distance)


def cat_system(delta=0.01):
    hm = hyperbolic_matrix([[2, 1], [1, 1]])
    # perturbation along the contracting eigendirection; sup norm = delta
    field = TrigField([delta * hm.e_s], [[1, 0]])
    return TorusSystem(hm, TorusPerturbation(field))


def test_zero_perturbation_identity():
    hm = hyperbolic_matrix([[2, 1], [1, 1]])
    sys = TorusSystem(hm, TorusPerturbation.zero())
    x = np.array([0.3, 0.7])
    v = sys.semiconjugacy_point(x, 1e-9)
    assert np.allclose(v.point, x)
    assert v.truncation_error == 0.0


def test_semiconjugacy_residual_on_grid():
    sys = cat_system()
    n = 32
    pts = (np.indices((n, n)).reshape(2, -1).T + 0.5) / n
    tol = 1e-8
    p, err = sys.semiconjugacy_batch(pts, tol)
    pf, _ = sys.semiconjugacy_batch(sys.apply(pts), tol)
    residual = np.max(np.linalg.norm(pf - p @ sys.matrix.matrix.T, axis=1))
    assert residual < 10 * tol


def test_sup_norm_bound():
    delta = 0.01
    sys = cat_system(delta)
    lam = sys.matrix.lambda_
    rng = np.random.default_rng(1)
    pts = rng.random((10_000, 2)) * 4 - 2
    p, err = sys.semiconjugacy_batch(pts, 1e-9)
    sup = np.max(np.linalg.norm(p - pts, axis=1))
    assert sup <= delta * lam / (lam - 1.0) + 1e-6
    assert sup > 0.001  # perturbation actually does something


def test_equivariance_under_integer_translation():
    sys = cat_system()
    rng = np.random.default_rng(2)
    pts = rng.random((1000, 2))
    shifts = rng.integers(-3, 4, size=(1000, 2)).astype(float)
    tol = 1e-9
    p1, err = sys.semiconjugacy_batch(pts + shifts, tol)
    p0, _ = sys.semiconjugacy_batch(pts, tol)
    assert np.max(np.abs(p1 - (p0 + shifts))) < 2 * err + 1e-9


def test_tolerance_floor():
    sys = cat_system()
    with pytest.raises(ToleranceUnachievable):
        sys.semiconjugacy_point(np.zeros(2), 1e-13)


def test_shadowing_distance_properties():
    sys = cat_system()
    x = np.array([0.2, 0.4])
    d5 = sys.shadowing_distance(x, 5)
    d20 = sys.shadowing_distance(x, 20)
    assert d20 >= d5  # non-decreasing in K
    assert d20 <= 2 * sys.sup_p_minus_id_bound()
    zero = TorusSystem(sys.matrix, TorusPerturbation.zero())
    assert zero.shadowing_distance(x, 10) < 1e-12


def test_orbit_inversion_roundtrip():
    sys = cat_system()
    rng = np.random.default_rng(3)
    assert sys.orbit_residual(rng.random((100, 2))) < 1e-12


def test_numpy_and_numba_paths_agree():
    sys = cat_system()
    rng = np.random.default_rng(4)
    pts = rng.random((50, 2))
    m = sys.matrix
    ku, ks, err = sys._truncation_orders(1e-9)
    w_np = _torus_kernels.series_numpy(
        pts, m.matrix, sys.perturbation.displacement, sys.apply_inverse,
        m.mu_u, m.mu_s, m.eta_u, m.eta_s, m.e_u, m.e_s, ku, ks)
    f = sys.perturbation.field
    w_nb = _torus_kernels.trig_series(
        pts, m.matrix, m.imatrix, f.amps, f.waves, f.phases,
        m.mu_u, m.mu_s, m.eta_u, m.eta_s, m.e_u, m.e_s, ku, ks, 200)
    assert np.max(np.abs(w_np - w_nb)) < 1e-12


def test_series_vs_grid_iteration():
    # independent fixed-point iteration on grid functions, bilinear interp
    sys = cat_system()
    m = sys.matrix
    n = 128
    nodes = np.indices((n, n)).reshape(2, -1).T / n
    wu = np.zeros(n * n)
    ws = np.zeros(n * n)

    def interp(grid, pts):
        q = (pts % 1.0) * n
        i0 = np.floor(q[:, 0]).astype(int) % n
        j0 = np.floor(q[:, 1]).astype(int) % n
        fx = q[:, 0] - np.floor(q[:, 0])
        fy = q[:, 1] - np.floor(q[:, 1])
        g = grid.reshape(n, n)
        i1 = (i0 + 1) % n
        j1 = (j0 + 1) % n
        return (g[i0, j0] * (1 - fx) * (1 - fy) + g[i1, j0] * fx * (1 - fy)
                + g[i0, j1] * (1 - fx) * fy + g[i1, j1] * fx * fy)

    f_nodes = sys.apply(nodes)
    finv_nodes = sys.apply_inverse(nodes)
    uu_nodes = sys.perturbation.displacement(nodes) @ m.eta_u
    us_finv = sys.perturbation.displacement(finv_nodes) @ m.eta_s
    for _ in range(40):
        wu = (uu_nodes + interp(wu, f_nodes)) / m.mu_u
        ws = m.mu_s * interp(ws, finv_nodes) - us_finv
    w_iter = wu[:, None] * m.e_u + ws[:, None] * m.e_s

    p, err = sys.semiconjugacy_batch(nodes, 1e-10)
    w_series = p - nodes
    # grid interpolation limits the agreement, not the series tolerance
    assert np.max(np.abs(w_iter - w_series)) < 5e-4
