import numpy as np
import pytest

from shadowlab.cover import LiftedPoint, Patch, trace_segment
from shadowlab.eigen import hyperbolic_matrix
from shadowlab.geodesic import Frame, geodesic
from shadowlab.origami import build_origami, perm_from_cycles


@pytest.fixture(scope="module")
def torus_patch():
    return Patch(build_origami((0,), (0,)), radius=8)


@pytest.fixture(scope="module")
def l_patch():
    o = build_origami(perm_from_cycles(3, "(1 2)"), perm_from_cycles(3, "(1 3)"))
    return Patch(o, radius=7)


@pytest.fixture(scope="module")
def l_frame():
    return Frame.from_matrix(hyperbolic_matrix([[5, 2], [2, 1]]))


def test_zero_geodesic(torus_patch):
    x = LiftedPoint(torus_patch, 0, 0.3, 0.4)
    g = geodesic(torus_patch, Frame.axes(), x, x)
    assert g.length == 0.0 and g.d_s == 0.0 and g.d_u == 0.0


def test_single_square_euclidean(torus_patch):
    x = LiftedPoint(torus_patch, 0, 0.1, 0.2)
    y = LiftedPoint(torus_patch, 0, 0.8, 0.9)
    g = geodesic(torus_patch, Frame.axes(), x, y)
    assert g.length == pytest.approx(np.hypot(0.7, 0.7), abs=1e-12)
    assert g.d_s == pytest.approx(0.7, abs=1e-12)  # axes frame: ds = |dx|
    assert g.d_u == pytest.approx(0.7, abs=1e-12)
    assert not g.bends


def test_single_square_eigen_lengths(torus_patch):
    hm = hyperbolic_matrix([[2, 1], [1, 1]])
    fr = Frame.from_matrix(hm)
    x = LiftedPoint(torus_patch, 0, 0.1, 0.2)
    y = LiftedPoint(torus_patch, 0, 0.7, 0.5)
    g = geodesic(torus_patch, fr, x, y)
    w = np.array([0.6, 0.3])
    assert g.d_u == pytest.approx(abs(hm.eta_u @ w), abs=1e-12)
    assert g.d_s == pytest.approx(abs(hm.eta_s @ w), abs=1e-12)
    assert g.length == pytest.approx(np.linalg.norm(w), abs=1e-12)


def test_flat_grid_straightens_staircase(torus_patch):
    # far-apart copies force an L-shaped BFS corridor; rerouting at the
    # regular vertices must recover the straight Euclidean segment
    x = LiftedPoint(torus_patch, 0, 0.5, 0.5)
    target = torus_patch.navigate(0, [0, 0, 0, 1, 1])  # RRRUU
    y = LiftedPoint(torus_patch, target, 0.25, 0.75)
    g = geodesic(torus_patch, Frame.axes(), x, y)
    expect = np.linalg.norm(y.dev() - x.dev())
    assert g.length == pytest.approx(expect, rel=1e-12)
    assert g.reroutes > 0


def test_symmetry_and_triangle(l_patch, l_frame):
    rng = np.random.default_rng(7)
    copies = rng.integers(0, l_patch.n_copies, size=30)
    pts = [LiftedPoint(l_patch, int(c), *rng.random(2)) for c in copies]
    for i in range(0, 28, 3):
        a, b, c = pts[i], pts[i + 1], pts[i + 2]
        gab = geodesic(l_patch, l_frame, a, b)
        gba = geodesic(l_patch, l_frame, b, a)
        assert gab.length == pytest.approx(gba.length, rel=1e-9, abs=1e-12)
        gbc = geodesic(l_patch, l_frame, b, c)
        gac = geodesic(l_patch, l_frame, a, c)
        assert gac.length <= gab.length + gbc.length + 1e-9
        assert gac.d_s <= gab.d_s + gbc.d_s + 1e-9
        assert gac.d_u <= gab.d_u + gbc.d_u + 1e-9


def test_sandwich_inequality(l_patch, l_frame):
    rng = np.random.default_rng(8)
    for _ in range(60):
        pa = LiftedPoint(l_patch, int(rng.integers(0, l_patch.n_copies)),
                         *rng.random(2))
        pb = LiftedPoint(l_patch, int(rng.integers(0, l_patch.n_copies)),
                         *rng.random(2))
        g = geodesic(l_patch, l_frame, pa, pb)
        mx = max(g.d_s, g.d_u)
        assert mx <= g.length + 1e-9
        assert g.length <= 2 * mx + 1e-9


def test_same_stable_leaf_zero_du(l_patch, l_frame):
    hm = hyperbolic_matrix([[5, 2], [2, 1]])
    x = LiftedPoint(l_patch, 0, 0.41, 0.47)
    c, p = trace_segment(l_patch, x.copy, (x.u, x.v), 1.7 * hm.e_s)
    y = LiftedPoint(l_patch, c, *p)
    g = geodesic(l_patch, l_frame, x, y)
    assert g.d_u < 1e-9
    assert g.length == pytest.approx(1.7, abs=1e-9)


def test_geodesic_dev_consistency(l_patch, l_frame):
    rng = np.random.default_rng(9)
    for _ in range(20):
        pa = LiftedPoint(l_patch, int(rng.integers(0, l_patch.n_copies)),
                         *rng.random(2))
        pb = LiftedPoint(l_patch, int(rng.integers(0, l_patch.n_copies)),
                         *rng.random(2))
        g = geodesic(l_patch, l_frame, pa, pb)
        assert np.allclose(np.array(g.points[0]), pa.dev(), atol=1e-12)
        assert np.allclose(np.array(g.points[-1]), pb.dev(), atol=1e-12)
        # net developed displacement telescopes
        net = np.array(g.points[-1]) - np.array(g.points[0])
        assert np.allclose(net, pb.dev() - pa.dev(), atol=1e-9)
