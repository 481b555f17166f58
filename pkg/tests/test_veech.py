import numpy as np
import pytest

from shadowlab.origami import build_origami, cylinders, perm_from_cycles
from shadowlab.veech import NotInVeechGroup, verify_affine


@pytest.fixture(scope="module")
def l_origami():
    return build_origami(perm_from_cycles(3, "(1 2)"), perm_from_cycles(3, "(1 3)"))


def test_identity_trivial_table(l_origami):
    auto = verify_affine(l_origami, [[1, 0], [0, 1]])
    assert len(auto.pieces) == l_origami.n
    assert all(p.source == p.target for p in auto.pieces)
    assert auto.lambda_ is None


def test_horizontal_twist_by_cylinder_modulus(l_origami):
    # moduli are 1/2 and 1, so shear parameter 2 twists both integrally
    mods = [h / c for _, c, h in cylinders(l_origami, horizontal=True)]
    t = 2
    assert all(float(t * m).is_integer() for m in mods)
    verify_affine(l_origami, [[1, t], [0, 1]])


def test_single_shear_rejected(l_origami):
    with pytest.raises(NotInVeechGroup):
        verify_affine(l_origami, [[1, 1], [0, 1]])


def test_vertical_twist(l_origami):
    verify_affine(l_origami, [[1, 0], [2, 1]])


def test_hyperbolic_element_and_lambda(l_origami):
    auto = verify_affine(l_origami, [[5, 2], [2, 1]])
    assert auto.lambda_ == pytest.approx(3 + 2 * np.sqrt(2), abs=1e-12)


def test_product_of_twists_composes(l_origami):
    th = verify_affine(l_origami, [[1, 2], [0, 1]])
    tv = verify_affine(l_origami, [[1, 0], [2, 1]])
    m = np.array([[1, 2], [0, 1]]) @ np.array([[1, 0], [2, 1]])
    assert m.tolist() == [[5, 2], [2, 1]]
    auto = verify_affine(l_origami, m.tolist())
    rng = np.random.default_rng(5)
    for _ in range(100):
        s = int(rng.integers(0, 3))
        u, v = rng.random(2)
        s1, u1, v1 = tv.apply_surface(s, u, v)
        s2, u2, v2 = th.apply_surface(s1, u1, v1)
        s3, u3, v3 = auto.apply_surface(s, u, v)
        assert (s2, round(u2, 12), round(v2, 12)) == (s3, round(u3, 12), round(v3, 12))


def test_inverse_round_trip(l_origami):
    auto = verify_affine(l_origami, [[5, 2], [2, 1]])
    inv = auto.inverse()
    rng = np.random.default_rng(6)
    for _ in range(100):
        s = int(rng.integers(0, 3))
        u, v = rng.random(2)
        s1, u1, v1 = auto.apply_surface(s, u, v)
        s0, u0, v0 = inv.apply_surface(s1, u1, v1)
        assert s0 == s
        assert abs(u0 - u) < 1e-12 and abs(v0 - v) < 1e-12


def test_fixed_points_exist_and_are_fixed(l_origami):
    auto = verify_affine(l_origami, [[5, 2], [2, 1]])
    fps = auto.fixed_points()
    assert fps
    for s, x, y in fps:
        s1, u1, v1 = auto.apply_surface(s, float(x), float(y))
        assert s1 == s
        assert abs(u1 - float(x)) < 1e-12 and abs(v1 - float(y)) < 1e-12


def test_torus_any_sl2():
    o = build_origami((0,), (0,))
    auto = verify_affine(o, [[2, 1], [1, 1]])
    assert auto.lambda_ == pytest.approx((3 + np.sqrt(5)) / 2, abs=1e-12)


def test_area_audit(l_origami):
    from shadowlab.veech import poly_area2
    auto = verify_affine(l_origami, [[5, 2], [2, 1]])
    for s in range(l_origami.n):
        area = sum(poly_area2(p.src_poly) for p in auto.pieces if p.source == s)
        assert area == 2  # exact double area of the unit square
