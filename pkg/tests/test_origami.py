import pytest

from shadowlab.origami import (Disconnected, build_origami, cylinders,
                               perm_from_cycles)


def l_origami():
    # 3 squares: (1 2) horizontal, (1 3) vertical in 1-indexed cycles
    sh = perm_from_cycles(3, "(1 2)")
    sv = perm_from_cycles(3, "(1 3)")
    return build_origami(sh, sv)


def test_l_origami_genus_and_cone():
    o = l_origami()
    assert o.genus == 2
    assert len(o.cone_points) == 1
    assert o.cone_points[0][1] == 3  # angle 6 pi
    # Euler count oracle: V - E + F = 1 - 6 + 3 = -2
    assert len(o.vertex_orbits) == 1


def test_unit_torus():
    o = build_origami((0,), (0,))
    assert o.genus == 1
    assert o.cone_points == ()


def test_four_square_cylinder_torus():
    o = build_origami(perm_from_cycles(4, "(1 2 3 4)"), perm_from_cycles(4, ""))
    assert o.genus == 1
    assert len(o.vertex_orbits) == 4  # V = 4, E = 8, F = 4


def test_disconnected_rejected():
    with pytest.raises(Disconnected):
        build_origami((1, 0, 2), (0, 1, 2))


def test_transitivity_connected():
    build_origami((1, 0, 2), (2, 1, 0))  # connected via both perms


def test_l_origami_cylinders():
    o = l_origami()
    horiz = cylinders(o, horizontal=True)
    # moduli 1/2 and 1: circumference 2 height 1, circumference 1 height 1
    assert sorted((c, h) for _, c, h in horiz) == [(1, 1), (2, 1)]
    vert = cylinders(o, horizontal=False)
    assert sorted((c, h) for _, c, h in vert) == [(1, 1), (2, 1)]


def test_tall_cylinder_merges():
    # 2x1 vertical strip torus: one horizontal cylinder of height 2
    o = build_origami((0, 1), (1, 0))
    horiz = cylinders(o, horizontal=True)
    assert horiz == [((0, 1), 1, 2)]


def test_perm_parse_roundtrip():
    p = perm_from_cycles(4, "(1 2)(3 4)")
    assert p == (1, 0, 3, 2)
    assert perm_from_cycles(3, "id") == (0, 1, 2)
    with pytest.raises(ValueError):
        perm_from_cycles(3, "(1 5)")
