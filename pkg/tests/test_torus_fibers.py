import numpy as np
import pytest

from shadowlab.cells import components
from shadowlab.torus import (EmptyFiber, NotCommuting, TorusCommutingPair,
                             TorusPerturbation, TorusSystem, hyperbolic_matrix,
                             invariance_check, torus_distance)


@pytest.fixture(scope="module")
def pair():
    return TorusCommutingPair([[2, 1], [1, 1]], r_disk=0.055, omega=2.5)


def test_identity_perturbation_fiber_single_cell():
    sys = TorusSystem(hyperbolic_matrix([[2, 1], [1, 1]]), TorusPerturbation.zero())
    n = 64
    target = np.array([10.5, 33.5]) / n
    cells = sys.fiber(target, n, tol=0.5 / n)
    assert cells == {(10, 33)}


def test_empty_fiber_signals():
    sys = TorusSystem(hyperbolic_matrix([[2, 1], [1, 1]]), TorusPerturbation.zero())
    with pytest.raises(EmptyFiber):
        sys.fiber(np.array([0.25001, 0.25001]), 64, tol=1e-9)


def test_flow_audits(pair):
    audit = pair.audit(400)
    assert audit["flow_roundtrip"] < 1e-9
    assert audit["g_roundtrip"] < 1e-9
    assert audit["identity_on_disk_defect"] < 1e-9


def test_disk_fiber_contains_disk_and_is_small(pair):
    sys = pair.system
    n = 64
    target = sys.semiconjugacy_point(np.zeros(2), 1e-8).point
    cells = sys.fiber(target, n, tol=1e-6)
    centers = (np.indices((n, n)).reshape(2, -1).T + 0.5) / n
    red = centers - np.round(centers)
    in_disk = pair.in_disk(red)
    disk_cells = {(int(c[0] * n), int(c[1] * n)) for c in centers[in_disk]}
    assert disk_cells <= cells
    # diameter bound: 2 (tol + sup|P - id|)
    bound = 2 * (1e-6 + sys.sup_p_minus_id_bound()) + np.sqrt(2) / n
    pts = (np.array(sorted(cells), dtype=float) + 0.5) / n
    d = 0.0
    for p in pts:
        d = max(d, float(np.max(torus_distance(pts, p))))
    assert d <= bound


def test_invariance_of_disk_component(pair):
    sys = pair.system
    n = 64
    target = sys.semiconjugacy_point(np.zeros(2), 1e-8).point
    cells = sys.fiber(target, n, tol=1e-6)
    comps = components(cells, n)
    report = invariance_check(sys, pair.g_apply, cells, comps, n, tol=1.0 / n)
    assert report["all_preserved"]
    assert report["p_of_g_defect"] < 2e-8
    # the twist moves interior samples by a visible amount
    assert max(c["max_sample_motion"] for c in report["components"]) > 1.0 / n


def test_negative_control_translation(pair):
    sys = pair.system

    def g_shifted(pts):
        return pair.g_apply(np.asarray(pts) + np.array([1.0, 0.0]))

    with pytest.raises(NotCommuting):
        invariance_check(sys, g_shifted, set(), [], 64, tol=1.0 / 64)
