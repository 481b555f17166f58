import numpy as np
import pytest

from shadowlab.eigen import (NotHyperbolic, NotUnimodular, hyperbolic_matrix,
                             matrix_log)


def quadratic_lambda(tr, det):
    # independent oracle: larger-modulus root of x^2 - tr x + det
    r1 = (tr + np.sqrt(tr * tr - 4 * det)) / 2
    r2 = (tr - np.sqrt(tr * tr - 4 * det)) / 2
    return max(abs(r1), abs(r2))


def test_cat_map_lambda():
    hm = hyperbolic_matrix([[2, 1], [1, 1]])
    assert hm.lambda_ == pytest.approx(quadratic_lambda(3, 1), abs=1e-12)
    assert hm.lambda_ == pytest.approx((3 + np.sqrt(5)) / 2, abs=1e-12)


def test_shear_rejected():
    with pytest.raises(NotHyperbolic):
        hyperbolic_matrix([[1, 1], [0, 1]])


def test_non_unimodular_rejected():
    with pytest.raises(NotUnimodular):
        hyperbolic_matrix([[2, 0], [0, 1]])


def test_321_lambda():
    hm = hyperbolic_matrix([[3, 2], [1, 1]])
    assert hm.lambda_ == pytest.approx(2 + np.sqrt(3), abs=1e-12)
    assert hm.lambda_ == pytest.approx(quadratic_lambda(4, 1), abs=1e-12)


def test_eigen_relations():
    for entries in ([[2, 1], [1, 1]], [[5, 2], [2, 1]], [[3, 2], [1, 1]],
                    [[-2, 1], [1, -1]]):
        hm = hyperbolic_matrix(entries)
        m = hm.matrix
        assert np.allclose(m @ hm.e_u, hm.mu_u * hm.e_u, atol=1e-12)
        assert np.allclose(m @ hm.e_s, hm.mu_s * hm.e_s, atol=1e-12)
        assert abs(hm.eta_u @ hm.e_s) < 1e-12
        assert abs(hm.eta_s @ hm.e_u) < 1e-12
        assert abs(hm.eta_u @ hm.e_u - 1) < 1e-12
        assert abs(hm.mu_u * hm.mu_s - np.linalg.det(m)) < 1e-9


def test_matrix_log_exponentiates_back():
    hm = hyperbolic_matrix([[2, 1], [1, 1]])
    L = matrix_log(hm)
    # exp via scaling-and-squaring on the series
    E = np.eye(2)
    term = np.eye(2)
    for k in range(1, 30):
        term = term @ L / k
        E = E + term
    assert np.allclose(E, hm.matrix, atol=1e-12)


def test_inverse_entries_integer():
    hm = hyperbolic_matrix([[2, 1], [1, 1]])
    inv = np.array(hm.inverse_entries(), dtype=float)
    assert np.allclose(inv @ hm.matrix, np.eye(2))
