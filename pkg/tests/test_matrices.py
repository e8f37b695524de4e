"""Companion matrices, operator norms, inverse-norm ratios."""

import math

import numpy as np
import pytest

from besovcap.disk import sigma_star_points
from besovcap.matrices import (
    SingularMatrixError,
    companion_matrix,
    companion_ratio,
    inverse_and_det,
    inverse_norm_ratio,
    operator_norm,
    schaffer_bound,
)

RNG = np.random.default_rng(99)


def test_companion_two_by_two_oracle():
    T = companion_matrix([0.5, -0.5])
    np.testing.assert_allclose(T, [[0.0, 0.25], [1.0, 0.0]], atol=1e-15)
    # singular values of [[0, 1/4], [1, 0]] are exactly {1, 1/4}
    sv = np.linalg.svd(T, compute_uv=False)
    np.testing.assert_allclose(np.sort(sv), [0.25, 1.0], atol=1e-14)
    assert T.dtype == np.float64  # conjugate-closed spectrum stays real


def test_companion_eigenvalues_are_the_zeros():
    zeros = np.array([0.3 + 0.2j, -0.5, 0.1 - 0.6j, 0.8])
    ev = np.linalg.eigvals(companion_matrix(zeros))
    key = lambda z: (round(z.real, 9), round(z.imag, 9))
    assert sorted(map(key, ev)) == sorted(map(key, zeros))


def test_det_equals_product_of_zeros():
    for zeros in ([0.5, -0.5], [0.3 + 0.4j, 0.3 - 0.4j, -0.2],
                  sigma_star_points(3)):
        _, det = inverse_and_det(companion_matrix(zeros))
        assert abs(det) == pytest.approx(np.prod(np.abs(zeros)), rel=1e-12)


def test_operator_norm_kinds():
    T = np.array([[1.0, -2.0], [3.0, 0.5]])
    assert operator_norm(T, "col-sum") == 4.0
    assert operator_norm(T, "row-sum") == 3.5
    assert operator_norm(T, "spectral") == \
        pytest.approx(np.linalg.norm(T, 2), rel=1e-9)
    with pytest.raises(ValueError):
        operator_norm(T, "frobenius")


def test_spectral_matches_svd_random():
    for n in (3, 17, 60):
        A = RNG.standard_normal((n, n))
        assert operator_norm(A) == pytest.approx(np.linalg.norm(A, 2),
                                                 rel=1e-7)
        B = A + 1j * RNG.standard_normal((n, n))
        assert operator_norm(B) == pytest.approx(np.linalg.norm(B, 2),
                                                 rel=1e-7)


def test_norm_interpolation_inequality():
    A = RNG.standard_normal((40, 40))
    bound = math.sqrt(operator_norm(A, "col-sum") * operator_norm(A, "row-sum"))
    assert operator_norm(A) <= bound * (1 + 1e-9)


def test_singular_pivot_reported():
    with pytest.raises(SingularMatrixError, match="pivot"):
        inverse_and_det(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularMatrixError):
        inverse_and_det(np.zeros((3, 3)))


def test_inverse_consistent():
    T = companion_matrix([0.4, -0.3, 0.2 + 0.1j])
    inv, det = inverse_and_det(T)
    np.testing.assert_allclose(inv @ T, np.eye(3), atol=1e-12)
    assert det == pytest.approx(np.linalg.det(T), rel=1e-12)


def test_ratio_two_by_two_exact():
    # |det| ||T^-1|| / ||T||: 0.25 * 4 / 1 = 1 in spectral norm
    assert inverse_norm_ratio(companion_matrix([0.5, -0.5])) == \
        pytest.approx(1.0, rel=1e-9)


def test_ratio_log_space_survives_overflow_scale():
    # 2I at size 500: ||T||^(N-1) = 2^499 overflows naive evaluation,
    # yet the ratio is exactly det * ||inv|| / ||T||^(N-1) = 1
    T = 2.0 * np.eye(500)
    assert inverse_norm_ratio(T) == pytest.approx(1.0, rel=1e-9)


def test_schaffer_bound_values():
    assert schaffer_bound(1) == pytest.approx(math.sqrt(math.e))
    assert schaffer_bound(4) == pytest.approx(math.sqrt(4 * math.e))
    with pytest.raises(ValueError):
        schaffer_bound(0)


def test_companion_ratios_below_bound():
    for zeros in (sigma_star_points(2), sigma_star_points(3)):
        total = len(zeros)
        for kind in ("spectral", "col-sum", "row-sum"):
            assert companion_ratio(zeros, kind) <= \
                schaffer_bound(total) * (1 + 1e-6)


def test_rejects_non_square():
    with pytest.raises(ValueError):
        operator_norm(np.ones((2, 3)))
    with pytest.raises(ValueError):
        inverse_and_det(np.ones((2, 3)))
