"""Coefficient-capacity solver against closed forms and an LP oracle.

Closed forms: a single zero at b on (0,1) admits the series
(1 - z/b)/(1 + 1/b - ...) - concretely cap_W({b}) = 1 + 1/b attained by the
degree-1 polynomial when b >= its own square root trade-off, and 3 at
b = 1/2; the symmetric pair {b, -b} doubles the interpolation constraint
and gives 1 + 1/b^2 at b = 1/2, i.e. 5.
"""

import numpy as np
import pytest
from scipy.optimize import linprog

from besovcap.disk import sigma_star_points
from besovcap.wiener import (
    BasisPursuitProblem,
    cap_wiener_certified_lower,
    cap_wiener_primal,
    certificate_from_solution,
    schaffer_lower_from_capacity,
    solve_basis_pursuit,
)


def lp_oracle(zeros, degree):
    """Independent l1 minimizer via scipy's LP (real-mode problems only)."""
    prob = BasisPursuitProblem.build(zeros, degree)
    assert prob.real_mode, "oracle needs a conjugate-closed zero set"
    A = prob.constraint_matrix()
    n = A.shape[1]
    res = linprog(np.ones(2 * n), A_eq=np.hstack([A, -A]), b_eq=prob.rhs(),
                  bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


CLOSED_FORMS = [
    ([0.5], 16, 3.0),
    ([0.5, -0.5], 16, 5.0),
    ([0.9], 24, 1.0 + 1.0 / 0.9),
]


@pytest.mark.parametrize("zeros,degree,expected", CLOSED_FORMS)
def test_primal_against_closed_form_and_lp(zeros, degree, expected):
    assert lp_oracle(zeros, degree) == pytest.approx(expected, abs=1e-7)
    value = cap_wiener_primal(zeros, degree)
    assert value == pytest.approx(expected, abs=1e-5)


@pytest.mark.parametrize("zeros,degree,expected", CLOSED_FORMS)
def test_certified_sandwich(zeros, degree, expected):
    prob = BasisPursuitProblem.build(zeros, degree)
    sol = solve_basis_pursuit(prob)
    lower, cert = certificate_from_solution(prob, sol)
    assert lower <= sol.value + 1e-12
    assert sol.value - lower < 1e-4
    assert cert.margin > 0
    vals = cert.functional_values(cert.verified_through)
    assert np.max(np.abs(vals)) <= 1.0
    assert cert.tail_sum() <= 1.0


def test_lp_oracle_on_rings():
    zs = sigma_star_points(2)
    lp = lp_oracle(zs, 48)
    assert cap_wiener_primal(zs, 48) == pytest.approx(lp, abs=1e-5)
    assert lp == pytest.approx(9.0, abs=1e-7)


def test_rotation_invariance_complex_mode():
    # rotating the zero set rotates coefficients, leaving the l1 norm alone
    prob = BasisPursuitProblem.build([0.5j], 16)
    assert not prob.real_mode
    sol = solve_basis_pursuit(prob)
    assert sol.value == pytest.approx(3.0, abs=1e-5)
    lower, _ = certificate_from_solution(prob, sol)
    assert lower == pytest.approx(3.0, abs=1e-4)
    assert lower <= sol.value + 1e-12


def test_conjugation_symmetry():
    l1, _ = cap_wiener_certified_lower([0.3 + 0.4j, 0.3 - 0.4j], 16)
    l2, _ = cap_wiener_certified_lower([0.3 - 0.4j, 0.3 + 0.4j], 16)
    assert l1 == pytest.approx(l2, rel=1e-10)


def test_real_mode_validation():
    with pytest.raises(ValueError):
        BasisPursuitProblem.build([0.5j], 8, real_mode=True)
    prob = BasisPursuitProblem.build(sigma_star_points(2), 48)
    assert prob.real_mode
    assert prob.constraint_matrix().dtype == np.float64


def test_duplicate_zeros_collapse():
    a = BasisPursuitProblem.build([0.5, 0.5], 16)
    assert a.zeros.size == 1


def test_degree_too_small():
    with pytest.raises(ValueError):
        BasisPursuitProblem.build([0.5, -0.5], 2)


def test_truncation_monotone_in_degree():
    coarse = cap_wiener_primal([0.7], 8)
    fine = cap_wiener_primal([0.7], 32)
    assert fine <= coarse + 1e-8


def test_schaffer_lower_values():
    assert schaffer_lower_from_capacity([0.5], degree=16) == \
        pytest.approx(1.0, abs=1e-4)
    vals = [schaffer_lower_from_capacity(sigma_star_points(n))
            for n in (2, 3, 4)]
    assert vals[0] == pytest.approx(2.0, abs=1e-4)
    # growth proxy: non-decreasing within 10 percent noise
    assert all(b >= 0.9 * a for a, b in zip(vals, vals[1:]))


def test_certificate_rescale_guards():
    prob = BasisPursuitProblem.build([0.9], 24)
    sol = solve_basis_pursuit(prob)
    lower, cert = certificate_from_solution(prob, sol)
    # scaled functional stays feasible well past the checked range
    far = cert.functional_values(4 * cert.verified_through)
    assert np.max(np.abs(far)) <= 1.0 + 1e-12
