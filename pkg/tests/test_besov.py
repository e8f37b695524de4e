"""Radial quadrature and Besov seminorms against closed forms.

The monomial oracle: for f = z^N the circle norm of f' is N rho^(N-1) for
every p, so the seminorm in B^0_{p,q} collapses to the Beta integral

    N * B(q, (N-1)q + 1)^(1/q).

Expected values below were frozen from a 30-digit mpmath evaluation.
"""

import math

import numpy as np
import pytest

from besovcap.besov import (
    DELTA_FLOOR,
    BesovParams,
    RadialQuadrature,
    besov_norm,
    besov_seminorm,
    bloch_seminorm,
    suggested_quadrature,
    tail_bound,
)
from besovcap.circle import INF
from besovcap.disk import (
    BlaschkeProduct,
    FunctionHandle,
    Monomial,
    interp_sequence,
    sigma_star_handle,
)

# N -> {q: seminorm}; q = 1 integrates to exactly 1 for every N
MONOMIAL_ORACLE = {
    1: {1: 1.0, 2: 0.70710678118654752, 4: 0.70710678118654752},
    2: {1: 1.0, 2: 0.57735026918962576, 4: 0.48892302243490102},
    8: {1: 1.0, 2: 0.51639777949432225, 4: 0.41079019439546972},
    64: {1: 1.0, 2: 0.50196464411052685, 4: 0.39358105968561239},
    256: {1: 1.0, 2: 0.50048899767188355, 4: 0.39184537116206389},
}

FINE = RadialQuadrature(delta=2.0 ** -40)


def test_monomial_beta_closed_form():
    for N, by_q in MONOMIAL_ORACLE.items():
        for q, expected in by_q.items():
            rep = besov_seminorm(Monomial(N), BesovParams(2.0, float(q)), FINE)
            assert rep.value == pytest.approx(expected, rel=1e-8), (N, q)


def test_monomial_p_independence():
    rep1 = besov_seminorm(Monomial(8), BesovParams(1.0, 2.0), FINE)
    rep2 = besov_seminorm(Monomial(8), BesovParams(INF, 2.0), FINE)
    assert rep1.value == pytest.approx(rep2.value, rel=1e-9)


def test_monomial_sup_q():
    # sup_rho (1-rho) N rho^(N-1) = ((N-1)/N)^(N-1), peak at rho = (N-1)/N
    for N in (1, 2, 8):
        expected = 1.0 if N == 1 else ((N - 1) / N) ** (N - 1)
        rep = besov_seminorm(Monomial(N), BesovParams(2.0, INF), FINE)
        assert rep.value == pytest.approx(expected, rel=1e-10)


def test_identity_function_sup_exact():
    # f = z: (1-rho)*1 peaks at rho = 0, an explicit breakpoint
    h = FunctionHandle(lambda z: z, lambda z: np.ones_like(z), degree_hint=1,
                       deriv_sup_bound=1.0)
    rep = besov_seminorm(h, BesovParams(INF, INF))
    assert rep.value == 1.0


def test_bloch_z_squared_exact():
    # (1-rho) * 2 rho peaks at the dyadic breakpoint rho = 1/2
    assert bloch_seminorm(Monomial(2)).value == pytest.approx(0.5, abs=1e-15)


def test_norm_adds_origin_value():
    h = FunctionHandle(lambda z: 1.0 + 0.0 * z, lambda z: 0.0 * z,
                       degree_hint=0, deriv_sup_bound=0.0)
    rep = besov_norm(h, BesovParams(2.0, 2.0))
    assert rep.value == pytest.approx(1.0, abs=1e-15)
    m = Monomial(3)
    nrm = besov_norm(m, BesovParams(2.0, 2.0), FINE)
    sem = besov_seminorm(m, BesovParams(2.0, 2.0), FINE)
    assert nrm.value == sem.value  # f(0) = 0


def test_tail_bound_arithmetic():
    # (N delta)^(q/p) * p/q, straight from the inner-function bound
    assert tail_bound(10, BesovParams(1.0, 2.0), 1e-3) == pytest.approx(5e-5)
    assert tail_bound(16, BesovParams(2.0, 2.0), 2.0 ** -8) == \
        pytest.approx(0.0625)
    with pytest.raises(ValueError):
        tail_bound(10, BesovParams(1.0, 2.0), 0.7)  # delta beyond 1/2


def test_blaschke_report_tail_matches_formula():
    b = BlaschkeProduct([0.5, -0.25])
    quad = RadialQuadrature(delta=1e-4)
    params = BesovParams(1.0, 2.0)
    rep = besov_seminorm(b, params, quad)
    assert rep.tail_bound == pytest.approx(tail_bound(2, params, 1e-4))


def test_unknown_handle_warns_infinite_tail():
    h = FunctionHandle(lambda z: np.exp(z), lambda z: np.exp(z))
    with pytest.warns(UserWarning):
        rep = besov_seminorm(h, BesovParams(2.0, 2.0),
                             RadialQuadrature(delta=1e-4))
    assert math.isinf(rep.tail_bound)
    assert rep.value > 0


def test_deriv_sup_bound_tail():
    h = FunctionHandle(lambda z: z, lambda z: np.ones_like(z),
                       degree_hint=1, deriv_sup_bound=1.0)
    rep = besov_seminorm(h, BesovParams(2.0, 2.0),
                         RadialQuadrature(delta=1e-4))
    # (S delta)^q / q with S = 1
    assert rep.tail_bound == pytest.approx(1e-8 / 2.0, rel=1e-12)


def test_refinement_within_reported_error():
    cases = [
        (sigma_star_handle(2), BesovParams(1.0, INF)),
        (Monomial(16), BesovParams(2.0, 2.0)),
        (BlaschkeProduct([0.5, -0.3 + 0.4j, 0.7j]), BesovParams(2.0, 4.0)),
    ]
    for handle, params in cases:
        quad = suggested_quadrature(handle)
        rep = besov_seminorm(handle, params, quad)
        finer = RadialQuadrature(delta=max(quad.delta / 2.0, DELTA_FLOOR),
                                 gauss_order=2 * quad.gauss_order,
                                 oversample=quad.oversample)
        rep2 = besov_seminorm(handle, params, finer)
        tol = 10.0 * rep.quad_error_est + 1e-10 * abs(rep.value) \
            + 10.0 * rep.tail_bound ** (1.0 if params.q == INF else 1.0 / params.q)
        assert abs(rep2.value - rep.value) <= tol, (params, rep, rep2)


def test_seminorm_monotone_in_p():
    b = BlaschkeProduct([0.5, -0.3 + 0.4j])
    quad = RadialQuadrature(delta=1e-5)
    vals = [besov_seminorm(b, BesovParams(p, 2.0), quad).value
            for p in (1.0, 4.0 / 3.0, 2.0, 3.0, 4.0)]
    assert all(a <= bb * (1 + 1e-9) for a, bb in zip(vals, vals[1:]))
    sup_val = besov_seminorm(b, BesovParams(INF, 2.0), quad).value
    assert vals[-1] <= sup_val * (1 + 1e-6)


def test_quadrature_validation():
    with pytest.raises(ValueError):
        RadialQuadrature(delta=0.0)
    with pytest.raises(ValueError):
        RadialQuadrature(delta=0.6)
    with pytest.raises(ValueError):
        RadialQuadrature(delta=DELTA_FLOOR / 4.0)
    with pytest.raises(ValueError):
        RadialQuadrature(delta=1e-6, gauss_order=2)


def test_params_validation():
    with pytest.raises(ValueError):
        BesovParams(0.5, 2.0)
    with pytest.raises(ValueError):
        BesovParams(2.0, -1.0)


def test_breakpoints_exact_dyadics():
    quad = RadialQuadrature(delta=2.0 ** -10)
    us = quad.u_breakpoints()
    assert us[0] == 2.0 ** -10
    assert us[-1] == 1.0
    assert 0.5 in us and 0.25 in us
    assert all(a < b for a, b in zip(us, us[1:]))


def test_suggested_quadrature_boundary_zeros():
    # hugging zeros shrink delta so their layer stays inside the integral
    h8 = BlaschkeProduct(interp_sequence(8))
    assert suggested_quadrature(h8).delta == pytest.approx(1e-6)
    h32 = BlaschkeProduct(interp_sequence(32))
    assert suggested_quadrature(h32).delta == DELTA_FLOOR
    # the generic 1e-6 cap binds when degree is small and zeros are central
    assert suggested_quadrature(Monomial(4)).delta == pytest.approx(1e-6)


def test_report_nodes_positive():
    rep = besov_seminorm(Monomial(4), BesovParams(2.0, 2.0))
    assert rep.nodes_used > 0
    assert rep.quad_error_est >= 0.0


def test_bloch_single_factor_closed_form():
    # sup_rho (1-rho) max|b'| = (1+r)/(4r) for r >= 1/2, peak at rho = 2-1/r;
    # hugging zeros off the uniform grid exercise the log-refined sampler
    for r, phi in ((0.9999, 0.3), (0.999, 2.0), (0.75, 1.234)):
        h = BlaschkeProduct([r * np.exp(1j * phi)])
        rep = bloch_seminorm(h)
        assert rep.value == pytest.approx((1 + r) / (4 * r), rel=1e-4)


def test_interp_sup_norms_grow():
    # boundary-hugging zeros add ~const per dyadic layer to the squared
    # (inf,2) seminorm, so doubling N must raise the norm measurably
    n8 = besov_norm(BlaschkeProduct(interp_sequence(8)), BesovParams(INF, 2.0))
    n32 = besov_norm(BlaschkeProduct(interp_sequence(32)), BesovParams(INF, 2.0))
    assert n32.value > 1.3 * n8.value
