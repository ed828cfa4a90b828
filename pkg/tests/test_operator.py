import numpy as np
import pytest

from singbern import (DomainError, DomainTooSmall, FunctionHandle,
                      OperatorConfig, SingularSample, WeightParams,
                      approximate, approximate_derivative, chebyshev_grid,
                      phi, preset_function, weight_eval, weighted_error)
from singbern.experiments import grid_sup, patch_error_ratio, random_piecewise
from singbern.operator import PreparedOperator

W5 = WeightParams(0.5, 1.0)

# 200-digit evaluation of the identical formula (geometry, smoothstep,
# patch, two-term combination) for f = |x-1/2|^{3/2}, base_n = 256, x = 0.9
HIGH_PRECISION_REFERENCE = 0.2529820326705596020024729184539258789831


def test_reproduces_constants_and_linears():
    one = FunctionHandle(lambda x: np.ones_like(x), None)
    ident = FunctionHandle(lambda x: x, None)
    cfg = OperatorConfig(256, 2, 2, W5, 0.0)
    xs = np.linspace(0.0, 1.0, 41)
    assert np.max(np.abs(approximate(cfg, one, xs) - 1.0)) <= 1e-12
    assert np.max(np.abs(approximate(cfg, ident, xs) - xs)) <= 1e-9


def test_matches_high_precision_oracle():
    f = preset_function("cusp", W5, 1.5)
    cfg = OperatorConfig(256, 2, 2, W5, 0.0)
    got = approximate(cfg, f, 0.9)
    assert got == pytest.approx(HIGH_PRECISION_REFERENCE, abs=1e-6)
    assert got == pytest.approx(HIGH_PRECISION_REFERENCE, abs=1e-12)


@pytest.mark.parametrize("q,r", [(1, 1), (2, 2), (3, 3)])
def test_polynomial_reproduction_order(q, r):
    # q-term combination and degree-r patch reproduce degree <= min(q, r)
    d = min(q, r)
    coef = np.linspace(1.0, -0.4, d + 1)
    f = FunctionHandle(lambda x, c=coef: np.polyval(c, x), None)
    cfg = OperatorConfig(256, q, r, W5, 0.0)
    xs = chebyshev_grid(101, W5).points
    err = np.abs(approximate(cfg, f, xs) - np.polyval(coef, xs))
    assert np.max(err) <= 1e-9


def test_derivative_of_linears_and_TRivial_orders():
    ident = FunctionHandle(lambda x: x, None)
    cfg = OperatorConfig(256, 1, 2, W5, 0.0)
    assert approximate_derivative(cfg, ident, 1, 0.4) == pytest.approx(1.0, abs=1e-8)
    assert approximate_derivative(cfg, ident, 2, 0.4) == pytest.approx(0.0, abs=1e-8)


def test_derivative_smooth_point_value():
    # derivative of the operator tracks f' away from the patch zone
    w = WeightParams(0.3, 1.0)
    f = preset_function("smooth", w)
    cfg = OperatorConfig(256, 1, 1, w, 0.0)
    assert abs(approximate_derivative(cfg, f, 1, 0.5) - 0.0) <= 1e-2


def test_weighted_error_polynomial_zero():
    f = FunctionHandle(lambda x: 2.0 * x - 0.3, None)
    cfg = OperatorConfig(128, 2, 2, W5, 0.0)
    xs = chebyshev_grid(101, W5).points
    assert np.max(weighted_error(cfg, f, xs)) <= 1e-9


def test_weighted_error_near_singularity_small():
    f = preset_function("cusp", W5, 0.5)
    cfg = OperatorConfig(256, 2, 2, W5, 0.0)
    for x in (0.5 + 1e-6, 0.5 - 1e-6):
        assert weighted_error(cfg, f, x) <= 1e-5


def test_weighted_error_guard():
    f = preset_function("cusp", W5, 0.5)
    cfg = OperatorConfig(256, 2, 2, W5, 0.0)
    with pytest.raises(SingularSample):
        weighted_error(cfg, f, 0.5)


def test_outer_error_decay_regression():
    # weighted error at a fixed outer point drops by ~n^{-q} per degree step
    w = WeightParams(0.3, 1.0)
    f = preset_function("smooth", w)
    ratios = {}
    for q in (1, 2):
        e = {n: PreparedOperator(OperatorConfig(n, q, 2, w, 0.0), f)
             .weighted_error(0.9) for n in (256, 1024)}
        ratios[q] = e[256] / e[1024]
    assert 3.0 <= ratios[1] <= 6.0
    assert 10.0 <= ratios[2] <= 24.0


def test_domain_too_small_propagates():
    with pytest.raises(DomainTooSmall):
        OperatorConfig(10, 1, 2, WeightParams(0.3, 1.0), 0.0)
    f = preset_function("cusp", WeightParams(0.3, 1.0), 0.5)
    with pytest.raises(DomainTooSmall):
        # knots fit at n=64 but the r=2 node stencil does not
        PreparedOperator(OperatorConfig(64, 1, 2, WeightParams(0.3, 1.0), 0.0), f)


def test_stability_uniform_in_n():
    # weighted sup of the operator output stays bounded (<= 8) for
    # unit-norm rough inputs, uniformly in the degree
    grid = chebyshev_grid(201, W5).points
    for seed in range(3):
        f = random_piecewise(seed, W5)
        for n in (64, 128, 256, 512, 1024):
            op = PreparedOperator(OperatorConfig(n, 1, 2, W5, 0.0), f)
            norm = grid_sup(W5, np.asarray(op.evaluate(grid)), grid)
            assert norm <= 8.0


def test_derivative_bound_no_growth():
    # ||w B^{(r)} f|| / (n^r ||w f||) does not grow across the degree sweep
    grid = chebyshev_grid(201, W5).points
    f = random_piecewise(0, W5)
    fnorm = grid_sup(W5, np.asarray(f(grid)), grid)
    ratios = []
    for n in (64, 128, 256, 512, 1024):
        op = PreparedOperator(OperatorConfig(n, 1, 2, W5, 0.0), f)
        dnorm = grid_sup(W5, np.asarray(op.derivative(2, grid)), grid)
        ratios.append(dnorm / (n ** 2 * fnorm))
    assert max(ratios) <= 2.0 * ratios[0]


def test_phi_weighted_derivative_shape_lambda_one():
    # ||w phi^r B^{(r)} f|| <= C n^{r/2} ||w f|| at lambda = 1
    grid = chebyshev_grid(201, W5).points
    f = random_piecewise(1, W5)
    fnorm = grid_sup(W5, np.asarray(f(grid)), grid)
    ratios = []
    for n in (64, 128, 256, 512, 1024):
        op = PreparedOperator(OperatorConfig(n, 1, 2, W5, 1.0), f)
        vals = phi(grid) ** 2 * np.asarray(op.derivative(2, grid))
        ratios.append(grid_sup(W5, vals, grid) / (n ** 1 * fnorm))
    assert max(ratios) <= 2.0 * ratios[0]


@pytest.mark.parametrize("lam", [0.0, 1.0])
def test_patch_error_ratio_no_growth(lam):
    # w |g - H| on the patch band against (delta_n / (sqrt n phi^lam))^r:
    # the constant fitted at base 256 is not exceeded by more than 2x
    g = preset_function("smooth", W5)
    k = patch_error_ratio(256, W5, 2, lam, g)
    for n in (512, 1024):
        assert patch_error_ratio(n, W5, 2, lam, g) <= 2.0 * k


def test_degree_cap_and_derivative_order_errors():
    f = preset_function("cusp", W5, 0.5)
    with pytest.raises(DomainError):
        # combination degree q * base_n exceeds the basis table cap
        PreparedOperator(OperatorConfig(4096, 3, 2, W5, 0.0), f)
    op = PreparedOperator(OperatorConfig(128, 1, 2, W5, 0.0), f)
    with pytest.raises(DomainError):
        op.derivative(129, 0.5)


@pytest.mark.parametrize("lam,r,expect_err", [(0.5, 2, (1.3, 1.6)),
                                              (0.0, 3, (1.3, 1.6))])
def test_equivalence_holds_off_default_parameters(lam, r, expect_err):
    from singbern import ExperimentConfig, run_equivalence
    cfg = ExperimentConfig(preset="cusp", beta=0.5, xi=0.5, alpha=1.0,
                           lam=lam, r=r, q=r, n_list=(256, 512, 1024, 2048),
                           grid_size=201)
    res = run_equivalence(cfg)
    assert res.gap <= 0.3
    assert expect_err[0] <= res.slope_error <= expect_err[1]


def test_prepared_operator_scalar_vector_agree():
    f = preset_function("cusp", W5, 0.5)
    op = PreparedOperator(OperatorConfig(128, 2, 2, W5, 0.0), f)
    xs = np.array([0.1, 0.45, 0.9])
    vec = op.evaluate(xs)
    for x, v in zip(xs, vec):
        assert op.evaluate(float(x)) == pytest.approx(v, rel=1e-15)
