import math

import numpy as np
import pytest

from singbern import (DomainError, FunctionHandle, Grid, SingularSample,
                      SmoothnessParams, WeightParams, chebyshev_grid, delta_n,
                      phi, preset_function, uniform_grid, weight_eval)


def test_weight_eval_examples():
    assert weight_eval(WeightParams(0.5, 1.0), 0.5) == 0.0
    assert weight_eval(WeightParams(0.5, 1.0), 0.75) == pytest.approx(0.25, abs=0)
    assert weight_eval(WeightParams(0.5, 2.0), 0.0) == pytest.approx(0.25, abs=0)


def test_weight_symmetric_about_xi():
    w = WeightParams(0.3, 1.7)
    for d in np.linspace(0.01, 0.29, 17):
        assert weight_eval(w, 0.3 + d) == pytest.approx(weight_eval(w, 0.3 - d), rel=1e-14)


def test_weight_params_validation():
    with pytest.raises(DomainError):
        WeightParams(0.0, 1.0)
    with pytest.raises(DomainError):
        WeightParams(1.0, 1.0)
    with pytest.raises(DomainError):
        WeightParams(0.5, 0.0)


def test_smoothness_params_validation():
    SmoothnessParams(0.0, 1)
    SmoothnessParams(1.0, 4)
    with pytest.raises(DomainError):
        SmoothnessParams(1.5, 1)
    with pytest.raises(DomainError):
        SmoothnessParams(0.5, 0)


def test_phi_examples_and_symmetry():
    assert phi(0.0) == 0.0
    assert phi(0.5) == 0.5
    assert phi(0.25) == pytest.approx(math.sqrt(3) / 4, rel=1e-15)
    xs = np.linspace(0, 1, 101)
    assert np.allclose(phi(xs), phi(1 - xs), atol=1e-15)
    with pytest.raises(DomainError):
        phi(-0.01)
    with pytest.raises(DomainError):
        phi(1.01)


def test_delta_n_examples_and_envelope():
    assert delta_n(100, 0.0) == pytest.approx(0.1, abs=0)
    assert delta_n(100, 0.5) == pytest.approx(0.6, abs=0)
    assert delta_n(4, 0.0) == pytest.approx(0.5, abs=0)
    for n in (1, 10, 1000):
        for x in np.linspace(0, 1, 41):
            lo = max(phi(x), n ** -0.5)
            assert lo <= delta_n(n, x) <= 2 * lo


def test_presets():
    w = WeightParams(0.5, 1.0)
    cusp = preset_function("cusp", w, 0.5)
    assert cusp(0.75) == pytest.approx(0.5, rel=1e-15)
    jump = preset_function("jump_cusp", w, 0.5)
    assert jump(0.25) == pytest.approx(-0.5, rel=1e-15)
    # alpha + beta > 0 admits negative beta
    blow = preset_function("cusp", w, -0.5)
    assert blow(0.75) == pytest.approx(0.25 ** -0.5, rel=1e-14)
    smooth = preset_function("smooth", w)
    assert smooth(0.5) == pytest.approx(1.0, rel=1e-15)
    poly = preset_function("poly_3", w)
    assert poly(0.5) == pytest.approx(0.125, rel=1e-15)


def test_preset_errors():
    w = WeightParams(0.5, 0.4)
    with pytest.raises(DomainError):
        preset_function("nope", w)
    with pytest.raises(DomainError):
        preset_function("cusp", w, -0.4)  # alpha + beta = 0


def test_singular_guard():
    w = WeightParams(0.5, 1.0)
    f = preset_function("cusp", w, 0.5)
    with pytest.raises(SingularSample):
        f(0.5)
    with pytest.raises(SingularSample):
        f(0.5 + 1e-13)
    f(0.5 + 1e-11)  # outside the guard


def test_weighted_extension_vanishes_at_xi():
    # weighted singular presets tend to 0 approaching xi
    w = WeightParams(0.3, 1.0)
    for beta in (0.5, -0.5):
        f = preset_function("cusp", w, beta)
        seq = 0.3 + 10.0 ** -np.arange(2, 10)
        vals = np.abs(weight_eval(w, seq) * np.asarray(f(seq)))
        assert vals[-1] < 1e-4
        assert np.all(np.diff(vals) < 0)


def test_grid_construction():
    w = WeightParams(0.5, 1.0)
    g = uniform_grid(101, w)
    assert np.all(np.diff(g.points) > 0)
    assert np.all(np.abs(g.points - 0.5) > 1e-9 / 2)
    c = chebyshev_grid(201, w)
    assert 0.0 < c.points[0] and c.points[-1] < 1.0
    assert len(c.points) >= 199
    with pytest.raises(DomainError):
        Grid(np.array([0.2, 0.2]))
    with pytest.raises(DomainError):
        Grid(np.array([-0.1, 0.5]))


def test_function_handle_vector_and_scalar():
    f = FunctionHandle(lambda x: x ** 2, None)
    assert f(0.5) == 0.25
    assert isinstance(f(0.5), float)
    out = f(np.array([0.1, 0.2]))
    assert out.shape == (2,)
