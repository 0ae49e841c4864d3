import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newsflow import ConfigError, Series
from newsflow.cwt import (
    Scaleogram,
    WaveletSpec,
    cwt,
    default_scales,
    magnitude,
    parse_scale_spec,
    read_scaleogram_csv,
    wavelet_eval,
    write_scaleogram_csv,
)

from .oracles import cwt_brute, dog

ORDERS = [1, 2, 3, 4]


def test_order1_odd():
    spec = WaveletSpec(1)
    assert wavelet_eval(spec, 0.0) == 0.0
    t = np.linspace(0.1, 6, 50)
    np.testing.assert_array_equal(wavelet_eval(spec, -t), -wavelet_eval(spec, t))


@pytest.mark.parametrize("order", ORDERS)
def test_wavelet_matches_explicit_derivative(order):
    t = np.linspace(-9, 9, 301)
    ref = np.array([dog(order, v) for v in t])
    np.testing.assert_allclose(wavelet_eval(WaveletSpec(order), t), ref, rtol=1e-13, atol=1e-15)


def test_order1_riemann_sum_zero():
    t = np.arange(-8000, 8001) * 1e-3
    assert abs(np.sum(wavelet_eval(WaveletSpec(1), t)) * 1e-3) < 1e-8


@pytest.mark.parametrize("order", ORDERS)
def test_zero_mean_and_unit_energy(order):
    t = np.linspace(-8, 8, 160001)
    psi = wavelet_eval(WaveletSpec(order), t)
    assert abs(np.trapezoid(psi, t)) < 1e-8
    assert np.trapezoid(psi * psi, t) == pytest.approx(1.0, abs=1e-6)


def test_wavelet_order_validation():
    for bad in (0, 5, 1.5):
        with pytest.raises(ConfigError):
            WaveletSpec(bad)


def test_zero_series_gives_zero_matrix():
    sg = cwt(Series(np.zeros(40)), scales=[1, 2, 4])
    assert sg.coefficients.shape == (3, 40)
    assert not sg.coefficients.any()


@pytest.mark.parametrize("order", ORDERS)
def test_impulse_response(order):
    n, t0 = 50, 17
    f = np.zeros(n)
    f[t0] = 1.0
    scales = [0.7, 1.0, 3.5, 12.0]
    sg = cwt(f, WaveletSpec(order), scales, center=False)
    spec = WaveletSpec(order)
    for i, a in enumerate(scales):
        for b in range(n):
            assert sg.coefficients[i, b] == pytest.approx(
                wavelet_eval(spec, (t0 - b) / a) / math.sqrt(a), rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("order", ORDERS)
@pytest.mark.parametrize("n", [2, 3, 17, 64])
def test_brute_force_equivalence(order, n):
    r = np.random.default_rng(n * 10 + order)
    f = r.normal(size=n) * 10
    scales = np.geomspace(0.5, max(n / 4, 1.0), 12)
    sg = cwt(f, WaveletSpec(order), scales, center=False)
    ref = np.array(cwt_brute(f.tolist(), scales.tolist(), order))
    assert np.abs(sg.coefficients - ref).max() <= 1e-12


def test_centering_default():
    r = np.random.default_rng(3)
    f = r.normal(size=60) + 100
    np.testing.assert_allclose(cwt(f, scales=[2, 5]).coefficients,
                               cwt(f - f.mean(), scales=[2, 5], center=False).coefficients,
                               atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.floats(-10, 10), st.floats(-10, 10), st.sampled_from(ORDERS),
       st.booleans())
def test_linearity(seed, alpha, beta, order, center):
    r = np.random.default_rng(seed)
    f, g = r.normal(size=80), r.normal(size=80) * 5
    spec, scales = WaveletSpec(order), default_scales(80, 16)
    lhs = cwt(alpha * f + beta * g, spec, scales, center).coefficients
    rhs = (alpha * cwt(f, spec, scales, center).coefficients
           + beta * cwt(g, spec, scales, center).coefficients)
    assert np.abs(lhs - rhs).max() <= 1e-9


def test_interior_shift_covariance():
    n, a_max, k = 400, 4.0, 7
    m = int(8 * a_max) + 1
    r = np.random.default_rng(5)
    f = np.zeros(n)
    f[m + 40: n - 1 - m - 40] = r.normal(size=n - 2 * m - 81)
    g = np.roll(f, k)
    assert not g[:m].any() and not g[n - m:].any()
    scales = np.geomspace(1, a_max, 8)
    wf = cwt(f, scales=scales, center=False).coefficients
    wg = cwt(g, scales=scales, center=False).coefficients
    interior = slice(m, n - m - k)
    np.testing.assert_allclose(wg[:, m + k: n - m], wf[:, interior], atol=1e-9)


def test_grid_validation():
    with pytest.raises(ConfigError):
        cwt(np.ones(10), scales=[])
    with pytest.raises(ConfigError):
        cwt(np.ones(10), scales=[2, 1])
    with pytest.raises(ConfigError):
        cwt(np.ones(10), scales=[0, 1])
    with pytest.raises(ConfigError):
        cwt(np.ones(1))


def test_default_grid():
    a = default_scales(2000)
    assert a.size == 64 and a[0] == 1.0 and a[-1] == pytest.approx(500.0)
    assert np.all(np.diff(np.log(a)) == pytest.approx(np.log(500) / 63))


@pytest.mark.parametrize("text", ["0:10:5", "-1:10:5", "5:5:4", "6:5:4", "1:10:1", "1:10", "a:b:c"])
def test_scale_spec_rejects(text):
    with pytest.raises(ConfigError):
        parse_scale_spec(text)


def test_scale_spec_parses():
    np.testing.assert_allclose(parse_scale_spec("1:100:3"), [1, 10, 100])


def test_magnitude():
    assert not magnitude(np.zeros((2, 3))).any()
    assert magnitude(np.array([[-3.5]]))[0, 0] == 3.5
    m = np.random.default_rng(1).normal(size=(4, 5))
    np.testing.assert_array_equal(magnitude(magnitude(m)), magnitude(m))
    assert (magnitude(m) >= 0).all()


def test_scaleogram_csv_round_trip():
    r = np.random.default_rng(8)
    sg = cwt(r.normal(size=30), scales=[1.0, 2.5, 7.0])
    data = write_scaleogram_csv(sg)
    assert data.startswith(b"scale,b0,b1,")
    back = read_scaleogram_csv(data)
    np.testing.assert_array_equal(back.coefficients, sg.coefficients)
    np.testing.assert_array_equal(back.scales, sg.scales)
    np.testing.assert_array_equal(back.shifts, np.arange(30))


def test_scaleogram_shape_checked():
    with pytest.raises(ValueError):
        Scaleogram(np.zeros((2, 3)), np.array([1.0]), np.arange(3))
