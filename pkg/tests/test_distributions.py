import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcollide import (
    Deterministic,
    Exponential,
    RngStream,
    UnsupportedPairError,
    ValidationError,
    cdf_difference,
    distribution_from_config,
    pdf_difference,
)


def test_stream_reproducible():
    a = RngStream(42, 3).uniform(size=8)
    b = RngStream(42, 3).uniform(size=8)
    assert np.array_equal(a, b)
    c = RngStream(42, 4).uniform(size=8)
    assert not np.array_equal(a, c)
    d = RngStream(43, 3).uniform(size=8)
    assert not np.array_equal(a, d)


def test_stream_validation():
    with pytest.raises(ValidationError):
        RngStream(-1)
    with pytest.raises(ValidationError):
        RngStream(2**64)
    with pytest.raises(ValidationError):
        RngStream(0, -1)


def test_deterministic_consumes_uniforms():
    # swapping the law must not shift later draws from the same stream
    s1 = RngStream(9)
    Deterministic(2.0).sample(s1, size=5)
    s2 = RngStream(9)
    s2.uniform(size=5)
    assert s1.uniform() == s2.uniform()


def test_deterministic_values():
    s = RngStream(0)
    assert Deterministic(1.5).sample(s) == 1.5
    out = Deterministic(1.5).sample(s, size=4)
    assert out.shape == (4,)
    assert np.all(out == 1.5)
    assert Deterministic(1.5).mean() == 1.5
    with pytest.raises(ValidationError):
        Deterministic(-0.1)
    with pytest.raises(ValidationError):
        Deterministic(float("inf"))


def test_exponential_inverse_cdf():
    u = RngStream(7).uniform()
    x = Exponential(2.0).sample(RngStream(7))
    assert x == -np.log1p(-u) / 2.0


def test_exponential_mean():
    s = RngStream(123)
    x = Exponential(0.5).sample(s, size=200_000)
    assert np.all(x >= 0)
    assert abs(x.mean() - 2.0) < 4 * 2.0 / np.sqrt(200_000)
    assert Exponential(0.5).mean() == 2.0
    with pytest.raises(ValidationError):
        Exponential(0.0)
    with pytest.raises(ValidationError):
        Exponential(-1.0)


def test_config_round_trip():
    for law in (Deterministic(1.25), Exponential(0.3)):
        assert distribution_from_config(law.to_config()) == law
    with pytest.raises(ValidationError):
        distribution_from_config({"kind": "gamma", "shape": 2})
    with pytest.raises(ValidationError):
        distribution_from_config({"kind": "exponential", "rate": 1.0, "extra": 1})
    with pytest.raises(ValidationError):
        distribution_from_config({"kind": "deterministic"})
    with pytest.raises(ValidationError):
        distribution_from_config([1, 2])


def test_pdf_difference_det_exp():
    serv, arr = Deterministic(1.0), Exponential(0.5)
    assert pdf_difference(serv, arr, 0.0) == pytest.approx(0.3032653298563167, abs=1e-15)
    assert pdf_difference(serv, arr, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert pdf_difference(serv, arr, -3.0) == pytest.approx(0.06766764161830635, abs=1e-15)
    assert pdf_difference(serv, arr, 1.0 + 1e-9) == 0.0
    assert pdf_difference(serv, arr, -1e6) == 0.0  # underflow handled without overflow


def test_pdf_difference_exp_exp():
    serv, arr = Exponential(1.0), Exponential(0.5)
    assert pdf_difference(serv, arr, 0.0) == pytest.approx(0.3333333333333333, abs=1e-15)
    assert pdf_difference(serv, arr, 2.0) == pytest.approx(0.045111761078870896, abs=1e-15)
    assert pdf_difference(serv, arr, -2.0) == pytest.approx(0.12262648039048077, abs=1e-15)


def test_cdf_difference_det_exp():
    serv, arr = Deterministic(1.0), Exponential(0.5)
    assert cdf_difference(serv, arr, 0.0) == pytest.approx(0.6065306597126334, abs=1e-15)
    assert cdf_difference(serv, arr, 1.0) == 1.0
    assert cdf_difference(serv, arr, 5.0) == 1.0


def test_cdf_difference_exp_exp():
    serv, arr = Exponential(1.0), Exponential(0.5)
    assert cdf_difference(serv, arr, 0.0) == pytest.approx(0.6666666666666667, abs=1e-15)
    assert cdf_difference(serv, arr, 2.0) == pytest.approx(0.9548882389211291, abs=1e-15)
    assert cdf_difference(serv, arr, -2.0) == pytest.approx(0.24525296078096154, abs=1e-15)


def test_pdf_integrates_to_one():
    x = np.linspace(-80.0, 1.0, 400_001)
    p = pdf_difference(Deterministic(1.0), Exponential(0.5), x)
    assert abs(np.trapezoid(p, x) - 1.0) < 1e-6
    x = np.linspace(-80.0, 80.0, 400_001)
    p = pdf_difference(Exponential(1.0), Exponential(0.5), x)
    assert abs(np.trapezoid(p, x) - 1.0) < 1e-6


def test_cdf_matches_pdf_integral():
    serv, arr = Exponential(1.0), Exponential(0.5)
    x = np.linspace(-40.0, 6.0, 2_000_001)
    p = pdf_difference(serv, arr, x)
    h = x[1] - x[0]
    cum = np.concatenate(([0.0], np.cumsum((p[1:] + p[:-1]) * 0.5 * h)))
    target = cdf_difference(serv, arr, x) - cdf_difference(serv, arr, x[0])
    assert np.max(np.abs(cum - target)) < 1e-6


def test_cdf_matches_monte_carlo():
    serv, arr = Deterministic(1.0), Exponential(0.5)
    s = RngStream(2024)
    t = Exponential(0.5).sample(s, size=100_000)
    u = 1.0 - t
    for q in (-2.0, 0.0, 0.5, 0.99):
        assert abs(np.mean(u <= q) - cdf_difference(serv, arr, q)) < 0.01


def test_unsupported_pairs():
    with pytest.raises(UnsupportedPairError):
        pdf_difference(Deterministic(1.0), Deterministic(2.0), 0.0)
    with pytest.raises(UnsupportedPairError):
        cdf_difference(Exponential(1.0), Deterministic(2.0), 0.0)


@given(
    lam=st.floats(0.05, 5.0),
    mu=st.floats(0.05, 5.0),
    xs=st.lists(st.floats(-50.0, 50.0), min_size=2, max_size=40),
)
@settings(max_examples=80, deadline=None)
def test_cdf_monotone_and_bounded(lam, mu, xs):
    x = np.sort(np.array(xs))
    f = cdf_difference(Exponential(mu), Exponential(lam), x)
    assert np.all(f >= 0.0) and np.all(f <= 1.0)
    assert np.all(np.diff(f) >= -1e-15)
    p = pdf_difference(Exponential(mu), Exponential(lam), x)
    assert np.all(p >= 0.0)


@given(size=st.integers(1, 50), seed=st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_stream_alignment_any_law(size, seed):
    s1 = RngStream(seed)
    Deterministic(1.0).sample(s1, size=size)
    s2 = RngStream(seed)
    Exponential(1.0).sample(s2, size=size)
    assert s1.uniform() == s2.uniform()
