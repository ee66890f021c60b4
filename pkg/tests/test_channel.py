import numpy as np
import pytest
from scipy import stats

from stochase.channel import (
    ChannelKind,
    ChannelParams,
    awgn,
    ebno_from_esno,
    rayleigh,
    rayleigh_gains,
    sigma2_from_ebno,
    transmit,
)


def test_sigma2_reference_points():
    assert sigma2_from_ebno(0.0, 1.0, 1) == pytest.approx(0.5)
    assert sigma2_from_ebno(3.0103, 1.0, 1) == pytest.approx(0.25, rel=1e-5)
    assert sigma2_from_ebno(5.0, 0.5, 2) == pytest.approx(sigma2_from_ebno(5.0, 1.0, 2) * 2)
    assert ChannelParams(ChannelKind.AWGN, 3.0, 0.8, 4).sigma2 == sigma2_from_ebno(3.0, 0.8, 4)


def test_esno_conversion_roundtrip():
    # Es/N0 = Eb/N0 + 10 log10(R m), so sigma2 = 1 / (2 Es/N0)
    eb = ebno_from_esno(10.0, 5 / 7, 3)
    assert sigma2_from_ebno(eb, 5 / 7, 3) == pytest.approx(0.5 / 10.0)


def test_awgn_zero_noise_is_identity():
    x = np.array([1 + 1j, -1 - 1j])
    assert np.array_equal(awgn(x, 0.0, np.random.default_rng(0)), x)


def test_awgn_variance_per_dimension():
    rng = np.random.default_rng(1)
    n = 10**6
    z = awgn(np.zeros(n, dtype=complex), 0.3, rng)
    assert np.var(z.real) == pytest.approx(0.3, rel=0.01)
    assert np.var(z.imag) == pytest.approx(0.3, rel=0.01)
    assert abs(z.real.mean()) < 3 * np.sqrt(0.3 / n)


def test_awgn_real_input_stays_real():
    z = awgn(np.ones(10), 0.1, np.random.default_rng(2))
    assert not np.iscomplexobj(z)


def test_rayleigh_normalisation_and_cdf():
    rng = np.random.default_rng(3)
    h = rayleigh_gains(10**6, rng)
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, abs=0.01)
    r = np.abs(h[:10**5])
    ks = stats.kstest(r, lambda v: 1 - np.exp(-v**2)).statistic
    assert ks < 0.005


def test_rayleigh_iid_per_symbol():
    h = rayleigh_gains(10**5, np.random.default_rng(4))
    a = np.abs(h) ** 2 - 1
    lag1 = np.mean(a[1:] * a[:-1]) / np.mean(a * a)
    assert abs(lag1) < 3 / np.sqrt(len(a))


def test_block_fading_holds_gain():
    h = rayleigh_gains(10, np.random.default_rng(5), block=4)
    assert h[0] == h[3] and h[4] == h[7] and h[8] == h[9] and h[0] != h[4]


def test_rayleigh_noiseless_with_csi():
    x = np.exp(1j * np.pi / 4 * np.arange(8))
    y, h = rayleigh(x, 0.0, np.random.default_rng(6))
    assert np.allclose(y / h, x)


def test_transmit_dispatch_and_determinism():
    x = np.ones(16, dtype=complex)
    y1, c1 = transmit(ChannelKind.AWGN, x, 0.1, np.random.default_rng(7))
    y2, _ = transmit("awgn", x, 0.1, np.random.default_rng(7))
    assert c1 is None and np.array_equal(y1, y2)
    _, c3 = transmit("rayleigh", x, 0.1, np.random.default_rng(7))
    assert c3.shape == (16,)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        sigma2_from_ebno(1.0, 0.0, 2)
    with pytest.raises(ValueError):
        awgn(np.ones(2), -1.0, np.random.default_rng(0))
