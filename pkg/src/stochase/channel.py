"""AWGN and flat Rayleigh fading channels.

Energy convention: unit average symbol energy, Eb counts information bits,
so N0 = 1 / (rate * bits_per_symbol * Eb/N0) and the noise variance per
real dimension is sigma2 = N0 / 2.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ChannelKind(str, Enum):
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"


@dataclass(frozen=True)
class ChannelParams:
    kind: ChannelKind
    ebno_db: float
    rate: float
    bits_per_symbol: int
    block: int = 1

    @property
    def sigma2(self) -> float:
        return sigma2_from_ebno(self.ebno_db, self.rate, self.bits_per_symbol)


def sigma2_from_ebno(ebno_db: float, rate: float, bits_per_symbol: int) -> float:
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    if bits_per_symbol < 1:
        raise ValueError("bits_per_symbol must be >= 1")
    n0 = 1.0 / (rate * bits_per_symbol * 10.0 ** (ebno_db / 10.0))
    return n0 / 2.0


def ebno_from_esno(esno_db: float, rate: float, bits_per_symbol: int) -> float:
    return esno_db - 10.0 * np.log10(rate * bits_per_symbol)


def _noise(shape, sigma2: float, complex_: bool, rng: np.random.Generator) -> np.ndarray:
    sd = np.sqrt(sigma2)
    if complex_:
        z = rng.standard_normal((*shape, 2)) * sd
        return z[..., 0] + 1j * z[..., 1]
    return rng.standard_normal(shape) * sd


def awgn(symbols, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """Add white Gaussian noise of variance sigma2 per real dimension.

    Real input (BPSK) gets real noise only.
    """
    if sigma2 < 0:
        raise ValueError("sigma2 must be >= 0")
    x = np.asarray(symbols)
    return x + _noise(x.shape, sigma2, np.iscomplexobj(x), rng)


def rayleigh_gains(count: int, rng: np.random.Generator, block: int = 1) -> np.ndarray:
    """Circular complex Gaussian gains with E|h|^2 = 1, constant over ``block`` symbols."""
    n_blocks = -(-count // block)
    z = rng.standard_normal((n_blocks, 2)) * np.sqrt(0.5)
    h = z[:, 0] + 1j * z[:, 1]
    return np.repeat(h, block)[:count]


def rayleigh(symbols, sigma2: float, rng: np.random.Generator, block: int = 1):
    """y = h x + z with perfect CSI returned to the caller. Returns (y, h)."""
    if sigma2 < 0:
        raise ValueError("sigma2 must be >= 0")
    x = np.asarray(symbols)
    h = rayleigh_gains(x.shape[-1], rng, block)
    return h * x + _noise(x.shape, sigma2, True, rng), h


def transmit(kind: ChannelKind, symbols, sigma2: float, rng: np.random.Generator, block: int = 1):
    """Run one channel use; returns (received, csi) with csi None for AWGN."""
    if ChannelKind(kind) is ChannelKind.AWGN:
        return awgn(symbols, sigma2, rng), None
    return rayleigh(symbols, sigma2, rng, block)
