"""Gray-labelled constellations and soft demapping.

Sign convention: an LLR r > 0 favours bit 0, and the bit probability is
p = Pr{bit = 1} = 1 / (1 + exp(r)). With BPSK (0 -> +1, 1 -> -1) and real
noise of variance sigma2 this gives r = 2y / sigma2.

All demapping uses the per-dimension noise variance sigma2 and the metric
|Y - h s|^2 / (2 sigma2), so the bitwise LLRs, the symbol APP matrix and
the BPSK closed form agree with each other.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit, softmax

from .codecs import bits_to_symbols, symbols_to_bits

LLR_CLAMP = 40.0


class Scheme(str, Enum):
    BPSK = "bpsk"
    PSK = "psk"
    QAM = "qam"


@dataclass(frozen=True, eq=False)
class ConstellationSpec:
    """``points[label]`` is the unit-average-energy point carrying ``label``."""

    scheme: Scheme
    order: int
    points: np.ndarray

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def is_real(self) -> bool:
        return self.scheme is Scheme.BPSK

    @property
    def label_bits(self) -> np.ndarray:
        """(order, bits_per_symbol) 0/1 matrix, MSB first."""
        return symbols_to_bits(np.arange(self.order)[:, None], self.bits_per_symbol)

    @property
    def name(self) -> str:
        if self.scheme is Scheme.BPSK:
            return "bpsk"
        return f"{self.order}{self.scheme.value}"


def gray(n_bits: int) -> np.ndarray:
    i = np.arange(1 << n_bits)
    return i ^ (i >> 1)


def _pam_axis(n_bits: int) -> tuple[np.ndarray, np.ndarray]:
    """Levels -(L-1)..(L-1) in steps of 2 and the Gray label of each level."""
    levels = np.arange(-(1 << n_bits) + 1, 1 << n_bits, 2, dtype=float)
    return levels, gray(n_bits)


def constellation(scheme: str | Scheme, order: int = 2) -> ConstellationSpec:
    """Build BPSK, M-PSK or M-QAM with reflected Gray labelling.

    Square QAM (even bits) uses per-axis Gray labels with the high half of
    the label on the in-phase axis. Odd-bit QAM (8, 32, 128, ...) is the
    rectangular 2^ceil(m/2) x 2^floor(m/2) grid labelled the same way.
    """
    scheme = scheme if isinstance(scheme, Scheme) else Scheme(scheme.lower())
    if scheme is Scheme.BPSK:
        order = 2
    m = order.bit_length() - 1
    if order < 2 or (1 << m) != order:
        raise ValueError(f"order must be a power of two >= 2, got {order}")

    if scheme is Scheme.BPSK:
        pts = np.array([1.0, -1.0])
        return ConstellationSpec(scheme, 2, pts)

    if scheme is Scheme.PSK:
        pts = np.zeros(order, dtype=complex)
        pts[gray(m)] = np.exp(2j * np.pi * np.arange(order) / order)
        return ConstellationSpec(scheme, order, pts)

    if m < 2:
        raise ValueError("QAM needs at least 4 points")
    mi, mq = (m + 1) // 2, m // 2
    li, gi = _pam_axis(mi)
    lq, gq = _pam_axis(mq)
    pts = np.zeros(order, dtype=complex)
    for a in range(len(li)):
        for b in range(len(lq)):
            pts[(gi[a] << mq) | gq[b]] = li[a] + 1j * lq[b]
    pts /= np.sqrt(np.mean(np.abs(pts) ** 2))
    return ConstellationSpec(scheme, order, pts)


def constellation_from_name(name: str) -> ConstellationSpec:
    """Parse ``bpsk``, ``8psk``, ``32qam``, ``qam32``, ``psk-256``..."""
    s = name.strip().lower().replace("-", "")
    if s == "bpsk":
        return constellation(Scheme.BPSK)
    for scheme in (Scheme.PSK, Scheme.QAM):
        tag = scheme.value
        if s.endswith(tag) and s[: -len(tag)].isdigit():
            return constellation(scheme, int(s[: -len(tag)]))
        if s.startswith(tag) and s[len(tag):].isdigit():
            return constellation(scheme, int(s[len(tag):]))
    if s == "qpsk":
        return constellation(Scheme.PSK, 4)
    raise ValueError(f"unrecognised modulation {name!r}")


def pad_bits(bits, bits_per_symbol: int) -> np.ndarray:
    """Zero-fill to a multiple of bits_per_symbol."""
    bits = np.asarray(bits, dtype=np.int64)
    extra = (-bits.shape[-1]) % bits_per_symbol
    if extra:
        pad = np.zeros((*bits.shape[:-1], extra), dtype=np.int64)
        bits = np.concatenate([bits, pad], axis=-1)
    return bits


def modulate(spec: ConstellationSpec, bits) -> np.ndarray:
    """Map MSB-first groups of bits_per_symbol bits to constellation points."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] % spec.bits_per_symbol:
        raise ValueError("bit count must be a multiple of bits_per_symbol; zero-fill first")
    labels = bits_to_symbols(bits, spec.bits_per_symbol)
    return spec.points[labels]


def bpsk_bit_prob(y, sigma2: float) -> np.ndarray:
    """Pr{bit = 1 | y} = 1 / (1 + exp(2y / sigma2)) for BPSK over real AWGN."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return llr_to_prob(2.0 * np.asarray(y, dtype=float) / sigma2)


def llr_to_prob(r) -> np.ndarray:
    r = np.clip(np.asarray(r, dtype=float), -LLR_CLAMP, LLR_CLAMP)
    return expit(-r)


def hard_decision(r) -> np.ndarray:
    return (np.asarray(r) < 0).astype(np.int64)


def _metrics(y, spec: ConstellationSpec, sigma2: float, csi=None) -> np.ndarray:
    """Log-likelihoods -|y - h s|^2 / (2 sigma2), shape (N, order)."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    y = np.asarray(y)
    h = np.ones(1) if csi is None else np.asarray(csi)
    d = y[:, None] - h.reshape(-1, 1) * spec.points[None, :]
    return -(d.real**2 + d.imag**2) / (2.0 * sigma2)


def _shifted_exp(metric: np.ndarray) -> np.ndarray:
    return np.exp(metric - metric.max(axis=1, keepdims=True))


def _llrs_from_exp(e: np.ndarray, spec: ConstellationSpec) -> np.ndarray:
    """L(b) = log sum over labels with bit b = 0 minus the same over bit b = 1.

    ``e`` holds the likelihoods scaled by the row maximum, so each metric
    is exponentiated once and both per-bit sums come from one matrix
    product. A sum only underflows when its log is ~700 below the row
    maximum, far beyond the +-40 clamp.
    """
    lb = _label_bits(spec)
    with np.errstate(divide="ignore"):
        out = np.log(e @ (1.0 - lb)) - np.log(e @ lb)
    return np.clip(out, -LLR_CLAMP, LLR_CLAMP)


def _label_bits(spec: ConstellationSpec) -> np.ndarray:
    key = spec.order
    if key not in _LABEL_BITS:
        _LABEL_BITS[key] = spec.label_bits.astype(float)
    return _LABEL_BITS[key]


_LABEL_BITS: dict[int, np.ndarray] = {}


def qary_bit_llr(y, spec: ConstellationSpec, sigma2: float, csi=None) -> np.ndarray:
    """Exact bitwise LLRs by log-sum-exp over the constellation, shape (N, bits).

    ``csi`` is the per-symbol complex fading gain (None for AWGN).
    """
    y = np.atleast_1d(y)
    return _llrs_from_exp(_shifted_exp(_metrics(y, spec, sigma2, csi)), spec)


def symbol_app(y, spec: ConstellationSpec, sigma2: float, csi=None, beta: float = 1.0) -> np.ndarray:
    """Per-symbol posterior over constellation labels, rows normalised to 1.

    ``beta`` scales the log-likelihoods before normalisation (noise
    dependent scaling); beta = 1 is the plain channel posterior.
    """
    y = np.atleast_1d(y)
    return softmax(beta * _metrics(y, spec, sigma2, csi), axis=1)


def demap(y, spec: ConstellationSpec, sigma2: float, csi=None, beta: float = 1.0):
    """(APP matrix, bit LLRs) from one metric evaluation; LLRs scaled by beta."""
    e = _shifted_exp(_metrics(np.atleast_1d(y), spec, sigma2, csi))
    llr = beta * _llrs_from_exp(e, spec)
    app = e if beta == 1.0 else e**beta
    app = app / app.sum(axis=1, keepdims=True)
    return app, llr.reshape(-1)


def bitwise_to_symbol_app(p, m: int) -> np.ndarray:
    """Symbol APP rows from bit probabilities Pr{bit=1}, m bits per symbol, MSB first.

    Row i, column j is the product over the bits of label j of p (bit 1)
    or 1 - p (bit 0).
    """
    p = np.asarray(p, dtype=float)
    if p.shape[-1] % m:
        raise ValueError(f"length {p.shape[-1]} not divisible by m={m}")
    p = p.reshape(-1, m)
    lb = symbols_to_bits(np.arange(1 << m)[:, None], m)  # (2^m, m)
    # (n, 2^m, m): choose p or 1-p per bit of each label.
    probs = np.where(lb[None, :, :] == 1, p[:, None, :], 1.0 - p[:, None, :])
    return probs.prod(axis=2)
