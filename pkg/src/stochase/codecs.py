"""Reed-Solomon and binary BCH codes: parameters, generator polynomials, encoders.

Word layout: index i of a length-n word is the coefficient of x^i. Encoding
is systematic with the message in positions 0..k-1 and parity in k..n-1,
i.e. c(x) = U(x) + x^k P(x) with P(x) = x^(n-k) U(x) mod g(x). That word is
the standard systematic codeword cyclically shifted by k places, so it is a
codeword of the same cyclic code.
"""

import re
from dataclasses import dataclass
from dataclasses import field as dc_field
from enum import Enum
from functools import lru_cache

import numpy as np

from .galois import FieldParams, FieldTables, gf


class Family(str, Enum):
    RS = "rs"
    BCH = "bch"


@dataclass(frozen=True)
class CodeSpec:
    family: Family
    n: int
    k: int
    t: int
    d_design: int
    field: FieldParams
    first_root: int = 1
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False, hash=False)

    @property
    def gf(self) -> FieldTables:
        return gf(self.field.m, self.field.primitive_poly)

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def is_binary(self) -> bool:
        return self.family is Family.BCH

    @property
    def symbol_bits(self) -> int:
        """Bits carried by one code symbol (m for RS, 1 for BCH)."""
        return 1 if self.is_binary else self.field.m

    @property
    def alphabet_size(self) -> int:
        return 1 << self.symbol_bits

    @property
    def n_bits(self) -> int:
        return self.n * self.symbol_bits

    @property
    def k_bits(self) -> int:
        return self.k * self.symbol_bits

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def n_syndromes(self) -> int:
        """Number of consecutive generator roots used by the decoder."""
        return self.n - self.k if self.family is Family.RS else 2 * self.t

    @property
    def name(self) -> str:
        return f"{self.family.value}{self.n}_{self.k}"

    @property
    def generator(self) -> np.ndarray:
        if "g" not in self._cache:
            if self.family is Family.RS:
                self._cache["g"] = rs_generator_poly(self)
            else:
                self._cache["g"] = bch_generator_poly(self)
        return self._cache["g"]

    @property
    def parity_rows(self) -> np.ndarray:
        """k x (n-k) parity of each unit message; row i encodes e_i."""
        if "P" not in self._cache:
            self._cache["P"] = _parity_rows(self)
        return self._cache["P"]


@lru_cache(maxsize=64)
def rs_code(n: int, k: int, primitive_poly: int | None = None, first_root: int = 1) -> CodeSpec:
    """Narrow-sense (first_root=1 by default) RS code with n = 2^m - 1.

    Cached, so repeated calls share the generator, parity and decoder tables.
    """
    m = (n + 1).bit_length() - 1
    if (1 << m) - 1 != n:
        raise ValueError(f"RS length must be 2^m - 1, got {n}")
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got k={k}")
    return CodeSpec(Family.RS, n, k, (n - k) // 2, n - k + 1,
                    FieldParams(m, primitive_poly), first_root)


@lru_cache(maxsize=64)
def bch_code(m: int, t: int, primitive_poly: int | None = None) -> CodeSpec:
    """Narrow-sense primitive binary BCH code of length 2^m - 1 correcting t errors."""
    params = FieldParams(m, primitive_poly)
    n = params.q - 1
    if not 1 <= t < n // 2 + 1:
        raise ValueError(f"t={t} out of range for n={n}")
    g = _bch_generator(gf(m, params.primitive_poly), t)
    k = n - (len(g) - 1)
    if k <= 0:
        raise ValueError(f"BCH with m={m}, t={t} has no information bits")
    spec = CodeSpec(Family.BCH, n, k, t, 2 * t + 1, params, 1)
    spec._cache["g"] = g
    return spec


def bch_code_nk(n: int, k: int, primitive_poly: int | None = None) -> CodeSpec:
    """Find the BCH code of length n with exactly k information bits."""
    m = (n + 1).bit_length() - 1
    if (1 << m) - 1 != n:
        raise ValueError(f"BCH length must be 2^m - 1, got {n}")
    for t in range(1, n // 2 + 1):
        spec = bch_code(m, t, primitive_poly)
        if spec.k == k:
            return spec
        if spec.k < k:
            break
    raise ValueError(f"no narrow-sense binary BCH({n},{k})")


_NAME_RE = re.compile(r"^(rs|bch)[_(]?(\d+)[_,](\d+)\)?$")


def code_from_name(name: str, primitive_poly: int | None = None) -> CodeSpec:
    """Parse names such as ``rs255_239`` or ``bch63_57``."""
    match = _NAME_RE.match(name.strip().lower())
    if not match:
        raise ValueError(f"unrecognised code name {name!r}")
    fam, n, k = match.group(1), int(match.group(2)), int(match.group(3))
    if fam == "rs":
        return rs_code(n, k, primitive_poly)
    return bch_code_nk(n, k, primitive_poly)


def rs_generator_poly(spec: CodeSpec) -> np.ndarray:
    """Monic g(x) = prod (x - alpha^(b+j)), j = 0..n-k-1, lowest degree first."""
    if spec.family is not Family.RS:
        raise ValueError("rs_generator_poly needs an RS code")
    field = spec.gf
    g = np.array([1], dtype=np.int64)
    for j in range(spec.n - spec.k):
        g = field.poly_mul(g, [field.alpha_pow(spec.first_root + j), 1])
    return g


def cyclotomic_coset(s: int, n: int) -> list[int]:
    coset = [s % n]
    x = (2 * s) % n
    while x != coset[0]:
        coset.append(x)
        x = (2 * x) % n
    return coset


def minimal_polynomial(field: FieldTables, s: int) -> np.ndarray:
    """Minimal polynomial of alpha^s over GF(2), as a 0/1 coefficient array."""
    poly = np.array([1], dtype=np.int64)
    for e in cyclotomic_coset(s, field.order):
        poly = field.poly_mul(poly, [field.alpha_pow(e), 1])
    if np.any(poly > 1):
        raise ArithmeticError(f"minimal polynomial of alpha^{s} not binary")
    return poly


def _bch_generator(field: FieldTables, t: int) -> np.ndarray:
    g = np.array([1], dtype=np.int64)
    seen: set[int] = set()
    for s in range(1, 2 * t + 1):
        rep = min(cyclotomic_coset(s, field.order))
        if rep in seen:
            continue
        seen.add(rep)
        g = _gf2_poly_mul(g, minimal_polynomial(field, rep))
    return g


def bch_generator_poly(spec: CodeSpec) -> np.ndarray:
    """lcm of the minimal polynomials of alpha^1..alpha^2t, lowest degree first."""
    if spec.family is not Family.BCH:
        raise ValueError("bch_generator_poly needs a BCH code")
    return _bch_generator(spec.gf, spec.t)


def _gf2_poly_mul(a, b) -> np.ndarray:
    return np.convolve(a, b) % 2


def _gf2_poly_mod(num, den) -> np.ndarray:
    num = np.array(num, dtype=np.int64) % 2
    den = np.trim_zeros(np.asarray(den, dtype=np.int64), "b")
    for i in range(len(num) - len(den), -1, -1):
        if num[i + len(den) - 1]:
            num[i : i + len(den)] ^= den
    return num[: len(den) - 1]


def _parity_of(spec: CodeSpec, msg: np.ndarray) -> np.ndarray:
    """x^(n-k) U(x) mod g(x) by long division."""
    shifted = np.concatenate([np.zeros(spec.n - spec.k, dtype=np.int64), msg])
    if spec.is_binary:
        rem = _gf2_poly_mod(shifted, spec.generator)
    else:
        _, rem = spec.gf.poly_divmod(shifted, spec.generator)
    out = np.zeros(spec.n - spec.k, dtype=np.int64)
    out[: len(rem)] = rem
    return out


def _parity_rows(spec: CodeSpec) -> np.ndarray:
    rows = np.zeros((spec.k, spec.n - spec.k), dtype=np.int64)
    for i in range(spec.k):
        e = np.zeros(spec.k, dtype=np.int64)
        e[i] = 1
        rows[i] = _parity_of(spec, e)
    return rows


def _check_msg(spec: CodeSpec, msg) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape[-1] != spec.k:
        raise ValueError(f"message length {msg.shape[-1]} != k={spec.k}")
    if np.any(msg < 0) or np.any(msg >= spec.alphabet_size):
        raise ValueError("message symbol outside the code alphabet")
    return msg


def rs_encode(spec: CodeSpec, msg) -> np.ndarray:
    """Systematic RS encoding; accepts one message or a (..., k) batch.

    Parity is accumulated from the precomputed unit-message rows, which is
    the same linear map as dividing x^(n-k) U(x) by g(x).
    """
    if spec.family is not Family.RS:
        raise ValueError("rs_encode needs an RS code")
    msg = _check_msg(spec, msg)
    field = spec.gf
    rows = spec.parity_rows
    # products[..., i, j] = u_i * rows[i, j]
    prod = field.mul_array(msg[..., :, None], rows)
    parity = np.bitwise_xor.reduce(prod, axis=-2)
    return np.concatenate([msg, parity], axis=-1)


def bch_encode(spec: CodeSpec, msg) -> np.ndarray:
    """Systematic cyclic BCH encoding; accepts one message or a (..., k) batch."""
    if spec.family is not Family.BCH:
        raise ValueError("bch_encode needs a BCH code")
    msg = _check_msg(spec, msg)
    parity = (msg @ spec.parity_rows) % 2
    return np.concatenate([msg, parity], axis=-1)


def encode(spec: CodeSpec, msg) -> np.ndarray:
    return bch_encode(spec, msg) if spec.is_binary else rs_encode(spec, msg)


def symbols_to_bits(symbols, width: int) -> np.ndarray:
    """Expand integers to ``width`` bits each, MSB first, along the last axis."""
    symbols = np.asarray(symbols, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1)
    bits = (symbols[..., None] >> shifts) & 1
    return bits.reshape(*symbols.shape[:-1], symbols.shape[-1] * width)


def bits_to_symbols(bits, width: int) -> np.ndarray:
    """Pack groups of ``width`` bits (MSB first) into integers along the last axis."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] % width:
        raise ValueError(f"bit count {bits.shape[-1]} not divisible by {width}")
    grouped = bits.reshape(*bits.shape[:-1], bits.shape[-1] // width, width)
    weights = 1 << np.arange(width - 1, -1, -1)
    return grouped @ weights


def word_to_bits(spec: CodeSpec, word) -> np.ndarray:
    return symbols_to_bits(word, spec.symbol_bits)


def bits_to_word(spec: CodeSpec, bits) -> np.ndarray:
    return bits_to_symbols(bits, spec.symbol_bits)


def codebook(spec: CodeSpec, limit: int = 1 << 20) -> np.ndarray:
    """Every codeword of a small code, shape (q^k, n), in message-index order."""
    size = spec.alphabet_size ** spec.k
    if size > limit:
        raise ValueError(f"codebook of {size} words exceeds limit {limit}")
    if "codebook" not in spec._cache:
        digits = np.arange(size)[:, None] // (spec.alphabet_size ** np.arange(spec.k - 1, -1, -1)) % spec.alphabet_size
        spec._cache["codebook"] = encode(spec, digits)
    return spec._cache["codebook"]
