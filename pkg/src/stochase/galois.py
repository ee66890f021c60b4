"""GF(2^m) arithmetic with exp/log tables.

Elements are plain integers in polynomial (bitmask) representation, so
addition is XOR and never touches the tables. Multiplication, inversion
and powers go through the exponent form.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Conventional minimal-weight primitive polynomials, bit m set.
DEFAULT_PRIMITIVE_POLYS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
}

MIN_M = 2
MAX_M = 12


class NonPrimitivePolynomial(ValueError):
    """The reduction polynomial does not make x a generator of GF(2^m)*."""


@dataclass(frozen=True)
class FieldParams:
    m: int
    primitive_poly: int | None = None

    def __post_init__(self):
        if not MIN_M <= self.m <= MAX_M:
            raise ValueError(f"m must be in [{MIN_M}, {MAX_M}], got {self.m}")
        if self.primitive_poly is None:
            object.__setattr__(self, "primitive_poly", DEFAULT_PRIMITIVE_POLYS[self.m])
        if self.primitive_poly.bit_length() != self.m + 1:
            raise ValueError(
                f"primitive_poly {self.primitive_poly:#x} is not of degree {self.m}"
            )

    @property
    def q(self) -> int:
        return 1 << self.m


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Lookup tables for one field.

    ``exp`` has length 2(q-1) so that ``exp[log[a] + log[b]]`` needs no
    modulo. ``log[0]`` is meaningless and set to 0.
    """

    params: FieldParams
    exp: np.ndarray
    log: np.ndarray
    _mul_table: np.ndarray | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def order(self) -> int:
        """Size of the multiplicative group, q - 1."""
        return self.params.q - 1

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^m)")
        return int(self.exp[(self.order - self.log[a]) % self.order])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if e == 0 else 0
        return int(self.exp[(int(self.log[a]) * e) % self.order])

    def alpha_pow(self, e: int) -> int:
        """alpha**e for any integer e (negative allowed)."""
        return int(self.exp[e % self.order])

    @property
    def mul_table(self) -> np.ndarray:
        """Full q x q product table. Built lazily; 16M entries at m=12."""
        if self._mul_table is None:
            a = np.arange(self.q)
            la = self.log[a]
            tab = self.exp[(la[:, None] + la[None, :])].astype(self.exp.dtype)
            tab[0, :] = 0
            tab[:, 0] = 0
            object.__setattr__(self, "_mul_table", tab)
        return self._mul_table

    def mul_array(self, a, b) -> np.ndarray:
        """Elementwise product of two broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]].astype(np.int64)
        return np.where((a == 0) | (b == 0), 0, out)

    # Polynomials are coefficient arrays, lowest degree first.

    def poly_mul(self, p, r) -> np.ndarray:
        p = np.asarray(p, dtype=np.int64)
        r = np.asarray(r, dtype=np.int64)
        out = np.zeros(len(p) + len(r) - 1, dtype=np.int64)
        for i, c in enumerate(p):
            if c:
                out[i : i + len(r)] ^= self.mul_array(c, r)
        return out

    def poly_eval(self, p, x: int) -> int:
        acc = 0
        for c in reversed(np.asarray(p).tolist()):
            acc = self.mul(acc, x) ^ int(c)
        return acc

    def poly_divmod(self, num, den) -> tuple[np.ndarray, np.ndarray]:
        num = np.array(num, dtype=np.int64)
        den = np.trim_zeros(np.asarray(den, dtype=np.int64), "b")
        if len(den) == 0:
            raise ZeroDivisionError("polynomial division by zero")
        if len(num) < len(den):
            return np.zeros(1, dtype=np.int64), num
        lead_inv = self.inv(int(den[-1]))
        quot = np.zeros(len(num) - len(den) + 1, dtype=np.int64)
        for i in range(len(quot) - 1, -1, -1):
            c = self.mul(int(num[i + len(den) - 1]), lead_inv)
            quot[i] = c
            if c:
                num[i : i + len(den)] ^= self.mul_array(c, den)
        return quot, num[: len(den) - 1]


def build_tables(params: FieldParams) -> FieldTables:
    """Build exp/log tables by repeated multiplication by x.

    Raises NonPrimitivePolynomial if x cycles back to 1 before visiting all
    q - 1 nonzero elements.
    """
    q = params.q
    order = q - 1
    dtype = np.int32
    exp = np.zeros(2 * order, dtype=dtype)
    log = np.zeros(q, dtype=dtype)
    x = 1
    for i in range(order):
        if i > 0 and x == 1:
            raise NonPrimitivePolynomial(
                f"{params.primitive_poly:#x} has cycle length {i} < {order}"
            )
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & q:
            x ^= params.primitive_poly
    if x != 1:
        # Reducible polynomials can also leave the cycle without returning to 1.
        raise NonPrimitivePolynomial(f"{params.primitive_poly:#x} is not primitive")
    exp[order:] = exp[:order]
    return FieldTables(params, exp, log)


@lru_cache(maxsize=None)
def gf(m: int, primitive_poly: int | None = None) -> FieldTables:
    """Shared tables for GF(2^m); tables are immutable so caching is safe."""
    return build_tables(FieldParams(m, primitive_poly))
