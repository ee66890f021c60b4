"""Bounded-distance hard-decision decoding: syndromes, Berlekamp-Massey,
Chien search and Forney.

The arithmetic lives in numba kernels because the Chase decoders call the
HDD once per test vector. The public functions below wrap those kernels
for single words; :func:`decode_batch` is the bulk entry point used by
:mod:`stochase.chase`.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .codecs import CodeSpec

CORRECTED = 0
UNCORRECTABLE = 1


class HddStatus(Enum):
    CORRECTED = CORRECTED
    UNCORRECTABLE = UNCORRECTABLE


@dataclass(frozen=True)
class HddOutcome:
    status: HddStatus
    codeword: np.ndarray | None
    error_count: int

    @property
    def ok(self) -> bool:
        return self.status is HddStatus.CORRECTED


@dataclass(frozen=True)
class DecoderTables:
    """Per-code constant arrays handed to the kernels."""

    exp: np.ndarray
    log: np.ndarray
    order: int
    n: int
    t: int
    first_root: int
    binary: bool
    root_logs: np.ndarray  # root_logs[i, j] = (b+j) i mod (q-1), the log of alpha^((b+j) i)


def decoder_tables(spec: CodeSpec) -> DecoderTables:
    if "dec" not in spec._cache:
        field = spec.gf
        i = np.arange(spec.n)[:, None]
        j = np.arange(spec.n_syndromes)[None, :] + spec.first_root
        root_logs = np.ascontiguousarray((i * j) % field.order, dtype=np.int64)
        spec._cache["dec"] = DecoderTables(
            field.exp.astype(np.int64), field.log.astype(np.int64), field.order,
            spec.n, spec.t, spec.first_root, spec.is_binary, root_logs,
        )
    return spec._cache["dec"]


@njit(cache=True)
def _gmul(a, b, exp, log):
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


@njit(cache=True)
def _ginv(a, exp, log, order):
    return exp[(order - log[a]) % order]


@njit(cache=True)
def _syndromes(word, root_logs, exp, log, binary):
    n, nsym = root_logs.shape
    s = np.zeros(nsym, dtype=np.int64)
    for i in range(n):
        if word[i] != 0:
            _update_syndromes(s, i, word[i], root_logs, exp, log, binary)
    return s


@njit(cache=True)
def _update_syndromes(s, i, delta, root_logs, exp, log, binary):
    """Add the syndrome contribution of changing position i by ``delta`` != 0."""
    ld = 0 if binary else log[delta]
    for j in range(s.shape[0]):
        s[j] ^= exp[ld + root_logs[i, j]]


@njit(cache=True)
def _berlekamp_massey(s, exp, log, order):
    """Return (Lambda, L): the shortest LFSR connection polynomial of s."""
    nsym = s.shape[0]
    lam = np.zeros(nsym + 1, dtype=np.int64)
    prev = np.zeros(nsym + 1, dtype=np.int64)
    tmp = np.zeros(nsym + 1, dtype=np.int64)
    lam[0] = 1
    prev[0] = 1
    L = 0
    shift = 1
    b = 1
    for r in range(nsym):
        d = s[r]
        for i in range(1, L + 1):
            d ^= _gmul(lam[i], s[r - i], exp, log)
        if d == 0:
            shift += 1
            continue
        coef = _gmul(d, _ginv(b, exp, log, order), exp, log)
        if 2 * L <= r:
            tmp[:] = lam
            for i in range(nsym + 1 - shift):
                lam[i + shift] ^= _gmul(coef, prev[i], exp, log)
            L = r + 1 - L
            prev[:] = tmp
            b = d
            shift = 1
        else:
            for i in range(nsym + 1 - shift):
                lam[i + shift] ^= _gmul(coef, prev[i], exp, log)
            shift += 1
    return lam, L


@njit(cache=True)
def _evaluator(s, lam, exp, log):
    """Omega(x) = S(x) Lambda(x) mod x^nsym."""
    nsym = s.shape[0]
    omega = np.zeros(nsym, dtype=np.int64)
    for i in range(nsym):
        acc = 0
        for j in range(i + 1):
            acc ^= _gmul(lam[j], s[i - j], exp, log)
        omega[i] = acc
    return omega


@njit(cache=True)
def _poly_eval(p, deg, x, exp, log):
    acc = 0
    for i in range(deg, -1, -1):
        acc = _gmul(acc, x, exp, log) ^ p[i]
    return acc


@njit(cache=True)
def _chien(lam, L, n, exp, log, order):
    """Positions i in [0, n) with Lambda(alpha^-i) = 0; stops after L roots."""
    pos = np.empty(L, dtype=np.int64)
    # reg[j] tracks log(lambda_j alpha^(-ij)), or -1 for a zero coefficient.
    reg = np.empty(L + 1, dtype=np.int64)
    for j in range(L + 1):
        reg[j] = log[lam[j]] if lam[j] != 0 else -1
    found = 0
    for i in range(n):
        acc = 0
        for j in range(L + 1):
            if reg[j] >= 0:
                acc ^= exp[reg[j]]
                reg[j] -= j
                if reg[j] < 0:
                    reg[j] += order
        if acc == 0:
            if found == L:
                return pos, -1
            pos[found] = i
            found += 1
            if found == L:
                break
    return pos, found


@njit(cache=True)
def _forney(s, lam, L, pos, first_root, exp, log, order):
    """Error magnitudes e = X^(1-b) Omega(X^-1) / Lambda'(X^-1), X = alpha^i."""
    omega = _evaluator(s, lam, exp, log)
    mags = np.zeros(pos.shape[0], dtype=np.int64)
    for k in range(pos.shape[0]):
        i = pos[k]
        xinv = exp[(order - i % order) % order]
        num = _poly_eval(omega, omega.shape[0] - 1, xinv, exp, log)
        # Formal derivative in characteristic 2 keeps odd-degree terms only.
        den = 0
        xsq = _gmul(xinv, xinv, exp, log)
        xp = 1
        for j in range(1, L + 1, 2):
            den ^= _gmul(lam[j], xp, exp, log)
            xp = _gmul(xp, xsq, exp, log)
        if den == 0:
            return mags, False
        e = _gmul(num, _ginv(den, exp, log, order), exp, log)
        e = _gmul(e, exp[((1 - first_root) * i) % order], exp, log)
        if e == 0:
            return mags, False
        mags[k] = e
    return mags, True


@njit(cache=True)
def _hdd_inplace(word, s, t, first_root, root_logs, exp, log, order, binary):
    """Correct ``word`` in place given its syndromes ``s`` (also updated).

    Returns the number of corrected positions, or -1 if uncorrectable (in
    which case ``word`` may be partly modified and must be discarded).
    """
    nz = False
    for j in range(s.shape[0]):
        if s[j] != 0:
            nz = True
            break
    if not nz:
        return 0
    lam, L = _berlekamp_massey(s, exp, log, order)
    if L > t:
        return -1
    n = word.shape[0]
    pos, found = _chien(lam, L, n, exp, log, order)
    if found != L:
        return -1
    if binary:
        for k in range(L):
            word[pos[k]] ^= 1
            _update_syndromes(s, pos[k], 1, root_logs, exp, log, binary)
    else:
        mags, ok = _forney(s, lam, L, pos, first_root, exp, log, order)
        if not ok:
            return -1
        for k in range(L):
            word[pos[k]] ^= mags[k]
            _update_syndromes(s, pos[k], mags[k], root_logs, exp, log, binary)
    for j in range(s.shape[0]):
        if s[j] != 0:
            return -1
    return L


@njit(cache=True)
def _decode_rows(words, root_logs, t, first_root, exp, log, order, binary):
    rows = words.shape[0]
    out = words.copy()
    nerr = np.empty(rows, dtype=np.int64)
    for r in range(rows):
        s = _syndromes(out[r], root_logs, exp, log, binary)
        nerr[r] = _hdd_inplace(out[r], s, t, first_root, root_logs, exp, log, order, binary)
    return out, nerr


def _as_word(spec: CodeSpec, word) -> np.ndarray:
    word = np.ascontiguousarray(word, dtype=np.int64)
    if word.shape[-1] != spec.n:
        raise ValueError(f"word length {word.shape[-1]} != n={spec.n}")
    return word


def syndromes(spec: CodeSpec, received) -> np.ndarray:
    """s_j = R(alpha^(b+j)), j = 0..n_syndromes-1."""
    tab = decoder_tables(spec)
    return _syndromes(_as_word(spec, received), tab.root_logs, tab.exp, tab.log, tab.binary)


def berlekamp_massey(spec: CodeSpec, s) -> tuple[np.ndarray, np.ndarray]:
    """Error locator Lambda and evaluator Omega, both lowest degree first and trimmed."""
    tab = decoder_tables(spec)
    s = np.ascontiguousarray(s, dtype=np.int64)
    lam, L = _berlekamp_massey(s, tab.exp, tab.log, tab.order)
    omega = _evaluator(s, lam, tab.exp, tab.log)
    return lam[: L + 1].copy(), np.trim_zeros(omega, "b")


def chien_search(spec: CodeSpec, lam) -> np.ndarray:
    """Error positions; raises RootCountMismatch if the roots do not match deg(Lambda)."""
    tab = decoder_tables(spec)
    lam = np.trim_zeros(np.ascontiguousarray(lam, dtype=np.int64), "b")
    L = len(lam) - 1
    pos, found = _chien(lam, L, spec.n, tab.exp, tab.log, tab.order)
    if found != L:
        raise RootCountMismatch(f"Lambda of degree {L} has {max(found, 0)} roots in range")
    return pos


def forney(spec: CodeSpec, s, lam, positions) -> np.ndarray:
    """Error magnitudes at ``positions``; all ones for binary BCH."""
    if spec.is_binary:
        return np.ones(len(positions), dtype=np.int64)
    tab = decoder_tables(spec)
    lam = np.trim_zeros(np.ascontiguousarray(lam, dtype=np.int64), "b")
    padded = np.zeros(spec.n_syndromes + 1, dtype=np.int64)
    padded[: len(lam)] = lam
    mags, ok = _forney(np.ascontiguousarray(s, dtype=np.int64), padded, len(lam) - 1,
                       np.asarray(positions, dtype=np.int64), tab.first_root,
                       tab.exp, tab.log, tab.order)
    if not ok:
        raise RootCountMismatch("zero derivative or zero magnitude at an error location")
    return mags


class RootCountMismatch(ArithmeticError):
    pass


def decode_hdd(spec: CodeSpec, received) -> HddOutcome:
    """Correct up to t symbol errors; Uncorrectable otherwise."""
    out, nerr = decode_batch(spec, _as_word(spec, received)[None, :])
    if nerr[0] < 0:
        return HddOutcome(HddStatus.UNCORRECTABLE, None, 0)
    return HddOutcome(HddStatus.CORRECTED, out[0], int(nerr[0]))


def decode_batch(spec: CodeSpec, words) -> tuple[np.ndarray, np.ndarray]:
    """Decode each row of ``words``. Returns (corrected rows, error counts; -1 = failure).

    Rows that fail are returned as whatever the kernel left behind; callers
    must mask them with the error count.
    """
    tab = decoder_tables(spec)
    words = np.atleast_2d(_as_word(spec, words))
    return _decode_rows(words, tab.root_logs, tab.t, tab.first_root,
                        tab.exp, tab.log, tab.order, tab.binary)
