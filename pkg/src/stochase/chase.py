"""Chase-family soft-decision decoders wrapped around the BM hard decoder.

All variants share one pipeline:

1. a :class:`SoftFrame` holds the APP matrix over "groups" (channel symbols
   for q-ary modulation, code symbols for the bitwise-transmission variant,
   single bits for the bitwise stochastic variant), the bit LLRs, bit
   probabilities and the hard decision;
2. a generator produces group labels for each test vector, which are
   serialised MSB first and regrouped into code symbols;
3. every test vector goes through the HDD and successful outputs are scored
   with the soft weight; the lowest weight wins, earliest on ties.

Stop rules
----------
``early_exit`` stops as soon as a zero-weight candidate appears.

``certified_stop`` stops once the best candidate X is provably the
minimum-weight codeword: any other codeword differs from X in at least d
symbols, at least d - |E| of them outside the set E where X already
disagrees with the hard decision, and each of those costs at least the
weakest bit reliability of its symbol. If W(X) does not exceed the sum of
the d - |E| smallest such costs, no later candidate can win, so the
decided word is exactly the one the full run would return.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numba import njit

from .bm_decoder import _hdd_inplace, _syndromes, _update_syndromes, decoder_tables
from .codecs import CodeSpec, bits_to_symbols, bits_to_word, codebook, symbols_to_bits, word_to_bits
from .dedup import UniquePool
from .modem import ConstellationSpec, bitwise_to_symbol_app, demap, hard_decision, llr_to_prob, pad_bits

S_CA_BUDGET_CAP = 1 << 24
ML_CODEBOOK_CAP = 1 << 20

_STOP_ZERO = 1
_STOP_CERTIFIED = 2


class BudgetExceeded(ValueError):
    pass


class CodebookTooLarge(ValueError):
    pass


class ChaseStatus(Enum):
    SUCCESS = "success"
    ALL_HDD_FAILED = "all_hdd_failed"


@dataclass(frozen=True)
class ChaseConfig:
    """Knobs shared by the Chase variants.

    tau is the number of test vectors tried (attempts), including the
    plain hard decision when ``include_hard_vector`` is set. With ``dedup``
    repeated vectors are skipped without an HDD call. ``fill_unique`` keeps
    sampling until tau distinct vectors or ``max_attempts`` (default 10 tau).
    """

    tau: int = 32
    theta: float = 0.05
    beta: float = 1.0
    dedup: bool = False
    lam: int = 1
    include_hard_vector: bool = True
    early_exit: bool = False
    certified_stop: bool = False
    fill_unique: bool = False
    max_attempts: int | None = None
    soft_output: bool = False
    saturation: float | None = None

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must be in [0, 1]")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must be in (0, 1]")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")

    @property
    def attempt_cap(self) -> int:
        if not self.fill_unique:
            return self.tau
        return self.max_attempts if self.max_attempts is not None else 10 * self.tau

    @property
    def stop_flags(self) -> int:
        return (_STOP_ZERO if self.early_exit else 0) | (_STOP_CERTIFIED if self.certified_stop else 0)


@dataclass(frozen=True)
class ReliabilityProfile:
    gamma: np.ndarray
    order: np.ndarray


@dataclass(frozen=True)
class SamplingTables:
    ac: np.ndarray
    perm: np.ndarray


@dataclass
class DecodeResult:
    decided: np.ndarray
    weight: float
    status: ChaseStatus
    iterations_used: int
    unique_vectors: int
    hdd_calls: int
    candidates: np.ndarray
    candidate_weights: np.ndarray
    soft_output: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.status is ChaseStatus.SUCCESS


@dataclass
class SoftFrame:
    """Soft channel information for one codeword.

    ``app`` is (groups, 2^group_bits); ``llr`` covers groups * group_bits
    bits, of which the first ``code.n_bits`` belong to the codeword and the
    rest are zero-fill.
    """

    code: CodeSpec
    app: np.ndarray
    group_bits: int
    llr: np.ndarray
    p: np.ndarray = field(init=False)
    hard_bits: np.ndarray = field(init=False)

    def __post_init__(self):
        self.llr = np.asarray(self.llr, dtype=float).reshape(-1)
        if self.llr.shape[0] != self.app.shape[0] * self.group_bits:
            raise ValueError("LLR count does not match APP matrix shape")
        if self.llr.shape[0] < self.code.n_bits:
            raise ValueError("not enough bits for one codeword")
        self.p = llr_to_prob(self.llr)
        self.hard_bits = hard_decision(self.llr)

    @property
    def hard_labels(self) -> np.ndarray:
        return bits_to_symbols(self.hard_bits, self.group_bits)

    @property
    def hard_word(self) -> np.ndarray:
        return bits_to_word(self.code, self.hard_bits[: self.code.n_bits])

    @property
    def code_reliability(self) -> np.ndarray:
        """|p - 0.5| for the codeword bits."""
        return np.abs(self.p[: self.code.n_bits] - 0.5)

    def labels_to_words(self, labels: np.ndarray) -> np.ndarray:
        code = self.code
        if self.group_bits == code.symbol_bits and labels.shape[-1] == code.n:
            return labels
        bits = symbols_to_bits(labels, self.group_bits)[..., : code.n_bits]
        return bits_to_word(code, bits)


def nds_scale(r, beta: float) -> np.ndarray:
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must be in (0, 1]")
    return beta * np.asarray(r, dtype=float)


def soft_from_symbols(y, code: CodeSpec, const: ConstellationSpec, sigma2: float,
                      csi=None, beta: float = 1.0) -> SoftFrame:
    """APP matrix over constellation labels and bitwise LLRs for received points."""
    app, llr = demap(y, const, sigma2, csi, beta)
    return SoftFrame(code, app, const.bits_per_symbol, llr)


def soft_from_bit_llrs(llr, code: CodeSpec, beta: float = 1.0, group_bits: int | None = None) -> SoftFrame:
    """Group bit LLRs (e.g. BPSK) into symbols, building the APP matrix from bit products."""
    w = code.symbol_bits if group_bits is None else group_bits
    llr = nds_scale(llr, beta)
    extra = (-llr.shape[0]) % w
    if extra:
        # Zero-fill bits are known zeros.
        llr = np.concatenate([llr, np.full(extra, 40.0)])
    app = bitwise_to_symbol_app(llr_to_prob(llr), w)
    return SoftFrame(code, app, w, llr)


def soft_weight(candidate_bits, hard_bits, p) -> float:
    """Sum of |p_i - 0.5| over bits where the candidate disagrees with the hard decision."""
    candidate_bits = np.asarray(candidate_bits)
    hard_bits = np.asarray(hard_bits)
    p = np.asarray(p, dtype=float)
    if not candidate_bits.shape == hard_bits.shape == p.shape:
        raise ValueError("candidate, hard decision and probabilities must have equal length")
    return float(np.sum(np.abs(p - 0.5) * (candidate_bits != hard_bits)))


def reliability_factors(app) -> ReliabilityProfile:
    """gamma_i = second largest / largest entry of row i; order lists least reliable first."""
    app = np.asarray(app, dtype=float)
    top2 = -np.partition(-app, 1, axis=1)[:, :2] if app.shape[1] > 1 else np.c_[app, np.zeros(len(app))]
    gamma = np.divide(top2[:, 1], top2[:, 0], out=np.ones(len(app)), where=top2[:, 0] > 0)
    order = np.argsort(-gamma, kind="stable")
    return ReliabilityProfile(gamma, order)


def build_sampling_tables(app) -> SamplingTables:
    """Ascending sort of each row plus its running sum."""
    app = np.asarray(app, dtype=float)
    perm = np.argsort(app, axis=1, kind="stable")
    ac = np.cumsum(np.take_along_axis(app, perm, axis=1), axis=1)
    return SamplingTables(ac, perm)


@njit(cache=True)
def _sample_labels(ac, perm, hard_labels, free, u):
    rows = u.shape[0]
    q = ac.shape[1]
    out = np.empty((rows, hard_labels.shape[0]), dtype=np.int64)
    for r in range(rows):
        out[r, :] = hard_labels
        for f in range(free.shape[0]):
            i = free[f]
            a = u[r, f]
            lo = 0
            hi = q - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if ac[i, mid] >= a:
                    hi = mid
                else:
                    lo = mid + 1
            out[r, i] = perm[i, lo]
    return out


def sample_test_vector(tables: SamplingTables, profile: ReliabilityProfile, theta: float,
                       hard_symbols, rng: np.random.Generator, count: int | None = None) -> np.ndarray:
    """Draw test vectors over the APP alphabet; positions with gamma < theta keep the hard symbol.

    Returns one vector, or a (count, n) array when ``count`` is given.
    """
    free = _free_positions(profile.gamma, theta)
    rows = 1 if count is None else count
    out = _draw(tables, np.asarray(hard_symbols, dtype=np.int64), free, rng, rows)
    return out[0] if count is None else out


def _free_positions(gamma: np.ndarray, theta: float) -> np.ndarray:
    # theta = 1 means full saturation, including exact top-two ties.
    if theta >= 1.0:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(gamma >= theta).astype(np.int64)


def _draw(tables: SamplingTables, hard_labels, free, rng, rows) -> np.ndarray:
    # 1 - U lies in (0, 1], so zero-probability entries are never chosen.
    u = 1.0 - rng.random((rows, free.shape[0]))
    return _sample_labels(tables.ac, tables.perm, hard_labels, free, u)


@njit(cache=True)
def _select(words, hard, hard_synd, wt, minrel, minrel_order, d, t, first_root,
            root_logs, exp, log, order, binary, flags, best_w):
    rows, n = words.shape
    cands = words.copy()
    weights = np.full(rows, np.inf)
    nerr = np.full(rows, -2, dtype=np.int64)
    in_e = np.zeros(n, dtype=np.bool_)
    s = np.empty(hard_synd.shape[0], dtype=np.int64)
    best = -1
    processed = 0
    stopped = False
    for r in range(rows):
        processed = r + 1
        s[:] = hard_synd
        for i in range(n):
            delta = words[r, i] ^ hard[i]
            if delta != 0:
                _update_syndromes(s, i, delta, root_logs, exp, log, binary)
        e = _hdd_inplace(cands[r], s, t, first_root, root_logs, exp, log, order, binary)
        nerr[r] = e
        if e < 0:
            continue
        w = 0.0
        n_diff = 0
        for i in range(n):
            diff = cands[r, i] != hard[i]
            in_e[i] = diff
            if diff:
                w += wt[i, cands[r, i]]
                n_diff += 1
        weights[r] = w
        if w < best_w:
            best_w = w
            best = r
            if (flags & 1) and w == 0.0:
                stopped = True
                break
            if flags & 2:
                if w == 0.0:
                    stopped = True
                    break
                need = d - n_diff
                if need > 0:
                    lb = 0.0
                    taken = 0
                    for idx in minrel_order:
                        if not in_e[idx]:
                            lb += minrel[idx]
                            taken += 1
                            if taken == need:
                                break
                    if w < lb - 1e-9:
                        stopped = True
                        break
    return cands, weights, nerr, best, processed, stopped


class _Selector:
    """Per-frame constants for scoring candidates of one SoftFrame."""

    def __init__(self, soft: SoftFrame):
        code = soft.code
        self.code = code
        self.tab = decoder_tables(code)
        self.hard = np.ascontiguousarray(soft.hard_word, dtype=np.int64)
        self.hard_synd = _syndromes(self.hard, self.tab.root_logs, self.tab.exp, self.tab.log, self.tab.binary)
        sb = code.symbol_bits
        rel = soft.code_reliability.reshape(code.n, sb)
        values = np.arange(code.alphabet_size)
        # by_pattern[i, e] is the cost of XOR pattern e at symbol i;
        # wt[i, a] = by_pattern[i, a ^ hard_i].
        pattern_bits = ((values[:, None] >> np.arange(sb - 1, -1, -1)) & 1).astype(float)
        by_pattern = rel @ pattern_bits.T
        self.wt = np.ascontiguousarray(np.take_along_axis(by_pattern, values[None, :] ^ self.hard[:, None], axis=1))
        self.minrel = rel.min(axis=1)
        self.minrel_order = np.argsort(self.minrel, kind="stable")

    def run(self, words, flags: int, best_w: float):
        t = self.tab
        return _select(np.ascontiguousarray(words, dtype=np.int64), self.hard, self.hard_synd,
                       self.wt, self.minrel, self.minrel_order, self.code.d_design, t.t,
                       t.first_root, t.root_logs, t.exp, t.log, t.order, t.binary, flags, best_w)


def _chase(soft: SoftFrame, cfg: ChaseConfig, generate, hdd_log: list | None = None) -> DecodeResult:
    """Drive test-vector generation, dedup and HDD selection.

    ``generate(count)`` returns a (count, groups) array of labels, or None
    when the generator is exhausted.
    """
    sel = _Selector(soft)
    pool = UniquePool(soft.code.n)
    flags = cfg.stop_flags
    cap = cfg.attempt_cap
    best_w = np.inf
    best_word = None
    attempts = unique = calls = 0
    cand_chunks, weight_chunks = [], []
    chunk = 16
    first = True
    while attempts < cap and (not cfg.fill_unique or unique < cfg.tau):
        k = min(chunk, cap - attempts)
        if cfg.fill_unique:
            k = min(k, cfg.tau - unique)
        parts = []
        if first and cfg.include_hard_vector:
            parts.append(soft.hard_labels[None, :])
            k -= 1
        first = False
        if k > 0:
            drawn = generate(k)
            if drawn is not None and len(drawn):
                parts.append(drawn)
        if not parts:
            break
        words = soft.labels_to_words(np.concatenate(parts, axis=0))
        new = pool.insert_rows(words)
        idx = np.flatnonzero(new) if cfg.dedup else np.arange(len(words))
        sub = words[idx]
        cands, weights, nerr, best, processed, stopped = sel.run(sub, flags, best_w)
        if hdd_log is not None:
            hdd_log.extend(sub[:processed])
        calls += processed
        ok = nerr[:processed] >= 0
        cand_chunks.append(cands[:processed][ok])
        weight_chunks.append(weights[:processed][ok])
        if best >= 0:
            best_w = weights[best]
            best_word = cands[best].copy()
        if stopped:
            used = int(idx[processed - 1]) + 1 if processed else 0
            unique += int(new[:used].sum())
            attempts += used
            break
        unique += int(new.sum())
        attempts += len(words)
        chunk *= 4

    cand = np.concatenate(cand_chunks) if cand_chunks else np.zeros((0, soft.code.n), dtype=np.int64)
    cw = np.concatenate(weight_chunks) if weight_chunks else np.zeros(0)
    if best_word is None:
        status, decided, weight = ChaseStatus.ALL_HDD_FAILED, soft.hard_word, float("inf")
    else:
        status, decided, weight = ChaseStatus.SUCCESS, best_word, float(best_w)
    result = DecodeResult(decided, weight, status, attempts, unique, calls, cand, cw)
    if cfg.soft_output and status is ChaseStatus.SUCCESS:
        result.soft_output = soft_output(cand, cw, decided, soft, cfg.saturation)
    return result


def _stochastic(soft: SoftFrame, cfg: ChaseConfig, rng: np.random.Generator, free: np.ndarray,
                hdd_log: list | None = None) -> DecodeResult:
    tables = build_sampling_tables(soft.app)
    hard_labels = soft.hard_labels

    def generate(count):
        return _draw(tables, hard_labels, free, rng, count)

    return _chase(soft, cfg, generate, hdd_log)


def decode_soft_stochastic(soft: SoftFrame, cfg: ChaseConfig, rng: np.random.Generator,
                           hdd_log: list | None = None) -> DecodeResult:
    """Symbol-domain stochastic Chase on any SoftFrame, saturating rows with gamma < theta."""
    free = _free_positions(reliability_factors(soft.app).gamma, cfg.theta)
    return _stochastic(soft, cfg, rng, free, hdd_log)


def s_sca_decode(y, code: CodeSpec, const: ConstellationSpec, sigma2: float, csi,
                 cfg: ChaseConfig, rng: np.random.Generator, hdd_log: list | None = None) -> DecodeResult:
    """Symbolic stochastic Chase over q-ary (or BPSK) channel symbols."""
    soft = soft_from_symbols(y, code, const, sigma2, csi, cfg.beta)
    return decode_soft_stochastic(soft, cfg, rng, hdd_log)


def ssbt_sca_decode(bit_llrs, code: CodeSpec, cfg: ChaseConfig, rng: np.random.Generator,
                    group_bits: int | None = None, hdd_log: list | None = None) -> DecodeResult:
    """Symbol-domain stochastic Chase from bitwise (BPSK) soft information."""
    soft = soft_from_bit_llrs(bit_llrs, code, cfg.beta, group_bits)
    return decode_soft_stochastic(soft, cfg, rng, hdd_log)


def b_sca_decode(bit_llrs, code: CodeSpec, cfg: ChaseConfig, rng: np.random.Generator,
                 hdd_log: list | None = None) -> DecodeResult:
    """Bitwise stochastic Chase: each free bit is 1 with probability p_i.

    Bits with |p_i - 0.5| > 0.5 - theta/2 keep their hard value.
    """
    soft = soft_from_bit_llrs(bit_llrs, code, cfg.beta, group_bits=1)
    free = _b_sca_free(soft.p, cfg.theta)
    return _stochastic(soft, cfg, rng, free, hdd_log)


def _b_sca_free(p: np.ndarray, theta: float) -> np.ndarray:
    if theta >= 1.0:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(np.abs(p - 0.5) <= 0.5 - theta / 2).astype(np.int64)


def s_ca_decode(soft: SoftFrame, cfg: ChaseConfig | int, hdd_log: list | None = None) -> DecodeResult:
    """Symbolic Chase: all q^lambda values of the lambda least reliable groups.

    ``cfg`` may be a ChaseConfig (its ``lam`` is used) or just lambda.
    """
    if isinstance(cfg, int):
        cfg = ChaseConfig(lam=cfg)
    q = soft.app.shape[1]
    lam = min(cfg.lam, soft.app.shape[0])
    total = q**lam
    if total > S_CA_BUDGET_CAP:
        raise BudgetExceeded(f"q^lambda = {q}^{lam} exceeds {S_CA_BUDGET_CAP}")
    positions = reliability_factors(soft.app).order[:lam]
    hard_labels = soft.hard_labels
    combos = np.indices((q,) * lam).reshape(lam, -1).T if lam else np.zeros((1, 0), dtype=np.int64)
    if cfg.include_hard_vector:
        # The hard vector goes first (as in the stochastic decoders); it is
        # one of the enumerated assignments, so drop its duplicate.
        hard_assign = hard_labels[positions]
        combos = combos[np.any(combos != hard_assign, axis=1)]
    labels = np.repeat(hard_labels[None, :], len(combos), axis=0)
    labels[:, positions] = combos
    pos = [0]

    def generate(count):
        start = pos[0]
        pos[0] += count
        return labels[start : start + count]

    run_cfg = ChaseConfig(tau=total, theta=cfg.theta, beta=cfg.beta, dedup=cfg.dedup, lam=cfg.lam,
                          include_hard_vector=cfg.include_hard_vector, early_exit=cfg.early_exit,
                          certified_stop=cfg.certified_stop, soft_output=cfg.soft_output,
                          saturation=cfg.saturation)
    return _chase(soft, run_cfg, generate, hdd_log)


def hdd_decode(soft: SoftFrame) -> DecodeResult:
    """Plain BM-HDD on the hard decision, reported as a one-vector Chase run."""
    return _chase(soft, ChaseConfig(tau=1), lambda count: None)


def soft_output(candidates, weights, decided, soft: SoftFrame, saturation: float | None = None) -> np.ndarray:
    """Per-bit output LLRs from the candidate list (positive favours bit 0).

    Magnitude is the weight gap to the best candidate disagreeing at that
    bit, or ``saturation`` (default 2 max|LLR in|) when none disagrees.
    """
    code = soft.code
    candidates = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
    weights = np.asarray(weights, dtype=float)
    if len(candidates) == 0:
        raise ValueError("soft output needs at least one candidate")
    d_bits = word_to_bits(code, decided)
    if saturation is None:
        saturation = 2.0 * float(np.max(np.abs(soft.llr[: code.n_bits]))) if code.n_bits else 1.0
    d_weight = weights[np.flatnonzero(np.all(candidates == decided, axis=1))]
    w_dec = float(d_weight.min()) if len(d_weight) else float(np.min(weights))
    c_bits = word_to_bits(code, candidates)
    disagree = c_bits != d_bits[None, :]
    comp = np.where(disagree, weights[:, None], np.inf).min(axis=0)
    mag = np.where(np.isfinite(comp), comp - w_dec, saturation)
    return np.where(d_bits == 0, mag, -mag)


def ml_oracle_decode(y, code: CodeSpec, const: ConstellationSpec, sigma2: float | None = None,
                     csi=None) -> np.ndarray:
    """Codeword whose modulated image is closest to y in Euclidean distance."""
    size = code.alphabet_size**code.k
    if size > ML_CODEBOOK_CAP:
        raise CodebookTooLarge(f"codebook has {size} words, cap is {ML_CODEBOOK_CAP}")
    words = codebook(code, ML_CODEBOOK_CAP)
    pts = modulated_codebook(code, const)
    y = np.asarray(y)
    h = 1.0 if csi is None else np.asarray(csi)
    d = y[None, :] - h * pts
    dist = np.sum(d.real**2 + d.imag**2, axis=1)
    return words[int(np.argmin(dist))]


def modulated_codebook(code: CodeSpec, const: ConstellationSpec) -> np.ndarray:
    key = ("modcb", const.name)
    if key not in code._cache:
        bits = pad_bits(word_to_bits(code, codebook(code, ML_CODEBOOK_CAP)), const.bits_per_symbol)
        labels = bits_to_symbols(bits, const.bits_per_symbol)
        code._cache[key] = const.points[labels]
    return code._cache[key]

