import numpy as np
import pytest
from scipy import stats

from stochase.bm_decoder import decode_hdd, syndromes
from stochase.channel import sigma2_from_ebno, transmit
from stochase.chase import (
    BudgetExceeded,
    ChaseConfig,
    ChaseStatus,
    CodebookTooLarge,
    b_sca_decode,
    build_sampling_tables,
    decode_soft_stochastic,
    hdd_decode,
    ml_oracle_decode,
    nds_scale,
    reliability_factors,
    s_ca_decode,
    s_sca_decode,
    sample_test_vector,
    soft_from_bit_llrs,
    soft_from_symbols,
    soft_output,
    soft_weight,
    ssbt_sca_decode,
)
from stochase.codecs import bch_code, codebook, encode, rs_code, word_to_bits
from stochase.modem import bitwise_to_symbol_app, constellation_from_name, modulate, pad_bits

TABLE1 = np.array([0.0143, 0.1639, 1.44e-4, 0.0017, 0.0649, 0.7469, 6.56e-4, 0.0075])


def noisy_frame(code, const, ebno, rng):
    cw = encode(code, rng.integers(0, code.alphabet_size, code.k))
    x = modulate(const, pad_bits(word_to_bits(code, cw), const.bits_per_symbol))
    s2 = sigma2_from_ebno(ebno, code.rate, const.bits_per_symbol)
    y, csi = transmit("awgn", x, s2, rng)
    return cw, y, s2


def bpsk_llrs(code, ebno, rng):
    const = constellation_from_name("bpsk")
    cw, y, s2 = noisy_frame(code, const, ebno, rng)
    return cw, 2 * y / s2


# ---------------------------------------------------------------- primitives


def test_reliability_factor_examples():
    app = np.vstack([np.full(8, 1 / 8), np.eye(8)[0], TABLE1 / TABLE1.sum()])
    prof = reliability_factors(app)
    assert prof.gamma[0] == pytest.approx(1.0)
    assert prof.gamma[1] == 0.0
    assert prof.gamma[2] == pytest.approx(0.1639 / 0.7469, abs=1e-4)
    assert sorted(prof.order.tolist()) == [0, 1, 2]
    assert prof.order[0] == 0


def test_sampling_tables():
    tab = build_sampling_tables(np.full((1, 4), 0.25))
    assert np.allclose(tab.ac[0], [0.25, 0.5, 0.75, 1.0])
    row = bitwise_to_symbol_app([0.82, 0.01, 0.92], 3)
    tab = build_sampling_tables(row)
    assert tab.ac[0, -1] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(tab.ac[0]) >= 0)
    back = np.empty(8)
    back[tab.perm[0]] = np.diff(np.r_[0.0, tab.ac[0]])
    assert np.allclose(back, row[0])


def test_sampling_matches_table1_frequencies():
    app = bitwise_to_symbol_app([0.82, 0.01, 0.92], 3)
    tab = build_sampling_tables(app)
    prof = reliability_factors(app)
    draws = sample_test_vector(tab, prof, 0.0, [5], np.random.default_rng(0), count=10**5)[:, 0]
    freq = np.bincount(draws, minlength=8) / len(draws)
    assert np.allclose(freq, app[0], atol=0.01)
    counts = np.bincount(draws, minlength=8)
    keep = app[0] * len(draws) >= 5
    expected = app[0][keep] * len(draws)
    chi2 = stats.chisquare(counts[keep], expected * counts[keep].sum() / expected.sum())
    assert chi2.pvalue > 0.001


def test_saturation_rules():
    app = np.array([[0.6, 0.4, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]])
    tab = build_sampling_tables(app)
    prof = reliability_factors(app)
    rng = np.random.default_rng(1)
    hard = np.array([0, 0])
    assert np.all(sample_test_vector(tab, prof, 1.0, hard, rng, count=200) == hard)
    draws = sample_test_vector(tab, prof, 0.0, hard, rng, count=2000)
    assert np.all(draws[:, 1] == 0)
    assert set(np.unique(draws[:, 0])) == {0, 1}


def test_soft_weight_examples():
    assert soft_weight([0, 0, 1], [1, 0, 1], [0.9, 0.1, 0.8]) == pytest.approx(0.4)
    assert soft_weight([1, 0], [1, 0], [0.9, 0.2]) == 0.0
    assert soft_weight([0, 1], [1, 0], [0.5, 0.5]) == 0.0
    with pytest.raises(ValueError):
        soft_weight([0], [0, 1], [0.5, 0.5])


def test_nds_scale():
    r = np.array([4.0, -2.0, 0.5])
    assert np.array_equal(nds_scale(r, 1.0), r)
    assert np.array_equal(nds_scale(r, 0.5), r / 2)
    with pytest.raises(ValueError):
        nds_scale(r, 0.0)


# ---------------------------------------------------------------- decoders


def test_noiseless_returns_transmitted_at_first_vector():
    code = rs_code(31, 25)
    const = constellation_from_name("32qam")
    cw = encode(code, np.arange(25))
    y = modulate(const, word_to_bits(code, cw))
    res = s_sca_decode(y, code, const, 1e-4, None, ChaseConfig(tau=16, early_exit=True),
                       np.random.default_rng(0))
    assert res.ok and np.array_equal(res.decided, cw)
    assert res.weight == 0.0 and res.iterations_used == 1


def test_degenerate_config_equals_hdd():
    code = rs_code(31, 25)
    const = constellation_from_name("32qam")
    rng = np.random.default_rng(2)
    cfg = ChaseConfig(tau=1, theta=1.0, include_hard_vector=True)
    for _ in range(100):
        cw, y, s2 = noisy_frame(code, const, 8.0, rng)
        soft = soft_from_symbols(y, code, const, s2)
        res = decode_soft_stochastic(soft, cfg, rng)
        out = decode_hdd(code, soft.hard_word)
        expected = out.codeword if out.ok else soft.hard_word
        assert np.array_equal(res.decided, expected)


def test_selection_is_min_weight_and_candidates_are_codewords():
    code = rs_code(15, 11)
    const = constellation_from_name("16qam")
    rng = np.random.default_rng(3)
    for _ in range(20):
        cw, y, s2 = noisy_frame(code, const, 6.0, rng)
        soft = soft_from_symbols(y, code, const, s2)
        res = decode_soft_stochastic(soft, ChaseConfig(tau=64), rng)
        if not res.ok:
            continue
        assert res.weight == pytest.approx(res.candidate_weights.min())
        first = np.flatnonzero(res.candidate_weights == res.candidate_weights.min())[0]
        assert np.array_equal(res.decided, res.candidates[first])
        for c, w in zip(res.candidates, res.candidate_weights):
            assert not syndromes(code, c).any()
            assert w == pytest.approx(soft_weight(word_to_bits(code, c), soft.hard_bits[: code.n_bits],
                                                  soft.p[: code.n_bits]))


def test_dedup_never_repeats_hdd_input():
    code = rs_code(7, 5)
    const = constellation_from_name("8psk")
    rng = np.random.default_rng(4)
    for _ in range(20):
        _, y, s2 = noisy_frame(code, const, 4.0, rng)
        log = []
        res = s_sca_decode(y, code, const, s2, None, ChaseConfig(tau=256, dedup=True, theta=0.0), rng, log)
        keys = [w.tobytes() for w in log]
        assert len(keys) == len(set(keys)) == res.hdd_calls == res.unique_vectors


def test_fill_unique_reaches_tau_or_attempt_cap():
    code = rs_code(7, 5)
    const = constellation_from_name("8psk")
    rng = np.random.default_rng(5)
    _, y, s2 = noisy_frame(code, const, 2.0, rng)
    cfg = ChaseConfig(tau=40, dedup=True, fill_unique=True, theta=0.0)
    res = s_sca_decode(y, code, const, s2, None, cfg, rng)
    assert res.unique_vectors == 40 or res.iterations_used == cfg.attempt_cap


def test_certified_stop_gives_same_decision():
    code = rs_code(15, 11)
    const = constellation_from_name("16qam")
    rng = np.random.default_rng(6)
    for f in range(40):
        _, y, s2 = noisy_frame(code, const, 7.0, rng)
        soft = soft_from_symbols(y, code, const, s2)
        full = decode_soft_stochastic(soft, ChaseConfig(tau=128, dedup=True), np.random.default_rng(f))
        fast = decode_soft_stochastic(soft, ChaseConfig(tau=128, dedup=True, certified_stop=True),
                                      np.random.default_rng(f))
        assert np.array_equal(full.decided, fast.decided)
        assert fast.hdd_calls <= full.hdd_calls


def test_ssbt_noiseless_and_burst_repair():
    code = rs_code(15, 11)
    cw = encode(code, np.arange(11))
    llr = np.where(word_to_bits(code, cw) == 0, 20.0, -20.0)
    res = ssbt_sca_decode(llr, code, ChaseConfig(tau=4, early_exit=True), np.random.default_rng(0))
    assert np.array_equal(res.decided, cw) and res.iterations_used == 1

    # Three symbol errors exceed t = 2. Symbol 0 carries a burst of four
    # unreliable flipped bits; symbols 5 and 9 each have one weak flipped
    # bit. One symbol draw at position 0 leaves two errors for the HDD.
    bad = llr.copy()
    bad[0:4] = -0.02 * bad[0:4]
    bad[20] = -0.05 * bad[20]
    bad[36] = -0.05 * bad[36]
    assert not decode_hdd(code, soft_from_bit_llrs(bad, code).hard_word).ok
    res = ssbt_sca_decode(bad, code, ChaseConfig(tau=64), np.random.default_rng(1))
    assert np.array_equal(res.decided, cw)
    soft = soft_from_bit_llrs(bad, code)
    draws = sample_test_vector(build_sampling_tables(soft.app), reliability_factors(soft.app), 0.05,
                               soft.hard_labels, np.random.default_rng(2), count=500)
    changed = np.count_nonzero(draws != soft.hard_labels, axis=1)
    # only the three weak symbols are ever resampled
    assert set(np.flatnonzero((draws != soft.hard_labels).any(axis=0))) <= {0, 5, 9}


def test_b_sca_bit_statistics():
    code = rs_code(7, 5)
    p = np.array([0.5] * 10 + [0.0] * 11)
    llr = np.log((1 - np.clip(p, 1e-300, 1)) / np.clip(p, 1e-300, 1))
    soft = soft_from_bit_llrs(llr, code, group_bits=1)
    from stochase.chase import _b_sca_free, _draw
    free = _b_sca_free(soft.p, 0.05)
    assert free.tolist() == list(range(10))
    draws = _draw(build_sampling_tables(soft.app), soft.hard_labels, free, np.random.default_rng(3), 10**5)
    rate = draws.mean(axis=0)
    assert np.allclose(rate[:10], 0.5, atol=0.01)
    assert np.all(rate[10:] == 0)
    cw = encode(code, [1, 2, 3, 4, 5])
    clean = np.where(word_to_bits(code, cw) == 0, 30.0, -30.0)
    res = b_sca_decode(clean, code, ChaseConfig(tau=8), np.random.default_rng(4))
    assert np.array_equal(res.decided, cw) and res.weight == 0.0


def test_s_ca_basics():
    code = rs_code(7, 5)
    const = constellation_from_name("8psk")
    rng = np.random.default_rng(7)
    for _ in range(30):
        cw, y, s2 = noisy_frame(code, const, 5.0, rng)
        soft = soft_from_symbols(y, code, const, s2)
        h = hdd_decode(soft)
        z = s_ca_decode(soft, 0)
        assert np.array_equal(h.decided, z.decided)
        full = s_ca_decode(soft, ChaseConfig(lam=2))
        assert full.iterations_used == 64
        shuffled = s_ca_decode(soft, ChaseConfig(lam=2, include_hard_vector=False))
        assert np.array_equal(full.decided, shuffled.decided) or full.weight == shuffled.weight
    big = rs_code(15, 11)
    llr = np.ones(big.n_bits)
    with pytest.raises(BudgetExceeded):
        s_ca_decode(soft_from_bit_llrs(llr, big), ChaseConfig(lam=7))


def test_all_hdd_failed_returns_hard_word():
    code = rs_code(15, 11)
    rng = np.random.default_rng(8)
    word = rng.integers(0, 16, 15)
    while decode_hdd(code, word).ok:
        word = rng.integers(0, 16, 15)
    llr = np.where(word_to_bits(code, word) == 0, 9.0, -9.0)
    res = hdd_decode(soft_from_bit_llrs(llr, code))
    assert res.status is ChaseStatus.ALL_HDD_FAILED
    assert np.array_equal(res.decided, word) and res.weight == np.inf


# ---------------------------------------------------------------- oracle and soft output


def test_ml_oracle_matches_brute_force_bch74():
    code = bch_code(3, 1)
    const = constellation_from_name("bpsk")
    book = codebook(code)
    rng = np.random.default_rng(9)
    for _ in range(50):
        _, y, s2 = noisy_frame(code, const, 1.0, rng)
        corr = (1 - 2 * book) @ y
        assert np.array_equal(ml_oracle_decode(y, code, const, s2), book[np.argmax(corr)])


def test_ml_oracle_noiseless_and_cap():
    code = rs_code(7, 5)
    const = constellation_from_name("8psk")
    cw = encode(code, [7, 0, 3, 1, 2])
    y = modulate(const, word_to_bits(code, cw))
    assert np.array_equal(ml_oracle_decode(y, code, const), cw)
    with pytest.raises(CodebookTooLarge):
        ml_oracle_decode(np.zeros(31), rs_code(31, 25), const)


def test_soft_output_rules():
    code = bch_code(3, 1)
    soft = soft_from_bit_llrs(np.array([3.0, -2.0, 1.0, 4.0, 5.0, -6.0, 2.0]), code)
    dec = soft.hard_word
    single = soft_output(dec[None, :], [0.0], dec, soft)
    assert np.allclose(np.abs(single), 12.0)
    assert np.array_equal(np.sign(single), np.where(dec == 0, 1, -1))
    other = dec.copy()
    other[2] ^= 1
    two = soft_output(np.vstack([dec, other]), [0.1, 0.4], dec, soft)
    assert two[2] == pytest.approx(0.3)
    flipped = soft_output(np.vstack([other, dec]), [0.1, 0.4], other, soft)
    assert np.sign(flipped[2]) == -np.sign(two[2])


def test_soft_output_attached_when_requested():
    code = rs_code(15, 11)
    rng = np.random.default_rng(10)
    _, llr = bpsk_llrs(code, 4.0, rng)
    res = ssbt_sca_decode(llr, code, ChaseConfig(tau=32, soft_output=True), rng)
    if res.ok:
        assert res.soft_output.shape == (code.n_bits,)


def test_config_validation():
    with pytest.raises(ValueError):
        ChaseConfig(tau=0)
    with pytest.raises(ValueError):
        ChaseConfig(theta=1.5)
    with pytest.raises(ValueError):
        ChaseConfig(beta=0.0)
