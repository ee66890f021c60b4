"""Decode one noisy RS(15,11) frame four different ways.

A 16-QAM frame is sent over AWGN at an SNR where the hard-decision
decoder usually struggles. We then hand the same received samples to the
plain algebraic decoder, to a classic Chase decoder that flips the least
reliable symbols, and to the stochastic decoder, which draws test vectors
from the per-symbol posterior.

Run:  python demos/01_single_frame.py
"""

import numpy as np

from stochase import ChaseConfig, constellation_from_name, encode, modulate, rs_code, word_to_bits
from stochase.channel import sigma2_from_ebno, transmit
from stochase.chase import decode_soft_stochastic, hdd_decode, s_ca_decode, soft_from_symbols

code = rs_code(15, 11)
qam = constellation_from_name("16qam")
rng = np.random.default_rng(2024)

# Search a few seeds for a frame that the hard decoder gets wrong, so the
# comparison below is interesting.
sigma2 = sigma2_from_ebno(5.0, code.rate, qam.bits_per_symbol)
for _ in range(200):
    message = rng.integers(0, 16, code.k)
    sent = encode(code, message)
    y, _ = transmit("awgn", modulate(qam, word_to_bits(code, sent)), sigma2, rng)
    soft = soft_from_symbols(y, code, qam, sigma2)
    if not np.array_equal(hdd_decode(soft).decided, sent):
        break

print("sent codeword      ", sent)
print("hard decisions     ", soft.hard_word)
print("symbol errors      ", int(np.sum(soft.hard_word != sent)), "with t =", code.t)

results = {
    "algebraic (HDD)": hdd_decode(soft),
    "Chase, 2 positions": s_ca_decode(soft, 2),
    "stochastic, tau=256": decode_soft_stochastic(soft, ChaseConfig(tau=256, dedup=True), rng),
}
for name, res in results.items():
    verdict = "correct" if np.array_equal(res.decided, sent) else "wrong"
    print(f"{name:20s} -> {verdict:7s} after {res.hdd_calls} algebraic decodes")
