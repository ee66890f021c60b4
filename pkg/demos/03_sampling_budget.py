"""How many test vectors are worth drawing?

For a fixed 32-QAM operating point we grow the sampling budget tau and
watch the error rate fall. With duplicate removal enabled, the number of
distinct candidate words grows more slowly than tau because confident
symbols keep being drawn at their hard value. That is the point of the
reliability threshold: effort concentrates on the few doubtful symbols.

Run:  python demos/03_sampling_budget.py
"""

from stochase import DecoderKind, SweepConfig, constellation_from_name, rs_code, run_point
from stochase.sim import with_decoder

base = SweepConfig(rs_code(31, 25), constellation_from_name("32qam"),
                   stop_frame_errors=10**9, max_frames=1000, seed=3)

print(f"{'tau':>6} {'FER':>8} {'distinct words':>15}")
for tau in (1, 8, 32, 128, 512):
    cfg = with_decoder(base, DecoderKind.S_SCA, tau=tau, dedup=True)
    p = run_point(cfg, 10.75)
    print(f"{tau:>6} {p.fer:>8.4f} {p.mean_unique_vectors:>15.1f}")
