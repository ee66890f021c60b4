"""Short frame-error-rate sweep comparing hard and stochastic decoding.

Every decoder sees exactly the same frames at each SNR because the random
streams are derived from (seed, frame index) alone. The gap between the
two columns is therefore a paired comparison, not two independent
estimates. The run takes about a minute on one core.

Run:  python demos/02_fer_sweep.py
"""

from stochase import ChaseConfig, DecoderKind, SweepConfig, constellation_from_name, format_csv, rs_code, run_sweep
from stochase.sim import with_decoder

base = SweepConfig(
    code=rs_code(31, 25),
    modulation=constellation_from_name("bpsk"),
    chase=ChaseConfig(tau=256, dedup=True, certified_stop=True),
    ebno_points=(4.0, 5.0, 6.0),
    stop_frame_errors=30,
    max_frames=20_000,
    seed=7,
)

for kind in (DecoderKind.HDD, DecoderKind.SSBT_SCA):
    print(f"# decoder {kind.value}")
    print(format_csv(run_sweep(with_decoder(base, kind))), end="")
    print()
