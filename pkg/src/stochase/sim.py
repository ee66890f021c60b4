"""Monte-Carlo FER/BER harness.

Every frame draws its randomness from ``SeedSequence([seed, frame])``,
split into independent streams for the message, the channel and the
decoder. Frames are therefore reproducible one by one, identical across
decoders (matched seeds) and across Eb/N0 points, and a point's result does
not depend on how many worker processes produced it: results are merged in
frame order and counting stops at the frame that reaches
``stop_frame_errors``.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .channel import ChannelKind, sigma2_from_ebno, transmit
from .chase import (
    ChaseConfig,
    b_sca_decode,
    decode_soft_stochastic,
    hdd_decode,
    ml_oracle_decode,
    s_ca_decode,
    soft_from_bit_llrs,
    soft_from_symbols,
)
from .codecs import CodeSpec, Family, bch_code_nk, encode, rs_code, word_to_bits
from .modem import ConstellationSpec, constellation, constellation_from_name, demap, modulate, pad_bits

HDD_CALL_GUARDRAIL = 10**9
CSV_COLUMNS = ("ebno_db", "frames", "frame_errors", "fer", "bit_errors", "ber",
               "mean_iterations", "mean_unique_vectors", "wall_seconds")


class ConfigError(ValueError):
    """Invalid or inconsistent sweep configuration."""


class GuardrailExceeded(RuntimeError):
    """The configured sweep would need more HDD calls than the desk-scale limit."""


class DecoderKind(str, Enum):
    HDD = "hdd"
    S_CA = "s-ca"
    B_SCA = "b-sca"
    SSBT_SCA = "ssbt-sca"
    S_SCA = "s-sca"
    ML = "ml"

    @classmethod
    def parse(cls, text: str) -> "DecoderKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {"sca": "s-ca", "sa": "s-ca", "bsca": "b-sca", "ssbt": "ssbt-sca",
                   "ssbtsca": "ssbt-sca", "ssca": "s-sca", "ml-oracle": "ml", "oracle": "ml"}
        key = aliases.get(key.replace("-", ""), aliases.get(key, key))
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown decoder {text!r}") from None


@dataclass(frozen=True)
class SweepConfig:
    code: CodeSpec
    modulation: ConstellationSpec
    channel: ChannelKind = ChannelKind.AWGN
    decoder: DecoderKind = DecoderKind.HDD
    chase: ChaseConfig = field(default_factory=ChaseConfig)
    ebno_points: tuple = (0.0,)
    stop_frame_errors: int = 100
    max_frames: int = 100_000
    seed: int = 0
    workers: int = 1
    fading_block: int = 1

    def __post_init__(self):
        if len(self.ebno_points) == 0:
            raise ConfigError("ebno_points must be nonempty")
        if self.stop_frame_errors < 1:
            raise ConfigError("stop_frame_errors must be >= 1")
        if self.max_frames < 1:
            raise ConfigError("max_frames must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.decoder is DecoderKind.ML and self.code.alphabet_size ** self.code.k > 1 << 20:
            raise ConfigError("the ML oracle needs a codebook of at most 2^20 words")


@dataclass(frozen=True)
class FerPoint:
    ebno_db: float
    frames: int
    frame_errors: int
    fer: float
    bit_errors: int
    ber: float
    mean_iterations: float
    mean_unique_vectors: float
    wall_seconds: float

    @property
    def fer_stderr(self) -> float:
        return math.sqrt(max(self.fer * (1 - self.fer), 0.0) / self.frames)


@dataclass(frozen=True)
class FrameOutcome:
    frame_error: bool
    bit_errors: int
    iterations: int
    unique_vectors: int


# --------------------------------------------------------------------------
# configuration


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def read_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split(sep, 1))
        out[key.lower()] = value
    return out


def ebno_range(start: float, stop: float, step: float) -> tuple:
    if step <= 0:
        raise ConfigError("ebno_step must be positive")
    if stop < start:
        raise ConfigError("ebno_stop must be >= ebno_start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 10) for i in range(count))


_KNOWN_KEYS = {
    "family", "n", "k", "m", "primitive_poly", "modulation", "order", "channel", "decoder",
    "tau", "theta", "beta", "lambda", "dedup", "ebno_start", "ebno_stop", "ebno_step",
    "stop_frame_errors", "max_frames", "seed", "early_exit",
    # extensions
    "certified_stop", "workers", "fading_block", "include_hard_vector", "fill_unique",
}


def config_from_mapping(kv: dict[str, str]) -> SweepConfig:
    unknown = set(kv) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    try:
        return _config_from_mapping(kv)
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc


def _int(text: str) -> int:
    return int(text, 0)


def _config_from_mapping(kv: dict[str, str]) -> SweepConfig:
    family = Family(kv.get("family", "rs").lower())
    poly = _int(kv["primitive_poly"]) if "primitive_poly" in kv else None
    if "n" not in kv or "k" not in kv:
        raise ConfigError("n and k are required")
    n, k = _int(kv["n"]), _int(kv["k"])
    if family is Family.RS:
        code = rs_code(n, k, poly)
        if "m" in kv and _int(kv["m"]) != code.m:
            raise ConfigError(f"m={kv['m']} does not match n={n}")
    else:
        code = bch_code_nk(n, k, poly)

    mod = kv.get("modulation", "bpsk").lower()
    if "order" in kv:
        modulation = constellation(mod, _int(kv["order"]))
    else:
        modulation = constellation_from_name(mod)

    chase = ChaseConfig(
        tau=_int(kv.get("tau", "32")),
        theta=float(kv.get("theta", "0.05")),
        beta=float(kv.get("beta", "1.0")),
        dedup=_parse_bool(kv.get("dedup", "false")),
        lam=_int(kv.get("lambda", "1")),
        include_hard_vector=_parse_bool(kv.get("include_hard_vector", "true")),
        early_exit=_parse_bool(kv.get("early_exit", "false")),
        certified_stop=_parse_bool(kv.get("certified_stop", "false")),
        fill_unique=_parse_bool(kv.get("fill_unique", "false")),
    )
    start = float(kv.get("ebno_start", "0"))
    points = ebno_range(start, float(kv.get("ebno_stop", str(start))), float(kv.get("ebno_step", "1")))
    return SweepConfig(
        code=code,
        modulation=modulation,
        channel=ChannelKind(kv.get("channel", "awgn").lower()),
        decoder=DecoderKind.parse(kv.get("decoder", "hdd")),
        chase=chase,
        ebno_points=points,
        stop_frame_errors=_int(kv.get("stop_frame_errors", "100")),
        max_frames=_int(kv.get("max_frames", "100000")),
        seed=_int(kv.get("seed", "0")),
        workers=_int(kv.get("workers", "1")),
        fading_block=_int(kv.get("fading_block", "1")),
    )


def load_config(path) -> SweepConfig:
    return config_from_mapping(read_config_text(Path(path).read_text()))


def vectors_per_frame(cfg: SweepConfig) -> int:
    """Worst-case HDD calls (or codeword metrics, for the oracle) per frame."""
    d = cfg.decoder
    if d is DecoderKind.HDD:
        return 1
    if d is DecoderKind.S_CA:
        q = 2 ** (cfg.modulation.bits_per_symbol if cfg.modulation.bits_per_symbol > 1
                  else cfg.code.symbol_bits)
        return q ** cfg.chase.lam
    if d is DecoderKind.ML:
        return cfg.code.alphabet_size ** cfg.code.k
    return cfg.chase.attempt_cap


def estimated_hdd_calls(cfg: SweepConfig) -> int:
    return vectors_per_frame(cfg) * cfg.max_frames * len(cfg.ebno_points)


def check_guardrail(cfg: SweepConfig, limit: int = HDD_CALL_GUARDRAIL) -> None:
    est = estimated_hdd_calls(cfg)
    if est > limit:
        raise GuardrailExceeded(
            f"estimated {est:.3g} decoder calls ({vectors_per_frame(cfg)} per frame x "
            f"{cfg.max_frames} frames x {len(cfg.ebno_points)} points) exceeds {limit:.0e}; "
            "lower tau, lambda, max_frames or the number of points")


# --------------------------------------------------------------------------
# frames


def frame_streams(seed: int, frame: int) -> tuple[np.random.Generator, ...]:
    """(message, channel, decoder) generators for one frame."""
    children = np.random.SeedSequence([seed, frame]).spawn(3)
    return tuple(np.random.default_rng(c) for c in children)


def simulate_frame(cfg: SweepConfig, sigma2: float, frame: int) -> FrameOutcome:
    code, const = cfg.code, cfg.modulation
    msg_rng, ch_rng, dec_rng = frame_streams(cfg.seed, frame)
    msg = msg_rng.integers(0, code.alphabet_size, code.k)
    cw = encode(code, msg)
    x = modulate(const, pad_bits(word_to_bits(code, cw), const.bits_per_symbol))
    y, csi = transmit(cfg.channel, x, sigma2, ch_rng, cfg.fading_block)

    decided, iters, unique = _decode(cfg, y, csi, sigma2, dec_rng)
    frame_error = bool(np.any(decided != cw))
    bit_errors = 0
    if frame_error:
        k = code.k
        bit_errors = int(np.sum(word_to_bits(code, decided)[: k * code.symbol_bits]
                                != word_to_bits(code, cw)[: k * code.symbol_bits]))
    return FrameOutcome(frame_error, bit_errors, iters, unique)


def _decode(cfg: SweepConfig, y, csi, sigma2, rng):
    code, const, ch = cfg.code, cfg.modulation, cfg.chase
    d = cfg.decoder
    if d is DecoderKind.ML:
        return ml_oracle_decode(y, code, const, sigma2, csi), 0, 0
    bitwise = d in (DecoderKind.SSBT_SCA, DecoderKind.B_SCA) or (
        d is DecoderKind.S_CA and const.bits_per_symbol == 1)
    if bitwise:
        _, llr = demap(y, const, sigma2, csi)
        llr = llr[: code.n_bits]
        if d is DecoderKind.B_SCA:
            res = b_sca_decode(llr, code, ch, rng)
        else:
            soft = soft_from_bit_llrs(llr, code, ch.beta)
            res = s_ca_decode(soft, ch) if d is DecoderKind.S_CA else decode_soft_stochastic(soft, ch, rng)
    else:
        soft = soft_from_symbols(y, code, const, sigma2, csi, ch.beta)
        if d is DecoderKind.HDD:
            res = hdd_decode(soft)
        elif d is DecoderKind.S_CA:
            res = s_ca_decode(soft, ch)
        else:
            res = decode_soft_stochastic(soft, ch, rng)
    return res.decided, res.iterations_used, res.unique_vectors


def _frame_block(args) -> list[FrameOutcome]:
    cfg, sigma2, start, stop = args
    return [simulate_frame(cfg, sigma2, f) for f in range(start, stop)]


def point_sigma2(cfg: SweepConfig, ebno_db: float) -> float:
    return sigma2_from_ebno(ebno_db, cfg.code.rate, cfg.modulation.bits_per_symbol)


def run_point(cfg: SweepConfig, ebno_db: float, block_size: int = 64) -> FerPoint:
    """Simulate frames in index order until stop_frame_errors errors or max_frames."""
    t0 = time.perf_counter()
    sigma2 = point_sigma2(cfg, ebno_db)
    acc = _Accumulator(cfg.stop_frame_errors, cfg.code.k_bits)
    if cfg.workers == 1:
        for f in range(cfg.max_frames):
            if acc.add(simulate_frame(cfg, sigma2, f)):
                break
    else:
        _run_parallel(cfg, sigma2, block_size, acc)
    return acc.point(ebno_db, time.perf_counter() - t0)


def _run_parallel(cfg: SweepConfig, sigma2: float, block_size: int, acc: "_Accumulator") -> None:
    starts = range(0, cfg.max_frames, block_size)
    with ProcessPoolExecutor(cfg.workers) as pool:
        pending = []
        it = iter(starts)
        for s in it:
            pending.append(pool.submit(_frame_block, (cfg, sigma2, s, min(s + block_size, cfg.max_frames))))
            if len(pending) >= 2 * cfg.workers:
                break
        done = False
        while pending and not done:
            outcomes = pending.pop(0).result()
            for o in outcomes:
                if acc.add(o):
                    done = True
                    break
            if not done:
                s = next(it, None)
                if s is not None:
                    pending.append(pool.submit(_frame_block, (cfg, sigma2, s, min(s + block_size, cfg.max_frames))))
        for fut in pending:
            fut.cancel()


class _Accumulator:
    def __init__(self, stop_errors: int, k_bits: int):
        self.stop_errors = stop_errors
        self.k_bits = k_bits
        self.frames = self.errors = self.bit_errors = self.iters = self.unique = 0

    def add(self, o: FrameOutcome) -> bool:
        self.frames += 1
        self.errors += o.frame_error
        self.bit_errors += o.bit_errors
        self.iters += o.iterations
        self.unique += o.unique_vectors
        return self.errors >= self.stop_errors

    def point(self, ebno_db: float, wall: float) -> FerPoint:
        f = self.frames
        return FerPoint(float(ebno_db), f, self.errors, self.errors / f, self.bit_errors,
                        self.bit_errors / (f * self.k_bits), self.iters / f, self.unique / f, wall)


def run_sweep(cfg: SweepConfig, csv_path=None) -> list[FerPoint]:
    """One FerPoint per Eb/N0 value, optionally written to ``csv_path``."""
    check_guardrail(cfg)
    points = [run_point(cfg, e) for e in cfg.ebno_points]
    if csv_path is not None:
        write_csv(points, csv_path)
    return points


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.6g}"


def format_csv(points, include_wall: bool = True) -> str:
    cols = CSV_COLUMNS if include_wall else CSV_COLUMNS[:-1]
    lines = [",".join(cols)]
    for p in points:
        lines.append(",".join(_fmt(getattr(p, c)) for c in cols))
    return "\n".join(lines) + "\n"


def write_csv(points, path) -> None:
    Path(path).write_text(format_csv(points))


def estimate_power(iterations: float, p_hdd_watts: float) -> float:
    """Total power as iterations x per-HDD power."""
    if iterations < 0 or p_hdd_watts < 0:
        raise ValueError("iterations and power must be >= 0")
    return iterations * p_hdd_watts


def with_decoder(cfg: SweepConfig, decoder: DecoderKind | str, **chase_changes) -> SweepConfig:
    """Copy of ``cfg`` with another decoder and optional ChaseConfig changes."""
    if isinstance(decoder, str):
        decoder = DecoderKind.parse(decoder)
    return replace(cfg, decoder=decoder, chase=replace(cfg.chase, **chase_changes))
