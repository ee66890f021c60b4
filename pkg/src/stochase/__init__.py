"""Stochastic Chase decoding of Reed-Solomon and BCH codes.

Submodules:

- :mod:`stochase.galois` - GF(2^m) log/antilog arithmetic
- :mod:`stochase.codecs` - RS and BCH code construction and systematic encoding
- :mod:`stochase.bm_decoder` - Berlekamp-Massey, Chien and Forney hard decoding
- :mod:`stochase.modem` - Gray constellations and soft demapping
- :mod:`stochase.channel` - AWGN and flat Rayleigh channels
- :mod:`stochase.chase` - S-CA, B-SCA, SSBT-SCA and S-SCA decoders, ML oracle
- :mod:`stochase.dedup` - unique test-vector pool
- :mod:`stochase.sim` - Monte-Carlo FER/BER sweeps and CSV output
"""

from .bm_decoder import HddOutcome, HddStatus, decode_batch, decode_hdd, syndromes
from .channel import ChannelKind, awgn, rayleigh, sigma2_from_ebno, transmit
from .chase import (
    ChaseConfig,
    ChaseStatus,
    DecodeResult,
    b_sca_decode,
    hdd_decode,
    ml_oracle_decode,
    s_ca_decode,
    s_sca_decode,
    soft_from_bit_llrs,
    soft_from_symbols,
    ssbt_sca_decode,
)
from .codecs import CodeSpec, Family, bch_code, bch_code_nk, code_from_name, encode, rs_code, word_to_bits
from .dedup import UniquePool
from .galois import FieldParams, FieldTables, gf
from .modem import (
    ConstellationSpec,
    bitwise_to_symbol_app,
    constellation,
    constellation_from_name,
    demap,
    modulate,
    qary_bit_llr,
)
from .sim import DecoderKind, FerPoint, SweepConfig, estimate_power, format_csv, run_point, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ChannelKind", "ChaseConfig", "ChaseStatus", "CodeSpec", "ConstellationSpec", "DecodeResult", "DecoderKind",
    "Family", "FerPoint", "FieldParams", "FieldTables", "HddOutcome", "HddStatus", "SweepConfig",
    "UniquePool", "awgn", "b_sca_decode", "bch_code", "bch_code_nk", "bitwise_to_symbol_app",
    "code_from_name", "constellation", "constellation_from_name", "decode_batch", "decode_hdd", "demap", "encode",
    "estimate_power", "format_csv", "gf", "hdd_decode", "ml_oracle_decode", "modulate", "qary_bit_llr",
    "rayleigh", "rs_code", "run_point", "run_sweep", "s_ca_decode", "s_sca_decode",
    "sigma2_from_ebno", "soft_from_bit_llrs", "soft_from_symbols", "ssbt_sca_decode",
    "syndromes", "transmit", "word_to_bits",
]
