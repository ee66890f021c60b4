"""Command-line entry point: ``stochase {sweep,encode,decode,tables,power}``.

Exit codes: 0 success, 2 configuration error, 3 budget guardrail rejection.
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import sim
from .bm_decoder import decode_hdd, syndromes
from .chase import ChaseConfig, b_sca_decode, s_ca_decode, soft_from_bit_llrs, ssbt_sca_decode
from .codecs import code_from_name, encode, word_to_bits

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARDRAIL = 3


def _ints(text: str) -> np.ndarray:
    return np.array([int(v, 0) for v in text.replace(",", " ").split()], dtype=np.int64)


def _floats(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.replace(",", " ").split()])


def _fmt_word(word) -> str:
    return " ".join(str(int(v)) for v in word)


def cmd_sweep(args) -> int:
    cfg = sim.load_config(args.config)
    if args.workers is not None:
        cfg = dataclasses.replace(cfg, workers=args.workers)
    sim.check_guardrail(cfg)
    points = sim.run_sweep(cfg)
    text = sim.format_csv(points)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_encode(args) -> int:
    code = code_from_name(args.code)
    if args.message is not None:
        msg = _ints(args.message)
    else:
        msg = np.random.default_rng(args.seed).integers(0, code.alphabet_size, code.k)
    cw = encode(code, msg)
    print(_fmt_word(word_to_bits(code, cw)) if args.bits else _fmt_word(cw))
    return EXIT_OK


def cmd_decode(args) -> int:
    code = code_from_name(args.code)
    if args.word is not None:
        out = decode_hdd(code, _ints(args.word))
        if not out.ok:
            print("status: uncorrectable")
            return EXIT_OK
        print(f"status: corrected {out.error_count}")
        print(_fmt_word(out.codeword))
        return EXIT_OK

    llr = _floats(args.llrs)
    if llr.shape[0] != code.n_bits:
        raise sim.ConfigError(f"expected {code.n_bits} LLRs, got {llr.shape[0]}")
    cfg = ChaseConfig(tau=args.tau, theta=args.theta, beta=args.beta, dedup=args.dedup, lam=args.lam)
    rng = np.random.default_rng(args.seed)
    kind = sim.DecoderKind.parse(args.decoder)
    if kind is sim.DecoderKind.B_SCA:
        res = b_sca_decode(llr, code, cfg, rng)
    elif kind is sim.DecoderKind.S_CA:
        res = s_ca_decode(soft_from_bit_llrs(llr, code, cfg.beta), cfg)
    elif kind is sim.DecoderKind.HDD:
        res = s_ca_decode(soft_from_bit_llrs(llr, code), 0)
    elif kind in (sim.DecoderKind.SSBT_SCA, sim.DecoderKind.S_SCA):
        res = ssbt_sca_decode(llr, code, cfg, rng)
    else:
        raise sim.ConfigError("decode from bit LLRs supports hdd, s-ca, b-sca and ssbt-sca")
    print(f"status: {res.status.value} weight {res.weight:.6g} "
          f"iterations {res.iterations_used} unique {res.unique_vectors}")
    print(_fmt_word(res.decided))
    return EXIT_OK


def cmd_tables(args) -> int:
    code = code_from_name(args.code)
    field = code.gf
    g = code.generator
    print(f"code: {code.name}  n={code.n} k={code.k} t={code.t} d={code.d_design} rate={code.rate:.6g}")
    print(f"field: GF(2^{code.field.m})  primitive polynomial 0x{field.params.primitive_poly:X}")
    print(f"generator degree {len(g) - 1}, coefficients lowest degree first:")
    print("  " + _fmt_word(g))
    shown = min(16, field.order)
    print(f"exp[0..{shown - 1}]: {_fmt_word(field.exp[:shown])}")
    print(f"log[1..{shown}]: {_fmt_word(field.log[1:shown + 1])}")
    zero = np.zeros(code.n, dtype=np.int64)
    print(f"syndromes of the zero word: {_fmt_word(syndromes(code, zero))}")
    return EXIT_OK


def cmd_power(args) -> int:
    print(f"{sim.estimate_power(args.iters, args.p_hdd):.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stochase", description="Stochastic Chase decoding of RS/BCH codes")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="run an Eb/N0 sweep from a key/value config, write CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--workers", type=int, help="override the config's worker count")
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("encode", help="systematically encode a message")
    e.add_argument("--code", default="rs255_239")
    e.add_argument("--message", help="k symbols, space or comma separated (default random)")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--bits", action="store_true", help="print the codeword as bits")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="decode a hard word (BM) or bit LLRs (Chase variants)")
    d.add_argument("--code", default="rs255_239")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", help="n received symbols")
    src.add_argument("--llrs", help="n*m bit LLRs, positive favours 0 (use --llrs=... if the first is negative)")
    d.add_argument("--decoder", default="ssbt-sca")
    d.add_argument("--tau", type=int, default=32)
    d.add_argument("--theta", type=float, default=0.05)
    d.add_argument("--beta", type=float, default=1.0)
    d.add_argument("--lambda", dest="lam", type=int, default=1)
    d.add_argument("--dedup", action="store_true")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_decode)

    t = sub.add_parser("tables", help="print the generator polynomial and field table summary")
    t.add_argument("--code", default="rs255_239")
    t.set_defaults(func=cmd_tables)

    w = sub.add_parser("power", help="total power = iterations x per-HDD power")
    w.add_argument("--iters", type=float, required=True)
    w.add_argument("--p-hdd", type=float, required=True)
    w.set_defaults(func=cmd_power)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except sim.GuardrailExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARDRAIL
    except (sim.ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
