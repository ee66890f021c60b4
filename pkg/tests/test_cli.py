import numpy as np

from stochase.cli import EXIT_CONFIG, EXIT_GUARDRAIL, EXIT_OK, main
from stochase.codecs import code_from_name, encode, word_to_bits

CONFIG = """family = rs
n = 15
k = 11
modulation = 16qam
decoder = hdd
ebno_start = 4
ebno_stop = 5
ebno_step = 1
stop_frame_errors = 5
max_frames = 200
seed = 3
"""


def test_sweep_writes_csv(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    assert main(["sweep", "--config", str(cfg)]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("ebno_db,frames,frame_errors,fer")
    assert len(lines) == 3
    out = tmp_path / "out.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[1:] and len(out.read_text().splitlines()) == 3


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n = 15\nk = 11\ndecoder = turbo\n")
    assert main(["sweep", "--config", str(cfg)]) == EXIT_CONFIG
    assert main(["sweep", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG


def test_guardrail_exit_code(tmp_path, capsys):
    cfg = tmp_path / "big.cfg"
    cfg.write_text(CONFIG.replace("decoder = hdd", "decoder = s-sca\ntau = 1000000")
                   .replace("max_frames = 200", "max_frames = 100000"))
    assert main(["sweep", "--config", str(cfg)]) == EXIT_GUARDRAIL
    assert "exceeds" in capsys.readouterr().err


def test_encode_and_decode_roundtrip(capsys):
    msg = " ".join(str(v) for v in range(1, 12))
    assert main(["encode", "--code", "rs15_11", "--message", msg]) == EXIT_OK
    cw = np.array(capsys.readouterr().out.split(), dtype=int)
    code = code_from_name("rs15_11")
    assert np.array_equal(cw, encode(code, np.arange(1, 12)))
    bad = cw.copy()
    bad[4] ^= 3
    assert main(["decode", "--code", "rs15_11", "--word", " ".join(map(str, bad))]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "status: corrected 1"
    assert np.array_equal(np.array(out[1].split(), dtype=int), cw)


def test_decode_from_llrs(capsys):
    code = code_from_name("rs15_11")
    cw = encode(code, np.arange(11))
    llr = np.where(word_to_bits(code, cw) == 0, 4.0, -4.0)
    llr[:3] *= -0.1
    text = ",".join(f"{v:g}" for v in llr)
    for dec in ("ssbt-sca", "b-sca", "s-ca", "hdd"):
        assert main(["decode", "--code", "rs15_11", f"--llrs={text}", "--decoder", dec]) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("status: success")
        assert np.array_equal(np.array(out[1].split(), dtype=int), cw)


def test_tables_and_power(capsys):
    assert main(["tables", "--code", "rs255_239"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "0x11D" in out and "generator degree 16" in out
    assert main(["power", "--iters", "1000", "--p-hdd", "1e-20"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1e-17"
