import json

import pytest

from hansec.bench import BENCH_PROTOCOLS, bench
from hansec.cli import EXIT_OK, EXIT_UNEXPECTED, EXIT_USAGE, main
from hansec.demo import run_demo
from hansec.errors import ConfigurationError


def lines_of(protocol, group="toy-23"):
    _, lines, ok = run_demo(protocol, group, 1)
    assert ok
    return "\n".join(lines)


def test_demo_schnorr_values():
    text = lines_of("schnorr")
    for expected in ("X = g^x = 9", "mu = 4", "rho = x + a*mu = 6", "public key A = 8", "verifier accepts"):
        assert expected in text


def test_demo_okamoto_values():
    text = lines_of("okamoto")
    for expected in ("X = g1^x1 * g2^x2 = 8", "mu = 7", "rho1 = x1 + a1*mu = 4", "rho2 = x2 + a2*mu = 5",
                     "public key A = 6"):
        assert expected in text


def test_demo_pedersen_and_pre():
    assert "c = g1^r * g2^m = 9" in lines_of("pedersen")
    text = lines_of("pre")
    for expected in ("c1 = (g^x)^r = 18", "c2 = m * g^r = 20", "c1 = (g^x)^r = 3", "rk = y/x mod q = 5",
                     "delegatee recovers m = 5"):
        assert expected in text


@pytest.mark.parametrize("protocol,count", [("iso-ke", 3), ("sigma", 3), ("tls", 5), ("distance-bounding", 64)])
def test_demo_handshakes(protocol, count):
    transcript, lines, ok = run_demo(protocol, "prime192v1", 0)
    assert ok and len(transcript) == count
    if protocol == "sigma":
        # roles only, and no identities on the wire
        assert not transcript.contains(b"phone") and not transcript.contains(b"lock")
        assert not any("phone" in line or "lock" in line for line in lines)


def test_cli_demo_writes_transcript(tmp_path, capsys):
    out = tmp_path / "d.jsonl"
    assert main(["demo", "schnorr", "--group", "toy-23", "--seed", "1", "--transcript", str(out)]) == EXIT_OK
    assert "X = g^x = 9" in capsys.readouterr().out
    assert len(out.read_text().splitlines()) == 3


def test_cli_demo_default_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["demo", "pedersen", "--group", "toy-23"]) == EXIT_OK
    assert (tmp_path / "demo-pedersen.jsonl").exists()


def test_cli_sim_expected_and_unexpected(tmp_path, capsys):
    t = tmp_path / "s.jsonl"
    assert main(["sim", "--config", "misbinding-isoke", "--transcript", str(t)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: aborted(misbinding-detected) (expected aborted(misbinding-detected))" in out
    cfg = tmp_path / "x.ini"
    cfg.write_text("[scenario]\nname = x\nprotocol = iso-ke\nadversary = reflector\nexpect = completed\n"
                   "[device a]\n[device b]\n")
    assert main(["sim", "--config", str(cfg), "--transcript", str(t)]) == EXIT_UNEXPECTED
    assert "UNEXPECTED" in capsys.readouterr().out


def test_cli_sim_baseline_evidence(tmp_path, capsys):
    assert main(["sim", "--config", "misbinding-baseline", "--transcript", str(tmp_path / "b.jsonl")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "peer-identity-rebound" in out and '"shared_key_equal": true' in out


def test_cli_parse_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[scenario]\nprotocol = nonsense\n")
    assert main(["sim", "--config", str(cfg)]) == EXIT_USAGE
    assert "line 2:" in capsys.readouterr().err


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--protocol", "warp", "--group", "toy-23"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE
    assert main(["sim", "--config", "no-such-scenario"]) == EXIT_USAGE
    assert main(["bench", "--protocol", "schnorr", "--group", "toy-23", "--iters", "2"]) == EXIT_USAGE


def test_cli_bench_json(capsys):
    assert main(["bench", "--protocol", "schnorr", "--group", "toy-23", "--insecure", "--iters", "3",
                 "--warmup", "0", "--json", "-"]) == EXIT_OK
    text = capsys.readouterr().out
    report = json.loads(text[text.index("{"):])
    assert report["iterations"] == 3 and report["exponentiations"] == 1 and report["wire_messages"] == 3


@pytest.mark.parametrize("protocol", BENCH_PROTOCOLS)
def test_bench_structure(protocol):
    r = bench(protocol, "prime192v1", iterations=2, seed=1, warmup=0)
    assert r.iterations == 2 and r.mean_ms > 0
    expected = {"iso-ke": (3, 5), "sigma": (3, 7), "tls": (5, 3), "schnorr": (3, 1), "okamoto": (3, 2),
                "pedersen": (2, 2), "pre": (2, 2), "distance-bounding": (64, 0)}
    if protocol in expected:
        assert (r.wire_messages, r.exponentiations) == expected[protocol]


def test_bench_refuses_toy_and_bad_input():
    with pytest.raises(ConfigurationError):
        bench("schnorr", "toy-23", iterations=1)
    with pytest.raises(ConfigurationError):
        bench("schnorr", "prime192v1", iterations=0)
    with pytest.raises(ConfigurationError):
        bench("teleport", "prime192v1")
