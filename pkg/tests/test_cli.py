import io
import subprocess
import sys

import pytest

from ct_hash.cli import main
from ct_hash.encoding import bits, f0, g2_fixed
from ct_hash.hashing import encode_block
from ct_hash.params import ParameterPair, format_params, generate_pair, mones, paper_pair


def run(argv, capsys, stdin=b""):
    sys_stdin = sys.stdin
    sys.stdin = io.TextIOWrapper(io.BytesIO(stdin))
    try:
        code = main(argv)
    finally:
        sys.stdin = sys_stdin
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text(format_params(generate_pair(2, 4)))
    return path


def test_paper_params_pipe_validates():
    ct = [sys.executable, "-m", "ct_hash.cli"]
    gen = subprocess.run([*ct, "paper-params"], capture_output=True, check=True)
    val = subprocess.run([*ct, "validate-params", "-"], input=gen.stdout, capture_output=True)
    assert val.returncode == 0
    assert val.stdout.decode().strip().endswith("valid")


def test_hash_twice_identical(tmp_path, params_file, capsys):
    msg = tmp_path / "msg.bin"
    msg.write_bytes(b"hello world")
    argv = ["hash", "--params", str(params_file), "--inner", "sha256", str(msg)]
    c1, o1, _ = run(argv, capsys)
    c2, o2, _ = run(argv, capsys)
    assert c1 == c2 == 0
    assert o1 == o2 and len(o1.strip()) == 64


def test_hash_stdin_and_intermediate(params_file, capsys):
    code, out, _ = run(["hash", "--params", str(params_file), "--emit-intermediate", "-"], capsys, b"abc")
    lines = out.split()
    assert code == 0 and len(lines) == 2
    assert set(lines[0]) <= {"0", "1"} and len(lines[1]) == 32


def test_hash_rejects_invalid_params(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text(format_params(ParameterPair.unchecked(mones(2), mones(2))))
    code, out, err = run(["hash", "--params", str(bad), "-"], capsys, b"x")
    assert code == 3 and out == ""
    assert "4a" in err


def test_validate_params_failure_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text(format_params(ParameterPair.unchecked(mones(2), mones(2))))
    code, out, _ = run(["validate-params", str(bad)], capsys)
    assert code == 3 and "(4a) FAIL" in out


def test_io_error_exit(capsys):
    code, _, err = run(["validate-params", "/nonexistent/file"], capsys)
    assert code == 4 and err


def test_usage_error_exit(capsys):
    code, _, _ = run(["hash"], capsys)
    assert code == 2
    code, _, _ = run(["no-such-command"], capsys)
    assert code == 2


def test_gen_params_deterministic(capsys):
    _, a, _ = run(["gen-params", "--n", "3", "--seed", "9"], capsys)
    _, b, _ = run(["gen-params", "--n", "3", "--seed", "9"], capsys)
    assert a == b and a.startswith("ct-hash-params v1 n=3")


def test_repro_simulation_cli(capsys):
    code, out, _ = run(["repro-simulation", "--format", "kv"], capsys)
    assert code == 0 and "verdict=PASS" in out


def test_reduce_and_duplic(tmp_path, capsys):
    import numpy as np

    a = np.zeros((2, 2, 2), dtype=np.int64)
    a[0, 1, 1] = a[1, 0, 0] = 1
    x = g2_fixed(a, f0(2))
    src = tmp_path / "x.txt"
    src.write_text(x.to01() + "\n")
    code, out, _ = run(["reduce", "--n", "2", "--input", str(src)], capsys)
    assert code == 0 and out.splitlines()[0] == "2"
    src.write_text("01" + "00" * 11)
    code, out, _ = run(["reduce", "--n", "2", "--input", str(src)], capsys)
    assert code == 0 and out.strip() == "infeasible"
    code, out, _ = run(["duplic", "--n", "2"], capsys, x.to01().encode())
    assert code == 0 and len(out.strip()) == 96


def test_attack_cli(params_file, capsys):
    p = generate_pair(2, 4)
    y = encode_block(bits("11000011"), p)
    code, out, _ = run(
        ["attack", "--mode", "preimage", "--n", "2", "--params", str(params_file), "--target-bits", y.to01(), "--format", "kv"],
        capsys,
    )
    assert code == 0 and "inputs=11000011" in out
    if len(y) % 4 == 0:
        hexy = format(int(y.to01(), 2), f"0{len(y) // 4}x")
        code, out2, _ = run(["attack", "--mode", "preimage", "--n", "2", "--params", str(params_file), "--target", hexy], capsys)
        assert code == 0 and "11000011" in out2
    code, out, _ = run(["attack", "--mode", "collision", "--n", "2", "--params", str(params_file)], capsys)
    assert code == 0 and "mode: collision" in out
    code, _, err = run(["attack", "--mode", "preimage", "--n", "2", "--params", str(params_file)], capsys)
    assert code == 2 and "target" in err


def test_attack_cap_exit(tmp_path, capsys):
    path = tmp_path / "p3.txt"
    path.write_text(format_params(generate_pair(3, 1)))
    code, _, err = run(["attack", "--mode", "collision", "--n", "3", "--params", str(path)], capsys)
    assert code == 2 and "capped" in err


def test_bench_and_diffusion_cli(capsys):
    code, out, _ = run(["bench", "--n", "2", "--size", "64", "--seed", "1", "--format", "kv"], capsys)
    assert code == 0 and out.startswith("record=bench")
    code, out, _ = run(["diffusion", "--n", "2", "--trials", "5", "--seed", "1", "--format", "kv"], capsys)
    assert code == 0
    assert [l.split()[0] for l in out.splitlines()] == ["record=configured", "record=all-ones"]
