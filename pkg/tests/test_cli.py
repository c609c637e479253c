import json
import subprocess
import sys

import pytest

from blimwb.cli import main
from blimwb.presfile import CORPUS_DIR, corpus_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_verify_c2(capsys):
    code, rep = run(capsys, "verify", "--n", 4, corpus_path("C2"))
    assert code == 0
    assert rep["schema"] == "1" and rep["passed"]
    (case,) = rep["cases"]
    assert case["equal"] and case["inclusion"] and case["exponent_two"]
    assert case["blim"]["elements"] == case["dimension_quotient"]["elements"] == [[0]]
    assert "timings_ms" not in case


def test_verify_n3_blim_trivial(capsys):
    code, rep = run(capsys, "verify", "--n", 3, corpus_path("C2xC2"), corpus_path("C4"))
    assert code == 0
    assert [c["name"] for c in rep["cases"]] == ["C2xC2", "C4"]
    for c in rep["cases"]:
        assert c["inclusion"] and len(c["blim"]["elements"]) == 1


def test_verify_timings_flag(capsys):
    code, rep = run(capsys, "verify", "--n", 3, "--timings", corpus_path("C2"))
    assert code == 0 and "total" in rep["cases"][0]["timings_ms"]


def test_verify_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.pres"
    bad.write_text("gens: x\nrels: x^\n")
    code, rep = run(capsys, "verify", bad)
    assert code == 2
    assert rep["error"]["type"] == "PresentationSyntaxError"
    assert "line 2" in rep["error"]["message"]


def test_verify_infinite_colimit(capsys):
    code, rep = run(capsys, "verify", "--n", 3, corpus_path("free1"))
    assert code == 3 and rep["error"]["type"] == "InfiniteGroupError"


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BLIMWB_CAP", "3")
    code, rep = run(capsys, "dimq", "--n", 3, corpus_path("C2xC2"))
    assert code == 3 and rep["error"]["type"] == "CapExceeded"
    code, rep = run(capsys, "dimq", "--n", 3, "--cap", 100, corpus_path("C2xC2"))
    assert code == 0


def test_bad_n(capsys):
    code, rep = run(capsys, "blim", "--n", 7, corpus_path("C2"))
    assert code == 2


def test_dimq_and_blim(capsys):
    # S3/γ3(S3) = C2 and D3 = γ3, so the quotient is trivial
    code, rep = run(capsys, "dimq", "--n", 3, corpus_path("S3"))
    assert code == 0 and rep["colimit_order"] == 2 and rep["elements"] == [[0]]
    code, rep = run(capsys, "blim", "--n", 4, corpus_path("C2xC2"))
    assert code == 0 and rep["colimit_order"] == 4 and rep["elements"] == [[0, 0]]
    assert rep["invariants"] == {"torsion": [], "free_rank": 0}


@pytest.mark.parametrize("which", ["inclusion", "sym", "identity", "mono"])
def test_props(capsys, which):
    code, rep = run(capsys, "props", "--which", which, corpus_path("C2xC2"))
    assert code == 0 and rep["passed"]


def test_catlim_bc2(capsys):
    code, rep = run(capsys, "catlim", "--cmd", "limn", "--degree", 2, CORPUS_DIR / "bc2_trivial_z.json")
    assert code == 0
    assert rep["lim"]["2"] == {"torsion": [2], "free_rank": 0}
    assert rep["lim"]["1"] == {"torsion": [], "free_rank": 0}
    assert rep["lim"]["0"] == rep["lim0_direct"] == {"torsion": [], "free_rank": 1}


def test_catlim_identity_category(capsys):
    code, rep = run(capsys, "catlim", "--cmd", "limn", "--degree", 1, CORPUS_DIR / "identity_z2_z4.json")
    assert code == 0
    assert rep["lim"]["0"] == {"torsion": [2, 4], "free_rank": 0}
    assert rep["lim"]["1"] == {"torsion": [], "free_rank": 0}
    code, rep = run(capsys, "catlim", "--cmd", "lim1", CORPUS_DIR / "identity_z2_z4.json")
    assert rep["orbits"] == 1


def test_catlim_subfunctor_commands(capsys):
    path = CORPUS_DIR / "d8_bc2_center.json"
    for cmd in ("seq1", "seq2"):
        code, rep = run(capsys, "catlim", "--cmd", cmd, path)
        assert code == 0 and rep["exact"] and rep["violations"] == []
    code, rep = run(capsys, "catlim", "--cmd", "delta", path)
    assert code == 0 and any(v["class"] == 0 for v in rep["values"])


def test_catlim_random_seq1(capsys):
    code, rep = run(capsys, "catlim", "--cmd", "seq1", "--random", 5, "--seed", 3)
    assert code == 0 and rep["exact"] and len(rep["instances"]) == 5 and rep["seed"] == 3


def test_catlim_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, rep = run(capsys, "catlim", "--cmd", "limn", bad)
    assert code == 2
    code, rep = run(capsys, "catlim", "--cmd", "delta", CORPUS_DIR / "bc2_trivial_z.json")
    assert code == 2


def test_out_file_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert main(["catlim", "--cmd", "seq2", "--random", "4", "--seed", "11", "--out", str(target)]) == 0
    assert a.read_bytes() == b.read_bytes()
    for target in (a, b):
        assert main(["verify", "--n", "4", "--out", str(target), str(corpus_path("C2xC2"))]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "blimwb.cli", "props", "--which", "mono", str(corpus_path("C2"))],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
