import json
import subprocess
import sys

import pytest

from unlinkbound.cli import main
from unlinkbound.diagram import encode
from unlinkbound.dn import build, export_sequence


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path, hopf):
    paths = {}
    for name, d in (("hopf", hopf), ("d2", build(2)), ("d4", build(4))):
        p = tmp_path / f"{name}.diagram"
        p.write_text(encode(d))
        paths[name] = p
    paths["d4moves"] = tmp_path / "d4.moves"
    paths["d4moves"].write_text(export_sequence(4))
    paths["empty"] = tmp_path / "empty.diagram"
    paths["empty"].write_text("diagram crossings=0 loops=2\n")
    paths["bad"] = tmp_path / "bad.diagram"
    paths["bad"].write_text("diagram crossings=1 loops=0\nX 1 2 3\n")
    paths["nomoves"] = tmp_path / "none.moves"
    paths["nomoves"].write_text("")
    return paths


class TestInvariants:
    def test_hopf(self, capsys, files):
        code, out, _ = run(capsys, "invariants", files["hopf"], "--json")
        data = json.loads(out)
        assert code == 0
        assert data["components"] == 2 and abs(data["writhe"]) == 2 and data["total_linking"] == 1

    def test_d4(self, capsys, files):
        data = json.loads(run(capsys, "invariants", files["d4"], "--json")[1])
        assert data["writhe"] == 3 and data["total_linking"] == 0 and data["unlink_fingerprint"]

    def test_malformed(self, capsys, files):
        code, _, err = run(capsys, "invariants", files["bad"])
        assert code == 2 and "error" in err

    def test_missing(self, capsys, tmp_path):
        assert run(capsys, "invariants", tmp_path / "nope")[0] == 2

    def test_cap(self, capsys, files):
        assert run(capsys, "invariants", files["d4"], "--max-crossings", "5")[0] == 3


class TestIu:
    def test_d2(self, capsys, files):
        code, out, _ = run(capsys, "iu", files["d2"], "--json")
        data = json.loads(out)
        assert code == 0
        assert data["iu"]["interval"] == [2, 2]
        assert data["iu_eps_delta"]["+1,+1"] == [6, 6]
        assert data["bounds_to_crossing_free"]["all-moves +1,+1"]["certified"] == 3

    def test_empty(self, capsys, files):
        data = json.loads(run(capsys, "iu", files["empty"], "--json")[1])
        assert data["iu"]["interval"] == [0, 0]
        assert all(v == [0, 0] for v in data["iu_eps_delta"].values())

    def test_unknown_smoothings(self, capsys, tmp_path):
        from unlinkbound import braid

        p = tmp_path / "t.diagram"
        p.write_text(encode(braid.closure(braid.parse("s1^3 s2^-1 s1^2 s2^-1 @3"))))
        code, out, _ = run(capsys, "iu", p, "--json", "--subset-budget", "0", "--max-changes", "0")
        assert code == 0
        assert "inf" in out


class TestVerify:
    def test_d4(self, capsys, files):
        code, out, _ = run(capsys, "verify", files["d4"], files["d4moves"], "--json")
        data = json.loads(out)
        assert code == 0 and data["length"] == 13 and data["final_crossings"] == 0
        assert data["tally"] == {"RI-delete-positive": 3, "RII-delete-matched": 4, "RIII": 6}

    def test_wrong_diagram(self, capsys, files):
        code, out, _ = run(capsys, "verify", files["hopf"], files["d4moves"], "--json")
        assert code == 1 and json.loads(out)["index"] == 1

    def test_empty_sequence(self, capsys, files):
        data = json.loads(run(capsys, "verify", files["hopf"], files["nomoves"], "--json")[1])
        assert data["length"] == 0 and data["final_crossings"] == 2

    def test_needs_moves(self, capsys, files):
        assert run(capsys, "verify", files["hopf"])[0] == 2

    def test_witness(self, capsys, files, tmp_path):
        w = tmp_path / "hopf.witness"
        assert run(capsys, "search", files["hopf"], "--out", w)[0] == 0
        assert run(capsys, "verify", files["hopf"], "--witness", w)[0] == 0
        assert run(capsys, "verify", files["d2"], "--witness", w)[0] != 0


class TestDn:
    def test_dn4(self, capsys):
        data = json.loads(run(capsys, "dn", 4, "--assume-conjecture", "--json")[1])
        assert data["iu"] == [12, 12]
        assert data["all_move_bound"]["certified"] == 11
        assert data["sequence"]["length"] == 13

    def test_dn1(self, capsys):
        data = json.loads(run(capsys, "dn", 1, "--json")[1])
        assert data["iu"] == [0, 0] and data["sequence"]["length"] == 1

    def test_cap(self, capsys):
        code, _, err = run(capsys, "dn", 100)
        assert code == 3 and "cap" in err

    def test_out(self, capsys, tmp_path):
        assert run(capsys, "dn", 3, "--out", tmp_path)[0] == 0
        assert {p.name for p in tmp_path.iterdir()} == {"D3.diagram", "D3.moves", "D3.report.json"}
        code, out, _ = run(capsys, "verify", tmp_path / "D3.diagram", tmp_path / "D3.moves", "--json")
        assert code == 0 and json.loads(out)["length"] == 8

    def test_census(self, capsys):
        data = json.loads(run(capsys, "census", 3, "--json")[1])
        assert len(data["census"]) == 8

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "dn", 2)
        assert code == 0 and "iu(+1,+1)" in out


class TestFuzz:
    def test_deterministic(self, capsys):
        a = run(capsys, "fuzz", "--seed", 4, "--scale", 0.05, "--json")
        b = run(capsys, "fuzz", "--seed", 4, "--scale", 0.05, "--json")
        assert a == b and a[0] == 0
        assert all(not v["violations"] for v in json.loads(a[1]).values())

    def test_one_suite(self, capsys):
        data = json.loads(run(capsys, "fuzz", "--suite", "inverse", "--scale", 0.05, "--json")[1])
        assert list(data) == ["move inverses"]


class TestEncodeDecode:
    def test_round_trip(self, capsys, tmp_path):
        code, text, _ = run(capsys, "encode", "--dn", 3)
        p = tmp_path / "d3.diagram"
        p.write_text(text)
        assert run(capsys, "decode", p)[1] == text

    def test_json(self, capsys, tmp_path):
        _, text, _ = run(capsys, "encode", "s1^2 @2", "--json")
        p = tmp_path / "h.json"
        p.write_text(text)
        data = json.loads(run(capsys, "invariants", p, "--json")[1])
        assert data["components"] == 2

    def test_bad_braid(self, capsys):
        code, _, err = run(capsys, "encode", "s3 @2")
        assert code == 2 and "error" in err

    def test_negative_budget(self, capsys, files):
        assert run(capsys, "iu", files["d2"], "--subset-budget", "-1")[0] == 2


def test_console_script(files):
    proc = subprocess.run(
        [sys.executable, "-m", "unlinkbound.cli", "invariants", str(files["d2"])],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "components   2" in proc.stdout
