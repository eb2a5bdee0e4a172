import json
import shutil
import subprocess
import sys

import pytest

from heckemap import fixture_path
from heckemap.cli import RunConfig, main

SEVEN = ["m7", "m7_prime", "m1_6", "m1_6_prime", "m3_4", "m2_5"]


def fx(name):
    return str(fixture_path(f"corpus/{name}.hfs"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", fx("modular_gamma3"))[0] == 0
    bad = tmp_path / "e4.hfs"
    bad.write_text("q=6\ncusps: -inf, 0/1, 1/L, L/2, inf\nlabels: o, o, o, e4\n")
    code, out, _ = run(capsys, "validate", "--json", str(bad))
    assert code == 1 and json.loads(out)["violations"][0]["code"] == "ErNotDivisor"
    assert run(capsys, "validate", str(tmp_path / "missing.hfs"))[0] == 3
    syntax = tmp_path / "broken.hfs"
    syntax.write_text("q=3\ncusps: -inf, inf\nlabels: o\n")
    assert run(capsys, "validate", str(syntax))[0] == 1


def test_face_budget_exit_code(capsys):
    assert run(capsys, "validate", "--face-budget", "1", fx("modular_index11"))[0] == 2
    assert run(capsys, "analyze", "--face-budget", "1", fx("modular_index11"))[0] == 2


def test_bad_config(capsys):
    assert run(capsys, "analyze", "--max-oracle-size", "0", fx("m7"))[0] == 1
    with pytest.raises(ValueError):
        RunConfig("analyze", face_budget=0)


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "--json", fx("g6_free_triangle"))
    d = json.loads(out)
    assert code == 0 and d["normal"] is True and d["index"] == 3
    code, out, _ = run(capsys, "analyze", "--json", "--congruence", "both", fx("modular_index11"))
    c = json.loads(out)["congruence"]
    assert (c["verdict"], c["method"], c["agreement"]) == (False, "both", True)
    d = json.loads(run(capsys, "analyze", "--json", fx("g4_index8"))[1])
    assert d["normal"] is False and d["aut"]["order"] == 4


def test_analyze_inconclusive_is_success(capsys):
    code, out, _ = run(capsys, "analyze", "--json", "--congruence", "oracle", "--max-oracle-size", "5",
                       fx("modular_index11"))
    assert code == 0 and json.loads(out)["congruence"]["verdict"] == "inconclusive"


def test_analyze_table_and_extras(capsys):
    code, out, _ = run(capsys, "analyze", "--emit-generators", "--emit-dessin", fx("g6_free_triangle"))
    assert code == 0 and "generators" in out and "sigma1" in out
    code, out, _ = run(capsys, "dessin", "--json", fx("g6_free_triangle"))
    assert json.loads(out)["sigma1"] == "(1,2,3)"


def test_json_is_byte_identical(capsys):
    args = ("analyze", "--json", "--emit-generators", "--emit-dessin", fx("modular_gamma3"))
    assert run(capsys, *args)[1] == run(capsys, *args)[1]
    a = subprocess.run([sys.executable, "-m", "heckemap.cli", *args], capture_output=True, check=True).stdout
    assert a == run(capsys, *args)[1].encode()


def test_batch_seven_index7(capsys, tmp_path):
    for n in SEVEN:
        shutil.copy(fx(n), tmp_path)
    code, out, _ = run(capsys, "batch", "--json", str(tmp_path))
    rows = {r["name"][:-4]: r for r in json.loads(out)}
    assert code == 0 and len(rows) == len(SEVEN)
    assert all(r["normal"] is False and r["index"] == 7 for r in rows.values())
    assert rows["m7"]["congruence"] is True and rows["m1_6"]["congruence"] is False


def test_batch_isolates_failures(capsys, tmp_path):
    shutil.copy(fx("m7"), tmp_path)
    (tmp_path / "junk.hfs").write_text("nonsense")
    code, out, _ = run(capsys, "batch", "--json", str(tmp_path))
    rows = json.loads(out)
    assert code == 0 and [r["status"] for r in rows] == [1, 0]
    (tmp_path / "m7.hfs").unlink()
    assert run(capsys, "batch", str(tmp_path))[0] == 1


def test_batch_empty_and_missing(capsys, tmp_path):
    code, out, _ = run(capsys, "batch", "--json", str(tmp_path))
    assert code == 0 and json.loads(out) == []
    assert run(capsys, "batch", str(tmp_path / "nope"))[0] == 3


def test_batch_parallel_matches_serial(capsys, tmp_path):
    for n in SEVEN[:3]:
        shutil.copy(fx(n), tmp_path)
    serial = run(capsys, "batch", "--json", str(tmp_path))[1]
    assert run(capsys, "batch", "--json", "--jobs", "2", str(tmp_path))[1] == serial


def test_json_input(capsys, tmp_path):
    from heckemap import load_fixture
    from heckemap.symbol import hfs_to_json
    p = tmp_path / "s.json"
    p.write_text(json.dumps(hfs_to_json(load_fixture("m7"))))
    d = json.loads(run(capsys, "analyze", "--json", str(p))[1])
    assert d["index"] == 7
