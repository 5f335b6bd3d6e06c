import json
import subprocess
import sys

import pytest

from critlib.cli import main
from critlib.suite import A4_C


@pytest.fixture
def a4(tmp_path):
    p = tmp_path / "a4.json"
    p.write_text(json.dumps({"matrix": A4_C}))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_matrix_critical_group(capsys, a4):
    code, out = run(capsys, "matrix", "critical-group", "-i", a4)
    assert code == 0 and out.out.strip() == "Z/3"


def test_matrix_stabilize(capsys, a4):
    code, out = run(capsys, "matrix", "stabilize", "-i", a4, "--config", "2,2,1", "--format", "json")
    obj = json.loads(out.out)
    assert code == 0
    assert obj["outputs"]["stable"] == [2, 2, 0]
    assert obj["outputs"]["total"] == 5
    assert obj["outputs"]["firings"]["counts"] == [1, 1, 3]


def test_matrix_check_identity(capsys, tmp_path):
    p = tmp_path / "id.json"
    p.write_text(json.dumps([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    code, out = run(capsys, "matrix", "check", "-i", str(p))
    assert code == 0 and out.out.splitlines() == ["accepted", "witness r = [1, 1, 1]"]


def test_matrix_recurrents_and_burning(capsys, a4):
    code, out = run(capsys, "matrix", "recurrents", "-i", a4)
    assert out.out.splitlines() == ["[1, 2, 0]", "[2, 1, 0]", "[2, 2, 0]"]
    code, out = run(capsys, "matrix", "burning", "-i", a4, "--b", "1,1,1", "--format", "json")
    assert json.loads(out.out)["outputs"]["recurrents"] == [[1, 2, 0], [2, 1, 0], [2, 2, 0]]
    code, out = run(capsys, "matrix", "zero-coset", "-i", a4)
    assert code == 0 and out.out.strip() == "[2, 2, 0]"


def test_matrix_domain_errors(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps([[1, 2], [2, 1]]))
    code, out = run(capsys, "matrix", "check", "-i", str(p))
    assert code == 1 and "NotZMatrix" in out.err
    code, out = run(capsys, "matrix", "check", "-i", str(tmp_path / "missing.json"), "--format", "json")
    assert code == 1 and json.loads(out.out)["error"] == "ParseError"


def test_root_commands(capsys):
    code, out = run(capsys, "root", "cartan", "A1", "--format", "json")
    assert json.loads(out.out)["outputs"]["cartan"] == [[2]]
    code, out = run(capsys, "root", "verify-thm1", "E6")
    lines = out.out.splitlines()
    assert code == 0 and lines[0] == "pass"
    assert "    0\n0 0 0 0 0" in out.out and "    0\n1 0 0 0 0" in out.out and "    0\n0 0 0 0 1" in out.out
    code, out = run(capsys, "root", "minuscule", "D5")
    assert out.out.strip() == "1 4 5"
    code, out = run(capsys, "root", "burning-test", "A2", "--b", "1,1")
    assert out.out.strip() == "burning"


def test_root_looping_c4(capsys):
    code, out = run(capsys, "root", "looping", "C4", "--node", "1", "--format", "json")
    obj = json.loads(out.out)["outputs"]
    assert code == 0 and obj["dual_type"] == "B4"
    assert obj["toppling"][0] == [0, 1, 1, 1] and obj["toppling"][-1] == [0, 1, 1, 1]
    assert len(obj["padded"]) == 8


def test_root_errors(capsys):
    code, out = run(capsys, "root", "cartan", "E9")
    assert code == 1
    code, out = run(capsys, "root", "looping", "E8", "--node", "1")
    assert code == 1 and "NotMinuscule" in out.err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["root", "explode", "A2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["matrix", "check"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["mckay", "build", "--group", "A4", "--bogus"])
    assert exc.value.code == 2


def test_mckay_commands(capsys):
    code, out = run(capsys, "mckay", "verify-abelianization", "--group", "binary-icosahedral")
    assert code == 0 and out.out.strip() == "K = 0, Ghat = 0, isomorphism"
    code, out = run(capsys, "mckay", "critical-group", "--group", "binary-dihedral-3")
    assert out.out.strip() == "Z/4"
    code, out = run(capsys, "mckay", "cayley", "--invariants", "6", "--generators", "1,2,3", "--format", "json")
    obj = json.loads(out.out)
    assert code == 0 and obj["outputs"]["arborescences"] == 114 > 6
    code, out = run(capsys, "mckay", "build", "--group", "A4", "--format", "json")
    assert json.loads(out.out)["outputs"]["C"] == A4_C
    code, out = run(capsys, "mckay", "rng-table", "--group", "cyclic-3")
    assert code == 0 and out.out.splitlines() == ["0 0", "0 0"]


def test_mckay_errors(capsys):
    code, out = run(capsys, "mckay", "build", "--group", "Q8")
    assert code == 1 and "UnknownGroup" in out.err
    code, out = run(capsys, "mckay", "cayley", "--invariants", "6", "--generators", "1,2")
    assert code == 1 and "GeneratorsInvalid" in out.err
    code, out = run(capsys, "mckay", "verify-abelianization", "--group", "cyclic-4", "--gamma", "0,1,0,0")
    assert code == 1 and "NotInSL" in out.err


def test_mckay_table_file(capsys, tmp_path):
    from critlib import chartable

    p = tmp_path / "s4.json"
    chartable.save_table(chartable.get_table("S4"), p)
    code, out = run(capsys, "mckay", "verify-abelianization", "--table", str(p))
    assert code == 0 and out.out.strip() == "K = Z/4, Ghat = Z/2, surjection only"


def test_verify_all_subset_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, out = run(capsys, "verify-all", "--only", "2", "--json", str(a))
    assert code == 0 and out.out.startswith("PASS  2")
    run(capsys, "verify-all", "--only", "2", "--json", str(b))
    assert a.read_bytes() == b.read_bytes()
    code, out = run(capsys, "verify-all", "--only", "rootsys", "--format", "json")
    obj = json.loads(out.out)
    assert code == 0 and obj["passed"] and len(obj["results"]) >= 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "critlib", "root", "cartan", "A2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "2" in proc.stdout
