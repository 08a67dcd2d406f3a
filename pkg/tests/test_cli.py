import io
import json
import subprocess
import sys

import pytest

from qcurrent.cli import run


def _run(argv):
    buf = io.StringIO()
    code = run(argv, stream=buf)
    return code, buf.getvalue()


def test_dressing_standard_passes():
    code, out = _run(["verify-dressing", "--order", "20", "--level", "1", "--convention", "standard"])
    assert code == 0
    assert "MISMATCH" not in out


def test_dressing_printed_fails_at_order_two(capsys):
    code, out = _run(["verify-dressing", "--convention", "printed", "--level", "1", "--order", "2"])
    assert code == 1
    err = capsys.readouterr().err
    assert "order 2" in err


def test_character_vacuum():
    code, out = _run(["character", "--level", "1", "--l", "0", "--max-energy", "0"])
    assert code == 0
    assert out.splitlines() == ["charge\tenergy\tdim", "0\t0\t1"]


def test_json_mirrors_tsv():
    _, tsv = _run(["character", "--max-energy", "3"])
    _, js = _run(["--format", "json", "character", "--max-energy", "3"])
    rows = json.loads(js)["character"]
    assert len(rows) == len(tsv.splitlines()) - 1
    assert rows[0] == dict(zip(["charge", "energy", "dim"], map(int, tsv.splitlines()[1].split("\t"))))


def test_output_is_deterministic():
    argv = ["verify", "--suite", "heisenberg", "--seed", "3"]
    assert _run(argv) == _run(argv)


def test_dual_dims_and_pair():
    code, out = _run(["dual-dims", "--max-energy", "6", "--source", "both"])
    assert code == 0 and "False" not in out
    code, out = _run(["pair", "--particles", "2", "--max-energy", "8"])
    assert code == 0 and "FAIL" not in out


def test_resummation_demo():
    code, out = _run(["resummation-demo"])
    assert code == 0
    assert "closed_form" in out
    code, _ = _run(["resummation-demo", "--q", "2"])
    assert code == 1


def test_verify_suites():
    code, out = _run(["verify", "--suite", "all", "--window", "4,12", "--modes", "3"])
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["character", "--level", "1", "--l", "2"],
    ["verify", "--window", "3,1"],
    ["verify", "--window", "x"],
    ["character", "--max-energy", "-1"],
    ["no-such-command"],
    [],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcurrent.cli", "character", "--max-energy", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.endswith("0\t0\t1\n")
