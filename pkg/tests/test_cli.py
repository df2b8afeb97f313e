import json
import subprocess
import sys

import pytest

from torsionkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_phi(capsys):
    code, out, _ = run(capsys, "phi", "[[1,2,3],[4,5,6]]")
    assert code == 0 and out.strip() == "[[4,5,6],[-1,-2,-3]]"


@pytest.mark.parametrize("argv", [
    ("phi", "[[1,2]]"),
    ("classify", "[[1,2,3]]"),
    ("classify", "dim=1 color=red"),
    ("lattice", "--format", "svg"),
    ("verify", "phi", "--bound", "0"),
    ("verify", "nope"),
    ("replay", "NoSuchLemma"),
    ("frobnicate",),
    (),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_classify_matrix(capsys):
    code, out, _ = run(capsys, "classify", "[[0,1,0],[2,0,0]]")
    assert code == 0
    assert "codim: 1" in out and "dim: 2" in out and "dpi_upper: 2" in out
    assert "candidates: C40" in out


def test_classify_point_matrix(capsys):
    _, out, _ = run(capsys, "classify", "[[0,0,0],[0,0,7]]")
    assert "candidates: C00" in out and "wit1_numerical: fail" in out


def test_classify_zero_and_inadmissible(capsys):
    _, out, _ = run(capsys, "classify", "[[0,0,0],[0,0,0]]")
    assert "zero class" in out
    _, out, _ = run(capsys, "classify", "[[-1,0,0],[0,0,0]]")
    assert "admissible: no" in out and "candidates: none" in out


def test_classify_profile(capsys):
    code, out, _ = run(capsys, "classify", "dim=2 dpi=2 wit=0 dim_hat=3")
    assert code == 0 and "classes: C40" in out


def test_lattice_formats(capsys):
    _, dot, _ = run(capsys, "lattice", "--format", "dot")
    _, js, _ = run(capsys, "lattice", "--format", "json")
    assert dot.startswith("graph Cij {")
    assert len(json.loads(js)["nodes"]) == 12


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and "torsion classes: 17" in out
    assert "rules:" in out and "GABRIEL" in out
    _, js, _ = run(capsys, "catalog", "--json")
    assert len(json.loads(js)) == 17


def test_replay(capsys):
    code, out, _ = run(capsys, "replay", "all", "-q")
    lines = [ln for ln in out.splitlines() if ln.endswith(": Valid")]
    assert code == 0 and len(lines) >= 26
    code, out, _ = run(capsys, "replay", "Daniel")
    assert code == 0 and "ABSURD" in out and "Daniel: Valid" in out


def test_replay_invalid_exits_1(capsys):
    code, out, _ = run(capsys, "replay", "Jade", "--without", "TC3")
    assert code == 1 and "Invalid at step 2" in out


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "phi", "--bound", "1", "--workers", "1")
    assert code == 0 and "no numerical counterexample" in out
    code, out, _ = run(capsys, "verify", "daniel", "--bound", "2", "--no-strict", "--json")
    assert code == 1 and json.loads(out)["counterexamples"]


def test_mutations_subset(capsys):
    code, out, _ = run(capsys, "mutations", "--rule", "A1", "--rule", "CH2p")
    assert code == 0
    assert "A1: broken=0 direct=0" in out and "[Daniel, Veronica]" in out


def test_report(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "--out", str(tmp_path), "--bound", "1")
    assert code == 0
    for name in ("report.txt", "diagram.png", "mutations.png", "closures.png"):
        f = tmp_path / name
        assert f.exists() and f.stat().st_size > 0
    text = (tmp_path / "report.txt").read_text()
    for section in ("catalog", "replay", "mutations", "verify phi", "verify daniel",
                    "verify closures", "figures"):
        assert f"=== {section} ===" in text and f"=== end {section} ===" in text
    assert (tmp_path / "diagram.png").read_bytes()[:4] == b"\x89PNG"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torsionkit", "phi", "[[1,0,0],[0,0,0]]"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "[[0,0,0],[-1,0,0]]"
