import json
import subprocess
import sys

import pytest

from hypclust import cli


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_then_analyze(tmp_path, capsys):
    code, out, _ = _run(capsys, "generate", "--n", "800", "--alpha", "1.5", "--seed", "3", "--out", str(tmp_path))
    assert code == 0
    info = json.loads(out)
    assert info["n"] == 800
    code, out, _ = _run(capsys, "analyze", "--edges", str(tmp_path / "edges.csv"),
                        "--vertices", str(tmp_path / "vertices.csv"), "--type-cap", "2")
    assert code == 0
    stats = json.loads(out)
    assert stats["edges"] == info["edges"]
    assert stats["radius"] == pytest.approx(info["radius"])
    assert stats["t_hat"] + stats["t_tilde"] == stats["triangles"]


def test_generate_disc(tmp_path, capsys):
    code, out, _ = _run(capsys, "generate", "--n", "300", "--alpha", "1", "--model", "disc",
                        "--delta", "0.1", "--out", str(tmp_path))
    assert code == 0
    assert json.loads((tmp_path / "graph.json").read_text())["delta"] == 0.1


def test_theory(capsys):
    code, out, _ = _run(capsys, "theory", "--alpha", "1.5", "--beta", "2")
    assert code == 0
    d = json.loads(out)
    assert d["L_infinity"]["value"] == pytest.approx(0.263067, rel=1e-5)
    code, out, _ = _run(capsys, "theory", "--zeta", "1.5", "--alpha", "1", "--t", "2", "--t", "3")
    assert set(json.loads(out)["L_restricted"]) == {"2", "3"}


def test_exit_codes(tmp_path, capsys):
    assert _run(capsys, "theory", "--zeta", "1.5", "--alpha", "1")[0] == 3
    assert _run(capsys, "theory", "--alpha", "1", "--beta", "0.5")[0] == 3
    assert _run(capsys, "theory", "--alpha", "1.5", "--rel-tol", "-1")[0] == 2
    assert _run(capsys, "generate", "--n", "60000", "--alpha", "1", "--out", str(tmp_path))[0] == 2
    code, _, err = _run(capsys, "analyze", "--edges", "nope.csv", "--vertices", "nope.csv")
    assert code == 2 and "not found" in err
    assert _run(capsys, "trial", "--config", str(tmp_path / "missing.json"))[0] == 2
    with pytest.raises(SystemExit):
        cli.main(["bogus"])


def test_trial_and_sweep(tmp_path, capsys):
    cfg = {"zeta": 1.0, "alpha": 1.5, "beta": 2.0, "nu": 1.0, "n": 600, "seeds": [1, 2]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = _run(capsys, "trial", "--config", str(path), "--out", str(tmp_path / "t"))
    assert code == 0
    assert (tmp_path / "t" / "trials.csv").exists()
    assert "C2_vs_L_infinity" in json.loads(out)["comparisons"]
    code, out, _ = _run(capsys, "sweep", "--config", str(path), "--n", "300,600", "1200")
    assert code == 0
    assert json.loads(out)["n_values"] == [300, 600, 1200]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "hypclust.cli", "theory", "--alpha", "1.5"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "L_infinity" in res.stdout
