import json
import subprocess
import sys

import pytest

from rabisym.cli import main
from rabisym.symmetry import SymmetrySolution


@pytest.fixture(autouse=True)
def _cache(tmp_path, monkeypatch):
    monkeypatch.setenv("RABISYM_CACHE", str(tmp_path / "cache"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_half(capsys):
    code, out, _ = run(capsys, "solve", "--eps", "1/2")
    assert code == 0
    data = json.loads(out)
    assert data["ell"] == 1 and data["eps"] == "1/2"
    assert data["Q0"][1] in ("2*g^2 - 2*g*A", "-2*g^2 + 2*g*A")
    assert data["p"] == "4*g^2*x + 4*g^4 + 2*g^2 + d^2"


def test_solve_zero(capsys):
    code, out, _ = run(capsys, "solve", "--eps", "0")
    data = json.loads(out)
    assert code == 0 and data["Q0"] == ["0", "1", "1", "0"] and data["p"] == "1"


@pytest.mark.parametrize("eps", ["1/3", "2/5", "0.7", "1e-1", "abc"])
def test_solve_rejects(capsys, eps):
    code, _, err = run(capsys, "solve", "--eps", eps)
    assert code == 2
    assert "error" in err


def test_solve_reports_no_polynomial_solution(capsys):
    _, _, err = run(capsys, "solve", "--eps", "1/3")
    assert "no polynomial solution" in err


def test_solve_max_ell(capsys):
    code, _, _ = run(capsys, "solve", "--eps", "7/2")
    assert code == 2
    code, _, _ = run(capsys, "solve", "--eps", "7/2", "--max-ell", "7")
    assert code == 0


def test_solve_degenerate_exit(capsys, monkeypatch):
    import rabisym.cli as cli
    from rabisym.symmetry import SolverDegenerate

    def boom(eps):
        raise SolverDegenerate("forced")

    monkeypatch.setattr(cli, "solve_Q0", boom)
    code, _, err = run(capsys, "solve", "--eps", "1/2", "--no-cache")
    assert code == 3 and "degenerate" in err


def test_solve_file_and_cache(tmp_path, capsys):
    out = tmp_path / "sol.json"
    assert main(["solve", "--eps", "3/2", "--out", str(out)]) == 0
    sol = SymmetrySolution.from_json(out.read_text())
    assert sol.ell == 3
    meta = json.loads((tmp_path / "sol.json.meta.json").read_text())
    assert meta["config"]["eps"] == "3/2"
    assert (tmp_path / "cache" / "ell3_pos.json").exists()
    # a cached run gives byte-identical output
    again = tmp_path / "again.json"
    main(["solve", "--eps", "3/2", "--out", str(again)])
    assert again.read_bytes() == out.read_bytes()


def test_cache_distinguishes_sign(tmp_path, capsys):
    main(["solve", "--eps", "1"])
    capsys.readouterr()
    code, out, _ = run(capsys, "solve", "--eps", "-1")
    assert json.loads(out)["eps"] == "-1/1"
    assert (tmp_path / "cache" / "ell2_neg.json").exists()


def test_p_poly(capsys):
    code, out, _ = run(capsys, "p-poly", "--eps", "1/2")
    assert out.strip() == "4*g^2*x + 4*g^4 + 2*g^2 + d^2"
    code, out, _ = run(capsys, "p-poly", "--eps", "1/2", "--alpha", "0")
    assert out.strip() == "4*g^4 + 2*g^2 + d^2"
    code, out, _ = run(capsys, "p-poly", "--eps", "1", "--format", "json")
    assert json.loads(out)["ell"] == 2


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--eps", "1/2", "--g", "1", "--delta", "1", "--trunc", "300")
    assert code == 0
    assert out.strip().endswith("PASS")
    assert "exact zero" in out


def test_verify_zero(capsys):
    code, out, _ = run(capsys, "verify", "--eps", "0", "--trunc", "120")
    assert code == 0
    assert "mu values: [-1.0, 1.0]" in out


def test_verify_corrupted(tmp_path, capsys):
    path = tmp_path / "s.json"
    main(["solve", "--eps", "1/2", "--out", str(path)])
    data = json.loads(path.read_text())
    data["Q0"][1] = data["Q0"][1].replace("2*g*A", "3*g*A")
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--solution", str(path))
    assert code == 4
    assert "FAIL (nonzero" in out


def test_verify_wrong_p(tmp_path, capsys):
    path = tmp_path / "s.json"
    main(["solve", "--eps", "1/2", "--out", str(path)])
    data = json.loads(path.read_text())
    data["p"] = "4*g^2*x + 1"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--solution", str(path))
    assert code == 4


def test_verify_unreadable(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text("garbage")
    code, _, _ = run(capsys, "verify", "--solution", str(path))
    assert code == 4


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--eps", "1/2", "--delta", "1", "--gmin", "0", "--gmax", "4",
                       "--steps", "3", "--k", "3", "--trunc", "80", "--no-convergence")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "g,lambda_1,lambda_2,lambda_3"
    assert lines[1].startswith("0,-1.1180339887498")


def test_sweep_pairs(capsys):
    code, out, _ = run(capsys, "sweep", "--eps", "1/2", "--pairs", "--steps", "2", "--k", "2", "--gmax", "1",
                       "--trunc", "80")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "g,delta,eps,lambda,mu,defect,p_residual"
    assert len(lines) == 5


def test_sweep_bad_range(capsys):
    code, _, _ = run(capsys, "sweep", "--eps", "1/2", "--gmin", "2", "--gmax", "1")
    assert code == 2


def test_curve_modes(capsys):
    code, out, _ = run(capsys, "curve", "--mode", "hyper", "--ell", "0", "--xmin", "-1", "--xmax", "1", "--steps", "3")
    assert code == 0
    assert out.splitlines() == ["x,y", "-1,-1", "-1,1", "0,-1", "0,1", "1,-1", "1,1"]
    code, out, _ = run(capsys, "curve", "--mode", "eigen", "--ell", "1", "--gmin", "1", "--gmax", "2", "--steps", "2")
    assert out.splitlines()[:2] == ["g,E", "1,-1.75"]
    code, out, _ = run(capsys, "curve", "--mode", "param", "--ell", "3", "--alpha", "0", "--resolution", "50")
    assert code == 0 and out.splitlines()[0] == "g,delta"


def test_curve_bad_config(capsys):
    assert run(capsys, "curve", "--mode", "hyper")[0] == 2
    assert run(capsys, "curve", "--mode", "param", "--ell", "3", "--gmin", "1", "--gmax", "0")[0] == 2
    assert run(capsys, "curve", "--mode", "hyper", "--ell", "2", "--eps", "3/2")[0] == 2


def test_reorder_oracle_cli(capsys):
    code, out, _ = run(capsys, "reorder-oracle")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "m,p,max_dev,status"
    assert len(lines) == 51 and lines[-1] == "PASS"


def test_deterministic_output(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"c{i}.csv"
        main(["curve", "--mode", "param", "--ell", "4", "--resolution", "60", "--out", str(path)])
        outs.append((path.read_bytes(), (tmp_path / f"c{i}.csv.meta.json").read_text()))
    assert outs[0][0] == outs[1][0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rabisym", "solve", "--eps", "1/3"], capture_output=True, text=True)
    assert proc.returncode == 2
