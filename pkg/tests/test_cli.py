import json
import subprocess
import sys

import pytest

from nilshape.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_volume_h3(capsys):
    assert run(capsys, "volume", "--group", "H3") == (0, "31/72\n", "")


def test_growth_csv_and_json(capsys):
    code, out, _ = run(capsys, "growth", "--group", "H3", "--nmax", "3")
    assert code == 0
    assert out.splitlines()[-1] == "3,53,36,0.654320987654"
    code, out, _ = run(capsys, "growth", "--group", "H3", "--nmax", "2", "--format", "json")
    assert json.loads(out)["rows"][2]["ball"] == 17


def test_growth_to_file_and_workers(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["growth", "--group", "H5", "--nmax", "6", "--out", str(a)]) == 0
    assert main(["growth", "--group", "H5", "--nmax", "6", "--out", str(b), "--workers", "4"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_custom_generators(tmp_path, capsys):
    gens = tmp_path / "gens.txt"
    # the inverse of (1, 1; 0) is (-1, -1; 1) in normal form
    gens.write_text("1 0\n-1 0\n0 1\n0 -1\n1 1 0\n-1 -1 1\n")
    assert run(capsys, "dido", "--group", "H3", "--gens", str(gens), "--point", "0,0") == (0, "1/12\n", "")
    gens.write_text("1 0\n-1 0\n0 1\n0 -1\n1 1\n-1 -1\n")
    assert run(capsys, "dido", "--group", "H3", "--gens", str(gens), "--point", "0,0")[0] == 2


def test_wordlen_and_ccdist(capsys):
    assert run(capsys, "wordlen", "--group", "H3", "--element", "0,0,9")[1] == "12\n"
    code, out, _ = run(capsys, "ccdist", "--group", "H3", "--point", "0,0,1;1,0,0")
    assert code == 0
    assert [float(x) for x in out.split()] == pytest.approx([4.0, 1.0])


def test_dido_json(capsys):
    code, out, _ = run(capsys, "dido", "--polygon", "1,0;0,1;-1,0;0,-1", "--point", "1/2,0", "--format", "json")
    assert code == 0
    assert json.loads(out)["area"] == "1/8"


def test_cone(capsys):
    code, out, _ = run(capsys, "cone", "--omega1", "0,0;1,0", "--format", "json")
    assert code == 0
    assert json.loads(out)["r2"] == pytest.approx(1 / 3.141592653589793)


def test_slowspeed_and_bm(capsys):
    code, out, _ = run(capsys, "slowspeed", "--witnesses", "40,70,100")
    assert code == 0 and len(json.loads(out)["certificates"]) >= 3
    code, out, _ = run(capsys, "bm", "gap", "--n", "1,4")
    assert code == 0 and json.loads(out)["rows"][1]["gap"] == 8
    code, out, _ = run(capsys, "bm", "quasinorm", "--N", "16")
    assert code == 0 and json.loads(out)["min_over_grid"] == pytest.approx(16.0)


def test_shape_outputs_deterministic(capsys):
    first = run(capsys, "shape", "--group", "H3", "--format", "svg", "--resolution", "3")[1]
    second = run(capsys, "shape", "--group", "H3", "--format", "svg", "--resolution", "3")[1]
    assert first == second and first.startswith("<svg")
    assert json.loads(run(capsys, "shape", "--group", "H3")[1])["volume"] == "31/72"


def test_converge(capsys):
    code, out, _ = run(capsys, "converge", "--group", "H3", "--radii", "5,10")
    assert code == 0 and len(out.splitlines()) == 3


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "growth", "--group", "nope", "--nmax", "2")[0] == 2
    assert run(capsys, "growth", "--group", "H3", "--gens", str(tmp_path / "missing"), "--nmax", "2")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0\n")
    assert run(capsys, "growth", "--group", "H3", "--gens", str(bad), "--nmax", "2")[0] == 2
    assert run(capsys, "dido", "--polygon", "1,0;0,1;-1,0;0,-1", "--point", "1,1")[0] == 2
    assert run(capsys, "wordlen", "--group", "H3", "--element", "0,0,400", "--cap", "4")[0] == 3
    assert run(capsys, "growth", "--group", "H3", "--nmax", "40", "--memory-budget", "10000")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["growth"])
    assert exc.value.code == 2


def test_volume_nonconvergence(capsys, monkeypatch):
    from nilshape import shape

    def boom(tol, workers=1):
        from nilshape.quadrature import QuadratureError

        raise QuadratureError("cell limit", 0.0, 1.0)

    monkeypatch.setattr(shape, "shape_volume_h5", boom)
    assert run(capsys, "volume", "--group", "H5")[0] == 4


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "nilshape.cli", "volume", "--group", "H3"], capture_output=True, text=True, check=True
    )
    assert out.stdout == "31/72\n"
