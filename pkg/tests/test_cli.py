import subprocess
import sys

import numpy as np
import pytest

from symmkit import polygon as pg
from symmkit.cli import main
from symmkit.experiments import exact_octagon
from symmkit.fileio import read_body, read_polygon, write_body, write_polygon
from symmkit.raster import RasterSet, is_symmetric_about_axis


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_symmetrize_octagon(work, diamond, capsys):
    write_polygon(work / "q.txt", diamond)
    assert main(["symmetrize", "q.txt", "--operator", "minkowski", "--angle", "22.5"]) == 0
    out = read_polygon(work / "q_minkowski.txt")
    assert pg.hausdorff_distance(out, exact_octagon()) < 1e-12
    text = capsys.readouterr().out
    assert "before:" in text and "after:" in text


def test_symmetric_input_is_byte_identical(work):
    write_polygon(work / "oct.txt", exact_octagon())
    for op in ("steiner", "minkowski", "fiber"):
        assert main(["symmetrize", "oct.txt", "--operator", op, "--out", f"{op}.txt"]) == 0
        assert (work / f"{op}.txt").read_bytes() == (work / "oct.txt").read_bytes()


def test_symmetrize_raster_rules(work):
    S = RasterSet.from_cells([[0, 0], [3, 1], [3, 2]], 1 / 16, 8)
    write_body(work / "r.pbm", S)
    assert main(["symmetrize", "r.pbm", "--operator", "minkowski"]) == 2
    assert main(["symmetrize", "r.pbm", "--operator", "steiner", "--out", "s.pbm"]) == 0
    assert is_symmetric_about_axis(read_body(work / "s.pbm"))


def test_symmetrize_bad_file(work, capsys):
    (work / "bad.txt").write_text("1 2 3\n")
    assert main(["symmetrize", "bad.txt"]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["symmetrize", "missing.txt"]) == 2


def test_config_errors_listed_together(work, capsys):
    (work / "c.cfg").write_text("operator = nope\nsteps = -3\ncolour = red\n")
    assert main(["run", "--config", "c.cfg", "window=0"]) == 2
    err = capsys.readouterr().err
    for needle in ("nope", "steps", "colour", "window"):
        assert needle in err
    assert main(["experiment", "no-such-thing"]) == 2


def test_capacity_exit(work, capsys):
    assert main(["run", "--representation", "cloud", "--operator", "minkowski", "--snap", "1e-12",
                 "--steps", "10", "--body", "points"]) == 3
    assert "step" in capsys.readouterr().err


def test_require_verdict_exit(work):
    argv = ["run", "--steps", "20", "--operator", "minkowski", "--require-verdict"]
    assert main(argv) == 4
    assert main(argv[:-1]) == 0


def test_run_outputs_and_plot(work, capsys):
    assert main(["run", "--operator", "minkowski", "--sequence", "klain", "--steps", "120", "--out", "o"]) == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1].startswith("VERDICT: convergent")
    csv = work / "o" / "trace.csv"
    first = csv.read_bytes()
    assert main(["run", "--operator", "minkowski", "--sequence", "klain", "--steps", "120", "--out", "o"]) == 0
    assert csv.read_bytes() == first
    assert main(["plot", str(csv), "--out", "chart.svg"]) == 0
    assert (work / "chart.svg").read_text().startswith("<svg")
    assert main(["plot", str(csv), "--columns", "area,bogus"]) == 2
    assert "bogus" in capsys.readouterr().err


def test_summable_flags(work, capsys):
    assert main(["run", "--sequence", "geometric", "--c", "0.5", "--q", "0.9", "--steps", "300",
                 "--operator", "minkowski", "--simplify", "1e-6"]) == 0
    assert "VERDICT: convergent" in capsys.readouterr().out


def test_experiment_octagon(work, capsys):
    assert main(["experiment", "octagon", "--out", "e", "steps=120"]) == 0
    out = capsys.readouterr().out
    assert "VERDICT: convergent" in out
    assert (work / "e" / "verdict.txt").exists()


def test_batch_configs(work, capsys):
    (work / "a.cfg").write_text("name = octagon\nsteps = 110\n")
    (work / "b.cfg").write_text("name = klain\nsteps = 120\n")
    assert main(["experiment", "--config", "a.cfg", "--config", "b.cfg", "--jobs", "2"]) == 0
    out = capsys.readouterr().out
    assert "[a] VERDICT:" in out and "[b] VERDICT:" in out
    assert (work / "out" / "a" / "verdict.txt").exists() and (work / "out" / "b" / "verdict.txt").exists()


def test_console_script(work):
    r = subprocess.run([sys.executable, "-m", "symmkit.cli", "experiment", "klain", "steps=120"],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert r.stdout.strip().splitlines()[-1].startswith("VERDICT: convergent")
