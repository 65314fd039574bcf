import json
import subprocess
import sys

import pytest

from subshift_lab.cli import main
from subshift_lab.core import read_grid
from subshift_lab.periodicity import period_vectors


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fixed_points(capsys):
    code, out, _ = run(["fixed-points", "2", "3", "1", "1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["points"] == ["0", "1/5", "2/5", "3/5", "4/5"]
    assert rep["config"]["params"] == {"p": 2, "q": 3, "i": 1, "j": 1}
    code, out, _ = run(["fixed-points", "2", "3", "1", "1", "--format", "csv"], capsys)
    assert out.splitlines() == ["y", "0", "1/5", "2/5", "3/5", "4/5"]


def test_mulindep(capsys):
    assert run(["mulindep", "4", "8"], capsys)[1] == "dependent\n"
    assert run(["mulindep", "2", "3"], capsys)[1] == "independent\n"
    rep = json.loads(run(["mulindep", "12", "18", "--format", "json"], capsys)[1])
    assert rep["independent"] is True


def test_gen_sturmian_roundtrip(tmp_path, capsys):
    path = tmp_path / "s.grid"
    code, _, _ = run(["gen", "--kind", "sturmian", "--alpha", "377/610", "--width", "100", "-o", str(path)], capsys)
    assert code == 0
    w = read_grid(path)
    assert (w.width, w.height) == (100, 1)
    again = tmp_path / "again.grid"
    run(["gen", "--input", str(path), "-o", str(again)], capsys)
    assert again.read_bytes() == path.read_bytes()


def test_gen_atomic_has_rank_two_lattice(tmp_path, capsys):
    path = tmp_path / "a.grid"
    run(["gen", "--kind", "times-pq", "--x", "1/5", "--width", "30", "--height", "30", "-o", str(path)], capsys)
    lat = period_vectors(read_grid(path), 10)
    assert lat.rank == 2


def test_gen_from_spec_file(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "variant": "times_pq", "p": 2, "q": 3, "partition": "base_p_digit",
        "point": {"variant": "random_dyadic", "seed": 3, "bits": 400},
        "natural_extension": {"i_min": -2, "j_min": -1, "seed": 1},
    }))
    code, out, _ = run(["gen", "--source", str(spec), "--width", "20", "--height", "10"], capsys)
    assert code == 0
    assert out.splitlines()[1] == "#origin: -2 -1"


def test_complexity_reports(capsys):
    code, out, _ = run(["complexity", "--kind", "sturmian", "--alpha", "377/610", "--width", "1000",
                        "--n-max", "10"], capsys)
    rep = json.loads(out)
    assert [row[0] for row in rep["table"]["values"]] == list(range(2, 12))
    assert rep["morse_hedlund"]["kind"] == "no_conclusion"
    assert any("denominator 610" in w for w in rep["warnings"])
    code, out, _ = run(["complexity", "--kind", "sturmian", "--alpha", "377/610", "--width", "1000",
                        "--n-max", "3", "--format", "csv"], capsys)
    assert out.splitlines() == ["n,k,P,provenance", "1,1,2,empirical", "2,1,3,empirical", "3,1,4,empirical"]


def test_periods_report(capsys):
    code, out, _ = run(["periods", "--kind", "times-pq", "--x", "1/5", "--width", "30", "--height", "30",
                        "--max-shift", "10"], capsys)
    rep = json.loads(out)["periods"]
    assert [1, 1] in rep["vectors"] and rep["rank"] == 2
    assert rep["fundamental_domain"]["width"] * rep["fundamental_domain"]["height"] <= 5


def test_entropy_csv(capsys):
    code, out, _ = run(["entropy", "--kind", "times-pq", "--partition", "base_p_digit", "--width", "300",
                        "--height", "300", "--m-max", "4", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert lines[0] == "m,H_m,slope,cylinders,anchors,flag"
    assert len(lines) == 5
    rep = json.loads(run(["entropy", "--kind", "times-pq", "--partition", "base_p_digit", "--width", "300",
                          "--height", "300", "--m-max", "4"], capsys)[1])
    assert "no error bound" in rep["entropy"]["caveat"]


def test_gap_report_sturmian_vertical(capsys):
    code, out, _ = run(["gap-report", "--kind", "sturmian-vertical", "--alpha", "377/610", "--width", "2000",
                        "--height", "40"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["gap"]["kind"] == "below_gap" and rep["gap"]["witness"] == [3, 3]
    assert rep["periods"]["rank"] == 1
    cons = rep["consistency"]
    assert cons["below_gap_with_period"] and not cons["below_gap_with_rank2"]
    assert any("excluded as a model" in note for note in cons["notes"])
    assert rep["config"]["source"]["variant"] == "sturmian_vertical"


def test_gap_report_atomic(capsys):
    code, out, _ = run(["gap-report", "--kind", "times-pq", "--x", "1/5", "--width", "40", "--height", "40"], capsys)
    rep = json.loads(out)
    assert rep["gap"]["kind"] == "bounded"
    assert rep["consistency"]["bounded_with_atomic_source"] and rep["consistency"]["bounded_with_rank2"]
    assert any("not a minimal uniquely ergodic model" in w for w in rep["warnings"])


def test_reports_are_deterministic(tmp_path, capsys):
    argv = ["gap-report", "--kind", "times-pq", "--width", "60", "--height", "60", "--seed", "5"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(argv + ["-o", str(a)], capsys)
    run(argv + ["-o", str(b)], capsys)
    # output path differs only in the embedded config
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    ja["config"].pop("output"), jb["config"].pop("output")
    assert ja == jb
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


@pytest.mark.parametrize("argv,code", [
    (["complexity", "--n-max", "3"], 1),
    (["complexity", "--kind", "sturmian", "--width", "10", "--n-max", "3"], 1),
    (["mulindep", "2"], 1),
    (["fixed-points", "2", "4", "1", "1"], 2),
    (["complexity", "--kind", "sturmian", "--alpha", "3/2", "--width", "10", "--n-max", "3"], 2),
    (["periods", "--kind", "sturmian-vertical", "--alpha", "1/3", "--width", "10", "--height", "5",
      "--max-shift", "7"], 2),
    (["gen", "--kind", "times-pq", "--width", "50", "--height", "50", "--bits", "64"], 3),
    (["complexity", "--input", "/nonexistent/file.grid", "--n-max", "2"], 4),
])
def test_exit_codes(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_bad_grid_file_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.grid"
    bad.write_text("#alphabet: 01\n#origin: 0 0\n#size: 3 1\n0x0\n")
    assert main(["complexity", "--input", str(bad), "--n-max", "1"]) == 4
    spec = tmp_path / "bad.json"
    spec.write_text("{not json")
    assert main(["gen", "--source", str(spec), "--width", "3"]) == 4


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SUBSHIFT_LAB_THREADS", "2")
    argv = ["complexity", "--kind", "full-shift", "--width", "30", "--height", "30", "--n-max", "4", "--k-max", "4"]
    code, out, _ = run(argv, capsys)
    monkeypatch.setenv("SUBSHIFT_LAB_THREADS", "x")
    assert main(argv) == 1


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "subshift_lab.cli", "mulindep", "4", "8"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "dependent\n"
