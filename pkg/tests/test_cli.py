import json

import numpy as np
import pytest

from qwalk import cli, io

PI = np.pi


def rows(text):
    lines = text.strip().split("\n")
    return lines[0], [[float(v) for v in line.split(",")] for line in lines[1:]]


# -- theta parsing -----------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [("pi/4", PI / 4), ("5pi/12", 5 * PI / 12), ("5*pi/12", 5 * PI / 12),
     ("0", 0.0), ("0.3", 0.3), ("pi/2", PI / 2), (" pi / 6 ", PI / 6)],
)
def test_parse_theta(text, value):
    assert cli.parse_theta(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["pie/4", "pi/0", "2pi", "-0.1", "", "abc"])
def test_parse_theta_rejects(text):
    with pytest.raises(Exception):
        cli.parse_theta(text)


@pytest.mark.parametrize("argv", [["single", "--theta", "banana"], ["single", "--steps", "-3"],
                                  ["frobnicate"], ["ensemble", "--particles", "0"]])
def test_usage_errors_exit_1(argv, capsys):
    assert cli.main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert cli.main(["--help"]) == 0
    assert "single" in capsys.readouterr().out


# -- single ------------------------------------------------------------------


def test_single_symmetric(capsys):
    assert cli.main(["single", "--theta", "pi/4", "--steps", "100", "--initial", "sym"]) == 0
    out = capsys.readouterr()
    header, data = rows(out.out)
    assert header == "j,p"
    dist = {int(j): p for j, p in data}
    assert abs(sum(dist.values()) - 1) < 1e-12
    assert max(abs(p - dist.get(-j, 0.0)) for j, p in dist.items()) < 1e-10
    assert "P_down=" in out.err


def test_single_theta_zero_down(capsys):
    assert cli.main(["single", "--theta", "0", "--steps", "5", "--initial", "down"]) == 0
    assert capsys.readouterr().out == "j,p\n-5,1\n"


def test_single_spin_trace(capsys):
    argv = ["single", "--theta", "pi/12", "--steps", "100", "--initial", "down", "--spin-trace"]
    assert cli.main(argv) == 0
    header, data = rows(capsys.readouterr().out)
    assert header == "t,p_down,p_up"
    assert [int(r[0]) for r in data] == list(range(1, 101))
    trace = np.array([r[1] for r in data])
    assert trace[-1] == pytest.approx(0.8565341554825279, abs=1e-12)
    assert np.ptp(trace[79:]) < np.ptp(trace[:20])


@pytest.mark.parametrize("method", ["recursion", "decoupled"])
def test_single_methods_agree(method, capsys):
    base = ["single", "--theta", "pi/3", "--steps", "30"]
    assert cli.main(base) == 0
    _, ref = rows(capsys.readouterr().out)
    assert cli.main(base + ["--method", method]) == 0
    _, got = rows(capsys.readouterr().out)
    ref, got = dict((int(j), p) for j, p in ref), dict((int(j), p) for j, p in got)
    for j in set(ref) | set(got):
        assert abs(ref.get(j, 0.0) - got.get(j, 0.0)) < 1e-12


def test_single_spin_resolved(capsys):
    assert cli.main(["single", "--steps", "3", "--initial", "down", "--spin-resolved"]) == 0
    assert capsys.readouterr().out.startswith("j,p_down,p_up\n")


def test_theta_grid_writes_one_file_per_theta(tmp_path, capsys):
    argv = ["single", "--theta-grid", "pi/12,pi/4", "--steps", "20", "--initial", "down",
            "--output", str(tmp_path / "grid"), "--workers", "2"]
    assert cli.main(argv) == 0
    files = sorted(p.name for p in (tmp_path / "grid").iterdir())
    assert files == ["single_00.csv", "single_01.csv"]


def test_theta_grid_needs_directory(capsys):
    assert cli.main(["single", "--theta-grid", "pi/4"]) == 1


def test_json_output_is_run_record(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["single", "--steps", "10", "--format", "json", "--output", str(out)]) == 0
    rec = io.read_run_record(out)
    assert rec.experiment == "single"
    assert rec.params["steps"] == 10 and rec.params["theta"] == "pi/4"
    assert rec.duration_s is None
    assert rec.payload["columns"] == ["j", "p"]


def test_record_alongside_csv(tmp_path, capsys):
    rec = tmp_path / "meta" / "r.json"
    assert cli.main(["single", "--steps", "4", "--record", str(rec), "--timing"]) == 0
    assert io.read_run_record(rec).duration_s is not None


def test_io_failure_exit_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["single", "--steps", "4", "--output", str(blocker / "x.csv")]) == 3
    assert "I/O error" in capsys.readouterr().err


# -- ensemble ----------------------------------------------------------------


def test_ensemble_fig1a_class(capsys):
    argv = ["ensemble", "--particles", "51", "--ordering", "sym", "--theta", "pi/4", "--steps", "200"]
    assert cli.main(argv) == 0
    _, data = rows(capsys.readouterr().out)
    assert sum(r[1] for r in data) == pytest.approx(51, abs=1e-9)


def test_ensemble_antiferro_default_block(tmp_path):
    out = tmp_path / "afm.json"
    assert cli.main(["ensemble", "--ordering", "antiferro", "--steps", "200",
                     "--format", "json", "--output", str(out)]) == 0
    rec = io.read_run_record(out)
    assert rec.params["start_sites"] == list(range(-25, 26))
    assert abs(rec.payload["summary"]["lateral_asymmetry"]) < 0.02


def test_ensemble_random_reports_sorting(capsys):
    argv = ["ensemble", "--ordering", "random", "--seed", "7", "--steps", "200", "--theta", "pi/12"]
    assert cli.main(argv) == 0
    err = capsys.readouterr().err
    assert "left_down_fraction=0.90856904900026" in err


def test_ensemble_random_needs_seed(capsys):
    assert cli.main(["ensemble", "--ordering", "random"]) == 1


# -- two-particle ------------------------------------------------------------


def test_two_particle_before_meeting(capsys):
    assert cli.main(["two-particle", "--size", "20", "--theta", "pi/4", "--steps", "10", "--stats", "dist"]) == 0
    header, data = rows(capsys.readouterr().out)
    assert header == "x,y,p_dd,p_uu,p_du"
    assert {int(x + y) for x, y, *_ in data} == {10, 30}


def test_two_particle_flip(tmp_path):
    out = tmp_path / "flip.json"
    assert cli.main(["two-particle", "--size", "20", "--flip", "--stats", "dist",
                     "--format", "json", "--output", str(out)]) == 0
    summary = io.read_run_record(out).payload["summary"]
    assert summary["center_block_total"] / 2 == pytest.approx(0.7060775756835933, abs=1e-12)


def test_two_particle_fermion(capsys):
    assert cli.main(["two-particle", "--size", "20", "--stats", "fermion"]) == 0
    _, data = rows(capsys.readouterr().out)
    assert all(r[2] == 0 and r[3] == 0 for r in data)
    assert sum(r[4] for r in data) == pytest.approx(1, abs=1e-12)


def test_two_particle_disjoint_is_usage_error(capsys):
    assert cli.main(["two-particle", "--size", "20", "--steps", "10", "--stats", "boson"]) == 1
    assert "disjoint" in capsys.readouterr().err


def test_two_particle_pauli_is_numeric_error(capsys):
    assert cli.main(["two-particle", "--size", "4", "--theta", "0", "--flip", "--stats", "fermion"]) == 2
    assert "Pauli" in capsys.readouterr().err


def test_two_particle_flip_needs_even_size(capsys):
    assert cli.main(["two-particle", "--size", "3", "--flip"]) == 1


# -- oracle-check ------------------------------------------------------------


def test_oracle_check_default_grid(capsys):
    assert cli.main(["oracle-check"]) == 0
    assert "max deviation" in capsys.readouterr().out


def test_oracle_check_single_theta(capsys):
    assert cli.main(["oracle-check", "--theta", "pi/3", "--steps", "12"]) == 0


def test_oracle_check_rejects_long_walks(capsys):
    assert cli.main(["oracle-check", "--steps", "50"]) == 1
    assert "exceeds 12" in capsys.readouterr().err


# -- determinism -------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["single", "--steps", "100", "--format", "json"],
        ["ensemble", "--ordering", "random", "--seed", "3", "--particles", "21", "--steps", "80",
         "--workers", "3", "--format", "json"],
        ["two-particle", "--size", "12", "--stats", "boson"],
    ],
)
def test_repeat_runs_byte_identical(argv, tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}"
        assert cli.main(argv + ["--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    if argv[-1] == "json":
        json.loads(outs[0])
