import csv
import io
import subprocess
import sys

import pytest

from seqinterdict.cli import int_list, main
from seqinterdict.experiment import CSV_HEADER, ExperimentConfig, run_experiment
from seqinterdict.graph import format_instance, parse_instance
from seqinterdict.instances import diamond


def _drop_timing(text):
    return [row[:-1] for row in csv.reader(io.StringIO(text))]


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond_net.txt"
    path.write_text(format_instance(diamond(6), ()))
    return path


def test_run_diamond(diamond_file, capsys):
    rc = main(["run", "--instance", str(diamond_file), "--evader", "strategic",
               "--interdictor", "semi-oracle", "--T", "2", "--k", "2"])
    assert rc == 0
    assert capsys.readouterr().out.splitlines()[-1] == "L=8"
    main(["run", "--instance", str(diamond_file), "--T", "2", "--k", "2"])
    assert capsys.readouterr().out.splitlines()[-1] == "L=9"


def test_run_rejects_separable(tmp_path, capsys):
    from seqinterdict.instances import doubled_chain

    path = tmp_path / "doubled_net.txt"
    path.write_text(format_instance(doubled_chain(6, 5), ()))
    assert main(["run", "--instance", str(path), "--k", "2"]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["run", "--instance", str(path), "--k", "2", "--no-validate"]) == 0


def test_check_unit_budget(capsys):
    assert main(["check", "--suite", "unit-budget", "--count", "100", "--seed", "7"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 100
    assert all(l.startswith("instance=") and l.endswith("ok=True") for l in lines)


def test_check_suites_small(capsys):
    for suite in ("pair-structure", "cheaper-blocked", "covering-disjoint"):
        assert main(["check", "--suite", suite, "--count", "5"]) == 0
    assert main(["check", "--suite", "reduction", "--count", "2"]) == 0
    out = capsys.readouterr().out
    assert "instance=sample case=sat ok=True" in out


def test_experiment_single_row(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["experiment", "--k", "2", "--T", "2", "--Q", "1", "--reps", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 2


@pytest.mark.parametrize("feedback", ["perfect", "noisy"])
def test_experiment_determinism(feedback):
    cfg = ExperimentConfig("layered", ks=(1, 3), Ts=(2, 5), Q=3, reps=2, feedback=feedback, seed=5)
    a = run_experiment(cfg).csv()
    b = run_experiment(cfg).csv()
    assert _drop_timing(a) == _drop_timing(b)
    rows = list(csv.DictReader(io.StringIO(a)))
    for r in rows:
        total = float(r["chi_lt_mean"]) + float(r["chi_eq_mean"]) + float(r["chi_gt_mean"])
        assert abs(total - 100) < 0.02
    # process-pool scheduling does not change the numbers
    parallel = run_experiment(ExperimentConfig("layered", ks=(1, 3), Ts=(2, 5), Q=3, reps=2,
                                               feedback=feedback, seed=5, jobs=2)).csv()
    assert _drop_timing(parallel) == _drop_timing(a)


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("grid")
    with pytest.raises(ValueError):
        ExperimentConfig("layered", Q=0)


def test_gen_and_reduce(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["gen", "--class", "ba", "--seed", "3", "--k", "2", "--out", str(out)]) == 0
    inst = parse_instance(out.read_text())
    assert inst.graph.arc_count == 470 and inst.known
    assert main(["reduce", "--verify", "--out", str(tmp_path / "r.txt")]) == 0
    assert "ok=True" in capsys.readouterr().err
    assert main(["reduce", "--clauses", "1,1,1;-1,-1,-1", "--verify", "--out", str(tmp_path / "u.txt")]) == 0
    assert "satisfiable=False" in capsys.readouterr().err


def test_bench(capsys):
    assert main(["bench", "--k", "1,2", "--Q", "1", "--T", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,calls,mean_s,max_s" and len(lines) == 3


def test_int_list():
    assert int_list("1-3,5") == (1, 2, 3, 5)
    with pytest.raises(Exception):
        int_list(",")


def test_missing_file(capsys):
    assert main(["run", "--instance", "/nonexistent"]) == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "seqinterdict.cli", "check", "--suite", "unit-budget", "--count", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.count("ok=True") == 2
