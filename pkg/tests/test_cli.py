from shaploc.cli import main

GOOD = """\
[suite]
seed = 3

[experiment.small]
attack_type = A
am = 10
sigma1 = 2
sigma2 = 2
trials = 2000
"""


def test_run_config(tmp_path, capsys):
    cfg = tmp_path / "suite.ini"
    cfg.write_text(GOOD)
    assert main(["run", str(cfg), "--no-timestamp"]) == 0
    out = capsys.readouterr().out
    assert "seed=3" in out
    assert "small" in out


def test_run_writes_output_file(tmp_path):
    cfg = tmp_path / "suite.ini"
    cfg.write_text(GOOD)
    out = tmp_path / "results.csv"
    assert main(["run", str(cfg), "--out", str(out), "--no-timestamp"]) == 0
    assert "small" in out.read_text()


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[experiment.x]\nattack_type = A\nam = 10\nrho = 2\n")
    assert main(["run", str(cfg)]) == 1
    assert "config error" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path):
    assert main(["run", str(tmp_path / "nope.ini")]) == 1


def test_runtime_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "degenerate.ini"
    cfg.write_text(
        "[experiment.x]\nattack_type = A\nam = 1\ntrials = 20\n"
        "attack_prior = 1e-12\n"
    )
    assert main(["run", str(cfg), "--no-timestamp"]) == 2
    assert "FAILED" in capsys.readouterr().out


def test_preset_byte_identical_reruns(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["preset", "table2", "--trials", "2000", "--seed", "42", "--no-timestamp"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_preset_table1_markdown(tmp_path, capsys):
    assert main([
        "preset", "table1", "--trials", "500", "--no-timestamp",
        "--format", "markdown",
    ]) == 0
    out = capsys.readouterr().out
    # seed line + header row + separator + 12 experiment rows
    assert out.count("\n") == 3 + 12
    assert "| name |" in out


def test_bench_small(capsys):
    assert main(["bench", "--max-n", "3", "--reps", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("n,t_shapley_s")
    assert len(out.strip().splitlines()) == 4


def test_bench_bad_max_n(capsys):
    assert main(["bench", "--max-n", "0"]) == 1
