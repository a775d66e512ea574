import json

import numpy as np
import pytest

from dcprox.cli import main
from dcprox.data import read_libsvm


def run(argv):
    return main([str(a) for a in argv])


@pytest.fixture()
def toy_files(tmp_path):
    data_dir = tmp_path / "data"
    code = run(["toygen", "--dim", 20, "--relevant", 4, "--n-train", 120,
                "--n-test", 80, "--n-unlabeled", 60, "--seed", 7,
                "--out-dir", data_dir])
    assert code == 0
    return data_dir


def test_toygen_writes_readable_files(toy_files):
    train = read_libsvm(toy_files / "train.libsvm")
    test = read_libsvm(toy_files / "test.libsvm")
    unlabeled = read_libsvm(toy_files / "unlabeled.libsvm")
    assert train.n_examples == 120
    assert test.n_examples == 80
    assert unlabeled.n_examples == 60


def test_train_end_to_end(toy_files, tmp_path):
    out = tmp_path / "run"
    code = run(["train", "--train", toy_files / "train.libsvm",
                "--test", toy_files / "test.libsvm",
                "--penalty", "capped_l1", "--lam", 2.0, "--theta", 0.2,
                "--out-dir", out])
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    assert result["status"] == "converged"
    assert 0.0 <= result["accuracy_pct"] <= 100.0
    # trace objectives strictly decreasing
    objs = [json.loads(line)["objective"]
            for line in (out / "trace.jsonl").read_text().splitlines()]
    assert all(b < a for a, b in zip(objs, objs[1:]))
    # model file holds idx:value pairs
    for line in (out / "model.txt").read_text().splitlines():
        idx, val = line.split(":")
        int(idx)
        float(val)


def test_train_same_file_for_train_and_test(toy_files, tmp_path):
    code = run(["train", "--train", toy_files / "train.libsvm",
                "--test", toy_files / "train.libsvm",
                "--penalty", "capped_l1", "--lam", 2.0, "--theta", 0.2,
                "--out-dir", tmp_path / "tt"])
    assert code == 0


def test_missing_file_exit_code_2(tmp_path, capsys):
    code = run(["train", "--train", tmp_path / "nope.libsvm", "--lam", 1.0,
                "--theta", 0.2, "--out-dir", tmp_path])
    assert code == 2
    assert "nope.libsvm" in capsys.readouterr().err


def test_missing_lambda_exit_code_2(toy_files, tmp_path):
    code = run(["train", "--train", toy_files / "train.libsvm",
                "--out-dir", tmp_path])
    assert code == 2


def test_huge_lambda_gives_zero_model_and_majority_accuracy(toy_files, tmp_path):
    out = tmp_path / "shrunk"
    code = run(["train", "--train", toy_files / "train.libsvm",
                "--test", toy_files / "test.libsvm",
                "--penalty", "l1", "--lam", 1e5, "--out-dir", out])
    assert code == 0
    assert (out / "model.txt").read_text() == ""   # all-zero model
    result = json.loads((out / "result.json").read_text())
    test = read_libsvm(toy_files / "test.libsvm")
    majority = 100.0 * max(np.mean(test.labels == 1), np.mean(test.labels == -1))
    # zero model predicts +1 everywhere; accuracy equals the +1 class share
    share_plus = 100.0 * np.mean(test.labels == 1)
    assert result["accuracy_pct"] == pytest.approx(share_plus)
    assert result["accuracy_pct"] <= majority + 1e-9


def test_proxgrad_rejects_nonconvex_penalty(toy_files, tmp_path):
    code = run(["train", "--train", toy_files / "train.libsvm",
                "--solver", "proxgrad", "--penalty", "capped_l1",
                "--lam", 1.0, "--theta", 0.2, "--out-dir", tmp_path])
    assert code == 2


def test_benchmark_csv_layout_and_determinism(tmp_path):
    outs = []
    for name in ("b1", "b2"):
        out = tmp_path / name
        code = run(["benchmark", "--toy-dim", 25, "--toy-relevant", 5,
                    "--toy-n-train", 80, "--toy-n-test", 60,
                    "--solvers", "dcpn,gist,dca", "--seeds", "0,1,2",
                    "--lam", 2.0, "--theta", 0.2, "--zero-times",
                    "--out-dir", out])
        assert code == 0
        outs.append(out)
    results = (outs[0] / "results.csv").read_text()
    assert results == (outs[1] / "results.csv").read_text()
    assert (outs[0] / "summary.csv").read_text() == (outs[1] / "summary.csv").read_text()
    assert (outs[0] / "results.json").read_text() == (outs[1] / "results.json").read_text()

    lines = results.strip().splitlines()
    assert lines[0] == ("solver,seed,objective,accuracy_pct,time_s,iterations,"
                        "evals,stationarity,status")
    assert len(lines) == 1 + 3 * 3          # header + solvers x seeds
    summary = (outs[0] / "summary.csv").read_text().strip().splitlines()
    assert len(summary) == 1 + 3
    # dcpn row carries the relative objective difference against GIST
    dcpn_row = [l for l in summary if l.startswith("dcpn,")][0]
    assert dcpn_row.split(",")[-1] != ""


def test_benchmark_single_solver_degenerates(tmp_path):
    out = tmp_path / "single"
    code = run(["benchmark", "--toy-dim", 15, "--toy-relevant", 3,
                "--toy-n-train", 60, "--solvers", "dcpn", "--seeds", "0",
                "--lam", 1.0, "--theta", 0.5, "--zero-times", "--out-dir", out])
    assert code == 0
    assert len((out / "results.csv").read_text().strip().splitlines()) == 2


def test_transductive_gamma_zero_reports_equal_accuracies(tmp_path):
    out = tmp_path / "t0"
    code = run(["transductive", "--toy-dim", 20, "--toy-relevant", 4,
                "--toy-n-train", 60, "--toy-n-test", 200,
                "--toy-n-unlabeled", 100, "--gamma", 0.0,
                "--lam", 0.2, "--theta", 2.0, "--out-dir", out])
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    assert result["transductive"]["accuracy_pct"] == result["supervised"]["accuracy_pct"]


def test_transductive_without_unlabeled_matches_supervised(tmp_path):
    out = tmp_path / "t1"
    code = run(["transductive", "--toy-dim", 20, "--toy-relevant", 4,
                "--toy-n-train", 60, "--toy-n-test", 200,
                "--toy-n-unlabeled", 0, "--gamma", 0.05,
                "--lam", 0.2, "--theta", 2.0, "--out-dir", out])
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    assert result["transductive"]["objective"] == pytest.approx(
        result["supervised"]["objective"], rel=1e-12)


def test_config_file_supplies_defaults(toy_files, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[dcprox]\nlam = 2.0\ntheta = 0.2\npenalty = capped_l1\n")
    out = tmp_path / "cfgrun"
    code = run(["--config", cfg, "train", "--train", toy_files / "train.libsvm",
                "--out-dir", out])
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    assert result["hyperparameters"]["lam"] == 2.0
    assert result["hyperparameters"]["theta"] == 0.2


def test_config_file_explicit_flag_wins(toy_files, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[dcprox]\nlam = 2.0\ntheta = 0.2\n")
    out = tmp_path / "cfgrun2"
    code = run(["--config", cfg, "train", "--train", toy_files / "train.libsvm",
                "--lam", 0.7, "--out-dir", out])
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    assert result["hyperparameters"]["lam"] == 0.7


def test_config_file_missing_exit_2(toy_files, tmp_path, capsys):
    code = run(["--config", tmp_path / "absent.ini", "train",
                "--train", toy_files / "train.libsvm", "--lam", 1.0])
    assert code == 2
