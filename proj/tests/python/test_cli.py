# Copyright 2026 The mppr Authors
# SPDX-License-Identifier: Apache-2.0

import json
import os
import pathlib
import random
import subprocess

import pytest

CLI = os.environ.get("MPPR_CLI", "build/mppr")
DATA = pathlib.Path(os.environ.get("MPPR_TEST_DATA", "tests/data"))


def run(*args, cwd=None):
    return subprocess.run([CLI, *map(str, args)], cwd=cwd, capture_output=True, text=True)


@pytest.fixture()
def graph(tmp_path):
    rng = random.Random(0)
    n = 40
    labels = [0 if v < n // 2 else 1 for v in range(n)]
    edges = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < (0.25 if labels[u] == labels[v] else 0.02)
    ]
    (tmp_path / "g.edges").write_text(f"# n={n}\n" + "".join(f"{u}\t{v}\n" for u, v in edges))
    (tmp_path / "g.features").write_text(
        "".join(",".join(f"{(c % 2 == y) + rng.gauss(0, 0.5):.6f}" for c in range(4)) + "\n" for y in labels)
    )
    (tmp_path / "g.labels").write_text("".join(f"{y}\n" for y in labels))
    return [
        "--edges", tmp_path / "g.edges",
        "--features", tmp_path / "g.features",
        "--labels", tmp_path / "g.labels",
        "--train-per-class", 5, "--val-size", 10, "--hidden", 8,
        "--epochs", 40, "--runs", 2, "--threads", 1,
    ]


def read_triplets(path):
    lines = path.read_text().split("\n")
    return {(int(u), int(v)): float(w) for u, v, w in (line.split() for line in lines[1:] if line.strip())}


def test_motif_fixture(tmp_path):
    r = run("motif", "--edges", DATA / "m7_pair.edges", "--motif", "m7", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    am = read_triplets(tmp_path / "A_M7.txt")
    assert am[(0, 2)] == 2.0
    assert am[(2, 0)] == 2.0


def test_motif_all_writes_seven_files(tmp_path):
    r = run("motif", "--edges", DATA / "m7_pair.edges", "--motif", "all", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    assert sorted(p.name for p in tmp_path.iterdir()) == [f"A_M{i}.txt" for i in range(1, 8)]
    assert len(r.stdout.strip().splitlines()) == 7


def test_exit_codes(tmp_path, graph):
    assert run("motif", "--edges", tmp_path / "missing.edges").returncode == 2
    r = run("train", *graph, "--tau", 1.5, "--output", tmp_path / "out")
    assert r.returncode == 1
    assert "tau" in r.stderr
    assert run("train", *graph, "--motif", "m9", "--output", tmp_path / "out").returncode == 1


def test_train_is_deterministic(tmp_path, graph):
    outputs = []
    for name in ("a", "b"):
        r = run("train", *graph, "--output", tmp_path / name)
        assert r.returncode == 0, r.stderr
        (records,) = (tmp_path / name).glob("train-*.jsonl")
        runs = [json.loads(line) for line in records.read_text().splitlines()]
        assert len(runs) == 2
        for record in runs:
            record.pop("epoch_seconds", None)
            record.pop("total_seconds", None)
            record.pop("mean_epoch_seconds", None)
        outputs.append(runs)
    assert outputs[0] == outputs[1]


def test_eval_matches_training(tmp_path, graph):
    ckpt = tmp_path / "model.ckpt"
    r = run("train", *graph, "--output", tmp_path / "out", "--checkpoint", ckpt)
    assert r.returncode == 0, r.stderr
    assert ckpt.exists()
    (records,) = (tmp_path / "out").glob("train-*.jsonl")
    first = json.loads(records.read_text().splitlines()[0])
    r = run("eval", *graph, "--checkpoint", ckpt)
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout.strip().splitlines()[-1])
    assert report["test_accuracy"] == first["test_accuracy"]
    assert report["config_hash"] == first["config_hash"]


def test_sweep_grid(tmp_path, graph):
    r = run("sweep", *graph, "--output", tmp_path, "--taus", 0, 0.9, "--betas", 0.5, 1)
    assert r.returncode == 0, r.stderr
    (records,) = tmp_path.glob("sweep-*.jsonl")
    rows = [json.loads(line) for line in records.read_text().splitlines()]
    assert sorted((row["tau"], row["beta"]) for row in rows) == [(0.0, 0.5), (0.0, 1.0), (0.9, 0.5), (0.9, 1.0)]
    assert len({row["config_hash"] for row in rows}) == 4
