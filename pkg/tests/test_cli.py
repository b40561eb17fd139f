import json
import os

import numpy as np
import pytest

from energyclust.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from energyclust.embedding import TimeSeriesPanel
from energyclust.evaluation import similarity_index
from energyclust.io import read_matrix_csv, read_panel_csv, write_panel_csv


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def sim_dir(tmp_path):
    out = tmp_path / "sim"
    assert run("simulate", "--scenario", "NONLINEAR_16", "--seed", 1, "--out-dir", out) == EXIT_OK
    return out


def test_simulate_outputs(sim_dir):
    lines = (sim_dir / "panel.csv").read_text().splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    assert meta["config"]["scenario"] == "NONLINEAR_16" and meta["version"]
    assert lines[1].split(",")[:2] == ["TAR_1", "TAR_2"]
    panel = read_panel_csv(sim_dir / "panel.csv")
    assert panel.values.shape == (200, 16)
    truth = json.loads((sim_dir / "ground_truth.json").read_text())
    assert truth["K0"] == 4 and len(truth["labels"]) == 16 and truth["names"] == list(panel.names)


def test_simulate_cluster_round_trip(sim_dir, tmp_path):
    out = tmp_path / "cl"
    assert run("cluster", "--input", sim_dir / "panel.csv", "--lag", 1, "--clusters", 4, "--out-dir", out) == EXIT_OK
    part = json.loads((out / "partition.json").read_text())
    truth = json.loads((sim_dir / "ground_truth.json").read_text())
    labels = [part["labels"][n] for n in truth["names"]]
    assert part["K"] == 4
    assert similarity_index(truth["labels"], labels) == 1.0
    assert part["config"]["lag"] == 1

    names, D = read_matrix_csv(out / "dissimilarity.csv")
    assert names == truth["names"] and np.array_equal(D, D.T)
    dend = json.loads((out / "dendrogram.json").read_text())
    assert dend["leaves"] == names and len(dend["merges"]) == 15
    assert set(dend["merges"][0]) == {"left", "right", "height", "size"}
    nwk = (out / "dendrogram.nwk").read_text().splitlines()
    assert nwk[0].startswith("[") and nwk[0].endswith("]") and nwk[1].endswith(";")


def test_cluster_auto_writes_silhouette(sim_dir, tmp_path):
    out = tmp_path / "auto"
    assert run("cluster", "--input", sim_dir / "panel.csv", "--clusters", "auto", "--out-dir", out) == EXIT_OK
    part = json.loads((out / "partition.json").read_text())
    sil = part["silhouette"]
    assert [r["K"] for r in sil["reports"]] == list(range(2, 11))
    assert sil["selected_K"] == part["K"]
    best = max(r["average"] for r in sil["reports"])
    assert next(r for r in sil["reports"] if r["K"] == part["K"])["average"] == best


@pytest.mark.parametrize("method", ["acf", "pacf", "per", "per-lp", "int-per"])
def test_cluster_baselines(sim_dir, tmp_path, method):
    out = tmp_path / method
    assert run("cluster", "--input", sim_dir / "panel.csv", "--method", method, "--clusters", 3,
               "--out-dir", out) == EXIT_OK
    assert json.loads((out / "partition.json").read_text())["config"]["method"] == method


def test_duplicated_columns_merge_first(tmp_path, rng):
    x = rng.standard_normal((80, 4))
    x[:, 3] = x[:, 1]
    write_panel_csv(tmp_path / "p.csv", TimeSeriesPanel(x, ("a", "b", "c", "b2")))
    for mode in ("joint", "bivariate-sum"):
        out = tmp_path / mode
        assert run("cluster", "--input", tmp_path / "p.csv", "--mode", mode, "--lag", 2, "--clusters", 2,
                   "--out-dir", out) == EXIT_OK
        first = json.loads((out / "dendrogram.json").read_text())["merges"][0]
        assert (first["left"], first["right"], first["height"]) == (1, 3, 0.0)


def test_csv_round_trip_bit_exact(tmp_path, rng):
    x = rng.standard_normal((50, 3)) * np.array([1e-300, 1.0, 1e300])
    x[0, 0] = np.nextafter(1.0, 2.0)
    panel = TimeSeriesPanel(x, ("x", "y", "z"))
    write_panel_csv(tmp_path / "a.csv", panel, {"k": 1})
    back = read_panel_csv(tmp_path / "a.csv")
    assert back.values.tobytes() == x.tobytes() and back.names == panel.names
    write_panel_csv(tmp_path / "b.csv", back, {"k": 1})
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_transforms(tmp_path):
    x = np.exp(np.cumsum(np.random.default_rng(0).normal(0.01, 0.05, size=(40, 5)), axis=0))
    write_panel_csv(tmp_path / "gdp.csv", TimeSeriesPanel(x))
    out = tmp_path / "o"
    assert run("cluster", "--input", tmp_path / "gdp.csv", "--transform", "log_growth_then_normalize",
               "--lag", 1, "--clusters", "auto", "--k-max", 3, "--out-dir", out) == EXIT_OK
    assert json.loads((out / "partition.json").read_text())["config"]["transform"] == "log_growth_then_normalize"


def write(path, text):
    path.write_text(text)
    return path


@pytest.mark.parametrize("content, extra", [
    ("a,b\n1,2\n3\n", []),
    ("a,b\n1,2\n3,x\n", []),
    ("a,b\n1,2\n0,3\n4,5\n", ["--transform", "log_growth"]),
    ("a,b\n1,1\n2,1\n3,1\n", ["--transform", "normalize"]),
    ("a,b\n1,2\n2,3\n", ["--lag", "5"]),
])
def test_data_errors(tmp_path, content, extra, capsys):
    f = write(tmp_path / "bad.csv", content)
    assert run("cluster", "--input", f, "--clusters", 1, "--out-dir", tmp_path / "o", *extra) == EXIT_DATA
    assert "data error" in capsys.readouterr().err


def test_missing_input(tmp_path):
    assert run("cluster", "--input", tmp_path / "nope.csv", "--out-dir", tmp_path) == EXIT_DATA


@pytest.mark.parametrize("argv", [
    [],
    ["cluster", "--out-dir", "x"],
    ["cluster", "--input", "x", "--out-dir", "x", "--mode", "sideways"],
    ["cluster", "--input", "x", "--out-dir", "x", "--clusters", "many"],
    ["cluster", "--input", "x", "--out-dir", "x", "--lag", "-1"],
    ["simulate", "--scenario", "NOPE", "--out-dir", "x"],
    ["benchmark", "--scenario", "VAR_40", "--out-dir", "x"],
    ["benchmark", "--scenario", "VAR_40", "--method", "dtw", "--out-dir", "x"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_cluster_usage_checks(tmp_path, rng):
    write_panel_csv(tmp_path / "p.csv", TimeSeriesPanel(rng.standard_normal((30, 4))))
    base = ["cluster", "--input", tmp_path / "p.csv", "--out-dir", tmp_path / "o"]
    assert run(*base, "--clusters", 5) == EXIT_USAGE
    assert run(*base, "--k-max", 4) == EXIT_USAGE
    assert run(*base, "--method", "acf", "--acf-p", 1.5) == EXIT_USAGE


def test_benchmark_byte_identical(tmp_path):
    common = ["benchmark", "--scenario", "NONLINEAR_16", "--n", 60, "--reps", 3, "--seed", 5,
              "--method", "energy:1", "--method", "acf:10", "--method", "per"]
    outs = []
    for tag, threads in (("a", 1), ("b", 1), ("c", 4)):
        out = tmp_path / tag
        assert run(*common, "--threads", threads, "--out-dir", out) == EXIT_OK
        outs.append(((out / "report.json").read_bytes(), (out / "scores.csv").read_bytes()))
    assert outs[0] == outs[1] == outs[2]
    doc = json.loads(outs[0][0])
    assert doc["config"]["methods"] == ["energy:1", "acf:10", "per"]
    rows = outs[0][1].decode().splitlines()
    assert rows[1] == "replicate,seed,method,similarity,K" and len(rows) == 2 + 9


def test_no_temp_files_left(sim_dir):
    assert not [f for f in os.listdir(sim_dir) if f.startswith(".tmp-")]
