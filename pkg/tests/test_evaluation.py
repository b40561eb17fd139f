import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energyclust.evaluation import REPORT_SCHEMA, Method, replicate_seed, run_experiment, similarity_index
from energyclust.simgen import Scenario, SimSpec, build_experiment


def test_hand_cases():
    assert similarity_index([1, 1, 2, 2], [1, 1, 2, 2]) == 1.0
    assert similarity_index([1, 1, 2, 2], [1, 2, 1, 2]) == 0.5
    assert similarity_index([1, 1, 1, 2], [1, 1, 2, 2]) == pytest.approx((0.8 + 2 / 3) / 2, abs=1e-15)


def test_asymmetric():
    g, a = [1, 2, 3, 3], [1, 1, 2, 2]
    assert similarity_index(g, a) == pytest.approx((2 / 3 + 2 / 3 + 1) / 3, abs=1e-15)
    assert similarity_index(a, g) == pytest.approx((2 / 3 + 1) / 2, abs=1e-15)


labelings = st.lists(st.integers(0, 4), min_size=2, max_size=15)


@settings(max_examples=200)
@given(labelings, st.randoms(use_true_random=False))
def test_label_permutation_invariance(labels, rnd):
    truth = np.array(labels)
    cand = np.array([rnd.randrange(4) for _ in labels])
    base = similarity_index(truth, cand)
    assert 0 < base <= 1
    assert similarity_index(truth, truth) == 1.0

    def relabel(v):
        vals = sorted(set(v.tolist()))
        shuffled = vals[:]
        rnd.shuffle(shuffled)
        mapping = {a: b + 100 for a, b in zip(vals, shuffled)}
        return np.array([mapping[x] for x in v.tolist()])

    assert similarity_index(relabel(truth), cand) == base
    assert similarity_index(truth, relabel(cand)) == base


def test_mismatched_partitions():
    with pytest.raises(ValueError):
        similarity_index([1, 2, 3], [1, 2])


@pytest.mark.parametrize("text, kind, lag", [
    ("energy:1", "energy", 1), ("energy", "energy", 0), ("energy-sum:2", "energy-sum", 2),
    ("acf:25", "acf", 25), ("PACF", "pacf", 10), ("per", "per", 0), ("int-per", "int-per", 0),
])
def test_method_parse(text, kind, lag):
    m = Method.parse(text)
    assert (m.kind, m.lag) == (kind, lag)


@pytest.mark.parametrize("text", ["dtw", "per:3", "energy:-1", "acf:x"])
def test_method_parse_errors(text):
    with pytest.raises(ValueError):
        Method.parse(text)


def test_replicate_seed():
    assert [replicate_seed(5, r) for r in range(4)] == [5, 4, 7, 6]


def test_run_experiment_deterministic():
    spec = SimSpec(Scenario.NONLINEAR_16, 60)
    a = run_experiment(spec, ["energy:1", "acf:10"], reps=2, base_seed=3)
    b = run_experiment(spec, ["energy:1", "acf:10"], reps=2, base_seed=3)
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
    doc = a.to_dict()
    assert doc["schema"] == REPORT_SCHEMA
    assert all(len(v) == 2 and all(0 < x <= 1 for x in v) for v in doc["scores"].values())
    assert set(doc["summary"]["energy:1"]) == {"mean", "median", "q1", "q3", "iqr", "min", "max"}


def test_threads_do_not_change_report():
    spec = SimSpec(Scenario.NONLINEAR_16, 60)
    a = run_experiment(spec, ["energy:1", "per"], reps=3, base_seed=1, threads=1)
    b = run_experiment(spec, ["energy:1", "per"], reps=3, base_seed=1, threads=3)
    assert a == b


def test_method_list_does_not_change_scores():
    spec = SimSpec(Scenario.NONLINEAR_16, 60)
    a = run_experiment(spec, ["energy:1"], reps=3, base_seed=2)
    b = run_experiment(spec, ["pacf:10", "energy:1"], reps=3, base_seed=2)
    assert a.scores["energy:1"] == b.scores["energy:1"]


def test_manual_replicate_matches():
    spec = SimSpec(Scenario.ARMA_20, 100)
    rep = run_experiment(spec, ["pacf:10"], reps=2, base_seed=9)
    from energyclust.hclust import agglomerate, cut
    panel, truth = build_experiment(SimSpec(Scenario.ARMA_20, 100, seed=9 ^ 1))
    D = Method.parse("pacf:10").dissimilarity(panel)
    assert rep.scores["pacf:10"][1] == similarity_index(truth.labels, cut(agglomerate(D), 5))


def test_silhouette_mode_records_k():
    rep = run_experiment(SimSpec(Scenario.NONLINEAR_16, 60), ["energy:1"], reps=2, k_mode="silhouette")
    assert all(2 <= k <= 10 for k in rep.chosen_k["energy:1"])
    rep = run_experiment(SimSpec(Scenario.NONLINEAR_16, 60), ["energy:1"], reps=2)
    assert rep.chosen_k["energy:1"] == [4, 4]


@pytest.mark.parametrize("kwargs", [
    {"methods": []}, {"methods": ["per", "per"]}, {"reps": 0}, {"k_mode": "guess"},
])
def test_run_experiment_errors(kwargs):
    args = {"methods": ["per"], "reps": 1, **kwargs}
    with pytest.raises(ValueError):
        run_experiment(SimSpec(Scenario.NONLINEAR_16, 30), **args)
