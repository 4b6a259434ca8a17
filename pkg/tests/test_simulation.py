import json
import math

import numpy as np
import pytest

from dcmase.model import average_degree
from dcmase.simulation import (
    CSV_COLUMNS,
    RunRecord,
    Scenario,
    generate_scenario_model,
    parse_config,
    records_to_csv,
    run_cell,
    run_sweep,
    summarize,
    svg_chart,
    thread_count,
    write_outputs,
)

TINY = dict(n=30, K=3, L_grid=(2, 3), reps=2, restarts=5)


def test_defaults():
    s = Scenario()
    assert (s.n, s.K, s.target_degree, s.reps) == (150, 3, 10.0, 20)
    assert s.L_grid == (2, 4, 8, 16, 32, 64)


@pytest.mark.parametrize("kwargs", [
    dict(B_mode="mixed"), dict(theta_mode="odd"), dict(edge_mode="binary"),
    dict(n=2, K=3), dict(reps=0), dict(L_grid=()),
])
def test_invalid_scenario(kwargs):
    with pytest.raises(ValueError):
        Scenario(**kwargs)


def test_same_B_blocks():
    m = generate_scenario_model(Scenario(B_mode="same", theta_mode="same"), 4, 0)
    # the rescale moves the common factor into theta, so B keeps its shape
    for B in m.B:
        np.testing.assert_allclose(np.diag(B), 1.0)
        np.testing.assert_allclose(B[~np.eye(3, dtype=bool)], 0.4)


def test_different_B_blocks():
    m = generate_scenario_model(Scenario(B_mode="different"), 5, 0)
    for B in m.B:
        assert np.ptp(np.diag(B)) == 0
        off = B[~np.eye(3, dtype=bool)]
        assert np.ptp(off) == 0
        assert 0 < B[0, 0] < 1 and 0 < off[0] < 1
    assert np.ptp(m.B[:, 0, 0]) > 0


def test_alternating_theta_parity():
    m = generate_scenario_model(Scenario(theta_mode="alternating"), 4, 0)
    scale = m.theta[0, 0] / 0.8
    # one-based (i=1, l=1) and (i=2, l=1) are zero-based (0, 0) and (1, 0)
    assert m.theta[0, 0] / scale == pytest.approx(0.8)
    assert m.theta[0, 1] / scale == pytest.approx(0.15)
    assert m.theta[1, 1] / scale == pytest.approx(0.8)
    assert m.theta[1, 0] / scale == pytest.approx(0.15)


def test_same_theta_shared_across_layers():
    m = generate_scenario_model(Scenario(theta_mode="same"), 3, 1)
    np.testing.assert_array_equal(m.theta[0], m.theta[2])
    assert np.all(m.theta > 0)


@pytest.mark.parametrize("B_mode", ["same", "different"])
@pytest.mark.parametrize("theta_mode", ["same", "different", "alternating"])
def test_rescaled_degree(B_mode, theta_mode):
    s = Scenario(B_mode=B_mode, theta_mode=theta_mode, seed=3)
    m = generate_scenario_model(s, 4, 2)
    for l in range(m.L):
        assert abs(average_degree(m.expected_matrix(l)) - 10.0) <= 1e-9


@pytest.mark.parametrize("theta_mode", ["same", "different", "alternating"])
def test_noiseless_sweep_exact(theta_mode):
    s = Scenario(theta_mode=theta_mode, B_mode="different", **TINY)
    records = run_sweep(s, ("dcmase",), noiseless=True, threads=1)
    assert [r.ari for r in records] == [1.0] * len(records)
    assert all(r.misclustering == 0.0 for r in records)


def test_one_row_per_cell():
    s = Scenario(**TINY)
    methods = ("dcmase", "mean_adj", "sos", "mase")
    records = run_sweep(s, methods, threads=2)
    keys = [(r.method, r.L, r.rep) for r in records]
    assert len(keys) == len(set(keys)) == 4 * 2 * 2
    assert all(-1 < r.ari <= 1 for r in records)


def test_determinism_and_thread_independence():
    s = Scenario(theta_mode="different", seed=11, **TINY)
    a = records_to_csv(run_sweep(s, ("dcmase", "sos"), timing=False, threads=1))
    b = records_to_csv(run_sweep(s, ("dcmase", "sos"), timing=False, threads=4))
    assert a == b
    assert a.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_seed_changes_output():
    a = run_sweep(Scenario(seed=1, **TINY), timing=False, threads=1)
    b = run_sweep(Scenario(seed=2, **TINY), timing=False, threads=1)
    assert records_to_csv(a) != records_to_csv(b)


def test_failures_are_recorded():
    s = Scenario(edge_mode="bernoulli", target_degree=29.5, **TINY)
    records = run_cell(s, 2, 0, ("dcmase",))
    assert records[0].error is not None and math.isnan(records[0].ari)


def test_unknown_method():
    with pytest.raises(KeyError):
        run_sweep(Scenario(**TINY), ("spectral",))


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("DCMASE_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.delenv("DCMASE_THREADS")
    assert thread_count() >= 1


def _records():
    return [RunRecord("s", "dcmase", 2, 0, 1.0, 0.0, 1.5),
            RunRecord("s", "dcmase", 2, 1, 0.5, 0.2, 1.5),
            RunRecord("s", "sos", 2, 0, math.nan, math.nan, 0.0, "boom")]


def test_summary_statistics():
    out = summarize(_records(), Scenario(reps=2))
    rows = {(r["method"], r["L"]): r for r in out["results"]}
    d = rows[("dcmase", 2)]
    assert d["ari_mean"] == pytest.approx(0.75)
    assert d["ari_se"] == pytest.approx(np.std([1.0, 0.5], ddof=1) / np.sqrt(2))
    assert rows[("sos", 2)]["failed"] == 1 and rows[("sos", 2)]["ari_mean"] is None
    assert "2 replications" in out["note"]


def test_svg_chart():
    svg = svg_chart(summarize(_records()))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert "dcmase" in svg


def test_write_outputs(tmp_path):
    paths = write_outputs(_records(), tmp_path / "out", Scenario(reps=2))
    assert set(paths) == {"csv", "json", "svg"}
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["scenario"]["reps"] == 2
    lines = (tmp_path / "out" / "runs.csv").read_text().splitlines()
    assert len(lines) == 4


class TestConfig:
    def test_minimal(self):
        cfg = parse_config({})
        assert cfg.scenario == Scenario() and cfg.methods

    def test_full(self):
        cfg = parse_config({"name": "x", "n": 30, "L_grid": [2, 4], "methods": ["sos"],
                            "noiseless": True, "timing": False, "svg": False})
        assert cfg.scenario.L_grid == (2, 4) and cfg.methods == ("sos",)
        assert cfg.noiseless and not cfg.timing and not cfg.svg

    @pytest.mark.parametrize("data, key", [
        ({"nn": 3}, "nn"),
        ({"n": "150"}, "n"),
        ({"reps": True}, "reps"),
        ({"L_grid": [2, -1]}, "L_grid"),
        ({"methods": ["dcmase", "spectral"]}, "spectral"),
        ({"B_mode": "mixed"}, "B_mode"),
    ])
    def test_errors_name_key(self, data, key):
        with pytest.raises(ValueError, match=key):
            parse_config(data)
