"""Benchmark harness: run records, serialization, aggregation, suites."""

import csv
import json
import math

import pytest

from spannerkit.bench import (
    CSV_FIELDS,
    RunRecord,
    SUITES,
    bg_gap_suite,
    large_suite,
    metrication_suite,
    read_jsonl,
    run_solver,
    run_suite,
    small_oracle_suite,
    smoke_suite,
    write_csv,
    write_jsonl,
)
from spannerkit.instances import make_fixture


@pytest.fixture(scope="module")
def cycle():
    return make_fixture("c4")


def test_run_solver_agreement_on_cycle(cycle):
    pb = run_solver(cycle, "pb", 2.0)
    ab = run_solver(cycle, "ab", 2.0)
    bg = run_solver(cycle, "bg", 2.0)
    oracle = run_solver(cycle, "oracle", 2.0)
    assert pb.status == ab.status == oracle.status == "optimal"
    assert bg.status == "heuristic"
    assert pb.primal == ab.primal == oracle.primal == 4.0
    assert bg.primal == 4.0
    assert pb.gap == pytest.approx(0.0)
    assert oracle.gap == 0.0
    assert bg.gap is None and bg.dual == 0.0


def test_run_solver_rejects_unknown_solver(cycle):
    with pytest.raises(ValueError):
        run_solver(cycle, "cplex", 2.0)
    with pytest.raises(ValueError):
        run_suite("nonexistent")


def test_json_masks_non_finite_and_sorts_keys():
    record = RunRecord(
        "toy", {}, "bg", 2.0, "heuristic", math.inf, 0.0, None, 0.25, {"x": math.nan}
    )
    text = record.to_json()
    data = json.loads(text)
    assert data["primal"] is None
    assert data["stats"]["x"] is None
    assert text == json.dumps(data, sort_keys=True)


def test_fingerprint_is_reproducible(cycle):
    first = run_solver(cycle, "pb", 2.0)
    second = run_solver(cycle, "pb", 2.0)
    # wall times differ between runs, fingerprints must not
    assert first.fingerprint() == second.fingerprint()
    masked = json.loads(first.fingerprint())
    assert masked["wall_time"] == 0.0
    assert all(
        v == 0.0 for k, v in masked["stats"].items() if k.startswith("time_")
    )


def test_jsonl_round_trip(tmp_path, cycle):
    records = [run_solver(cycle, s, 2.0) for s in ("pb", "ab", "bg", "oracle")]
    path = tmp_path / "runs.jsonl"
    write_jsonl(records, str(path))
    loaded = read_jsonl(str(path))
    assert len(loaded) == 4
    assert [d["solver"] for d in loaded] == ["pb", "ab", "bg", "oracle"]
    assert loaded[0] == json.loads(records[0].to_json())


def test_smoke_suite_records_are_consistent(tmp_path):
    records = run_suite("smoke")
    assert len(records) == 12  # 4 instances x 3 solvers
    by_instance = {}
    for record in records:
        by_instance.setdefault(record.instance, {})[record.solver] = record
        if record.primal is not None:
            assert record.dual <= record.primal + 1e-6
        pct = record.stats.get("pruned_pct")
        if pct is not None:
            assert 0.0 <= pct <= 100.0
    for group in by_instance.values():
        assert group["pb"].status == group["ab"].status == "optimal"
        assert group["pb"].primal == pytest.approx(group["ab"].primal, abs=1e-6)
        assert group["bg"].primal >= group["pb"].primal - 1e-6

    target = tmp_path / "summary.csv"
    write_csv(records, str(target))
    with open(target, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and list(rows[0]) == CSV_FIELDS
    assert sum(int(r["runs"]) for r in rows) == len(records)
    pb_rows = [r for r in rows if r["solver"] == "pb"]
    assert all(int(r["optimal"]) == int(r["runs"]) for r in pb_rows)
    assert all(float(r["time_median_s"]) >= 0.0 for r in rows)


def test_suite_shapes():
    small = small_oracle_suite()
    assert len(small) == 108
    assert all(inst.graph.n <= 10 for inst, _ in small)
    alphas = {alpha for _, alpha in small}
    assert alphas == {1.5, 2.0, 3.0}
    weights = {inst.spec.weight_model for inst, _ in small}
    assert weights == {"w1", "euc", "wn"}
    for inst, alpha in small:
        if inst.spec.weight_model == "w1":
            assert alpha == int(alpha)

    gap = bg_gap_suite()
    assert len(gap) == 50
    assert all(inst.graph.n == 20 for inst, _ in gap)

    metric = metrication_suite()
    assert len(metric) == 50
    assert all(12 <= inst.graph.n <= 20 for inst, _ in metric)

    assert len(smoke_suite()) == 4
    (big, alpha), = large_suite()
    assert big.graph.n == 100 and alpha == 2.0

    assert set(SUITES) == {"small-oracle", "bg-gap", "metrication", "smoke", "large"}
