"""Benchmark harness"""

import json

import pytest
from pydantic import ValidationError

from conftest import SAMPLE_PATH
from topk_hui import bench, miners
from topk_hui.bench import BenchConfig, DatasetEntry, VariantEntry, run_bench, run_cell
from topk_hui.data_writer import RUN_REPORT_COLUMNS
from topk_hui.miners import MiningResult


def _config(**overrides) -> BenchConfig:
    values = {
        "datasets": [{"name": "sample", "path": SAMPLE_PATH}],
        "algos": ["tko", "khmc"],
        "k_grid": [3, 12],
        "repetitions": 2,
        "measure_memory": False,
    }
    values.update(overrides)
    return BenchConfig.model_validate(values)


def test_run_cell(sample_db):
    outcome = run_cell("sample", sample_db, VariantEntry(name="tko", algo="tko"), 7, repetitions=3)
    row = outcome["row"]
    assert set(row) == set(RUN_REPORT_COLUMNS)
    assert (row["delta_final"], row["topk_size"], row["peak_mem_bytes"]) == (67, 7, 0)
    assert row["runtime_ms"] >= 0
    assert outcome["audit"][0] == ("initial", 0, 0)


def test_run_cell_measures_memory(sample_db):
    outcome = run_cell("sample", sample_db, VariantEntry(name="khmc", algo="khmc"), 3, measure_memory=True)
    assert outcome["row"]["peak_mem_bytes"] > 0


def test_run_bench_grid():
    report = run_bench(_config(attach_audit=True))
    assert report.ok
    assert list(report.rows.columns) == RUN_REPORT_COLUMNS
    assert len(report.rows) == 4
    assert report.rows.set_index(["algo", "k"])["delta_final"].to_dict() == {
        ("tko", 3): 73, ("tko", 12): 59, ("khmc", 3): 73, ("khmc", 12): 59}
    assert set(report.audits) == {"sample/tko/3", "sample/tko/12", "sample/khmc/3", "sample/khmc/12"}


def test_named_variants_and_dataset_grid():
    config = _config(
        datasets=[{"name": "sample", "path": SAMPLE_PATH, "k_grid": [5]}],
        algos=["tko", {"name": "khmc-nu", "algo": "khmc", "strategies": ["nu", "ruc"], "prune": ["uprune"]}],
    )
    report = run_bench(config)
    assert report.ok
    assert report.rows["algo"].tolist() == ["tko", "khmc-nu"]
    assert report.rows["k"].tolist() == [5, 5]


def test_missing_dataset_becomes_error_rows(tmp_path):
    config = _config(datasets=[
        {"name": "absent", "path": str(tmp_path / "absent.txt")},
        {"name": "sample", "path": SAMPLE_PATH},
    ])
    report = run_bench(config)
    assert not report.ok
    assert len(report.errors) == 4
    assert {error["dataset"] for error in report.errors} == {"absent"}
    absent = report.rows[report.rows["dataset"] == "absent"]
    assert len(absent) == 4
    assert absent["delta_final"].isna().all()
    sample = report.rows[report.rows["dataset"] == "sample"]
    assert sample["delta_final"].notna().all()


def test_disagreement_is_reported(monkeypatch):
    def wrong(db, k, opts=None):
        return MiningResult(algo="khmc", k=k, topk=[((1,), 45)], delta_final=45)

    monkeypatch.setitem(miners.MINERS, "khmc", wrong)
    report = run_bench(_config(k_grid=[3]))
    assert not report.ok
    assert report.errors == [{"dataset": "sample", "algo": "khmc", "k": 3,
                              "error": "top-3 of khmc differs from tko"}]


def test_crashing_cell_does_not_abort_the_grid(monkeypatch):
    def crashing(db, k, opts=None):
        raise RuntimeError("out of memory")

    monkeypatch.setitem(miners.MINERS, "tko", crashing)
    report = run_bench(_config())
    assert [error["error"] for error in report.errors] == ["out of memory", "out of memory"]
    assert report.rows.loc[report.rows["algo"] == "khmc", "topk_size"].tolist() == [3, 12]


def test_config_from_file_resolves_relative_paths(tmp_path):
    (tmp_path / "data").mkdir()
    (tmp_path / "data" / "tiny.txt").write_text("1 2:3:1 2\n")
    config_path = tmp_path / "bench.json"
    config_path.write_text(json.dumps({"datasets": [{"name": "tiny", "path": "data/tiny.txt"}], "k_grid": [1]}))
    config = BenchConfig.from_file(str(config_path))
    assert config.datasets[0].path == str(tmp_path / "data" / "tiny.txt")
    assert [variant.name for variant in config.variants()] == ["tko", "khmc"]
    assert run_bench(config).ok


def test_config_validation():
    with pytest.raises(ValidationError):
        BenchConfig.model_validate({"datasets": []})
    with pytest.raises(ValidationError):
        _config(repetitions=0)
    with pytest.raises(ValidationError):
        VariantEntry(name="x", algo="fhm")
    with pytest.raises(ValueError):
        _config().grid_for(DatasetEntry(name="d", path="p", k_grid=[0]))


def test_integer_columns_are_nullable():
    assert set(bench.INTEGER_COLUMNS) <= set(RUN_REPORT_COLUMNS)
    report = run_bench(_config(k_grid=[3]))
    assert str(report.rows["candidates"].dtype) == "Int64"


def test_defaults_follow_environment(monkeypatch):
    monkeypatch.setenv("HUI_BENCH_REPETITIONS", "5")
    config = BenchConfig.model_validate({"datasets": [{"name": "sample", "path": SAMPLE_PATH}]})
    assert config.repetitions == 5
    assert _config().repetitions == 2
