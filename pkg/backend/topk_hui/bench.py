#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Benchmark harness
Runs a (dataset x algorithm variant x K) grid, reports per-cell medians
over repetitions and checks that every variant agrees on the top-k.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, Field

from .config import get_config
from .core import Database
from .data_writer import RUN_REPORT_COLUMNS
from .ingest import load_dataset
from .miners import MinerOptions, run_miner
from .utils.logger import get_logger

logger = get_logger(__name__)

# nullable so failed cells keep empty metrics
INTEGER_COLUMNS = ["k", "candidates", "joins", "peak_mem_bytes", "delta_final", "topk_size"]


class DatasetEntry(BaseModel):
    name: str = Field(..., description="Label used in report rows")
    path: str = Field(..., description="Dataset file, relative paths resolve against the config file")
    k_grid: Optional[List[int]] = Field(None, description="Per-dataset K grid overriding the global one")


class VariantEntry(BaseModel):
    """Named algorithm configuration, e.g. khmc without coverage raising"""
    name: str
    algo: Literal["tko", "khmc", "oracle"]
    strategies: Optional[List[str]] = None
    prune: Optional[List[str]] = None

    def options(self, **overrides: Any) -> MinerOptions:
        return MinerOptions.from_tokens(self.algo, self.strategies, self.prune, **overrides)


class BenchConfig(BaseModel):
    datasets: List[DatasetEntry] = Field(..., min_length=1)
    algos: List[Union[VariantEntry, str]] = Field(default_factory=lambda: ["tko", "khmc"])
    k_grid: List[int] = Field(default_factory=lambda: [100, 500])
    # defaults come from the "bench" config section (HUI_BENCH_* overrides)
    repetitions: int = Field(default_factory=lambda: get_config()["bench"]["repetitions"], ge=1)
    workers: int = Field(default_factory=lambda: get_config()["bench"]["workers"], ge=1)
    measure_memory: bool = Field(default_factory=lambda: get_config()["bench"]["measure_memory"])
    attach_audit: bool = False
    check_agreement: bool = True

    def variants(self) -> List[VariantEntry]:
        return [VariantEntry(name=algo, algo=algo) if isinstance(algo, str) else algo for algo in self.algos]

    def grid_for(self, dataset: DatasetEntry) -> List[int]:
        grid = dataset.k_grid or self.k_grid
        if any(k < 1 for k in grid):
            raise ValueError(f"K grid for {dataset.name} contains values below 1: {grid}")
        return grid

    @classmethod
    def from_file(cls, path: str) -> "BenchConfig":
        with open(path, "r", encoding="utf-8") as fh:
            config = cls.model_validate(json.load(fh))
        base_dir = os.path.dirname(os.path.abspath(path))
        for dataset in config.datasets:
            if not os.path.isabs(dataset.path):
                dataset.path = os.path.join(base_dir, dataset.path)
        return config


@dataclass
class RunReport:
    rows: pd.DataFrame
    errors: List[Dict[str, Any]] = field(default_factory=list)
    audits: Dict[str, list] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors


def run_cell(dataset: str, db: Database, variant: VariantEntry, k: int,
             repetitions: int = 1, measure_memory: bool = False) -> Dict[str, Any]:
    """
    Run one grid cell.

    Args:
        dataset: Dataset name for the report row
        db: Parsed database
        variant: Algorithm configuration
        k: Number of itemsets sought
        repetitions: Timed runs; the row carries their median runtime
        measure_memory: Add one traced run for the peak allocation figure

    Returns:
        Dictionary with the report row, the top-k and the audit log
    """
    opts = variant.options()
    runtimes = []
    counters = set()
    result = None
    for _ in range(repetitions):
        result = run_miner(variant.algo, db, k, opts)
        runtimes.append(result.stats.elapsed_ms)
        counters.add((result.stats.candidates_visited, result.stats.joins_performed))
    if len(counters) > 1:
        logger.warning(f"{dataset}/{variant.name}/k={k}: non-deterministic counters {sorted(counters)}")

    peak_mem = 0
    if measure_memory:
        traced = run_miner(variant.algo, db, k, variant.options(track_memory=True))
        peak_mem = traced.stats.peak_mem_bytes

    row = {
        "dataset": dataset,
        "algo": variant.name,
        "k": k,
        "runtime_ms": round(float(pd.Series(runtimes).median()), 3),
        "candidates": result.stats.candidates_visited,
        "joins": result.stats.joins_performed,
        "peak_mem_bytes": peak_mem,
        "delta_final": result.delta_final,
        "topk_size": len(result.topk),
    }
    return {"row": row, "topk": result.topk, "audit": result.audit}


def _error_row(dataset: str, algo: str, k: int) -> Dict[str, Any]:
    return {column: None for column in RUN_REPORT_COLUMNS} | {"dataset": dataset, "algo": algo, "k": k}


def run_bench(config: BenchConfig) -> RunReport:
    """Run the whole grid; failures become error entries instead of aborting"""
    rows: List[Dict[str, Any]] = []
    errors: List[Dict[str, Any]] = []
    audits: Dict[str, list] = {}
    variants = config.variants()

    cells: List[Tuple[str, Database, VariantEntry, int]] = []
    for dataset in config.datasets:
        grid = config.grid_for(dataset)
        try:
            db = load_dataset(dataset.path)
        except (OSError, ValueError) as e:
            logger.error(f"❌ Dataset {dataset.name} unavailable: {e}")
            for variant in variants:
                for k in grid:
                    rows.append(_error_row(dataset.name, variant.name, k))
                    errors.append({"dataset": dataset.name, "algo": variant.name, "k": k, "error": str(e)})
            continue
        cells.extend((dataset.name, db, variant, k) for variant in variants for k in grid)

    logger.info(f"Running {len(cells)} bench cells with {config.workers} worker(s)")
    outcomes: List[Tuple[Tuple[str, VariantEntry, int], Any]] = []
    if config.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [((name, variant, k),
                        pool.submit(run_cell, name, db, variant, k, config.repetitions, config.measure_memory))
                       for name, db, variant, k in cells]
            for key, future in futures:
                try:
                    outcomes.append((key, future.result()))
                except Exception as e:
                    outcomes.append((key, e))
    else:
        for name, db, variant, k in cells:
            try:
                outcomes.append(((name, variant, k),
                                 run_cell(name, db, variant, k, config.repetitions, config.measure_memory)))
            except Exception as e:
                outcomes.append(((name, variant, k), e))

    agreement: Dict[Tuple[str, int], Dict[str, list]] = {}
    for (name, variant, k), outcome in outcomes:
        if isinstance(outcome, Exception):
            logger.error(f"❌ {name}/{variant.name}/k={k} failed: {outcome}")
            rows.append(_error_row(name, variant.name, k))
            errors.append({"dataset": name, "algo": variant.name, "k": k, "error": str(outcome)})
            continue
        rows.append(outcome["row"])
        agreement.setdefault((name, k), {})[variant.name] = outcome["topk"]
        if config.attach_audit:
            audits[f"{name}/{variant.name}/{k}"] = outcome["audit"]

    if config.check_agreement:
        for (name, k), by_variant in agreement.items():
            reference_name, reference = next(iter(by_variant.items()))
            for variant_name, topk in by_variant.items():
                if topk != reference:
                    message = f"top-{k} of {variant_name} differs from {reference_name}"
                    logger.error(f"❌ {name}: {message}")
                    errors.append({"dataset": name, "algo": variant_name, "k": k, "error": message})

    frame = pd.DataFrame(rows, columns=RUN_REPORT_COLUMNS)
    for column in INTEGER_COLUMNS:
        frame[column] = frame[column].astype("Int64")
    return RunReport(rows=frame, errors=errors, audits=audits)
