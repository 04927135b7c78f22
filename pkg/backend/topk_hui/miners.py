#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Top-k Mining Module
One-phase TKO and KHMC miners over the shared utility-list search,
the exhaustive oracle, a threshold HUI miner and the pruning predicates.
"""

import time
import tracemalloc
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from .core import (Database, ItemOrder, Itemset, apply_dgu, compute_item_stats,
                   reorder_database, twu_order)
from .strategies import (MatrixKind, MissingProfitError, SparsePairMatrix, ThresholdState,
                         TopKHeap, build_pe_matrix, build_pmud_matrix, build_rsd_matrix,
                         cov_raise, cud_raise, raise_to_kth, riu_raise)
from .ulist import UtilityList, build_1item_ulists, build_cudm, build_eucst, join_ulists, nzeu
from .uptree import build_up_tree, md_pair_values, node_utility_values
from .utils.logger import get_logger

logger = get_logger(__name__)

STRATEGY_TOKENS = ("pe", "pmud", "riu", "rsd", "cud", "cov", "nu", "md", "ruc")
PRUNE_TOKENS = ("uprune", "ruz", "epb", "ea", "eucs")

LabelItemset = Tuple[int, ...]


class OracleGuardError(ValueError):
    pass


class MinerOptions(BaseModel):
    """Strategy and pruning toggles for one mining run"""
    # threshold-raising strategies
    pe: bool = False
    pmud: bool = False
    riu: bool = False
    rsd: bool = False
    cud: bool = False
    cov: bool = False
    nu: bool = False
    md: bool = False
    ruc: bool = True
    # pruning properties
    uprune: bool = True
    ruz: bool = False
    epb: bool = False
    ea: bool = False
    eucs: bool = False

    rsd_n: int = Field(4, ge=2, description="Items selected by RSD")
    cov_cap: int = Field(1024, ge=1, description="Coverage subsets enumerated per item")
    profits: Optional[Dict[int, int]] = Field(None, description="External utility per item label (PMUD)")
    oracle_max_items: int = Field(20, ge=1, description="Oracle enumeration guard")
    track_memory: bool = Field(False, description="Measure peak allocations with tracemalloc")

    @model_validator(mode="after")
    def _ruc_required(self):
        if not self.ruc:
            raise ValueError("ruc cannot be disabled: the miners are built around the candidate heap")
        return self

    @classmethod
    def for_algo(cls, algo: str, **overrides: Any) -> "MinerOptions":
        defaults = {
            "tko": {"pe": True, "uprune": True, "ruz": True, "epb": True},
            "khmc": {"riu": True, "cud": True, "cov": True, "uprune": True, "ea": True, "eucs": True},
            "oracle": {},
        }
        if algo not in defaults:
            raise ValueError(f"Unsupported algorithm: {algo}")
        return cls(**{**defaults[algo], **overrides})

    @classmethod
    def from_tokens(cls, algo: str, strategies: Optional[Iterable[str]] = None,
                    prune: Optional[Iterable[str]] = None, **overrides: Any) -> "MinerOptions":
        """
        Build options from name tokens; a token list replaces the algorithm's
        defaults for its group, None keeps them.
        """
        base = cls.for_algo(algo).model_dump()
        for tokens, universe in ((strategies, STRATEGY_TOKENS), (prune, PRUNE_TOKENS)):
            if tokens is None:
                continue
            tokens = [token.strip().lower() for token in tokens if token.strip()]
            unknown = sorted(set(tokens) - set(universe))
            if unknown:
                raise ValueError(f"Unknown tokens {unknown}; expected a subset of {list(universe)}")
            for name in universe:
                base[name] = name in tokens
        base["ruc"] = True
        base.update(overrides)
        return cls(**base)


@dataclass
class MiningStats:
    candidates_visited: int = 0
    joins_performed: int = 0
    prunes: Counter = field(default_factory=Counter)
    elapsed_ms: float = 0.0
    peak_mem_bytes: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "candidates_visited": self.candidates_visited,
            "joins_performed": self.joins_performed,
            "prunes": dict(sorted(self.prunes.items())),
            "elapsed_ms": round(self.elapsed_ms, 3),
            "peak_mem_bytes": self.peak_mem_bytes,
        }


@dataclass
class MiningResult:
    algo: str
    k: int
    topk: List[Tuple[LabelItemset, int]]
    delta_final: int
    stats: MiningStats = field(default_factory=MiningStats)
    audit: List[Tuple[str, int, int]] = field(default_factory=list)

    def itemsets(self) -> Dict[LabelItemset, int]:
        return dict(self.topk)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algo": self.algo,
            "k": self.k,
            "topk": [{"itemset": list(itemset), "utility": u} for itemset, u in self.topk],
            "delta_final": self.delta_final,
            "stats": self.stats.to_dict(),
            "audit": [{"strategy": tag, "old": old, "new": new} for tag, old, new in self.audit],
        }


# ---------------------- pruning predicates ----------------------
def u_prune(ul: UtilityList, delta: int) -> bool:
    """True when ul and all its extensions fall below delta"""
    return ul.sum_iutil + ul.sum_rutil < delta


def ruz_prune(ul: UtilityList, delta: int) -> bool:
    """True when no extension of ul can reach delta (Z-elements discounted)"""
    return nzeu(ul) + ul.sum_rutil < delta


def epb_order(uls: Iterable[UtilityList], order: Optional[ItemOrder] = None) -> List[UtilityList]:
    """Most promising first: descending iutil + rutil, ties in canonical order"""
    def canonical(ul: UtilityList) -> Tuple[int, ...]:
        return tuple(order.key(item) for item in ul.itemset) if order else ul.itemset

    return sorted(uls, key=lambda ul: (-ul.estimate, canonical(ul)))


def eucs_skip(eucst: SparsePairMatrix, x: int, y: int, delta: int) -> bool:
    eucst.require(MatrixKind.EUCST)
    return eucst.get(x, y) < delta


# ---------------------- search engine ----------------------
class _SearchEngine:
    """
    Depth-first set-enumeration over utility lists.

    ``threshold`` is read before every decision so heap-driven raises take
    effect immediately; ``emit`` receives every list whose utility meets it.
    """

    def __init__(self, order: ItemOrder, opts: MinerOptions, stats: MiningStats,
                 threshold: Callable[[], int], emit: Callable[[UtilityList], None],
                 eucst: Optional[SparsePairMatrix] = None):
        self.order = order
        self.opts = opts
        self.stats = stats
        self.threshold = threshold
        self.emit = emit
        self.eucst = eucst

    def run(self, ulists: List[UtilityList]) -> None:
        self.stats.candidates_visited += len(ulists)
        self._explore(None, ulists)

    def _cut(self, ul: UtilityList) -> bool:
        delta = self.threshold()
        if self.opts.ruz:
            if ruz_prune(ul, delta):
                self.stats.prunes["ruz"] += 1
                return True
        elif self.opts.uprune and u_prune(ul, delta):
            self.stats.prunes["uprune"] += 1
            return True
        return False

    def _explore(self, prefix: Optional[UtilityList], uls: List[UtilityList]) -> None:
        siblings = epb_order(uls, self.order) if self.opts.epb else uls
        rank = self.order.rank

        for x in siblings:
            if x.sum_iutil >= self.threshold():
                self.emit(x)
            if self._cut(x):
                continue

            x_rank = rank[x.last_item]
            extensions = []
            for y in uls:
                if rank[y.last_item] <= x_rank:
                    continue
                if self.eucst is not None and eucs_skip(self.eucst, x.last_item, y.last_item, self.threshold()):
                    self.stats.prunes["eucs"] += 1
                    continue
                self.stats.joins_performed += 1
                joined = join_ulists(prefix, x, y, early_abandon=self.opts.ea, delta=self.threshold())
                if joined is None:
                    self.stats.prunes["ea"] += 1
                    continue
                if not joined.tids:
                    continue
                self.stats.candidates_visited += 1
                extensions.append(joined)

            if extensions:
                self._explore(x, extensions)


# ---------------------- top-k pipeline ----------------------
def _profits_by_id(db: Database, opts: MinerOptions) -> Dict[int, int]:
    if not opts.profits:
        raise MissingProfitError("The pmud strategy needs an external utility table")
    return {item: opts.profits[db.item_map.label(item)]
            for item in db.present_items() if db.item_map.label(item) in opts.profits}


def _first_scan_raises(db: Database, k: int, opts: MinerOptions, stats, state: ThresholdState) -> None:
    if opts.pe:
        raise_to_kth(build_pe_matrix(db).values(), k, state, "pe")
    if opts.pmud:
        raise_to_kth(build_pmud_matrix(db, _profits_by_id(db, opts)).values(), k, state, "pmud")
    if opts.riu:
        riu_raise(stats, k, state)


def _second_scan_raises(db: Database, k: int, opts: MinerOptions, stats, state: ThresholdState) -> None:
    if opts.nu or opts.md:
        tree = build_up_tree(db, stats, state.delta)
        if opts.nu:
            raise_to_kth(node_utility_values(tree), k, state, "nu")
        if opts.md:
            raise_to_kth(md_pair_values(tree, stats), k, state, "md")
    if opts.rsd:
        if len(stats) >= 2:
            raise_to_kth(build_rsd_matrix(db, stats, min(opts.rsd_n, len(stats))).values(), k, state, "rsd")
        else:
            logger.debug("RSD skipped: fewer than two items survive")
    if opts.cud:
        cud_raise(build_cudm(db), k, state)
    if opts.cov:
        cov_raise(db, stats, k, opts.cov_cap, state)


def _mine(db: Database, k: int, opts: MinerOptions, algo: str) -> MiningResult:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    mining_stats = MiningStats()
    state = ThresholdState(0)
    started_tracing = opts.track_memory and not tracemalloc.is_tracing()
    if started_tracing:
        tracemalloc.start()
    start = time.perf_counter()
    topk: List[Tuple[LabelItemset, int]] = []
    heap: Optional[TopKHeap] = None

    try:
        logger.info(f"{algo}: mining top-{k} over {db.n} transactions")
        if db.n:
            item_stats = compute_item_stats(db)
            _first_scan_raises(db, k, opts, item_stats, state)

            filtered = apply_dgu(db, item_stats, state.delta)
            order = twu_order({item: item_stats[item] for item in filtered.present_items()})
            ordered = reorder_database(filtered, order)
            survivor_stats = compute_item_stats(ordered)

            if ordered.n:
                _second_scan_raises(ordered, k, opts, survivor_stats, state)
                eucst = build_eucst(ordered) if opts.eucs else None
                ulists = list(build_1item_ulists(ordered, order).values())

                heap = TopKHeap(k, floor=state.delta, tie_key=db.labels_of)

                def emit(ul: UtilityList) -> None:
                    heap.offer(ul.itemset, ul.sum_iutil)
                    state.record("ruc", heap.current_delta)

                logger.debug(f"{algo}: search starts at delta={state.delta} with {len(ulists)} items")
                _SearchEngine(order, opts, mining_stats, lambda: heap.current_delta, emit, eucst).run(ulists)
                topk = [(db.labels_of(itemset), u) for itemset, u in heap.items()]
    finally:
        mining_stats.elapsed_ms = (time.perf_counter() - start) * 1000.0
        if started_tracing:
            mining_stats.peak_mem_bytes = tracemalloc.get_traced_memory()[1]
            tracemalloc.stop()

    delta_final = topk[-1][1] if len(topk) == k else state.delta
    logger.info(f"{algo}: {len(topk)} itemsets, delta_final={delta_final}, "
                f"candidates={mining_stats.candidates_visited}, joins={mining_stats.joins_performed}, "
                f"{mining_stats.elapsed_ms:.1f} ms")
    return MiningResult(algo=algo, k=k, topk=topk, delta_final=delta_final,
                        stats=mining_stats, audit=list(state.audit))


def tko_mine(db: Database, k: int, opts: Optional[MinerOptions] = None) -> MiningResult:
    """
    TKO: PE raise, DGU, utility lists, then RUC/RUZ/EPB/U-Prune search.

    Args:
        db: Database to mine
        k: Number of itemsets sought
        opts: Toggles; defaults to MinerOptions.for_algo("tko")

    Returns:
        MiningResult with the strict top-k
    """
    return _mine(db, k, opts or MinerOptions.for_algo("tko"), "tko")


def khmc_mine(db: Database, k: int, opts: Optional[MinerOptions] = None) -> MiningResult:
    """
    KHMC: RIU raise, DGU, CUD and COV raises over the second scan, then a
    search with RUC, U-Prune, EA joins and EUCS pair checks.
    """
    return _mine(db, k, opts or MinerOptions.for_algo("khmc"), "khmc")


# ---------------------- oracle and threshold miner ----------------------
def _enumerate_all(db: Database, max_items: int) -> List[Tuple[LabelItemset, int]]:
    items = sorted(db.present_items(), key=db.item_map.label)
    if len(items) > max_items:
        raise OracleGuardError(
            f"Oracle enumeration refused: {len(items)} distinct items exceed the guard of {max_items}; "
            f"raise oracle_max_items to override"
        )

    tidsets: Dict[int, Dict[int, int]] = {item: {} for item in items}
    for t in db.transactions:
        for item, u in zip(t.items, t.utils):
            tidsets[item][t.tid] = u

    found: List[Tuple[LabelItemset, int]] = []

    def extend(itemset: Itemset, utils: Optional[Dict[int, int]], start: int) -> None:
        for idx in range(start, len(items)):
            item = items[idx]
            column = tidsets[item]
            if utils is None:
                new_utils = dict(column)
            else:
                new_utils = {tid: u + column[tid] for tid, u in utils.items() if tid in column}
            if not new_utils:
                continue
            new_itemset = itemset + (item,)
            found.append((db.labels_of(new_itemset), sum(new_utils.values())))
            extend(new_itemset, new_utils, idx + 1)

    extend((), None, 0)
    return found


def oracle_topk(db: Database, k: int, max_items: int = 20) -> MiningResult:
    """Exhaustive enumeration; refuses databases above ``max_items`` distinct items"""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    start = time.perf_counter()
    found = _enumerate_all(db, max_items)
    found.sort(key=lambda pair: (-pair[1], pair[0]))
    topk = found[:k]
    stats = MiningStats(candidates_visited=len(found), elapsed_ms=(time.perf_counter() - start) * 1000.0)
    delta_final = topk[-1][1] if len(topk) == k else 0
    return MiningResult(algo="oracle", k=k, topk=topk, delta_final=delta_final, stats=stats,
                        audit=[("initial", 0, 0)])


def hui_mine(db: Database, delta: int) -> Dict[LabelItemset, int]:
    """
    All itemsets with utility >= delta (utility-list search, U-Prune only).

    Args:
        db: Database to mine
        delta: Absolute minimum utility, at least 1

    Returns:
        Mapping sorted label tuple -> utility
    """
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    if db.n == 0:
        return {}

    item_stats = compute_item_stats(db)
    filtered = apply_dgu(db, item_stats, delta)
    order = twu_order({item: item_stats[item] for item in filtered.present_items()})
    ordered = reorder_database(filtered, order)

    found: Dict[LabelItemset, int] = {}

    def emit(ul: UtilityList) -> None:
        found[db.labels_of(ul.itemset)] = ul.sum_iutil

    opts = MinerOptions(uprune=True)
    _SearchEngine(order, opts, MiningStats(), lambda: delta, emit).run(
        list(build_1item_ulists(ordered, order).values()))
    logger.debug(f"hui_mine: {len(found)} itemsets at delta={delta}")
    return found


def expand_boundary_ties(db: Database, result: MiningResult) -> List[Tuple[LabelItemset, int]]:
    """
    Relaxed-K answer: the strict top-k followed by every other itemset whose
    utility equals delta_final.
    """
    if len(result.topk) < result.k or result.delta_final < 1:
        return list(result.topk)
    kept = set(result.itemsets())
    ties = sorted(itemset for itemset, u in hui_mine(db, result.delta_final).items()
                  if u == result.delta_final and itemset not in kept)
    return list(result.topk) + [(itemset, result.delta_final) for itemset in ties]


def _oracle_miner(db: Database, k: int, opts: Optional[MinerOptions] = None) -> MiningResult:
    return oracle_topk(db, k, max_items=(opts or MinerOptions()).oracle_max_items)


MINERS: Dict[str, Callable[..., MiningResult]] = {
    "tko": tko_mine,
    "khmc": khmc_mine,
    "oracle": _oracle_miner,
}


def run_miner(algo: str, db: Database, k: int, opts: Optional[MinerOptions] = None) -> MiningResult:
    """Dispatch through the registry; unknown names raise ValueError"""
    try:
        miner = MINERS[algo]
    except KeyError:
        raise ValueError(f"Unsupported algorithm: {algo}") from None
    return miner(db, k, opts)
