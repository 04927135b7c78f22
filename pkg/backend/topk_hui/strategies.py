#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Threshold-raising strategies
Pair matrices (PE, PMUD, RSD, EUCST, CUDM), the generic Kth-highest raiser,
the RIU / CUD / COV raisers and the bounded candidate heap behind RUC.
"""

import heapq
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Set, Tuple

from .core import Database, Itemset, ItemStat, UnknownItemError
from .utils.logger import get_logger

logger = get_logger(__name__)


class MatrixKind(str, Enum):
    PE = "pe-lower-bound"
    PMUD = "pmud-lower-bound"
    RSD = "rsd-exact"
    EUCST = "eucst-twu"
    CUDM = "cudm-exact"


class MatrixKindError(ValueError):
    pass


class MissingProfitError(ValueError):
    pass


@dataclass
class SparsePairMatrix:
    """Associative pair -> utility map; lookups are symmetric"""
    kind: MatrixKind
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def add(self, p: int, q: int, value: int) -> None:
        key = (q, p) if (q, p) in self.entries else (p, q)
        self.entries[key] = self.entries.get(key, 0) + value

    def get(self, p: int, q: int) -> int:
        value = self.entries.get((p, q))
        if value is None:
            value = self.entries.get((q, p), 0)
        return value

    def values(self) -> List[int]:
        return list(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def require(self, kind: MatrixKind) -> None:
        if self.kind != kind:
            raise MatrixKindError(f"Expected a {kind.value} matrix, got {self.kind.value}")


@dataclass
class ThresholdState:
    """Current minimum utility threshold and its raise history"""
    delta: int = 0
    audit: List[Tuple[str, int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.audit:
            self.audit.append(("initial", self.delta, self.delta))

    def raise_to(self, tag: str, candidate: int) -> int:
        """Append an audit step; delta moves up to candidate, never down"""
        old = self.delta
        self.delta = max(old, candidate)
        self.audit.append((tag, old, self.delta))
        if self.delta > old:
            logger.debug(f"{tag}: delta {old} -> {self.delta}")
        return self.delta

    def record(self, tag: str, new: int) -> None:
        """Event-style raise: only changes are logged"""
        if new > self.delta:
            self.raise_to(tag, new)


# ---------------------- generic raiser ----------------------
def raise_to_kth(values: Iterable[int], k: int, state: ThresholdState, tag: str) -> ThresholdState:
    """
    Raise delta to the Kth highest of values when at least k values exist.

    Args:
        values: Lower bounds, one per distinct itemset (or tree node)
        k: Number of itemsets sought
        state: Threshold state, updated in place
        tag: Strategy name recorded in the audit

    Returns:
        The same state
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    values = list(values)
    kth = heapq.nlargest(k, values)[-1] if len(values) >= k else state.delta
    state.raise_to(tag, kth)
    return state


def riu_raise(stats: Mapping[int, ItemStat], k: int, state: ThresholdState) -> ThresholdState:
    return raise_to_kth((stat.riu for stat in stats.values()), k, state, "riu")


def cud_raise(cudm: SparsePairMatrix, k: int, state: ThresholdState) -> ThresholdState:
    cudm.require(MatrixKind.CUDM)
    return raise_to_kth(cudm.values(), k, state, "cud")


# ---------------------- first-scan matrices ----------------------
def build_pe_matrix(db: Database) -> SparsePairMatrix:
    """Anchor each transaction on its first item as written in the input"""
    matrix = SparsePairMatrix(MatrixKind.PE)
    for t in db.transactions:
        if len(t.source_items) < 2:
            continue
        umap = t.util_map
        anchor = t.source_items[0]
        for item in t.source_items[1:]:
            matrix.add(anchor, item, umap[anchor] + umap[item])
    return matrix


def build_pmud_matrix(db: Database, profits: Mapping[int, int]) -> SparsePairMatrix:
    """
    Like PE, anchored on the transaction's highest-profit item.

    Args:
        db: Database to scan
        profits: External utility per item id

    Returns:
        PMUD lower-bound matrix
    """
    missing = [db.item_map.label(item) for item in db.present_items() if item not in profits]
    if missing:
        raise MissingProfitError(f"No external utility for items {missing}")

    matrix = SparsePairMatrix(MatrixKind.PMUD)
    for t in db.transactions:
        if len(t) < 2:
            continue
        umap = t.util_map
        anchor = min(t.items, key=lambda item: (-profits[item], item))
        for item in t.items:
            if item != anchor:
                matrix.add(anchor, item, umap[anchor] + umap[item])
    return matrix


def build_rsd_matrix(db: Database, stats: Mapping[int, ItemStat], n: int) -> SparsePairMatrix:
    """
    Exact pair utilities among the ceil(n/2) most and floor(n/2) least
    supported items. Support ties rank the smaller original label higher.
    """
    if n < 2 or n > len(stats):
        raise ValueError(f"RSD n must be in [2, {len(stats)}], got {n}")

    ranking = sorted(stats, key=lambda item: (-stats[item].support, db.item_map.label(item)))
    selected = ranking[:math.ceil(n / 2)] + ranking[len(ranking) - n // 2:]

    matrix = SparsePairMatrix(MatrixKind.RSD)
    for p, q in itertools.combinations(selected, 2):
        matrix.add(p, q, 0)

    chosen = set(selected)
    for t in db.transactions:
        present = [(item, u) for item, u in zip(t.items, t.utils) if item in chosen]
        for (p, up), (q, uq) in itertools.combinations(present, 2):
            matrix.add(p, q, up + uq)
    logger.debug(f"RSD selected items {[db.item_map.label(i) for i in selected]}")
    return matrix


# ---------------------- coverage ----------------------
def _index(db: Database) -> Tuple[Dict[int, Set[int]], Dict[int, Tuple[int, ...]]]:
    """Item tidsets and the items of each transaction"""
    tidsets: Dict[int, Set[int]] = {}
    items_by_tid: Dict[int, Tuple[int, ...]] = {}
    for t in db.transactions:
        items_by_tid[t.tid] = t.items
        for item in t.items:
            tidsets.setdefault(item, set()).add(t.tid)
    return tidsets, items_by_tid


def _coverage(tidsets: Mapping[int, Set[int]], items_by_tid: Mapping[int, Tuple[int, ...]], x: int) -> Set[int]:
    cover = tidsets[x]
    # any covering item occurs in every transaction of x, the first one included
    candidates = items_by_tid[min(cover)]
    return {y for y in candidates if y != x and cover <= tidsets[y]}


def coverage(db: Database, x: int) -> Set[int]:
    """Items whose tidset contains g(x)"""
    tidsets, items_by_tid = _index(db)
    if x not in tidsets:
        raise UnknownItemError(f"Item {x} does not occur in the database")
    return _coverage(tidsets, items_by_tid, x)



def coverage_bounds(db: Database, stats: Mapping[int, ItemStat], cap: int) -> Dict[frozenset, int]:
    """
    Lower bounds riu(x) + sum(miu(S)) * Sup(x) keyed by the itemset {x} | S,
    S a non-empty subset of C(x); at most ``cap`` subsets per item, smallest first.
    """
    if cap < 1:
        raise ValueError(f"cov cap must be >= 1, got {cap}")

    tidsets, items_by_tid = _index(db)
    bounds: Dict[frozenset, int] = {}
    for x in sorted(tidsets):
        covered = sorted(_coverage(tidsets, items_by_tid, x))
        if not covered:
            continue
        stat = stats[x]
        subsets = itertools.chain.from_iterable(
            itertools.combinations(covered, size) for size in range(1, len(covered) + 1)
        )
        for subset in itertools.islice(subsets, cap):
            lb = stat.riu + sum(stats[y].miu for y in subset) * stat.support
            key = frozenset(subset) | {x}
            if lb > bounds.get(key, 0):
                bounds[key] = lb
    return bounds


def cov_raise(db: Database, stats: Mapping[int, ItemStat], k: int, cap: int,
              state: ThresholdState) -> ThresholdState:
    return raise_to_kth(coverage_bounds(db, stats, cap).values(), k, state, "cov")


# ---------------------- candidate heap (RUC) ----------------------
@dataclass
class _HeapEntry:
    utility: int
    tie: Hashable
    itemset: Itemset

    def __lt__(self, other: "_HeapEntry") -> bool:
        # "less" means worse: lower utility, or equal utility and larger tie key
        return (self.utility, other.tie) < (other.utility, self.tie)


class TopKHeap:
    """
    Bounded min-heap of the best K (itemset, utility) candidates.

    Ties at equal utility keep the itemset with the smaller ``tie_key``.
    """

    def __init__(self, capacity: int, floor: int = 0,
                 tie_key: Optional[Callable[[Itemset], Hashable]] = None):
        if capacity < 1:
            raise ValueError(f"Heap capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.floor = floor
        self.tie_key = tie_key or (lambda itemset: tuple(sorted(itemset)))
        self._heap: List[_HeapEntry] = []
        self._members: Set[Itemset] = set()

    def __len__(self) -> int:
        return len(self._heap)

    def __contains__(self, itemset: Itemset) -> bool:
        return itemset in self._members

    @property
    def full(self) -> bool:
        return len(self._heap) >= self.capacity

    @property
    def current_delta(self) -> int:
        if self.full:
            return max(self.floor, self._heap[0].utility)
        return self.floor

    def offer(self, itemset: Itemset, utility: int) -> int:
        if utility < self.current_delta or itemset in self._members:
            return self.current_delta
        heapq.heappush(self._heap, _HeapEntry(utility, self.tie_key(itemset), itemset))
        self._members.add(itemset)
        if len(self._heap) > self.capacity:
            evicted = heapq.heappop(self._heap)
            self._members.discard(evicted.itemset)
        return self.current_delta

    def items(self) -> List[Tuple[Itemset, int]]:
        """Best first"""
        return [(entry.itemset, entry.utility) for entry in sorted(self._heap, reverse=True)]


def heap_offer(heap: TopKHeap, itemset: Itemset, u: int) -> int:
    return heap.offer(itemset, u)
