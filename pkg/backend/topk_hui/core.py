#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Core domain model for top-k high-utility itemset mining

Holds the integer-encoded transaction database, per-item statistics and
every scalar utility computation the miners and strategies build on.
Utilities are exact integers (external profit already multiplied in).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .utils.logger import get_logger

logger = get_logger(__name__)

Itemset = Tuple[int, ...]


class UnknownItemError(ValueError):
    """Raised when a query names an item the database or statistics do not know"""


@dataclass(frozen=True)
class ItemMap:
    """Bijection between dense item ids and original item labels"""
    labels: Tuple[int, ...]
    _ids: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ids = {label: item_id for item_id, label in enumerate(self.labels)}
        if len(ids) != len(self.labels):
            raise ValueError("Item labels must be distinct")
        object.__setattr__(self, "_ids", ids)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, item_id: int) -> bool:
        return 0 <= item_id < len(self.labels)

    def label(self, item_id: int) -> int:
        if item_id not in self:
            raise UnknownItemError(f"Unknown item id: {item_id}")
        return self.labels[item_id]

    def id_of(self, label: int) -> int:
        try:
            return self._ids[label]
        except KeyError:
            raise UnknownItemError(f"Unknown item label: {label}") from None


@dataclass(frozen=True)
class Transaction:
    """
    One transaction: parallel item/utility tuples plus cached TU.

    ``items`` follow the database order (ascending id after ingest, the
    mining order after reorder_database). ``source_items`` keeps the order
    the items were written in the input line.
    """
    tid: int
    items: Tuple[int, ...]
    utils: Tuple[int, ...]
    tu: int
    source_items: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.items) != len(self.utils):
            raise ValueError(f"Transaction {self.tid}: {len(self.items)} items but {len(self.utils)} utilities")
        if not self.source_items:
            object.__setattr__(self, "source_items", self.items)

    def __len__(self) -> int:
        return len(self.items)

    @cached_property
    def util_map(self) -> Dict[int, int]:
        return dict(zip(self.items, self.utils))


@dataclass(frozen=True)
class Database:
    transactions: Tuple[Transaction, ...]
    item_map: ItemMap
    order: Optional["ItemOrder"] = None

    @property
    def n(self) -> int:
        return len(self.transactions)

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    def present_items(self) -> List[int]:
        """Ids of items occurring in at least one transaction, ascending"""
        seen = set()
        for t in self.transactions:
            seen.update(t.items)
        return sorted(seen)

    def labels_of(self, itemset: Iterable[int]) -> Tuple[int, ...]:
        return tuple(sorted(self.item_map.label(i) for i in itemset))

    def ids_of(self, labels: Iterable[int]) -> Itemset:
        return tuple(self.item_map.id_of(label) for label in labels)


@dataclass(frozen=True)
class ItemStat:
    twu: int
    riu: int
    support: int
    miu: int
    mau: int


ItemStats = Dict[int, ItemStat]


@dataclass(frozen=True)
class ItemOrder:
    """Total order over item ids; ``rank`` gives each item's position"""
    sequence: Tuple[int, ...]
    rank: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rank", {item: pos for pos, item in enumerate(self.sequence)})

    def __contains__(self, item: int) -> bool:
        return item in self.rank

    def __len__(self) -> int:
        return len(self.sequence)

    def key(self, item: int) -> int:
        try:
            return self.rank[item]
        except KeyError:
            raise UnknownItemError(f"Item {item} is not covered by the ordering") from None

    def sort(self, items: Iterable[int]) -> Itemset:
        return tuple(sorted(items, key=self.key))


def _check_known(db: Database, itemset: Iterable[int]) -> None:
    for item in itemset:
        if item not in db.item_map:
            raise UnknownItemError(f"Unknown item id: {item}")


def transaction_utility(t: Transaction) -> int:
    return sum(t.utils)


def itemset_utility_in(t: Transaction, itemset: Sequence[int]) -> int:
    """U(X, T): utility of X in one transaction, 0 when T does not contain X"""
    umap = t.util_map
    total = 0
    for item in itemset:
        u = umap.get(item)
        if u is None:
            return 0
        total += u
    return total


def itemset_utility(db: Database, itemset: Sequence[int]) -> int:
    """
    Exact utility of an itemset summed over its covering transactions.

    Args:
        db: Database to scan
        itemset: Item ids; the empty itemset has utility 0

    Returns:
        Total utility, 0 when no transaction contains the itemset
    """
    _check_known(db, itemset)
    if not itemset:
        return 0
    return sum(itemset_utility_in(t, itemset) for t in db.transactions)


def remaining_utility_in(t: Transaction, itemset: Sequence[int], order: ItemOrder) -> int:
    """RU(X, T): utilities of items ordered strictly after the last item of X"""
    umap = t.util_map
    if not itemset or any(item not in umap for item in itemset):
        return 0
    last = max(order.key(item) for item in itemset)
    return sum(u for item, u in zip(t.items, t.utils) if order.key(item) > last)


def remaining_utility(db: Database, itemset: Sequence[int], order: ItemOrder) -> int:
    _check_known(db, itemset)
    return sum(remaining_utility_in(t, itemset, order) for t in db.transactions)


def itemset_support(db: Database, itemset: Sequence[int]) -> int:
    _check_known(db, itemset)
    return sum(1 for t in db.transactions if all(item in t.util_map for item in itemset))


def itemset_twu(db: Database, itemset: Sequence[int]) -> int:
    _check_known(db, itemset)
    return sum(t.tu for t in db.transactions if all(item in t.util_map for item in itemset))


def compute_item_stats(db: Database) -> ItemStats:
    """
    One scan over the database collecting TWU, RIU, support, miu and mau.

    Args:
        db: Database to scan

    Returns:
        Mapping item id -> ItemStat for every item that occurs in db
    """
    twu: Dict[int, int] = {}
    riu: Dict[int, int] = {}
    support: Dict[int, int] = {}
    miu: Dict[int, int] = {}
    mau: Dict[int, int] = {}

    for t in db.transactions:
        for item, u in zip(t.items, t.utils):
            twu[item] = twu.get(item, 0) + t.tu
            riu[item] = riu.get(item, 0) + u
            support[item] = support.get(item, 0) + 1
            miu[item] = min(miu.get(item, u), u)
            mau[item] = max(mau.get(item, u), u)

    stats = {
        item: ItemStat(twu=twu[item], riu=riu[item], support=support[item], miu=miu[item], mau=mau[item])
        for item in sorted(twu)
    }
    logger.debug(f"Computed statistics for {len(stats)} items over {db.n} transactions")
    return stats


def _stat(stats: Mapping[int, ItemStat], item: int) -> ItemStat:
    try:
        return stats[item]
    except KeyError:
        raise UnknownItemError(f"No statistics for item {item}; it does not occur in the database") from None


def itemset_miu(stats: Mapping[int, ItemStat], itemset: Iterable[int], sup: int) -> int:
    return sum(_stat(stats, item).miu for item in itemset) * sup


def itemset_mau(stats: Mapping[int, ItemStat], itemset: Iterable[int], sup: int) -> int:
    return sum(_stat(stats, item).mau for item in itemset) * sup


def twu_order(stats: Mapping[int, ItemStat]) -> ItemOrder:
    """Ascending TWU, ties by ascending id"""
    return ItemOrder(tuple(sorted(stats, key=lambda item: (stats[item].twu, item))))


def label_order(db: Database) -> ItemOrder:
    """Order of ascending original labels over every known item"""
    return ItemOrder(tuple(sorted(range(len(db.item_map)), key=db.item_map.label)))


def apply_dgu(db: Database, stats: Mapping[int, ItemStat], delta: int) -> Database:
    """
    Drop every item whose TWU is below delta (single pass).

    Transaction utilities are recomputed over the surviving items and
    transactions left empty are dropped; tids are kept.
    """
    removed = {item for item, stat in stats.items() if stat.twu < delta}
    if not removed:
        return db

    transactions = []
    for t in db.transactions:
        kept = [(item, u) for item, u in zip(t.items, t.utils) if item not in removed]
        if not kept:
            continue
        items, utils = zip(*kept)
        transactions.append(Transaction(
            tid=t.tid,
            items=tuple(items),
            utils=tuple(utils),
            tu=sum(utils),
            source_items=tuple(item for item in t.source_items if item not in removed),
        ))

    logger.info(f"DGU at delta={delta} removed {len(removed)} items, "
                f"{db.n - len(transactions)} transactions emptied")
    return Database(tuple(transactions), db.item_map, db.order)


def reorder_database(db: Database, order: ItemOrder) -> Database:
    """Permute each transaction's items (and utilities) to ascend under order"""
    transactions = []
    for t in db.transactions:
        pairs = sorted(zip(t.items, t.utils), key=lambda pair: order.key(pair[0]))
        transactions.append(Transaction(
            tid=t.tid,
            items=tuple(item for item, _ in pairs),
            utils=tuple(u for _, u in pairs),
            tu=t.tu,
            source_items=t.source_items,
        ))
    return Database(tuple(transactions), db.item_map, order)
