#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Utility lists
Vertical (tid, iutil, rutil) representation of itemsets, the
prefix-corrected join with optional early abandonment, Z-element
accounting and the EUCST / CUDM pair structures.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Set

from .core import Database, ItemOrder, Itemset
from .strategies import MatrixKind, SparsePairMatrix
from .utils.logger import get_logger

logger = get_logger(__name__)


class JoinOrderError(ValueError):
    pass


class ULElement(NamedTuple):
    tid: int
    iutil: int
    rutil: int


@dataclass
class UtilityList:
    """Elements are stored column-wise; ``elements`` rebuilds the triples"""
    itemset: Itemset
    tids: List[int] = field(default_factory=list)
    iutils: List[int] = field(default_factory=list)
    rutils: List[int] = field(default_factory=list)
    sum_iutil: int = 0
    sum_rutil: int = 0

    def append(self, tid: int, iutil: int, rutil: int) -> None:
        self.tids.append(tid)
        self.iutils.append(iutil)
        self.rutils.append(rutil)
        self.sum_iutil += iutil
        self.sum_rutil += rutil

    def __len__(self) -> int:
        return len(self.tids)

    @property
    def last_item(self) -> int:
        return self.itemset[-1]

    @property
    def estimate(self) -> int:
        return self.sum_iutil + self.sum_rutil

    @property
    def elements(self) -> List[ULElement]:
        return [ULElement(*triple) for triple in zip(self.tids, self.iutils, self.rutils)]


def build_1item_ulists(db: Database, order: Optional[ItemOrder] = None) -> Dict[int, UtilityList]:
    """
    Build one utility list per item present in db.

    Args:
        db: Database (normally already reordered)
        order: Mining order; defaults to the order db was reordered under

    Returns:
        Mapping item -> UtilityList, iterated in mining order
    """
    order = order or db.order
    if order is None:
        raise JoinOrderError("A mining order is required to compute remaining utilities")

    ulists: Dict[int, UtilityList] = {}
    for t in db.transactions:
        pairs = sorted(zip(t.items, t.utils), key=lambda pair: order.key(pair[0]))
        remaining = 0
        for item, u in reversed(pairs):
            ul = ulists.get(item)
            if ul is None:
                ul = ulists[item] = UtilityList((item,))
            ul.append(t.tid, u, remaining)
            remaining += u

    return {item: ulists[item] for item in order.sequence if item in ulists}


def tidset(ul: UtilityList) -> Set[int]:
    return set(ul.tids)


def nzeu(ul: UtilityList) -> int:
    """Sum of iutils over elements whose rutil is non-zero"""
    return sum(iu for iu, ru in zip(ul.iutils, ul.rutils) if ru > 0)


def _check_join(prefix: Optional[UtilityList], x: UtilityList, y: UtilityList,
                order: Optional[ItemOrder]) -> None:
    if len(x.itemset) != len(y.itemset) or x.itemset[:-1] != y.itemset[:-1]:
        raise JoinOrderError(f"{x.itemset} and {y.itemset} do not share a prefix")
    if x.last_item == y.last_item:
        raise JoinOrderError(f"Cannot join {x.itemset} with itself")
    if prefix is None:
        if len(x.itemset) != 1:
            raise JoinOrderError(f"Joining {x.itemset} requires its prefix list")
    elif prefix.itemset != x.itemset[:-1]:
        raise JoinOrderError(f"Prefix {prefix.itemset} does not match {x.itemset}")
    if order is not None and order.key(x.last_item) >= order.key(y.last_item):
        raise JoinOrderError(f"{x.itemset} must precede {y.itemset} in the mining order")


def join_ulists(prefix: Optional[UtilityList], x: UtilityList, y: UtilityList, *,
                order: Optional[ItemOrder] = None, early_abandon: bool = False,
                delta: int = 0) -> Optional[UtilityList]:
    """
    Construct the utility list of x's itemset extended by y's last item.

    Args:
        prefix: List of the shared prefix, None for 1-item operands
        x: Left operand
        y: Right operand, later in the mining order
        order: When given, the operand order is validated against it
        early_abandon: Stop as soon as x's surviving mass drops below delta
        delta: Threshold used by early abandonment

    Returns:
        The joined list, or None when abandoned
    """
    _check_join(prefix, x, y, order)

    joined = UtilityList(x.itemset + (y.last_item,))
    xt, xi, xr = x.tids, x.iutils, x.rutils
    yt, yi, yr = y.tids, y.iutils, y.rutils
    ny = len(yt)
    remaining = x.sum_iutil + x.sum_rutil
    j = 0
    p = 0

    for i, tid in enumerate(xt):
        while j < ny and yt[j] < tid:
            j += 1
        if j < ny and yt[j] == tid:
            iutil = xi[i] + yi[j]
            if prefix is not None:
                while prefix.tids[p] < tid:
                    p += 1
                iutil -= prefix.iutils[p]
            joined.append(tid, iutil, yr[j])
            j += 1
        elif early_abandon:
            remaining -= xi[i] + xr[i]
            if remaining < delta:
                return None

    return joined


def build_eucst(db: Database) -> SparsePairMatrix:
    """Pair TWU: every co-occurring pair accumulates the transaction's TU"""
    matrix = SparsePairMatrix(MatrixKind.EUCST)
    for t in db.transactions:
        for p, q in itertools.combinations(t.items, 2):
            matrix.add(p, q, t.tu)
    return matrix


def build_cudm(db: Database) -> SparsePairMatrix:
    """Exact pair utilities"""
    matrix = SparsePairMatrix(MatrixKind.CUDM)
    for t in db.transactions:
        for (p, up), (q, uq) in itertools.combinations(zip(t.items, t.utils), 2):
            matrix.add(p, q, up + uq)
    return matrix


def format_ulist(ul: UtilityList, labels: Optional[Sequence[int]] = None) -> str:
    names = [str(labels[item]) if labels is not None else str(item) for item in ul.itemset]
    lines = [f"UL({' '.join(names)}) U={ul.sum_iutil} RU={ul.sum_rutil}", "  tid iutil rutil"]
    lines.extend(f"  {e.tid} {e.iutil} {e.rutil}" for e in ul.elements)
    return "\n".join(lines)
