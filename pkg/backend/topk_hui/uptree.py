#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
UP-Tree construction and the tree-based NU / MD strategies
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .core import Database, ItemStat
from .utils.logger import get_logger

logger = get_logger(__name__)


class UPNode:
    __slots__ = ("item", "support", "node_utility", "children", "node_link", "parent")

    def __init__(self, item: Optional[int], parent: Optional["UPNode"] = None):
        self.item = item
        self.support = 0
        self.node_utility = 0
        self.children: Dict[int, "UPNode"] = {}
        self.node_link: Optional["UPNode"] = None
        self.parent = parent

    def __repr__(self) -> str:
        return f"UPNode(item={self.item}, support={self.support}, node_utility={self.node_utility})"


@dataclass
class HeaderEntry:
    item: int
    twu: int
    head: Optional[UPNode] = None
    tail: Optional[UPNode] = None

    def link(self, node: UPNode) -> None:
        if self.tail is None:
            self.head = node
        else:
            self.tail.node_link = node
        self.tail = node

    def chain(self) -> Iterator[UPNode]:
        node = self.head
        while node is not None:
            yield node
            node = node.node_link


class UPTree:
    """Item-less root plus a header table in TWU-descending order"""

    def __init__(self, header: List[HeaderEntry]):
        self.root = UPNode(None)
        self.header: Dict[int, HeaderEntry] = {entry.item: entry for entry in header}
        self.rank = {entry.item: pos for pos, entry in enumerate(header)}
        self.node_count = 0

    def insert(self, path: List[Tuple[int, int]]) -> None:
        """Insert one transaction's (item, utility) path, already in header order"""
        node = self.root
        prefix_utility = 0
        for item, utility in path:
            prefix_utility += utility
            child = node.children.get(item)
            if child is None:
                child = node.children[item] = UPNode(item, parent=node)
                self.header[item].link(child)
                self.node_count += 1
            child.support += 1
            child.node_utility += prefix_utility
            node = child

    def nodes(self) -> Iterator[UPNode]:
        """Every non-root node, depth first"""
        stack = list(reversed(list(self.root.children.values())))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(list(node.children.values())))


def build_up_tree(db: Database, stats: Mapping[int, ItemStat], delta: int) -> UPTree:
    """
    Build the UP-Tree of db after discarding items with TWU below delta.

    Args:
        db: Database to insert
        stats: Item statistics of the same database
        delta: Current minimum utility threshold

    Returns:
        UPTree; each node accumulates the path-prefix utility of every
        transaction passing through it
    """
    kept = sorted((item for item, stat in stats.items() if stat.twu >= delta),
                  key=lambda item: (-stats[item].twu, item))
    tree = UPTree([HeaderEntry(item, stats[item].twu) for item in kept])

    for t in db.transactions:
        path = [(item, u) for item, u in zip(t.items, t.utils) if item in tree.rank]
        path.sort(key=lambda pair: tree.rank[pair[0]])
        if path:
            tree.insert(path)

    logger.debug(f"UP-Tree built: {tree.node_count} nodes, {len(kept)} header items")
    return tree


def node_utility_values(tree: UPTree) -> List[int]:
    return [node.node_utility for node in tree.nodes()]


def md_pairs(tree: UPTree, stats: Mapping[int, ItemStat]) -> Dict[Tuple[int, int], int]:
    """
    (miu(a) + miu(b)) * sup_ab for every root child a and item b below it,
    sup_ab being the total support of b's nodes inside a's subtree.
    """
    pairs: Dict[Tuple[int, int], int] = {}
    for a, child in tree.root.children.items():
        support = Counter()
        stack = list(child.children.values())
        while stack:
            node = stack.pop()
            support[node.item] += node.support
            stack.extend(node.children.values())
        for b, sup_ab in support.items():
            pairs[(a, b)] = (stats[a].miu + stats[b].miu) * sup_ab
    return pairs


def md_pair_values(tree: UPTree, stats: Mapping[int, ItemStat]) -> List[int]:
    return list(md_pairs(tree, stats).values())


def dump_tree(tree: UPTree, labels: Optional[List[int]] = None) -> str:
    def name(item: int) -> str:
        return str(labels[item]) if labels is not None else str(item)

    lines = ["root"]

    def walk(node: UPNode, depth: int) -> None:
        for child in node.children.values():
            lines.append(f"{'  ' * depth}{name(child.item)} ({child.support}, {child.node_utility})")
            walk(child, depth + 1)

    walk(tree.root, 1)
    return "\n".join(lines)
