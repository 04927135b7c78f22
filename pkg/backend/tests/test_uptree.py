"""UP-Tree construction and the NU / MD raisers"""

import pytest

from topk_hui.core import compute_item_stats
from topk_hui.strategies import ThresholdState, raise_to_kth
from topk_hui.uptree import build_up_tree, dump_tree, md_pair_values, md_pairs, node_utility_values


@pytest.fixture
def stats(sample_db):
    return compute_item_stats(sample_db)


@pytest.fixture
def tree(sample_db, stats):
    return build_up_tree(sample_db, stats, 0)


def test_root_has_single_child(tree, ids):
    (c,) = ids("c")
    assert list(tree.root.children) == [c]
    node = tree.root.children[c]
    assert (node.support, node.node_utility) == (8, 19)


def test_tree_size_and_header(tree, sample_db):
    assert tree.node_count == 17
    assert len(list(tree.nodes())) == 17
    assert [sample_db.item_map.label(item) for item in tree.header] == [3, 5, 1, 4, 6, 2, 7]


def test_header_links_cover_every_node(tree):
    linked = sum(1 for entry in tree.header.values() for _ in entry.chain())
    assert linked == tree.node_count
    for entry in tree.header.values():
        assert all(node.item == entry.item for node in entry.chain())


def test_support_is_conserved(tree, stats):
    for item, entry in tree.header.items():
        assert sum(node.support for node in entry.chain()) == stats[item].support


def test_nu_raise(tree):
    values = node_utility_values(tree)
    assert len(values) == 17
    assert raise_to_kth(values, 6, ThresholdState(), "nu").delta == 27


def test_md_pairs(tree, stats, ids, by_letter):
    pairs = md_pairs(tree, stats)
    (c,) = ids("c")
    assert {key[0] for key in pairs} == {c}
    assert by_letter({b: value for (_, b), value in pairs.items()}) == {
        "e": 28, "a": 36, "d": 15, "f": 10, "b": 15, "g": 6}
    assert sorted(md_pair_values(tree, stats), reverse=True) == [36, 28, 15, 15, 10, 6]


def test_delta_filters_low_twu_items(sample_db, stats, ids):
    tree = build_up_tree(sample_db, stats, 40)
    assert ids("g")[0] not in tree.header
    assert all(node.item != ids("g")[0] for node in tree.nodes())


def test_dump_tree(tree, sample_db):
    lines = dump_tree(tree, list(sample_db.item_map.labels)).splitlines()
    assert lines[0] == "root"
    assert lines[1] == "  3 (8, 19)"
    assert len(lines) == 18
