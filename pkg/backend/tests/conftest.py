import itertools
import logging
import os

import pytest

from topk_hui.core import Database, itemset_utility
from topk_hui.ingest import RandomDbSpec, gen_random_db, load_dataset
from topk_hui.utils.logger import ROOT_LOGGER_NAME

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
SAMPLE_PATH = os.path.join(FIXTURES_DIR, "sample_db.txt")
PROFITS_PATH = os.path.join(FIXTURES_DIR, "sample_profits.txt")
LETTERS = "abcdefg"

# Every itemset with utility >= 59 on the sample database, best first
SAMPLE_HUIS = [
    ("aec", 80), ("fdaec", 78), ("fdac", 73), ("fdae", 73), ("faec", 69), ("daec", 68),
    ("fda", 67), ("ae", 67), ("dae", 63), ("fae", 62), ("dac", 60), ("ac", 59),
]


def letters_to_labels(letters: str) -> tuple:
    return tuple(sorted(LETTERS.index(ch) + 1 for ch in letters))


def expected_topk(k: int) -> list:
    return [(letters_to_labels(letters), u) for letters, u in SAMPLE_HUIS[:k]]


@pytest.fixture(autouse=True)
def reset_logging():
    """The CLI and the service set levels and handlers on the miner namespace"""
    yield
    logger = logging.getLogger(ROOT_LOGGER_NAME)
    for handler in logger.handlers:
        handler.close()
    logger.handlers.clear()
    logger.setLevel(logging.NOTSET)


@pytest.fixture(scope="session")
def sample_path():
    return SAMPLE_PATH


@pytest.fixture(scope="session")
def profits_path():
    return PROFITS_PATH


@pytest.fixture(scope="session")
def sample_db() -> Database:
    return load_dataset(SAMPLE_PATH)


@pytest.fixture
def ids(sample_db):
    """ids("aec") -> dense item ids of the lettered items on the sample database"""
    def _ids(letters: str) -> tuple:
        return sample_db.ids_of(LETTERS.index(ch) + 1 for ch in letters)
    return _ids


@pytest.fixture
def by_letter(sample_db):
    """Re-key an item-id mapping by letter"""
    def _by_letter(mapping: dict) -> dict:
        return {LETTERS[sample_db.item_map.label(item) - 1]: value for item, value in mapping.items()}
    return _by_letter


def random_db(seed: int, **bounds) -> Database:
    spec = {"seed": seed, "max_items": 12, "max_trans": 20, "max_len": 6, "util_range": (1, 10)}
    spec.update(bounds)
    return gen_random_db(RandomDbSpec(**spec))


def brute_force_utilities(db: Database) -> dict:
    """Sorted label tuple -> utility for every itemset with a non-empty cover"""
    items = db.present_items()
    found = {}
    for size in range(1, len(items) + 1):
        for itemset in itertools.combinations(items, size):
            u = itemset_utility(db, itemset)
            if u > 0:
                found[db.labels_of(itemset)] = u
    return found
