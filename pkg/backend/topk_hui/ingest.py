#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dataset ingest for the top-k high-utility itemset miner
Parses and emits the utility-transaction text format
(``i1 i2 ... iN:TU:u1 u2 ... uN``), summarizes dataset characteristics
and generates seeded random databases for property tests.
"""

import random
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from .core import Database, ItemMap, Transaction
from .utils.logger import get_logger

logger = get_logger(__name__)

COMMENT_PREFIXES = ("#", "%", "@")

TextInput = Union[bytes, str]


class DatasetParseError(ValueError):
    """Malformed dataset line; ``line_no`` is 1-based within the input"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{prefix}{message}")


class DatasetIntegrityError(DatasetParseError):
    """Declared transaction utility disagrees with the sum of item utilities"""


class EmptyDatabaseError(ValueError):
    pass


def _as_text(data: TextInput) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("ascii")
        except UnicodeDecodeError as e:
            raise DatasetParseError(f"non-ASCII byte at offset {e.start}") from None
    if not data.isascii():
        pos = next(i for i, ch in enumerate(data) if not ch.isascii())
        raise DatasetParseError(f"non-ASCII character {data[pos]!r} at offset {pos}", data.count("\n", 0, pos) + 1)
    return data


def _is_uint(token: str) -> bool:
    # str.isdigit alone accepts superscripts and other Unicode digits
    return token.isascii() and token.isdigit()


def _parse_ints(section: str, what: str, line_no: int) -> List[int]:
    tokens = section.split()
    if not tokens:
        raise DatasetParseError(f"empty {what} section", line_no)
    values = []
    for token in tokens:
        if not _is_uint(token):
            raise DatasetParseError(f"invalid {what} token {token!r}", line_no)
        values.append(int(token))
    return values


def _parse_line(line: str, line_no: int, strict: bool) -> Tuple[List[int], List[int], int]:
    parts = line.split(":")
    if len(parts) != 3:
        raise DatasetParseError(f"expected 3 ':'-separated sections, found {len(parts)}", line_no)

    labels = _parse_ints(parts[0], "item", line_no)
    declared = _parse_ints(parts[1], "transaction utility", line_no)
    utils = _parse_ints(parts[2], "utility", line_no)

    if len(declared) != 1:
        raise DatasetParseError("transaction utility section must hold one integer", line_no)
    if len(labels) != len(utils):
        raise DatasetParseError(f"{len(labels)} items but {len(utils)} utilities", line_no)
    if len(set(labels)) != len(labels):
        raise DatasetParseError("duplicate item within transaction", line_no)
    if any(u < 1 for u in utils):
        raise DatasetParseError("item utilities must be positive", line_no)

    tu = declared[0]
    if tu != sum(utils):
        if strict:
            raise DatasetIntegrityError(f"declared TU {tu} != sum of utilities {sum(utils)}", line_no)
        logger.warning(f"line {line_no}: repairing TU {tu} -> {sum(utils)}")
        tu = sum(utils)
    return labels, utils, tu


def parse_dataset(data: TextInput, strict: bool = True) -> Database:
    """
    Parse a utility-transaction database.

    Args:
        data: File contents (bytes or str); LF or CRLF line endings
        strict: When False, TU mismatches are repaired instead of fatal

    Returns:
        Database with dense item ids in first-seen order and tids 1..n
    """
    text = _as_text(data)
    ids: Dict[int, int] = {}
    labels_seen: List[int] = []
    transactions: List[Transaction] = []

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue

        labels, utils, tu = _parse_line(line, line_no, strict)
        source = []
        for label in labels:
            if label not in ids:
                ids[label] = len(labels_seen)
                labels_seen.append(label)
            source.append(ids[label])

        pairs = sorted(zip(source, utils))
        transactions.append(Transaction(
            tid=len(transactions) + 1,
            items=tuple(item for item, _ in pairs),
            utils=tuple(u for _, u in pairs),
            tu=tu,
            source_items=tuple(source),
        ))

    logger.debug(f"Parsed {len(transactions)} transactions over {len(labels_seen)} items")
    return Database(tuple(transactions), ItemMap(tuple(labels_seen)))


def load_dataset(path: str, strict: bool = True) -> Database:
    with open(path, "rb") as fh:
        data = fh.read()
    logger.info(f"Loading dataset from {path} ({len(data)} bytes)")
    return parse_dataset(data, strict=strict)


def write_dataset(db: Database) -> bytes:
    """Emit db in the text format; items in source order, LF-separated, no trailing newline"""
    lines = []
    for t in db.transactions:
        umap = t.util_map
        labels = " ".join(str(db.item_map.label(item)) for item in t.source_items)
        utils = " ".join(str(umap[item]) for item in t.source_items)
        lines.append(f"{labels}:{t.tu}:{utils}")
    return "\n".join(lines).encode("ascii")


def parse_profits(data: TextInput) -> Dict[int, int]:
    """
    Parse an external-utility table, one ``label:profit`` (or ``label profit``)
    entry per line.
    """
    profits: Dict[int, int] = {}
    for line_no, raw in enumerate(_as_text(data).split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.replace(":", " ").split()
        if len(tokens) != 2 or not all(_is_uint(tok) for tok in tokens):
            raise DatasetParseError(f"expected 'label:profit', got {line!r}", line_no)
        label, profit = int(tokens[0]), int(tokens[1])
        if profit < 1:
            raise DatasetParseError("profits must be positive", line_no)
        if label in profits:
            raise DatasetParseError(f"duplicate profit for item {label}", line_no)
        profits[label] = profit
    return profits


@dataclass(frozen=True)
class DatasetSummary:
    trans_count: int
    item_count: int
    avg_len: float
    density_pct: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def dataset_summary(db: Database) -> DatasetSummary:
    if db.n == 0:
        raise EmptyDatabaseError("Cannot summarize an empty database")
    item_count = len(db.present_items())
    avg_len = sum(len(t) for t in db.transactions) / db.n
    return DatasetSummary(
        trans_count=db.n,
        item_count=item_count,
        avg_len=avg_len,
        density_pct=100.0 * avg_len / item_count,
    )


class RandomDbSpec(BaseModel):
    """Bounds for a seeded random database"""
    seed: int = Field(0, description="Random seed")
    max_items: int = Field(12, ge=1, description="Item labels drawn from 1..max_items")
    max_trans: int = Field(20, ge=1, description="Upper bound on the transaction count")
    max_len: int = Field(5, ge=1, description="Upper bound on items per transaction")
    util_range: Tuple[int, int] = Field((1, 10), description="Inclusive utility bounds")

    @model_validator(mode="after")
    def _check_bounds(self):
        low, high = self.util_range
        if low < 1 or high < low:
            raise ValueError(f"util_range must satisfy 1 <= low <= high, got {self.util_range}")
        if self.max_len > self.max_items:
            raise ValueError("max_len must not exceed max_items")
        return self


def gen_random_db(spec: RandomDbSpec) -> Database:
    rng = random.Random(spec.seed)
    low, high = spec.util_range
    lines = []
    for _ in range(rng.randint(1, spec.max_trans)):
        length = rng.randint(1, spec.max_len)
        labels = rng.sample(range(1, spec.max_items + 1), length)
        utils = [rng.randint(low, high) for _ in labels]
        lines.append(f"{' '.join(map(str, labels))}:{sum(utils)}:{' '.join(map(str, utils))}")
    return parse_dataset("\n".join(lines))


class DatasetSource:
    """
    Abstract base class for dataset sources
    """

    def load(self) -> Database:
        """Load the database"""
        raise NotImplementedError


class FileDatasetSource(DatasetSource):
    def __init__(self, file_path: str, strict: bool = True):
        self.file_path = file_path
        self.strict = strict

    def load(self) -> Database:
        return load_dataset(self.file_path, strict=self.strict)


class TextDatasetSource(DatasetSource):
    """Dataset supplied inline (HTTP request bodies, tests)"""

    def __init__(self, text: TextInput, strict: bool = True):
        self.text = text
        self.strict = strict

    def load(self) -> Database:
        return parse_dataset(self.text, strict=self.strict)


def create_dataset_source(source_type: str, **kwargs) -> DatasetSource:
    """
    Factory function to create the appropriate dataset source

    Args:
        source_type: 'file' or 'text'
        **kwargs: file_path / text, plus optional strict

    Returns:
        DatasetSource instance
    """
    strict = kwargs.get("strict", True)
    if source_type.lower() == "file":
        if "file_path" not in kwargs:
            raise ValueError("file_path is required for file dataset source")
        return FileDatasetSource(kwargs["file_path"], strict=strict)

    elif source_type.lower() in ["text", "inline"]:
        if "text" not in kwargs:
            raise ValueError("text is required for inline dataset source")
        return TextDatasetSource(kwargs["text"], strict=strict)

    else:
        raise ValueError(f"Unsupported source type: {source_type}")
