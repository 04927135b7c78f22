"""Dataset parsing, emission, summaries and random generation"""

import pytest
from pydantic import ValidationError

from topk_hui.ingest import (DatasetIntegrityError, DatasetParseError, EmptyDatabaseError, RandomDbSpec,
                             create_dataset_source, dataset_summary, gen_random_db, load_dataset,
                             parse_dataset, parse_profits, write_dataset)


def test_load_sample(sample_db):
    assert sample_db.n == 8
    assert len(sample_db.item_map) == 7
    # dense ids follow first appearance: 1 3 4 5 6 7 2
    assert sample_db.item_map.labels == (1, 3, 4, 5, 6, 7, 2)
    assert [t.tid for t in sample_db] == list(range(1, 9))
    first = sample_db.transactions[0]
    assert first.tu == 16
    assert sample_db.labels_of(first.items) == (1, 3, 4, 5, 6)


def test_items_are_sorted_but_source_order_is_kept():
    db = parse_dataset("5 2 9:6:1 2 3")
    t = db.transactions[0]
    assert t.items == (0, 1, 2)
    assert [db.item_map.label(item) for item in t.source_items] == [5, 2, 9]
    assert t.util_map == {0: 1, 1: 2, 2: 3}


def test_comments_blank_lines_and_crlf():
    data = b"# header\r\n%meta\r\n@attr\r\n\r\n1 2:3:1 2\r\n2 3:5:2 3\r\n"
    db = parse_dataset(data)
    assert db.n == 2
    assert db.item_map.labels == (1, 2, 3)


@pytest.mark.parametrize("line, fragment", [
    ("1 2:3", "3 ':'-separated sections"),
    ("1 2:3:1", "2 items but 1 utilities"),
    ("1 x:3:1 2", "invalid item token"),
    ("1 1:2:1 1", "duplicate item"),
    ("1 2:2:2 0", "positive"),
    ("1 2:3 4:1 2", "one integer"),
    ("1 -2:3:1 2", "invalid item token"),
])
def test_malformed_lines_report_line_number(line, fragment):
    with pytest.raises(DatasetParseError) as excinfo:
        parse_dataset(f"1:1:1\n{line}\n")
    assert excinfo.value.line_no == 2
    assert str(excinfo.value).startswith("line 2: ")
    assert fragment in str(excinfo.value)


def test_tu_mismatch_strict_and_repaired(caplog):
    with pytest.raises(DatasetIntegrityError) as excinfo:
        parse_dataset("1 2:4:1 2")
    assert excinfo.value.line_no == 1

    db = parse_dataset("1 2:4:1 2", strict=False)
    assert db.transactions[0].tu == 3
    assert "repairing TU 4 -> 3" in caplog.text


def test_non_ascii_bytes_are_rejected():
    with pytest.raises(DatasetParseError):
        parse_dataset("1 2:3:1 2\n".encode("ascii") + "é".encode("utf-8"))


def test_empty_input_gives_empty_database():
    db = parse_dataset("# nothing here\n")
    assert db.n == 0
    with pytest.raises(EmptyDatabaseError):
        dataset_summary(db)


def test_write_dataset_reproduces_canonical_input(sample_path, sample_db):
    with open(sample_path, "rb") as fh:
        lines = [line for line in fh.read().decode("ascii").splitlines() if not line.startswith("#")]
    assert write_dataset(sample_db) == "\n".join(lines).encode("ascii")


def test_summary_of_sample(sample_db):
    summary = dataset_summary(sample_db)
    assert summary.trans_count == 8
    assert summary.item_count == 7
    assert summary.avg_len == pytest.approx(4.75)
    assert summary.density_pct == pytest.approx(100 * 4.75 / 7)


def _synthetic(trans_count: int, length: int, item_count: int) -> str:
    """Fixed-length windows sliding over item_count labels"""
    lines = []
    for tid in range(trans_count):
        labels = sorted((tid + step) % item_count + 1 for step in range(length))
        lines.append(f"{' '.join(map(str, labels))}:{length}:{' '.join('1' * length)}")
    return "\n".join(lines)


def test_summary_matches_mushroom_shape():
    db = parse_dataset(_synthetic(8124, 23, 119))
    summary = dataset_summary(db)
    assert summary.trans_count == 8124
    assert summary.item_count == 119
    assert summary.avg_len == pytest.approx(23.0)
    assert summary.density_pct == pytest.approx(19.3277, abs=1e-4)


def test_summary_matches_chess_shape():
    db = parse_dataset(_synthetic(3196, 37, 75))
    summary = dataset_summary(db)
    assert summary.item_count == 75
    assert summary.density_pct == pytest.approx(49.3333, abs=1e-4)


def test_parse_profits(profits_path):
    with open(profits_path, "rb") as fh:
        profits = parse_profits(fh.read())
    assert profits == {1: 5, 2: 2, 3: 1, 4: 2, 5: 3, 6: 1, 7: 1}
    assert parse_profits("3 4\n") == {3: 4}
    with pytest.raises(DatasetParseError):
        parse_profits("1:5\n1:6\n")
    with pytest.raises(DatasetParseError):
        parse_profits("1:0\n")


def test_random_db_is_seeded():
    spec = RandomDbSpec(seed=7, max_items=9, max_trans=15, max_len=4)
    first, second = gen_random_db(spec), gen_random_db(spec)
    assert write_dataset(first) == write_dataset(second)
    assert 1 <= first.n <= 15
    assert all(1 <= len(t) <= 4 for t in first)
    assert all(1 <= label <= 9 for label in first.item_map.labels)
    assert all(1 <= u <= 10 for t in first for u in t.utils)


def test_random_db_spec_bounds():
    with pytest.raises(ValidationError):
        RandomDbSpec(util_range=(0, 5))
    with pytest.raises(ValidationError):
        RandomDbSpec(max_items=3, max_len=4)


def test_dataset_sources(sample_path):
    from_file = create_dataset_source("file", file_path=sample_path).load()
    from_text = create_dataset_source("inline", text="1 2:3:1 2").load()
    assert from_file == load_dataset(sample_path)
    assert from_text.n == 1
    with pytest.raises(ValueError, match="Unsupported source type"):
        create_dataset_source("sheet")
    with pytest.raises(ValueError):
        create_dataset_source("file")


@pytest.mark.parametrize("data, line_no", [
    ("1 ²:3:1 2", 1),
    ("1:1:1\n1 2:3:1 ٣", 2),
    ("# café\n1:1:1", 1),
])
def test_non_ascii_text_is_a_parse_error(data, line_no):
    with pytest.raises(DatasetParseError) as excinfo:
        parse_dataset(data)
    assert excinfo.value.line_no == line_no
    assert "non-ASCII" in str(excinfo.value)


def test_unicode_digits_in_profits_are_rejected():
    with pytest.raises(DatasetParseError):
        parse_profits("1:²\n")


@pytest.mark.parametrize("seed", range(50))
def test_write_then_parse_round_trips(seed):
    db = gen_random_db(RandomDbSpec(seed=seed, max_items=12, max_trans=20, max_len=6))
    again = parse_dataset(write_dataset(db))
    assert again == db
    assert write_dataset(again) == write_dataset(db)


@pytest.mark.parametrize("seed", range(10))
def test_random_db_with_max_len_one_holds_singletons(seed):
    db = gen_random_db(RandomDbSpec(seed=seed, max_len=1))
    assert db.n >= 1
    assert all(len(t) == 1 and t.tu == t.utils[0] for t in db)
