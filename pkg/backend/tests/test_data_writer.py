"""Result and report writers"""

import json

import pandas as pd
import pytest

from topk_hui.data_writer import (RUN_REPORT_COLUMNS, CsvReportWriter, ExcelReportWriter, JsonReportWriter,
                                  audit_sheet_name, create_report_writer, create_result_writer)
from topk_hui.miners import tko_mine


@pytest.fixture
def result(sample_db):
    return tko_mine(sample_db, 2)


@pytest.fixture
def report_rows():
    rows = [
        {"dataset": "sample", "algo": "tko", "k": 3, "runtime_ms": 1.5, "candidates": 40, "joins": 30,
         "peak_mem_bytes": 0, "delta_final": 73, "topk_size": 3},
        {"dataset": "absent", "algo": "tko", "k": 3},
    ]
    return pd.DataFrame(rows, columns=RUN_REPORT_COLUMNS)


def test_text_writer(result):
    text = create_result_writer("text").render(result, include_stats=True, include_audit=True)
    lines = text.splitlines()
    assert lines[:2] == ["1 3 5 #UTIL: 80", "1 3 4 5 6 #UTIL: 78"]
    assert "# delta_final: 78" in lines
    assert any(line.startswith("# candidates_visited: ") for line in lines)
    assert "# audit: initial 0 -> 0" in lines


def test_json_writer_plain_and_enveloped(result):
    writer = create_result_writer("json")
    assert json.loads(writer.render(result)) == [
        {"itemset": [1, 3, 5], "utility": 80},
        {"itemset": [1, 3, 4, 5, 6], "utility": 78},
    ]
    payload = json.loads(writer.render(result, include_audit=True))
    assert payload["k"] == 2
    assert "stats" not in payload
    assert payload["audit"][0] == {"strategy": "initial", "old_delta": 0, "new_delta": 0}


def test_csv_writer(result):
    text = create_result_writer("csv").render(result, include_stats=True)
    lines = text.splitlines()
    assert lines[:3] == ["rank,itemset,utility", "1,1 3 5,80", "2,1 3 4 5 6,78"]
    assert "# delta_final=78" in lines


def test_writer_to_file_and_stdout(result, tmp_path, capsys):
    writer = create_result_writer("txt")
    out = tmp_path / "top.txt"
    writer.write(result, str(out))
    assert out.read_text(encoding="utf-8") == "1 3 5 #UTIL: 80\n1 3 4 5 6 #UTIL: 78\n"
    writer.write(result)
    assert capsys.readouterr().out == "1 3 5 #UTIL: 80\n1 3 4 5 6 #UTIL: 78\n"


def test_explicit_topk_overrides_result(result):
    text = create_result_writer("text").render(result, topk=[((2,), 22)])
    assert text == "2 #UTIL: 22"


def test_unsupported_formats():
    with pytest.raises(ValueError, match="Unsupported output format"):
        create_result_writer("parquet")
    with pytest.raises(ValueError, match="Unsupported report format"):
        create_report_writer("parquet")
    with pytest.raises(ValueError):
        create_report_writer("xlsx")


def test_csv_report(report_rows, tmp_path):
    out = tmp_path / "report.csv"
    assert CsvReportWriter(str(out)).write_report(report_rows, [])
    frame = pd.read_csv(out)
    assert list(frame.columns) == RUN_REPORT_COLUMNS
    assert frame["delta_final"].isna().tolist() == [False, True]


def test_json_report(report_rows, capsys):
    errors = [{"dataset": "absent", "algo": "tko", "k": 3, "error": "missing"}]
    assert JsonReportWriter().write_report(report_rows, errors, {"sample/tko/3": [("initial", 0, 0)]})
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"][0]["delta_final"] == 73
    assert payload["rows"][1]["delta_final"] is None
    assert payload["errors"] == errors
    assert payload["audits"] == {"sample/tko/3": [["initial", 0, 0]]}


def test_excel_report(report_rows, tmp_path):
    out = tmp_path / "report.xlsx"
    audits = {"sample/tko/3": [("initial", 0, 0), ("pe", 0, 54)]}
    writer = create_report_writer("xlsx", output_path=str(out))
    assert isinstance(writer, ExcelReportWriter)
    assert writer.write_report(report_rows, [], audits)
    sheets = pd.read_excel(out, sheet_name=None)
    assert list(sheets) == ["RunReport", "Errors", "audit sample-tko-3"]
    assert sheets["RunReport"]["dataset"].tolist() == ["sample", "absent"]
    assert sheets["audit sample-tko-3"]["new_delta"].tolist() == [0, 54]


def test_excel_report_needs_path(report_rows):
    assert not ExcelReportWriter().write_report(report_rows, [])


def test_audit_sheet_names_are_valid():
    assert audit_sheet_name("chess/khmc-nocov/1000") == "audit chess-khmc-nocov-1000"
    assert len(audit_sheet_name("x" * 50)) == 31


def test_truncated_sheet_names_get_suffixes():
    long_name = "retail-with-a-very-long-dataset-name"
    first = audit_sheet_name(f"{long_name}/tko/100")
    second = audit_sheet_name(f"{long_name}/khmc/100", [first])
    third = audit_sheet_name(f"{long_name}/khmc/500", [first, second])
    assert first == "audit retail-with-a-very-long-d"
    assert second == "audit retail-with-a-very-lo (2)"
    assert third == "audit retail-with-a-very-lo (3)"
    assert audit_sheet_name("SAMPLE/tko/3", ["audit sample-tko-3"]) == "audit SAMPLE-tko-3 (2)"


def test_excel_report_keeps_every_audit(report_rows, tmp_path):
    out = tmp_path / "report.xlsx"
    long_name = "retail-with-a-very-long-dataset-name"
    audits = {f"{long_name}/tko/100": [("initial", 0, 0), ("pe", 0, 10)],
              f"{long_name}/khmc/100": [("initial", 0, 0), ("riu", 0, 20)]}
    assert ExcelReportWriter(str(out)).write_report(report_rows, [], audits)
    sheets = pd.read_excel(out, sheet_name=None)
    assert len(sheets) == 4
    assert sheets["audit retail-with-a-very-long-d"]["new_delta"].tolist() == [0, 10]
    assert sheets["audit retail-with-a-very-lo (2)"]["new_delta"].tolist() == [0, 20]
