#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Data Writer Module for the top-k miner
Renders mining results (text, JSON, CSV) and writes benchmark reports
(CSV, JSON, Excel).
"""

import json
import re
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from .miners import MiningResult
from .utils.logger import get_logger

logger = get_logger(__name__)

RUN_REPORT_COLUMNS = [
    "dataset", "algo", "k", "runtime_ms", "candidates", "joins",
    "peak_mem_bytes", "delta_final", "topk_size",
]

TopK = Sequence[Tuple[Tuple[int, ...], int]]


def topk_frame(topk: TopK) -> pd.DataFrame:
    rows = [{"rank": rank, "itemset": " ".join(map(str, itemset)), "utility": utility}
            for rank, (itemset, utility) in enumerate(topk, start=1)]
    return pd.DataFrame(rows, columns=["rank", "itemset", "utility"])


def audit_frame(audit: Sequence[Tuple[str, int, int]]) -> pd.DataFrame:
    return pd.DataFrame(list(audit), columns=["strategy", "old_delta", "new_delta"])


def frame_records(df: pd.DataFrame) -> List[Dict[str, Any]]:
    """JSON-safe records (numpy scalars and NaN converted)"""
    return json.loads(df.to_json(orient="records"))


class ResultWriter:
    """
    Abstract base class for mining result writers
    """

    def render(self, result: MiningResult, topk: Optional[TopK] = None,
               include_stats: bool = False, include_audit: bool = False) -> str:
        """Render the result as text"""
        raise NotImplementedError

    def write(self, result: MiningResult, output_path: Optional[str] = None, **kwargs) -> str:
        content = self.render(result, **kwargs)
        if output_path:
            with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(content + "\n")
            logger.info(f"Results written to {output_path}")
        else:
            sys.stdout.write(content + "\n")
        return content


class TextResultWriter(ResultWriter):
    """One ``labels #UTIL: u`` line per itemset, metadata as comment lines"""

    def render(self, result, topk=None, include_stats=False, include_audit=False) -> str:
        topk = result.topk if topk is None else topk
        lines = [f"{' '.join(map(str, itemset))} #UTIL: {utility}" for itemset, utility in topk]
        if include_stats:
            lines.append(f"# delta_final: {result.delta_final}")
            for key, value in result.stats.to_dict().items():
                lines.append(f"# {key}: {value}")
        if include_audit:
            lines.extend(f"# audit: {tag} {old} -> {new}" for tag, old, new in result.audit)
        return "\n".join(lines)


class JsonResultWriter(ResultWriter):
    """Bare array of itemsets, or an object once stats or audit are requested"""

    def render(self, result, topk=None, include_stats=False, include_audit=False) -> str:
        topk = result.topk if topk is None else topk
        itemsets = [{"itemset": list(itemset), "utility": utility} for itemset, utility in topk]
        if not (include_stats or include_audit):
            return json.dumps(itemsets, indent=2)

        payload: Dict[str, Any] = {"algo": result.algo, "k": result.k, "topk": itemsets,
                                   "delta_final": result.delta_final}
        if include_stats:
            payload["stats"] = result.stats.to_dict()
        if include_audit:
            payload["audit"] = frame_records(audit_frame(result.audit))
        return json.dumps(payload, indent=2)


class CsvResultWriter(ResultWriter):
    def render(self, result, topk=None, include_stats=False, include_audit=False) -> str:
        topk = result.topk if topk is None else topk
        content = topk_frame(topk).to_csv(index=False, lineterminator="\n").rstrip("\n")
        extra = []
        if include_stats:
            extra.append(f"# delta_final={result.delta_final}")
            extra.extend(f"# {key}={value}" for key, value in result.stats.to_dict().items())
        if include_audit:
            extra.extend(f"# audit={tag},{old},{new}" for tag, old, new in result.audit)
        return "\n".join([content] + extra)


def create_result_writer(output_format: str) -> ResultWriter:
    """
    Factory function to create appropriate result writer

    Args:
        output_format: 'text', 'json' or 'csv'

    Returns:
        ResultWriter instance
    """
    fmt = output_format.lower()
    if fmt in ["text", "txt"]:
        return TextResultWriter()
    elif fmt == "json":
        return JsonResultWriter()
    elif fmt == "csv":
        return CsvResultWriter()
    else:
        raise ValueError(f"Unsupported output format: {output_format}")


# ---------------------- benchmark reports ----------------------
class ReportWriter:
    """
    Abstract base class for benchmark report writers
    """

    def __init__(self, output_path: Optional[str] = None):
        self.output_path = output_path

    def render(self, rows: pd.DataFrame, errors: List[Dict[str, Any]],
               audits: Optional[Dict[str, list]] = None) -> str:
        raise NotImplementedError

    def write_report(self, rows: pd.DataFrame, errors: List[Dict[str, Any]],
                     audits: Optional[Dict[str, list]] = None) -> bool:
        """Write the report to output_path, or stdout when no path is set"""
        try:
            content = self.render(rows, errors, audits)
            if self.output_path:
                with open(self.output_path, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(content + "\n")
                logger.info(f"Run report written to {self.output_path}")
            else:
                sys.stdout.write(content + "\n")
            return True
        except Exception as e:
            logger.error(f"Error writing run report: {e}")
            return False


class CsvReportWriter(ReportWriter):
    def render(self, rows, errors, audits=None) -> str:
        return rows.reindex(columns=RUN_REPORT_COLUMNS).to_csv(index=False, lineterminator="\n").rstrip("\n")


class JsonReportWriter(ReportWriter):
    def render(self, rows, errors, audits=None) -> str:
        payload: Dict[str, Any] = {
            "rows": frame_records(rows.reindex(columns=RUN_REPORT_COLUMNS)),
            "errors": errors,
        }
        if audits:
            payload["audits"] = audits
        return json.dumps(payload, indent=2)


def audit_sheet_name(cell: str, taken: Iterable[str] = ()) -> str:
    """
    Excel-safe sheet title for an audit cell (at most 31 characters, no []:*?/\\).

    Titles compare case-insensitively; one already in ``taken`` gets a " (n)" suffix.
    """
    base = re.sub(r"[\[\]:*?/\\]", "-", f"audit {cell}")[:31]
    used = {name.lower() for name in taken}
    name, n = base, 1
    while name.lower() in used:
        n += 1
        suffix = f" ({n})"
        name = base[:31 - len(suffix)] + suffix
    return name


class ExcelReportWriter(ReportWriter):
    """Run report, errors and audits on separate sheets"""

    def render(self, rows, errors, audits=None) -> str:
        raise NotImplementedError("Excel reports are binary; use write_report")

    def write_report(self, rows, errors, audits=None) -> bool:
        if not self.output_path:
            logger.error("output_path is required for Excel reports")
            return False
        try:
            with pd.ExcelWriter(self.output_path, engine="openpyxl") as writer:
                rows.reindex(columns=RUN_REPORT_COLUMNS).to_excel(writer, sheet_name="RunReport", index=False)
                pd.DataFrame(errors, columns=["dataset", "algo", "k", "error"]).to_excel(
                    writer, sheet_name="Errors", index=False)
                sheets: List[str] = []
                for cell, audit in (audits or {}).items():
                    sheets.append(audit_sheet_name(cell, sheets))
                    audit_frame(audit).to_excel(writer, sheet_name=sheets[-1], index=False)
            logger.info(f"Run report written to Excel: {self.output_path}")
            return True
        except Exception as e:
            logger.error(f"Error writing run report to Excel: {e}")
            return False


def create_report_writer(output_format: str, **kwargs) -> ReportWriter:
    """
    Factory function to create appropriate report writer

    Args:
        output_format: 'csv', 'json' or 'xlsx'
        **kwargs: output_path (required for xlsx)

    Returns:
        ReportWriter instance
    """
    fmt = output_format.lower()
    if fmt == "csv":
        return CsvReportWriter(kwargs.get("output_path"))
    elif fmt == "json":
        return JsonReportWriter(kwargs.get("output_path"))
    elif fmt in ["xlsx", "excel"]:
        if not kwargs.get("output_path"):
            raise ValueError("output_path is required for Excel report writer")
        return ExcelReportWriter(kwargs["output_path"])
    else:
        raise ValueError(f"Unsupported report format: {output_format}")
