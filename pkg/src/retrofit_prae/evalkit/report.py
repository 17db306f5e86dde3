"""
Report tables - CSV files and terminal tables in the layout of the result tables

Description-to-action tables have one column per unseen-word count (or per
unseen-slot combination) plus "all"; rows are action splits.
"""

import csv
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Union

from rich.table import Table

from retrofit_prae.evalkit.evaluate import SPLITS, EvalMode, EvalReport

DSC2ACT_METRICS = ("dtw", "speed_success", "task_success")
STATS = ("mean", "std", "n")

Row = List[Union[str, float, int]]


def _cell(value: Union[str, float, int]) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_rows(rows: Sequence[Row], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def grouped_table(report: EvalReport, metric: str, breakdown: str) -> List[Row]:
    """Rows (split, stat, group..., all) for one metric"""
    groups = report.groups(breakdown)
    rows: List[Row] = [["split", "stat", *groups, "all"]]
    for split in SPLITS:
        for stat in STATS:
            row: Row = [split, stat]
            for group in groups:
                agg = report.get(split, breakdown, group, metric)
                row.append("" if agg is None else getattr(agg, stat))
            overall = report.get(split, "all", "all", metric)
            row.append("" if overall is None else getattr(overall, stat))
            rows.append(row)
    return rows


def word_table(report: EvalReport, metric: str) -> List[Row]:
    """Rows (split, word, mean, std, n) for every unseen word"""
    rows: List[Row] = [["split", "word", *STATS]]
    for split in SPLITS:
        for word in report.groups("word"):
            agg = report.get(split, "word", word, metric)
            if agg is not None:
                rows.append([split, word, agg.mean, agg.std, agg.n])
    return rows


def report_tables(report: EvalReport) -> Dict[str, List[Row]]:
    """All CSV tables of a report, by file stem"""
    if report.mode == EvalMode.ACT2DSC:
        rows: List[Row] = [["split", *STATS]]
        for split in SPLITS:
            agg = report.get(split, "all", "all", "description_success")
            if agg is not None:
                rows.append([split, agg.mean, agg.std, agg.n])
        return {"description_success": rows}

    tables: Dict[str, List[Row]] = {}
    for metric in DSC2ACT_METRICS:
        tables[f"{metric}_by_count"] = grouped_table(report, metric, "count")
        tables[f"{metric}_by_pos"] = grouped_table(report, metric, "pos")
        tables[f"{metric}_by_word"] = word_table(report, metric)
    return tables


def write_report(report: EvalReport, out_dir: Union[str, Path]) -> List[Path]:
    """report_<mode>.json plus one CSV per table"""
    out_dir = Path(out_dir)
    written = [report.write_json(out_dir / f"report_{report.mode.value}.json")]
    for stem, rows in report_tables(report).items():
        written.append(write_rows(rows, out_dir / f"{report.mode.value}_{stem}.csv"))
    return written


def compare_reports(reports: Mapping[str, EvalReport], metric: str, breakdown: str = "count") -> List[Row]:
    """
    Side-by-side means of several models, two rows per split for two models

    Args:
        reports: Model label -> report, e.g. {"rPRAE": ..., "PRAE": ...}
        metric: Metric to compare
        breakdown: "count", "pos" or "all"

    Returns:
        Rows (split, model, group..., all)
    """
    groups: List[str] = []
    if breakdown != "all":
        for report in reports.values():
            groups += [g for g in report.groups(breakdown) if g not in groups]
    rows: List[Row] = [["split", "model", *groups, "all"]]
    for split in SPLITS:
        for label, report in reports.items():
            row: Row = [split, label]
            for group in groups:
                agg = report.get(split, breakdown, group, metric)
                row.append("" if agg is None else agg.mean)
            overall = report.get(split, "all", "all", metric)
            row.append("" if overall is None else overall.mean)
            rows.append(row)
    return rows


def rich_table(rows: Sequence[Row], title: str) -> Table:
    """Terminal rendering of CSV-style rows; floats shown to 2 decimals"""
    table = Table(title=title)
    for header in rows[0]:
        table.add_column(str(header))
    for row in rows[1:]:
        table.add_row(*[f"{v:.2f}" if isinstance(v, float) else str(v) for v in row])
    return table
