"""Rendered outputs: text tables, canonical JSON, delimited rows and figures.

JSON output is canonical — keys sorted, floats rounded to nine digits,
UTF-8, two-space indent — so identical inputs serialize byte-identically.
The figure renderers write PNG files next to the delimited tables; they are
presentation artifacts and make no determinism promise beyond matplotlib's.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from .conjugate import EMITTING_TYPES, VerbType
from .dataset import TypeCounts
from .taxonomy import (
    AuditItem,
    AuditReport,
    ConsistencyReport,
    ErrorDistRow,
    ErrorLabel,
    VerbTypeRow,
    error_distribution,
    percent_str,
    verb_class_distribution,
)

_TYPE_ROW_NAMES = {
    VerbType.TYPE1: "Type 1 (godan)",
    VerbType.TYPE2: "Type 2 (ichidan)",
    VerbType.TYPE4_1: "Type 4-1 (i-stem gemination)",
    VerbType.TYPE4_2: "Type 4-2 (e-stem gemination)",
    VerbType.TYPE4_3: "Type 4-3 (iku class)",
}


def _round_floats(value: Any) -> Any:
    if isinstance(value, float):
        return round(value, 9)
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


def canonical_json(payload: Any) -> str:
    return json.dumps(_round_floats(payload), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def write_json(payload: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(payload), encoding="utf-8", newline="\n")
    return path


# ---------------------------------------------------------------------------
# dict forms


def stats_to_dict(counts: TypeCounts) -> dict[str, int]:
    return {
        "total": counts.total,
        "type-1": counts.type1,
        "type-2": counts.type2,
        "type-4": counts.type4,
        "type-4-1": counts.type4_1,
        "type-4-2": counts.type4_2,
        "type-4-3": counts.type4_3,
        "excluded": counts.excluded,
    }


def report_to_dict(report: AuditReport) -> dict[str, Any]:
    return {
        "run_id": report.run_id,
        "total": report.total,
        "correct": report.correct,
        "errors": report.error_total,
        "accuracy": report.accuracy,
        "gemination_share": report.gemination_share,
        "counts_by_label": {label.value: count for label, count in report.counts_by_label.items()},
        "counts_by_verbtype": {
            vtype.value: count for vtype, count in report.counts_by_verbtype.items()
        },
        "items": [
            {
                "lemma": item.lemma,
                "gold": item.gold,
                "predicted": item.predicted,
                "verb_type": item.verb_type.value,
                "label": item.label.value,
                "script": [str(op) for op in item.script.ops] if item.script else None,
            }
            for item in report.items
        ],
    }


def report_from_dict(payload: Mapping[str, Any]) -> AuditReport:
    """Rebuild a report from its JSON form (alignment scripts are not restored)."""
    labels = {label.value: label for label in ErrorLabel}
    vtypes = {vtype.value: vtype for vtype in VerbType}
    items = [
        AuditItem(
            lemma=row["lemma"],
            gold=row["gold"],
            predicted=row["predicted"],
            verb_type=vtypes[row["verb_type"]],
            label=labels[row["label"]],
            script=None,
        )
        for row in payload["items"]
    ]
    return AuditReport.from_items(payload["run_id"], items)


def consistency_to_dict(consistency: ConsistencyReport) -> dict[str, Any]:
    return {
        "runs": list(consistency.run_ids),
        "label_shares": {
            label.value: {
                "mean": stats.mean,
                "min": stats.minimum,
                "max": stats.maximum,
                "range": stats.range,
            }
            for label, stats in consistency.label_shares.items()
        },
        "gemination_share_by_run": dict(consistency.gemination_share_by_run),
        "jaccard": {
            f"{a}|{b}": value for (a, b), value in consistency.jaccard_by_pair.items()
        },
    }


# ---------------------------------------------------------------------------
# text tables


def _table(rows: Sequence[Sequence[str]], align_right: Sequence[bool]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [
            cell.rjust(widths[i]) if align_right[i] else cell.ljust(widths[i])
            for i, cell in enumerate(row)
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def render_type_counts(counts: TypeCounts) -> str:
    """Dataset statistics by verb class, excluded classes shown as zero."""
    rows = [
        ("Verb type", "Count"),
        ("All verbs", f"{counts.total:,}"),
        (_TYPE_ROW_NAMES[VerbType.TYPE1], f"{counts.type1:,}"),
        (_TYPE_ROW_NAMES[VerbType.TYPE2], f"{counts.type2:,}"),
        ("Type 3 (suru/kuru; excluded)", "0"),
        ("Type 4 (irregular subtotal)", f"{counts.type4:,}"),
        ("  " + _TYPE_ROW_NAMES[VerbType.TYPE4_1], f"{counts.type4_1:,}"),
        ("  " + _TYPE_ROW_NAMES[VerbType.TYPE4_2], f"{counts.type4_2:,}"),
        ("  " + _TYPE_ROW_NAMES[VerbType.TYPE4_3], f"{counts.type4_3:,}"),
    ]
    text = _table(rows, align_right=(False, True))
    if counts.excluded:
        text += f"(excluded rows in lexicon: {counts.excluded})\n"
    return text


def render_error_distribution(rows: Sequence[ErrorDistRow], total_errors: int) -> str:
    table_rows = [("Error type", "Count", "Share")]
    for row in rows:
        table_rows.append((row.label.display, str(row.count), f"{row.percent}%"))
    table_rows.append(("Total", str(total_errors), ""))
    return _table(table_rows, align_right=(False, True, True))


def _format_ratio(ratio: float | None) -> str:
    if ratio is None:
        return "-"
    if ratio == float("inf"):
        return "inf"
    return f"{ratio:.1f}x"


def render_verb_type_distribution(rows: Sequence[VerbTypeRow], total_errors: int) -> str:
    table_rows = [("Verb type", "Errors", "Share", "Dataset", "Overrep")]
    for row in rows:
        table_rows.append((
            _TYPE_ROW_NAMES[row.verb_type],
            str(row.errors),
            f"{row.percent}%",
            f"{row.dataset_count:,}",
            _format_ratio(row.overrepresentation),
        ))
    table_rows.append(("Total", str(total_errors), "", "", ""))
    return _table(table_rows, align_right=(False, True, True, True, True))


def render_consistency(consistency: ConsistencyReport) -> str:
    lines = [f"Runs: {', '.join(consistency.run_ids)}"]
    lines.append("Label share across runs (mean [min..max]):")
    for label, stats in consistency.label_shares.items():
        if stats.maximum == 0.0:
            continue
        lines.append(
            f"  {label.display}: {percent_str(round(stats.mean * 1000), 1000)}%"
            f" [{percent_str(round(stats.minimum * 1000), 1000)}%"
            f"..{percent_str(round(stats.maximum * 1000), 1000)}%]"
        )
    lines.append("Gemination-related share by run:")
    for run_id, share in consistency.gemination_share_by_run.items():
        lines.append(f"  {run_id}: {percent_str(round(share * 1000), 1000)}%")
    lines.append("Error-lemma overlap (Jaccard):")
    for (a, b), value in consistency.jaccard_by_pair.items():
        lines.append(f"  {a} vs {b}: {value:.3f}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# delimited rows


def write_error_distribution_tsv(
    rows: Sequence[ErrorDistRow], path: str | Path
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["label\tcount\tpercent\n"]
    lines += [f"{row.label.value}\t{row.count}\t{row.percent}\n" for row in rows]
    path.write_text("".join(lines), encoding="utf-8", newline="\n")
    return path


def write_verb_type_tsv(rows: Sequence[VerbTypeRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["verb_type\terrors\tpercent\tdataset_count\toverrepresentation\n"]
    for row in rows:
        ratio = "" if row.overrepresentation is None else f"{row.overrepresentation:.3f}"
        lines.append(
            f"{row.verb_type.value}\t{row.errors}\t{row.percent}\t{row.dataset_count}\t{ratio}\n"
        )
    path.write_text("".join(lines), encoding="utf-8", newline="\n")
    return path


# ---------------------------------------------------------------------------
# figures


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_error_distribution_figure(
    rows: Sequence[ErrorDistRow], path: str | Path, title: str = "Errors by type"
) -> Path:
    plt = _pyplot()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = [row.label.display for row in rows][::-1]
    counts = [row.count for row in rows][::-1]
    shares = [row.percent for row in rows][::-1]
    fig, ax = plt.subplots(figsize=(7.5, 0.5 * max(len(rows), 4) + 1.2))
    bars = ax.barh(labels, counts, color="#4878a8")
    for bar, share in zip(bars, shares):
        ax.annotate(
            f"{share}%",
            xy=(bar.get_width(), bar.get_y() + bar.get_height() / 2),
            xytext=(4, 0), textcoords="offset points", va="center", fontsize=9,
        )
    ax.set_xlabel("Errors")
    ax.set_title(title)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_verb_type_figure(
    rows: Sequence[VerbTypeRow], path: str | Path, title: str = "Error share vs dataset share"
) -> Path:
    plt = _pyplot()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = [_TYPE_ROW_NAMES[row.verb_type] for row in rows]
    error_share = [float(row.percent) for row in rows]
    dataset_total = sum(row.dataset_count for row in rows)
    data_share = [
        100.0 * row.dataset_count / dataset_total if dataset_total else 0.0 for row in rows
    ]
    x = range(len(rows))
    width = 0.38
    fig, ax = plt.subplots(figsize=(8, 4.2))
    ax.bar([i - width / 2 for i in x], error_share, width, label="share of errors", color="#b0503c")
    ax.bar([i + width / 2 for i in x], data_share, width, label="share of dataset", color="#4878a8")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=9)
    ax.set_ylabel("%")
    ax.set_title(title)
    ax.legend()
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_artifacts(
    report: AuditReport,
    lexicon_counts: TypeCounts,
    directory: str | Path,
    *,
    figures: bool = True,
) -> dict[str, Path]:
    """Write the delimited tables (and figures) for one report into a directory."""
    directory = Path(directory)
    dist_rows = error_distribution(report)
    type_rows = verb_class_distribution(report, lexicon_counts)
    artifacts = {
        "error_distribution_tsv": write_error_distribution_tsv(
            dist_rows, directory / "error_distribution.tsv"
        ),
        "verb_types_tsv": write_verb_type_tsv(type_rows, directory / "verb_types.tsv"),
    }
    if figures:
        artifacts["error_distribution_png"] = save_error_distribution_figure(
            dist_rows, directory / "error_distribution.png",
            title=f"Errors by type ({report.run_id})",
        )
        artifacts["verb_types_png"] = save_verb_type_figure(
            type_rows, directory / "verb_types.png",
            title=f"Error share vs dataset share ({report.run_id})",
        )
    return artifacts
