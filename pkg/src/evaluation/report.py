# src/evaluation/report.py
"""Machine-readable and human-readable renderings of one EvaluationReport."""
import pandas as pd

from src.evaluation.mil import EvaluationReport

REPORT_COLUMNS = [
    "behavior_class",
    "tp",
    "fp",
    "fn",
    "tn",
    "total_bags",
    "precision",
    "recall",
    "accuracy",
    "default_rate",
    "unlabeled_matches",
]


def report_frame(report: EvaluationReport) -> pd.DataFrame:
    rows = []
    for entry in report.classes:
        cm = entry.score.matrix
        rows.append(
            {
                "behavior_class": cm.target_class,
                "tp": cm.tp,
                "fp": cm.fp,
                "fn": cm.fn,
                "tn": cm.tn,
                "total_bags": cm.total_bags,
                "precision": entry.metrics.precision,
                "recall": entry.metrics.recall,
                "accuracy": entry.metrics.accuracy,
                "default_rate": entry.metrics.default_rate,
                "unlabeled_matches": entry.score.unlabeled_matches,
            }
        )
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def render_report_csv(report: EvaluationReport) -> str:
    return report_frame(report).to_csv(index=False, na_rep="NA", float_format="%.6f", lineterminator="\n")


def render_report_text(report: EvaluationReport) -> str:
    lines = []
    for entry in report.classes:
        cm = entry.score.matrix
        m = entry.metrics
        lines.append(f"Behavior: {cm.target_class}  ({cm.total_bags} bags)")
        lines.append(
            pd.DataFrame(
                [[cm.tp, cm.fp], [cm.fn, cm.tn]],
                index=[f"predicted {cm.target_class}", "predicted other"],
                columns=[f"actual {cm.target_class}", "actual other"],
            ).to_string()
        )
        lines.append(f"  precision     {_fmt(m.precision)}")
        lines.append(f"  recall        {_fmt(m.recall)}")
        lines.append(f"  accuracy      {_fmt(m.accuracy)}")
        lines.append(f"  default rate  {_fmt(m.default_rate)}")
        lines.append(f"  events outside every bag: {entry.score.unlabeled_matches}")
        lines.append("")
    return "\n".join(lines)


def _fmt(value: float) -> str:
    return "NA" if pd.isna(value) else f"{value:.2f}"
