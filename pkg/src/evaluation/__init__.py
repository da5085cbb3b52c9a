# Evaluation module
from src.evaluation.frequency import FrequencyProfile, frequency_profile
from src.evaluation.mil import (
    Bag,
    ConfusionMatrix,
    EvaluationReport,
    Metrics,
    MilScore,
    build_bags,
    evaluate_classes,
    metrics,
    mil_score,
)
from src.evaluation.report import render_report_csv, render_report_text
