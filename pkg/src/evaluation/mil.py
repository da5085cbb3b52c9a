# src/evaluation/mil.py
"""Bag-level (multiple instance) scoring of match events against weak labels.

Each labeled interval is a bag. For a target class a bag is:
  TP  target bag with at least one target event starting inside it
  FN  target bag with none
  FP  other-class bag with at least one target event starting inside it
  TN  other-class bag with none
Target events outside every bag are counted separately.
"""
import logging
import math
from typing import Iterable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from sklearn.metrics import confusion_matrix

from src.matcher.models import MatchEvent
from src.series_core.errors import DomainError, OverlapError
from src.series_core.types import LabelInterval

logger = logging.getLogger(__name__)


class Bag(BaseModel):
    model_config = ConfigDict(frozen=True)

    interval: LabelInterval

    @property
    def bag_class(self) -> str:
        return self.interval.behavior_class


class ConfusionMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    target_class: str
    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)
    total_bags: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _closed(self) -> "ConfusionMatrix":
        if self.tp + self.fp + self.fn + self.tn != self.total_bags:
            raise ValueError(
                f"tp+fp+fn+tn = {self.tp + self.fp + self.fn + self.tn} "
                f"does not equal total_bags = {self.total_bags}"
            )
        return self

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int, target_class: str = "target") -> "ConfusionMatrix":
        return cls(target_class=target_class, tp=tp, fp=fp, fn=fn, tn=tn, total_bags=tp + fp + fn + tn)


class MilScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    matrix: ConfusionMatrix
    unlabeled_matches: int = Field(0, ge=0)


class Metrics(BaseModel):
    """Bag-level metrics; NaN marks an undefined value (zero denominator)."""

    model_config = ConfigDict(frozen=True)

    precision: float
    recall: float
    accuracy: float
    default_rate: float


def build_bags(labels: Iterable[LabelInterval]) -> List[Bag]:
    """One bag per interval, sorted by start; bags must not overlap."""
    ordered = sorted(labels, key=lambda lab: (lab.start_index, lab.end_index))
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.start_index <= prev.end_index:
            raise OverlapError(
                f"bags overlap: '{prev.behavior_class}' [{prev.start_index + 1}, {prev.end_index + 1}] "
                f"and '{cur.behavior_class}' [{cur.start_index + 1}, {cur.end_index + 1}]"
            )
    return [Bag(interval=lab) for lab in ordered]


def mil_score(events: Iterable[MatchEvent], bags: Sequence[Bag], target_class: str) -> MilScore:
    if not bags:
        raise DomainError("cannot score without bags")
    bags = build_bags(b.interval for b in bags)
    bag_starts = np.array([b.interval.start_index for b in bags])
    bag_ends = np.array([b.interval.end_index for b in bags])
    starts = np.sort(np.array([e.start_index for e in events if e.behavior_class == target_class], dtype=np.int64))

    hits = np.searchsorted(starts, bag_ends, side="right") - np.searchsorted(starts, bag_starts, side="left")
    predicted = hits > 0
    actual = np.array([b.bag_class == target_class for b in bags])
    tn, fp, fn, tp = confusion_matrix(actual, predicted, labels=[False, True]).ravel()

    owner = np.searchsorted(bag_starts, starts, side="right") - 1
    inside = (owner >= 0) & (starts <= bag_ends[np.maximum(owner, 0)])
    unlabeled = int(np.count_nonzero(~inside))

    matrix = ConfusionMatrix(
        target_class=target_class,
        tp=int(tp),
        fp=int(fp),
        fn=int(fn),
        tn=int(tn),
        total_bags=len(bags),
    )
    logger.info(
        f"MIL '{target_class}': TP={matrix.tp} FP={matrix.fp} FN={matrix.fn} TN={matrix.tn}, "
        f"{unlabeled} events outside every bag"
    )
    return MilScore(matrix=matrix, unlabeled_matches=unlabeled)


def _ratio(num: int, den: int) -> float:
    return num / den if den else math.nan


def metrics(cm: ConfusionMatrix) -> Metrics:
    target_bags = cm.tp + cm.fn
    other_bags = cm.fp + cm.tn
    return Metrics(
        precision=_ratio(cm.tp, cm.tp + cm.fp),
        recall=_ratio(cm.tp, cm.tp + cm.fn),
        accuracy=_ratio(cm.tp + cm.tn, cm.total_bags),
        default_rate=_ratio(max(target_bags, other_bags), cm.total_bags),
    )


class ClassEvaluation(BaseModel):
    model_config = ConfigDict(frozen=True)

    score: MilScore
    metrics: Metrics

    @property
    def target_class(self) -> str:
        return self.score.matrix.target_class


class EvaluationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    classes: List[ClassEvaluation]


def evaluate_classes(
    events: Sequence[MatchEvent], bags: Sequence[Bag], classes: Optional[Sequence[str]] = None
) -> EvaluationReport:
    """Score every class; defaults to the bag classes in order of first appearance."""
    if classes is None:
        classes = list(dict.fromkeys(b.bag_class for b in bags))
    rows = []
    for name in classes:
        score = mil_score(events, bags, name)
        rows.append(ClassEvaluation(score=score, metrics=metrics(score.matrix)))
    return EvaluationReport(classes=rows)
