# Python imports
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Tuple

# Local imports
from .exceptions import EmptyTruth, EmptyRun


class AveragingMode(str, Enum):
    SAMPLES = 'samples'
    MICRO = 'micro'


def harmonic_f1(precision, recall):
    if precision + recall <= 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _ratio(numerator, denominator):
    return numerator / denominator if denominator else 0.0


@dataclass(frozen=True)
class SampleScore:
    precision: float
    recall: float
    f1: float
    # raw counts, pooled by micro averaging
    true_positives: int = 0
    n_predicted: int = 0
    n_true: int = 0

    def to_dict(self):
        return {'precision': self.precision, 'recall': self.recall, 'f1': self.f1}


@dataclass(frozen=True)
class AggregateScore:
    precision: float
    recall: float
    f1: float
    mode: AveragingMode = AveragingMode.SAMPLES

    def to_dict(self):
        return {'precision': self.precision, 'recall': self.recall, 'f1': self.f1}


def _as_set(labels):
    if hasattr(labels, 'as_set'):
        return labels.as_set()
    return frozenset(labels)


def sample_prf(pred, truth) -> SampleScore:
    """
    Example-based precision, recall and F1 for one sample.

    An empty prediction scores 0 across the board; an empty truth is invalid.
    """
    pred, truth = _as_set(pred), _as_set(truth)
    if not truth:
        raise EmptyTruth('Ground truth must contain at least one label')
    hits = len(pred & truth)
    precision = _ratio(hits, len(pred))
    recall = hits / len(truth)
    return SampleScore(
        precision=precision,
        recall=recall,
        f1=harmonic_f1(precision, recall),
        true_positives=hits,
        n_predicted=len(pred),
        n_true=len(truth),
    )


def aggregate_multilabel(scores: Iterable[SampleScore], mode=AveragingMode.SAMPLES) -> AggregateScore:
    scores = list(scores)
    mode = AveragingMode(mode)
    if not scores:
        raise EmptyRun('Cannot aggregate an empty run')

    if mode == AveragingMode.SAMPLES:
        count = len(scores)
        return AggregateScore(
            precision=math.fsum(s.precision for s in scores) / count,
            recall=math.fsum(s.recall for s in scores) / count,
            f1=math.fsum(s.f1 for s in scores) / count,
            mode=mode,
        )

    hits = sum(s.true_positives for s in scores)
    precision = _ratio(hits, sum(s.n_predicted for s in scores))
    recall = _ratio(hits, sum(s.n_true for s in scores))
    return AggregateScore(precision=precision, recall=recall, f1=harmonic_f1(precision, recall), mode=mode)


def top1_accuracy(records: Iterable[Tuple[Optional[str], str]]) -> float:
    """Fraction of (predicted, true) pairs that agree. A missing prediction is wrong."""
    records = list(records)
    if not records:
        raise EmptyRun('Cannot score an empty run')
    correct = sum(1 for predicted, truth in records if predicted is not None and predicted == truth)
    return correct / len(records)


def per_class_counts(pairs, class_names=()):
    """
    Per-class true/false positive and false negative tallies over
    (predicted labels, true labels) pairs. Diagnostics only.
    """
    tp, fp, fn = Counter(), Counter(), Counter()
    for pred, truth in pairs:
        pred, truth = _as_set(pred), _as_set(truth)
        tp.update(pred & truth)
        fp.update(pred - truth)
        fn.update(truth - pred)

    names = list(dict.fromkeys([*class_names, *sorted(set(tp) | set(fp) | set(fn))]))
    return {
        name: {'tp': tp[name], 'fp': fp[name], 'fn': fn[name]}
        for name in names
    }
