"""Token-level scoring of detections against gold annotations.

Metric conventions (documented because published tables rarely state them):

* confusion counts are over tokens: a character span counts every token it
  intersects, even partially;
* zero-denominator precision: with no predicted tokens, P = 1 when nothing
  was missed, else 0; with no gold tokens, R = 1 (vacuous);
* all-or-nothing recall credits a (tweet, label) pair only when every gold
  token of that label in that tweet was found;
* micro averages pool token counts over all labels, including labels that
  have false positives but no gold;
* macro averages are unweighted means over labels with at least one gold
  instance; macro F1 is the mean of per-label F1 values (not the F1 of the
  macro P and R).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import (
    AnnotatedTweet,
    DataError,
    Detection,
    EntityLabel,
    LABEL_ORDER,
)
from .tokenize import Token, token_indices_overlapping, tokenize


@dataclass(frozen=True, slots=True)
class LabelCounts:
    """Corpus-level token confusion counts for one label."""

    label: EntityLabel
    tp: int = 0
    fp: int = 0
    fn: int = 0
    gold_instances: int = 0
    tweets_with_gold: int = 0
    tweets_all_found: int = 0


@dataclass(frozen=True, slots=True)
class MetricRow:
    """One scored row: a label, or the micro/macro aggregate."""

    name: str
    gold_instances: int
    precision: float
    recall: float
    f1: float
    aon_recall: float | None


@dataclass(frozen=True)
class MetricsReport:
    counts: tuple[LabelCounts, ...]
    rows: tuple[MetricRow, ...]
    micro: MetricRow
    macro: MetricRow
    total_false_positives: int
    total_false_negatives: int

    def to_json_dict(self) -> dict:
        def row_dict(row: MetricRow) -> dict:
            return {
                "name": row.name,
                "gold_instances": row.gold_instances,
                "precision": row.precision,
                "recall": row.recall,
                "f1": row.f1,
                "aon_recall": row.aon_recall,
            }

        by_label = {c.label.value: c for c in self.counts}
        rows = []
        for row in self.rows:
            d = row_dict(row)
            c = by_label[row.name]
            d.update(tp=c.tp, fp=c.fp, fn=c.fn,
                     tweets_with_gold=c.tweets_with_gold,
                     tweets_all_found=c.tweets_all_found)
            rows.append(d)
        return {
            "rows": rows,
            "micro": row_dict(self.micro),
            "macro": row_dict(self.macro),
            "total_false_positives": self.total_false_positives,
            "total_false_negatives": self.total_false_negatives,
        }

    def format_table(self) -> str:
        """Fixed-width text table, one row per label plus the two
        aggregate rows."""
        header = f"{'Info Type':<14}{'No':>6}{'P':>8}{'R':>8}{'F1':>8}{'AON R':>8}"
        lines = [header, "-" * len(header)]

        def fmt(row: MetricRow) -> str:
            aon = "-" if row.aon_recall is None else f"{row.aon_recall:.3f}"
            return (f"{_display_name(row.name):<14}{row.gold_instances:>6}"
                    f"{row.precision:>8.3f}{row.recall:>8.3f}"
                    f"{row.f1:>8.3f}{aon:>8}")

        lines += [fmt(row) for row in self.rows]
        lines.append("-" * len(header))
        lines.append(fmt(self.micro))
        lines.append(fmt(self.macro))
        return "\n".join(lines)


_DISPLAY_NAMES = {
    "URL": "URL",
    "USERNAME": "Username",
    "PERSON": "Person",
    "ORG": "Org",
    "GROUP": "Group",
    "CITY": "City",
    "STATE": "State",
    "COUNTRY": "Country",
    "LOCATION": "Location",
    "PHONE": "Phone #",
    "EMAIL": "Email",
    "ID_NUMBER": "ID",
    "ZIP": "Zip code",
    "Micro Avg": "Micro Avg",
    "Macro Avg": "Macro Avg",
}


def _display_name(name: str) -> str:
    return _DISPLAY_NAMES.get(name, name)


def token_confusion(gold: AnnotatedTweet, predicted: Sequence[Detection],
                    tokens: Sequence[Token]
                    ) -> dict[EntityLabel, tuple[int, int, int]]:
    """Per-label (tp, fp, fn) token counts for one tweet.

    Gold spans and predicted spans are both projected onto the same token
    list by intersection.
    """
    text = gold.tweet.text
    for det in predicted:
        det.verify(text)

    gold_sets: dict[EntityLabel, set[int]] = {}
    for span, label in gold.gold:
        gold_sets.setdefault(label, set()).update(
            token_indices_overlapping(tokens, span))
    pred_sets: dict[EntityLabel, set[int]] = {}
    for det in predicted:
        pred_sets.setdefault(det.label, set()).update(
            token_indices_overlapping(tokens, det.span))

    out: dict[EntityLabel, tuple[int, int, int]] = {}
    for label in set(gold_sets) | set(pred_sets):
        g = gold_sets.get(label, set())
        p = pred_sets.get(label, set())
        out[label] = (len(g & p), len(p - g), len(g - p))
    return out


def f1_of(precision: float, recall: float) -> float:
    """Harmonic mean; 0 when both inputs are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def prf(counts: LabelCounts) -> tuple[float, float, float]:
    """(precision, recall, F1) under the documented zero conventions."""
    tp, fp, fn = counts.tp, counts.fp, counts.fn
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision = 1.0 if fn == 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 1.0
    return precision, recall, f1_of(precision, recall)


def aon_recall(scored: Iterable[tuple[AnnotatedTweet, Sequence[Detection]]],
               label: EntityLabel) -> float:
    """Over tweets with at least one gold token of ``label``: the fraction
    where every gold token was predicted."""
    with_gold = 0
    all_found = 0
    for annotated, predicted in scored:
        tokens = tokenize(annotated.tweet.text)
        per_label = token_confusion(annotated, predicted, tokens)
        tp, _, fn = per_label.get(label, (0, 0, 0))
        if tp + fn > 0:
            with_gold += 1
            if fn == 0:
                all_found += 1
    if with_gold == 0:
        raise DataError(f"no gold instances of {label.value} in the corpus")
    return all_found / with_gold


def _row_metrics(counts: LabelCounts) -> MetricRow:
    precision, recall, f1 = prf(counts)
    aon = (counts.tweets_all_found / counts.tweets_with_gold
           if counts.tweets_with_gold > 0 else None)
    return MetricRow(name=counts.label.value,
                     gold_instances=counts.gold_instances,
                     precision=precision, recall=recall, f1=f1,
                     aon_recall=aon)


def macro_average(rows: Sequence[MetricRow],
                  gold_total: int | None = None) -> MetricRow:
    """Unweighted mean of per-label metric rows."""
    if not rows:
        raise DataError("cannot macro-average zero rows")
    n = len(rows)
    aons = [r.aon_recall for r in rows if r.aon_recall is not None]
    return MetricRow(
        name="Macro Avg",
        gold_instances=(gold_total if gold_total is not None
                        else sum(r.gold_instances for r in rows)),
        precision=sum(r.precision for r in rows) / n,
        recall=sum(r.recall for r in rows) / n,
        f1=sum(r.f1 for r in rows) / n,
        aon_recall=sum(aons) / len(aons) if aons else None,
    )


def aggregate(rows: Sequence[LabelCounts]) -> tuple[MetricRow, MetricRow]:
    """(micro, macro) aggregate rows from per-label counts.

    Micro pools token counts over every given row; macro averages only the
    rows with at least one gold token.
    """
    if not rows:
        raise DataError("cannot aggregate an empty set of label counts")
    pooled = LabelCounts(
        label=rows[0].label,  # placeholder; micro has no label of its own
        tp=sum(r.tp for r in rows),
        fp=sum(r.fp for r in rows),
        fn=sum(r.fn for r in rows),
        gold_instances=sum(r.gold_instances for r in rows),
        tweets_with_gold=sum(r.tweets_with_gold for r in rows),
        tweets_all_found=sum(r.tweets_all_found for r in rows),
    )
    precision, recall, f1 = prf(pooled)
    micro = MetricRow(
        name="Micro Avg", gold_instances=pooled.gold_instances,
        precision=precision, recall=recall, f1=f1,
        aon_recall=(pooled.tweets_all_found / pooled.tweets_with_gold
                    if pooled.tweets_with_gold > 0 else None))
    with_gold = [_row_metrics(r) for r in rows if r.tp + r.fn > 0]
    if not with_gold:
        raise DataError("cannot macro-average: no label has gold instances")
    macro = macro_average(with_gold, gold_total=pooled.gold_instances)
    return micro, macro


def evaluate_corpus(gold_corpus: Sequence[AnnotatedTweet],
                    predictions: Mapping[str, Sequence[Detection]]
                    ) -> MetricsReport:
    """Score a whole corpus. Every prediction id must name a gold tweet."""
    gold_ids = {a.tweet.id for a in gold_corpus}
    stray = sorted(set(predictions) - gold_ids)
    if stray:
        raise DataError(
            f"predictions reference tweet ids absent from the gold corpus: "
            f"{', '.join(stray[:5])}")

    tally: dict[EntityLabel, dict[str, int]] = {}

    def bucket(label: EntityLabel) -> dict[str, int]:
        return tally.setdefault(label, {
            "tp": 0, "fp": 0, "fn": 0, "gold_instances": 0,
            "tweets_with_gold": 0, "tweets_all_found": 0})

    for annotated in gold_corpus:
        tokens = tokenize(annotated.tweet.text)
        predicted = predictions.get(annotated.tweet.id, ())
        per_label = token_confusion(annotated, predicted, tokens)
        for span, label in annotated.gold:
            bucket(label)["gold_instances"] += 1
        for label, (tp, fp, fn) in per_label.items():
            b = bucket(label)
            b["tp"] += tp
            b["fp"] += fp
            b["fn"] += fn
            if tp + fn > 0:
                b["tweets_with_gold"] += 1
                if fn == 0:
                    b["tweets_all_found"] += 1

    order = {label: i for i, label in enumerate(LABEL_ORDER)}
    counts = tuple(sorted(
        (LabelCounts(label=label, **values) for label, values in tally.items()),
        key=lambda c: order[c.label]))
    if not counts:
        raise DataError("nothing to evaluate: no gold spans and no predictions")
    rows = tuple(_row_metrics(c) for c in counts)
    micro, macro = aggregate(counts)
    return MetricsReport(
        counts=counts, rows=rows, micro=micro, macro=macro,
        total_false_positives=sum(c.fp for c in counts),
        total_false_negatives=sum(c.fn for c in counts),
    )
