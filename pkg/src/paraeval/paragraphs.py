"""Sliding-window construction of paragraph instances from sentence ratings.

For every (dataset, lang_pair, system, doc) group, a window of k sentence
positions slides from position 0 towards the end of the document. When all
k positions are rated and share one rater, the window is emitted as a
paragraph and the window jumps k positions ahead; otherwise it shifts by
one. Emitted windows therefore never overlap, and a position left unrated
(or rated by a different rater mid-window) blocks the windows that cross
it without being skipped.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Optional, Sequence

from .model import (
    EvalItem,
    ParagraphInstance,
    RatingRecord,
    ScoreType,
    SystemEntry,
)


def aggregate_score(sentence_scores: Sequence[float], score_type: ScoreType) -> float:
    """Combine per-sentence scores into one paragraph score.

    DA z-scores average; MQM scores sum (a sentence's MQM score is already
    a sum of error weights). Summation runs in list order, so results are
    bit-reproducible for a fixed input order.
    """
    scores = list(sentence_scores)
    if not scores:
        raise ValueError("sentence_scores must be non-empty")
    total = 0.0
    for s in scores:
        total += s
    if score_type is ScoreType.DA_Z:
        return total / len(scores)
    return total


def _sum_counts(counts: list[Optional[int]]) -> Optional[int]:
    if any(c is None for c in counts):
        return None
    return sum(counts)


def build_paragraphs(records: Iterable[RatingRecord], k: int) -> list[ParagraphInstance]:
    """Run the sliding window over every document and emit paragraphs.

    Args:
        records: a validated rating collection (one score type, unique keys).
        k: sentences per paragraph, >= 1.

    Returns:
        Paragraphs sorted by (dataset, lang_pair, system, doc, start).
        Documents with fewer than k rated positions simply contribute
        nothing. Sentence texts are joined with a single space.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    groups: dict[tuple, dict[int, RatingRecord]] = defaultdict(dict)
    for record in records:
        by_index = groups[record.key[:4]]
        if record.sent_index in by_index:
            raise ValueError(f"duplicate sent_index {record.sent_index} in "
                             f"{record.key[:4]}; validate the collection first")
        by_index[record.sent_index] = record

    paragraphs = []
    for group_key in sorted(groups):
        by_index = groups[group_key]
        last = max(by_index)
        i = 0
        while i + k - 1 <= last:
            window = [by_index.get(j) for j in range(i, i + k)]
            if any(r is None for r in window) or len({r.rater_id for r in window}) != 1:
                i += 1
                continue
            first = window[0]
            scores = tuple(r.score for r in window)
            paragraphs.append(ParagraphInstance(
                dataset_id=first.dataset_id,
                lang_pair=first.lang_pair,
                system_id=first.system_id,
                doc_id=first.doc_id,
                start_index=i,
                k=k,
                score_type=first.score_type,
                rater_id=first.rater_id,
                human_score=aggregate_score(scores, first.score_type),
                sentence_scores=scores,
                source_text=" ".join(r.source_text for r in window),
                reference_text=" ".join(r.reference_text for r in window),
                hypothesis_text=" ".join(r.hypothesis_text for r in window),
                token_count_ref=_sum_counts([r.token_count_ref for r in window]),
                token_count_hyp=_sum_counts([r.token_count_hyp for r in window]),
            ))
            i += k

    paragraphs.sort(key=ParagraphInstance.sort_key)
    return paragraphs


def build_eval_items(paragraphs: Iterable[ParagraphInstance], k: int) -> list[EvalItem]:
    """Group competing systems' paragraphs into per-slot evaluation items.

    Paragraphs must all belong to one (dataset, lang_pair) unit and have
    the given k. Slots covered by fewer than two systems are dropped;
    the surviving items may have different system sets.
    """
    paragraphs = list(paragraphs)
    units = {(p.dataset_id, p.lang_pair) for p in paragraphs}
    if len(units) > 1:
        raise ValueError(f"paragraphs span multiple (dataset, lang_pair) units: "
                         f"{sorted(units)}")
    for p in paragraphs:
        if p.k != k:
            raise ValueError(f"paragraph {p.sort_key()} has k={p.k}, expected {k}")

    slots: dict[tuple, dict[str, SystemEntry]] = defaultdict(dict)
    for p in paragraphs:
        per_system = slots[p.item_key]
        if p.system_id in per_system:
            raise ValueError(f"system {p.system_id} has two paragraphs for "
                             f"item {p.item_key}")
        per_system[p.system_id] = SystemEntry(human_score=p.human_score)

    return [EvalItem(item_key=item_key, per_system=dict(sorted(per_system.items())))
            for item_key, per_system in sorted(slots.items())
            if len(per_system) >= 2]
