"""Agreement statistics between metric scores and human ratings.

Two granularities are supported. System-level accuracy compares
per-system mean scores over all unordered system pairs, excluding pairs
whose human means are exactly tied (a metric difference of exactly zero
on a non-tied pair counts as a disagreement). Segment-level accuracy
groups comparisons by item: within each item every unordered system
pair is classified as a tie or an ordering on both sides, pair-level
agreement is averaged per item, and the item accuracies are averaged
unweighted.

A human tie is exact floating-point equality. On the metric side, a
pair is predicted tied when the absolute score difference is at most
``epsilon``; ``tau_optimize`` sweeps all thresholds that can change a
prediction and returns the smallest one maximizing segment accuracy.

Accuracies and tie rates are accumulated in exact rational arithmetic
and rounded to float once, so equal underlying ratios always compare
equal and rescaling scores by a positive constant cannot perturb them.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, groupby
from typing import Iterable, Mapping, Sequence, Union

from .model import (EvalItem, ItemKey, ParagraphInstance, ScoreTable,
                    SystemEntry, TauCalibration)

# Sentinel for tie_rates: score the human side of the items.
HUMAN = "human"
# Sentinel for tie_rates: score the attached metric side of the items.
METRIC = "metric"


def _sign(delta: float) -> int:
    return (delta > 0) - (delta < 0)


def attach_metric_scores(items: Iterable[EvalItem],
                         table: ScoreTable) -> list[EvalItem]:
    """Fill in each system entry's metric score from a score table.

    Every (system, item) present in the items must be covered by the
    table; entries the table has beyond the items are ignored.
    """
    attached = []
    for item in items:
        per_system = {}
        for system, entry in item.per_system.items():
            score = table.entries.get((system, item.item_key))
            if score is None:
                raise ValueError(
                    f"score table {table.metric_name!r} has no entry for "
                    f"system {system!r} on item {item.item_key}")
            per_system[system] = SystemEntry(human_score=entry.human_score,
                                             metric_score=score)
        attached.append(EvalItem(item_key=item.item_key, per_system=per_system))
    return attached


def system_scores(table: ScoreTable) -> dict[str, float]:
    """Per-system arithmetic mean over all of that system's entries."""
    if not table.entries:
        raise ValueError("empty score table")
    totals: dict[str, list[float]] = {}
    for (system, _), score in table.entries.items():
        totals.setdefault(system, []).append(score)
    return {system: math.fsum(scores) / len(scores)
            for system, scores in sorted(totals.items())}


def human_system_scores(paragraphs: Iterable[ParagraphInstance]) -> dict[str, float]:
    """Per-system arithmetic mean of human paragraph scores."""
    totals: dict[str, list[float]] = {}
    for p in paragraphs:
        totals.setdefault(p.system_id, []).append(p.human_score)
    if not totals:
        raise ValueError("no paragraphs")
    return {system: math.fsum(scores) / len(scores)
            for system, scores in sorted(totals.items())}


def system_pairwise_accuracy(metric_sys: Mapping[str, float],
                             human_sys: Mapping[str, float]) -> float:
    """Fraction of non-human-tied system pairs ordered the same way.

    Pairs with exactly equal human scores are excluded; a metric
    difference of exactly zero on a counted pair is a disagreement.
    """
    if set(metric_sys) != set(human_sys):
        raise ValueError(f"system key sets differ: "
                         f"{sorted(set(metric_sys) ^ set(human_sys))}")
    systems = sorted(metric_sys)
    if len(systems) < 2:
        raise ValueError(f"need at least 2 systems, got {len(systems)}")
    correct = 0
    counted = 0
    for a, b in combinations(systems, 2):
        human_sign = _sign(human_sys[a] - human_sys[b])
        if human_sign == 0:
            continue
        counted += 1
        if _sign(metric_sys[a] - metric_sys[b]) == human_sign:
            correct += 1
    if counted == 0:
        raise ValueError("all system pairs are human-tied; accuracy undefined")
    return float(Fraction(correct, counted))


def _retained(items: Iterable[EvalItem]) -> list[EvalItem]:
    kept = [item for item in items if len(item.scored_systems()) >= 2]
    if not kept:
        raise ValueError("no item has 2 or more systems with metric scores")
    return kept


def segment_accuracy(items: Iterable[EvalItem], epsilon: float) -> float:
    """Tie-aware pairwise accuracy, averaged unweighted across items.

    Within each item, a pair's predicted relation is a tie when the
    absolute metric difference is <= epsilon and the sign otherwise;
    the human relation is a tie only on exact equality. Items with
    fewer than two metric-scored systems are dropped.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    kept = _retained(items)
    total = Fraction(0)
    for item in kept:
        systems = item.scored_systems()
        correct = 0
        pairs = 0
        for a, b in combinations(systems, 2):
            ea, eb = item.per_system[a], item.per_system[b]
            human_rel = _sign(ea.human_score - eb.human_score)
            metric_delta = ea.metric_score - eb.metric_score
            metric_rel = 0 if abs(metric_delta) <= epsilon else _sign(metric_delta)
            pairs += 1
            correct += human_rel == metric_rel
        total += Fraction(correct, pairs)
    return float(total / len(kept))


def tau_optimize(items: Iterable[EvalItem]) -> TauCalibration:
    """Smallest epsilon maximizing tie-aware segment accuracy.

    Candidate thresholds are 0 and every observed within-item absolute
    metric difference; accuracy is piecewise constant between them. The
    sweep walks the candidates in ascending order, flipping each pair
    from its sign prediction to a tie prediction when the threshold
    reaches the pair's absolute difference, with exact rational
    bookkeeping so ties in accuracy resolve to the smallest epsilon.
    """
    kept = _retained(items)
    n_items = len(kept)
    accuracy = Fraction(0)
    flips: list[tuple[float, Fraction]] = []
    for item in kept:
        systems = item.scored_systems()
        pairs = list(combinations(systems, 2))
        weight = Fraction(1, n_items * len(pairs))
        for a, b in pairs:
            ea, eb = item.per_system[a], item.per_system[b]
            human_rel = _sign(ea.human_score - eb.human_score)
            metric_delta = abs(ea.metric_score - eb.metric_score)
            correct_as_sign = human_rel == _sign(ea.metric_score - eb.metric_score)
            correct_as_tie = human_rel == 0
            if metric_delta == 0:
                accuracy += weight * correct_as_tie
            else:
                accuracy += weight * correct_as_sign
                if correct_as_tie != correct_as_sign:
                    flips.append((metric_delta,
                                  weight * (correct_as_tie - correct_as_sign)))
    best_eps = 0.0
    best_accuracy = accuracy
    flips.sort(key=lambda f: f[0])
    for delta, group in groupby(flips, key=lambda f: f[0]):
        for _, change in group:
            accuracy += change
        if accuracy > best_accuracy:
            best_eps = delta
            best_accuracy = accuracy
    return TauCalibration(epsilon=best_eps,
                          accuracy_at_epsilon=float(best_accuracy))


def pearson_no_grouping(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation over the flattened score pairs."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError(f"need at least 2 points, got {len(xs)}")
    mean_x = math.fsum(xs) / len(xs)
    mean_y = math.fsum(ys) / len(ys)
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0 or var_y == 0:
        raise ValueError("correlation undefined: at least one side has zero variance")
    return math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)


def tie_rates(items: Iterable[EvalItem],
              source: Union[str, ScoreTable]) -> float:
    """Fraction of within-item unordered pairs with exactly equal scores.

    ``source`` selects which scores are compared: the HUMAN sentinel for
    the items' human scores, the METRIC sentinel for their attached
    metric scores, or a score table keyed by (system, item).
    """
    tied = 0
    pairs = 0
    for item in items:
        if isinstance(source, ScoreTable):
            systems = sorted(item.per_system)
            scores = {}
            for system in systems:
                value = source.entries.get((system, item.item_key))
                if value is None:
                    raise ValueError(
                        f"score table {source.metric_name!r} has no entry for "
                        f"system {system!r} on item {item.item_key}")
                scores[system] = value
        elif source == HUMAN:
            systems = sorted(item.per_system)
            scores = {s: item.per_system[s].human_score for s in systems}
        elif source == METRIC:
            systems = item.scored_systems()
            scores = {s: item.per_system[s].metric_score for s in systems}
        else:
            raise ValueError(f"unknown score source: {source!r}")
        for a, b in combinations(systems, 2):
            pairs += 1
            tied += scores[a] == scores[b]
    if pairs == 0:
        raise ValueError("no within-item system pairs")
    return float(Fraction(tied, pairs))


def mode_correlation(direct: ScoreTable, aligned: ScoreTable) -> float:
    """Pearson correlation between two score tables over shared keys."""
    missing = sorted(set(direct.entries) ^ set(aligned.entries))
    if missing:
        raise ValueError(f"score tables cover different (system, item) keys; "
                         f"mismatched: {missing[:5]}"
                         + ("..." if len(missing) > 5 else ""))
    keys = sorted(direct.entries)
    return pearson_no_grouping([direct.entries[k] for k in keys],
                               [aligned.entries[k] for k in keys])
