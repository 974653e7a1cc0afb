"""Built-in BLEU scoring, paragraph scoring modes, and length statistics.

Tokenization for BLEU is the toolkit's canonical scheme: a space is
inserted around every Unicode punctuation character, then the text is
split on whitespace. It is documented and reproducible, but makes no
claim of parity with any particular reference tokenizer signature.

Orders for which the hypothesis has no n-grams at all are dropped from
the geometric mean in every mode. Sentence BLEU applies exponential
smoothing to the remaining zero precisions (each is replaced by
1 / (2^z * total_n), z counting the zero orders seen so far); corpus
and direct-mode scoring are unsmoothed, with any zero pooled precision
collapsing the score to 0.
"""

from __future__ import annotations

import functools
import math
import unicodedata
from collections import Counter, defaultdict
from typing import Callable, Iterable, Sequence, Tuple

from .model import ItemKey, ParagraphInstance, RatingRecord, ScoreMode, ScoreTable

MAX_NGRAM_ORDER = 4

TokenCounter = Callable[[str], int]


@functools.lru_cache(maxsize=4096)
def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Split on whitespace after padding Unicode punctuation with spaces."""
    parts = []
    for ch in text:
        if _is_punct(ch):
            parts.append(f" {ch} ")
        else:
            parts.append(ch)
    return "".join(parts).split()


def whitespace_token_count(text: str) -> int:
    """Default fallback counter: number of whitespace-separated tokens."""
    return len(text.split())


def char_token_count(text: str) -> int:
    """Alternative counter: number of characters."""
    return len(text)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _pair_stats(hyp_tokens: Sequence[str],
                ref_tokens: Sequence[str]) -> tuple[list[int], list[int]]:
    """Clipped match and total counts for n-gram orders 1..4."""
    correct = []
    total = []
    for n in range(1, MAX_NGRAM_ORDER + 1):
        hyp_ngrams = _ngram_counts(hyp_tokens, n)
        ref_ngrams = _ngram_counts(ref_tokens, n)
        correct.append(sum(min(count, ref_ngrams[gram])
                           for gram, count in hyp_ngrams.items()))
        total.append(sum(hyp_ngrams.values()))
    return correct, total


def _bleu_from_counts(correct: Sequence[int], total: Sequence[int],
                      hyp_len: int, ref_len: int, smooth: bool) -> float:
    if hyp_len == 0:
        return 0.0
    # Orders the hypothesis is too short to produce are dropped from the
    # geometric mean in both modes; at least order 1 always remains.
    orders = [n for n in range(MAX_NGRAM_ORDER) if total[n] > 0]
    log_sum = 0.0
    if smooth:
        smooth_factor = 1.0
        for n in orders:
            if correct[n] == 0:
                smooth_factor *= 2.0
                precision = 1.0 / (smooth_factor * total[n])
            else:
                precision = correct[n] / total[n]
            log_sum += math.log(precision)
    else:
        if any(correct[n] == 0 for n in orders):
            return 0.0
        for n in orders:
            log_sum += math.log(correct[n] / total[n])
    log_sum /= len(orders)
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum)


def bleu_sentence(hypothesis: str, reference: str) -> float:
    """Smoothed sentence-level BLEU in [0, 100]; 0 for an empty hypothesis."""
    hyp_tokens = tokenize(hypothesis)
    ref_tokens = tokenize(reference)
    correct, total = _pair_stats(hyp_tokens, ref_tokens)
    return _bleu_from_counts(correct, total, len(hyp_tokens), len(ref_tokens),
                             smooth=True)


def bleu_corpus(pairs: Iterable[Tuple[str, str]]) -> float:
    """Unsmoothed corpus BLEU over pooled clipped counts and lengths."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("corpus BLEU needs at least one (hypothesis, reference) pair")
    pooled_correct = [0] * MAX_NGRAM_ORDER
    pooled_total = [0] * MAX_NGRAM_ORDER
    hyp_len = 0
    ref_len = 0
    for hypothesis, reference in pairs:
        hyp_tokens = tokenize(hypothesis)
        ref_tokens = tokenize(reference)
        correct, total = _pair_stats(hyp_tokens, ref_tokens)
        for n in range(MAX_NGRAM_ORDER):
            pooled_correct[n] += correct[n]
            pooled_total[n] += total[n]
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
    return _bleu_from_counts(pooled_correct, pooled_total, hyp_len, ref_len,
                             smooth=False)


class BleuMetric:
    """Built-in lexical overlap metric with sentence and direct variants."""

    name = "bleu"

    def sentence_score(self, hypothesis: str, reference: str) -> float:
        return bleu_sentence(hypothesis, reference)

    def direct_score(self, hypothesis: str, reference: str) -> float:
        """One long segment, counted the corpus way (no smoothing)."""
        hyp_tokens = tokenize(hypothesis)
        ref_tokens = tokenize(reference)
        correct, total = _pair_stats(hyp_tokens, ref_tokens)
        return _bleu_from_counts(correct, total, len(hyp_tokens), len(ref_tokens),
                                 smooth=False)


BUILTIN_METRICS = {BleuMetric.name: BleuMetric()}


def _check_unit(paragraphs: list[ParagraphInstance]) -> int:
    if not paragraphs:
        raise ValueError("no paragraphs to score")
    units = {(p.dataset_id, p.lang_pair, p.k) for p in paragraphs}
    if len(units) > 1:
        raise ValueError(f"paragraphs span multiple (dataset, lang_pair, k) "
                         f"units: {sorted(units)}")
    return paragraphs[0].k


def score_direct(metric, paragraphs: Iterable[ParagraphInstance]) -> ScoreTable:
    """Score each paragraph as one long segment."""
    paragraphs = list(paragraphs)
    k = _check_unit(paragraphs)
    entries: dict[tuple[str, ItemKey], float] = {}
    for p in paragraphs:
        key = (p.system_id, p.item_key)
        if key in entries:
            raise ValueError(f"duplicate paragraph for {key}")
        entries[key] = metric.direct_score(p.hypothesis_text, p.reference_text)
    return ScoreTable(metric_name=metric.name, mode=ScoreMode.DIRECT, k=k,
                      entries=dict(sorted(entries.items())))


def score_aligned_avg(metric, paragraphs: Iterable[ParagraphInstance],
                      records: Iterable[RatingRecord]) -> ScoreTable:
    """Score each paragraph as the mean of its k aligned sentence scores.

    The k (hypothesis, reference) sentence pairs are reconstructed from
    the rating records the paragraph was built from, so this mode is only
    available for built-in metrics; externally scored metrics have no
    sentence alignment to average over.
    """
    if not hasattr(metric, "sentence_score"):
        raise ValueError(f"aligned-average mode is unsupported for "
                         f"{getattr(metric, 'name', metric)!r}: no sentence-level "
                         f"scores are available")
    paragraphs = list(paragraphs)
    k = _check_unit(paragraphs)
    by_key = {r.key: r for r in records}
    entries: dict[tuple[str, ItemKey], float] = {}
    for p in paragraphs:
        sentence_scores = []
        for i in range(p.start_index, p.start_index + p.k):
            record = by_key.get((p.dataset_id, p.lang_pair, p.system_id, p.doc_id, i))
            if record is None:
                raise ValueError(f"missing rating record for sentence {i} of "
                                 f"paragraph {p.sort_key()}")
            sentence_scores.append(
                metric.sentence_score(record.hypothesis_text, record.reference_text))
        key = (p.system_id, p.item_key)
        if key in entries:
            raise ValueError(f"duplicate paragraph for {key}")
        entries[key] = math.fsum(sentence_scores) / len(sentence_scores)
    return ScoreTable(metric_name=metric.name, mode=ScoreMode.ALIGNED_AVG, k=k,
                      entries=dict(sorted(entries.items())))


def _hyp_count(p: ParagraphInstance, counter: TokenCounter) -> int:
    return p.token_count_hyp if p.token_count_hyp is not None \
        else counter(p.hypothesis_text)


def _ref_count(p: ParagraphInstance, counter: TokenCounter) -> int:
    return p.token_count_ref if p.token_count_ref is not None \
        else counter(p.reference_text)


def nearest_rank_percentile(values: Sequence[int], percentile: float) -> int:
    """Nearest-rank percentile: the ceil(p/100 * N)-th smallest value."""
    if not values:
        raise ValueError("no values")
    if not 0 < percentile < 100:
        raise ValueError(f"percentile must be in (0, 100), got {percentile}")
    ordered = sorted(values)
    rank = math.ceil(percentile / 100.0 * len(ordered))
    return ordered[max(rank, 1) - 1]


def length_percentiles(paragraphs: Iterable[ParagraphInstance],
                       counter: TokenCounter,
                       percentiles: Sequence[float]) -> dict[int, dict[float, int]]:
    """Hypothesis token-length percentiles per k (nearest-rank method).

    Precomputed token counts on the paragraphs take precedence over the
    fallback counter.
    """
    for p_value in percentiles:
        if not 0 < p_value < 100:
            raise ValueError(f"percentile must be in (0, 100), got {p_value}")
    by_k: dict[int, list[int]] = defaultdict(list)
    for p in paragraphs:
        by_k[p.k].append(_hyp_count(p, counter))
    return {k: {p_value: nearest_rank_percentile(counts, p_value)
                for p_value in percentiles}
            for k, counts in sorted(by_k.items())}


def truncation_stats(paragraphs: Iterable[ParagraphInstance],
                     counter: TokenCounter,
                     budget: int) -> dict[int, tuple[int, float]]:
    """Count paragraphs whose reference + hypothesis tokens exceed budget.

    Returns, per k, the count and the fraction of that k's paragraphs.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    over: dict[int, int] = defaultdict(int)
    totals: dict[int, int] = defaultdict(int)
    for p in paragraphs:
        totals[p.k] += 1
        if _ref_count(p, counter) + _hyp_count(p, counter) > budget:
            over[p.k] += 1
    return {k: (over[k], over[k] / totals[k]) for k in sorted(totals)}
