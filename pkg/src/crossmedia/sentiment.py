"""Lexicon-and-rule sentiment scoring plus corpus-level summaries.

A document's compound score sums the valences of lexicon tokens after three
context rules (negation flip, booster words, all-caps emphasis), then maps
the sum into (-1, 1) with s / sqrt(s^2 + alpha).  Summaries aggregate the
positive:negative ratio and daily mean sentiment per candidate and scope.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import stats
from .corpus import Bias, Corpus, DocumentEvent, SourceKind
from .timeutil import floor_to_day

__all__ = [
    "RuleConstants",
    "Lexicon",
    "Sentiment",
    "SentimentSummary",
    "BiasComparison",
    "load_lexicon",
    "score",
    "classify",
    "sentiment_summary",
    "bias_comparison",
    "daily_mean_sentiment",
    "format_pos_neg_ratio",
    "SCOPES",
]

# Empirically derived rule constants of the classic lexicon-rule scorer;
# a lexicon file may override them via `#!name=value` header lines.
DEFAULT_NEGATION_FACTOR = 0.74
DEFAULT_BOOSTER_INCREMENT = 0.293
DEFAULT_CAPS_BOOST = 0.733
DEFAULT_NORMALIZATION_ALPHA = 15.0

POSITIVE_THRESHOLD = 0.05
NEGATIVE_THRESHOLD = -0.05

# How many preceding tokens negations and boosters reach over.
_CONTEXT_WINDOW = 3

NEGATION_WORDS = frozenset(
    """
    not no never none nobody nothing neither nor nowhere cannot cant wont
    without hardly scarcely barely aint
    """.split()
)

BOOSTER_WORDS = frozenset(
    """
    very really extremely absolutely incredibly totally utterly completely
    so too hugely tremendously exceptionally remarkably especially
    """.split()
)

_URL_RE = re.compile(r"https?://\S+|www\.\S+")
_EMOJI_RE = re.compile(r"[\U0001F000-\U0001FAFF☀-➿️]")
_TOKEN_RE = re.compile(r"[\w']+")


@dataclass(frozen=True)
class RuleConstants:
    negation_factor: float = DEFAULT_NEGATION_FACTOR
    booster_increment: float = DEFAULT_BOOSTER_INCREMENT
    caps_boost: float = DEFAULT_CAPS_BOOST
    normalization_alpha: float = DEFAULT_NORMALIZATION_ALPHA

    def __post_init__(self):
        values = (
            self.negation_factor,
            self.booster_increment,
            self.caps_boost,
            self.normalization_alpha,
        )
        if not all(math.isfinite(v) for v in values):
            raise ValueError("rule constants must be finite")
        if self.normalization_alpha <= 0:
            raise ValueError("normalization_alpha must be positive")


@dataclass(frozen=True)
class Lexicon:
    valences: Mapping[str, float]
    constants: RuleConstants = field(default_factory=RuleConstants)

    def __post_init__(self):
        if not self.valences:
            raise ValueError("lexicon must not be empty")


class Sentiment(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


def load_lexicon(path) -> Lexicon:
    """Parse a `token<TAB>valence` TSV.  Leading `#!name=value` lines
    override rule constants; plain `#` lines are comments."""
    valences: dict[str, float] = {}
    overrides: dict[str, float] = {}
    names = {f.name for f in RuleConstants.__dataclass_fields__.values()}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#!"):
                body = line[2:].strip()
                if "=" not in body:
                    raise ValueError(f"{path}:{lineno}: expected '#!name=value'")
                name, _, value = body.partition("=")
                name = name.strip()
                if name not in names:
                    raise ValueError(f"{path}:{lineno}: unknown rule constant {name!r}")
                try:
                    overrides[name] = float(value)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: invalid value for {name!r}") from None
                continue
            if line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'token<TAB>valence'")
            token = parts[0].strip().lower()
            if not token:
                raise ValueError(f"{path}:{lineno}: empty token")
            if token in valences:
                raise ValueError(f"{path}:{lineno}: duplicate token {token!r}")
            try:
                valences[token] = float(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: unparsable valence {parts[1]!r}") from None
    if not valences:
        raise ValueError(f"{path}: lexicon file has no entries")
    return Lexicon(valences=valences, constants=RuleConstants(**overrides))


def _tokenize(text: str) -> list[str]:
    cleaned = _EMOJI_RE.sub(" ", _URL_RE.sub(" ", text))
    return _TOKEN_RE.findall(cleaned)


def _is_negation(token: str) -> bool:
    lowered = token.lower().strip("'")
    return lowered in NEGATION_WORDS or lowered.endswith("n't")


def score(text: str, lexicon: Lexicon) -> float:
    """Compound sentiment in (-1, 1).

    Per lexicon hit: boosters within the 3 preceding tokens each add
    booster_increment toward the hit's sign; an ALL-CAPS hit in mixed-case
    text adds caps_boost toward its sign; any negation within the window
    then flips the sign and scales by negation_factor.  The valence sum s
    normalizes to s / sqrt(s^2 + alpha).
    """
    consts = lexicon.constants
    tokens = _tokenize(text)
    if not tokens:
        return 0.0
    cased = [t for t in tokens if t.upper() != t.lower()]
    n_upper = sum(1 for t in cased if t.isupper())
    mixed_case = 0 < n_upper < len(cased)
    total = 0.0
    for i, token in enumerate(tokens):
        valence = lexicon.valences.get(token.lower())
        if valence is None or valence == 0.0:
            continue
        window = tokens[max(0, i - _CONTEXT_WINDOW) : i]
        sign = 1.0 if valence > 0 else -1.0
        for prior in window:
            if prior.lower() in BOOSTER_WORDS:
                valence += sign * consts.booster_increment
        if token.isupper() and mixed_case:
            valence += sign * consts.caps_boost
        if any(_is_negation(prior) for prior in window):
            valence = -consts.negation_factor * valence
        total += valence
    return total / math.sqrt(total * total + consts.normalization_alpha)


def classify(
    compound: float,
    positive_threshold: float = POSITIVE_THRESHOLD,
    negative_threshold: float = NEGATIVE_THRESHOLD,
) -> Sentiment:
    if compound >= positive_threshold:
        return Sentiment.POSITIVE
    if compound <= negative_threshold:
        return Sentiment.NEGATIVE
    return Sentiment.NEUTRAL


# Scopes accepted by sentiment_summary: a whole source kind, or one news
# bias category.
SCOPES = (
    "news",
    "twitter",
    "candidate_twitter",
    "news:liberal",
    "news:central",
    "news:conservative",
)


def _select(corpus: Corpus, candidate: str, scope: str) -> tuple[DocumentEvent, ...]:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; expected one of {', '.join(SCOPES)}")
    if scope.startswith("news:"):
        bias = Bias(scope.split(":", 1)[1])
        docs = corpus.documents(candidate, SourceKind.NEWS)
        return tuple(d for d in docs if d.bias is bias)
    return corpus.documents(candidate, SourceKind(scope))


@dataclass(frozen=True)
class SentimentSummary:
    candidate: str
    scope: str
    positive: int
    negative: int
    neutral: int
    ratio: float | None
    mean_daily_sentiment: float


def daily_mean_sentiment(docs: Sequence[DocumentEvent], lexicon: Lexicon) -> np.ndarray:
    """Mean compound per UTC day, ordered by day; empty days are skipped."""
    by_day: dict[int, list[float]] = {}
    for doc in docs:
        by_day.setdefault(floor_to_day(doc.timestamp), []).append(score(doc.text, lexicon))
    return np.array([float(np.mean(by_day[day])) for day in sorted(by_day)])


def sentiment_summary(
    corpus: Corpus,
    candidate: str,
    scope: str,
    lexicon: Lexicon,
    positive_threshold: float = POSITIVE_THRESHOLD,
    negative_threshold: float = NEGATIVE_THRESHOLD,
) -> SentimentSummary:
    """Classify every in-scope document; ratio is positive/negative counts
    (None when nothing is negative), and the mean is over daily means."""
    docs = _select(corpus, candidate, scope)
    if not docs:
        raise ValueError(f"no documents for candidate {candidate!r} in scope {scope!r}")
    counts = {Sentiment.POSITIVE: 0, Sentiment.NEGATIVE: 0, Sentiment.NEUTRAL: 0}
    for doc in docs:
        label = classify(score(doc.text, lexicon), positive_threshold, negative_threshold)
        counts[label] += 1
    daily = daily_mean_sentiment(docs, lexicon)
    negative = counts[Sentiment.NEGATIVE]
    return SentimentSummary(
        candidate=candidate,
        scope=scope,
        positive=counts[Sentiment.POSITIVE],
        negative=negative,
        neutral=counts[Sentiment.NEUTRAL],
        ratio=(counts[Sentiment.POSITIVE] / negative) if negative > 0 else None,
        mean_daily_sentiment=float(daily.mean()),
    )


@dataclass(frozen=True)
class BiasComparison:
    candidate: str
    ratios: Mapping[str, float | None]
    deltas: Mapping[str, float | None]
    tests: Mapping[tuple[str, str], stats.TestResult]
    omitted: tuple[str, ...]


def bias_comparison(corpus: Corpus, candidate: str, lexicon: Lexicon) -> BiasComparison:
    """Per-bias-category positive:negative ratios (mean-shifted deltas) and
    pairwise t-tests on the daily mean sentiment of each category pair."""
    categories = (Bias.LIBERAL, Bias.CENTRAL, Bias.CONSERVATIVE)
    news = corpus.documents(candidate, SourceKind.NEWS)
    grouped = {
        bias.value: tuple(d for d in news if d.bias is bias) for bias in categories
    }
    present = [name for name, docs in grouped.items() if docs]
    omitted = tuple(name for name, docs in grouped.items() if not docs)
    if len(present) < 2:
        raise ValueError(
            f"need documents in at least 2 bias categories for {candidate!r}, "
            f"found {len(present)}"
        )
    ratios: dict[str, float | None] = {}
    for name in present:
        summary = sentiment_summary(corpus, candidate, f"news:{name}", lexicon)
        ratios[name] = summary.ratio
    defined = [r for r in ratios.values() if r is not None]
    center = float(np.mean(defined)) if defined else 0.0
    deltas = {name: (r - center if r is not None else None) for name, r in ratios.items()}
    tests: dict[tuple[str, str], stats.TestResult] = {}
    for i, a in enumerate(present):
        for b in present[i + 1 :]:
            da = daily_mean_sentiment(grouped[a], lexicon)
            db = daily_mean_sentiment(grouped[b], lexicon)
            if len(da) >= 2 and len(db) >= 2:
                tests[(a, b)] = stats.welch_t_test(da, db)
    return BiasComparison(
        candidate=candidate, ratios=ratios, deltas=deltas, tests=tests, omitted=omitted
    )


def ratio_deltas(ratios: Mapping[str, float | None]) -> dict[str, float | None]:
    """Mean-shift a set of ratios: delta = ratio - mean(defined ratios)."""
    defined = [r for r in ratios.values() if r is not None]
    center = float(np.mean(defined)) if defined else 0.0
    return {name: (r - center if r is not None else None) for name, r in ratios.items()}


def format_pos_neg_ratio(ratio: float | None) -> str:
    """Presentation for positive:negative ratios; no negatives means infinity."""
    if ratio is None:
        return "∞"
    return f"{ratio:.4g}"
