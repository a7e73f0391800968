"""Toxicity scoring of candidate mentions through a pluggable backend.

Two backends share one contract (`score(text) -> float in [0, 1]`): a live
HTTP client for a comment-analysis endpoint, and a deterministic mock that
scores the fraction of tokens found in a toxic lexicon so tests and batch
runs work offline.  Aggregation samples tweets uniformly with a fixed seed
and reduces in sample order, so reports are reproducible bit for bit.
"""

from __future__ import annotations

import logging
import os
import random
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .corpus import Corpus, SourceKind
from .timeutil import floor_to_day

__all__ = [
    "ToxicityBackendError",
    "TransientBackendError",
    "RetryPolicy",
    "MockBackend",
    "PerspectiveBackend",
    "ToxicityReport",
    "score_document",
    "candidate_toxicity",
]

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[\w']+")

PERSPECTIVE_URL = "https://commentanalyzer.googleapis.com/v1alpha1/comments:analyze"
API_KEY_ENV = "PERSPECTIVE_API_KEY"


class ToxicityBackendError(Exception):
    """Permanent scoring failure; the document is skipped."""


class TransientBackendError(ToxicityBackendError):
    """Retryable failure (timeouts, 5xx, rate limits)."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    initial_backoff: float = 1.0

    def backoff(self, attempt: int) -> float:
        # attempt is 1-based; 1 s, 2 s, 4 s, ...
        return self.initial_backoff * (2.0 ** (attempt - 1))


class MockBackend:
    """Deterministic offline scorer: fraction of tokens in a toxic lexicon."""

    def __init__(self, toxic_tokens):
        self.toxic = frozenset(t.lower() for t in toxic_tokens)

    def score(self, text: str) -> float:
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            return 0.0
        hits = sum(1 for t in tokens if t in self.toxic)
        return hits / len(tokens)


class PerspectiveBackend:
    """HTTP client for the comment-analysis endpoint.

    POSTs {"comment": {"text": ...}, "requestedAttributes": {"TOXICITY": {}}}
    and reads attributeScores.TOXICITY.summaryScore.value from the response.
    The API key comes from the PERSPECTIVE_API_KEY environment variable
    unless passed explicitly; a session-like object with .post() may be
    injected for testing.
    """

    def __init__(self, api_key: str | None = None, url: str = PERSPECTIVE_URL, session=None, timeout: float = 10.0):
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        if not self.api_key:
            raise ValueError(f"no API key: set {API_KEY_ENV} or pass api_key")
        self.url = url
        self.timeout = timeout
        if session is None:
            import requests

            session = requests.Session()
        self.session = session

    def score(self, text: str) -> float:
        body = {"comment": {"text": text}, "requestedAttributes": {"TOXICITY": {}}}
        try:
            response = self.session.post(
                f"{self.url}?key={self.api_key}", json=body, timeout=self.timeout
            )
        except Exception as exc:  # connection-level problems are retryable
            raise TransientBackendError(f"request failed: {exc}") from exc
        if response.status_code == 429:
            retry_after = response.headers.get("Retry-After")
            raise TransientBackendError(
                "rate limited",
                retry_after=float(retry_after) if retry_after else None,
            )
        if response.status_code >= 500:
            raise TransientBackendError(f"server error {response.status_code}")
        if response.status_code != 200:
            raise ToxicityBackendError(f"request rejected: {response.status_code}")
        try:
            value = response.json()["attributeScores"]["TOXICITY"]["summaryScore"]["value"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ToxicityBackendError(f"malformed response: {exc}") from exc
        return float(value)


def score_document(
    text: str,
    backend,
    retry: RetryPolicy = RetryPolicy(),
    sleep=time.sleep,
) -> float:
    """Score one document, retrying transient failures with exponential
    backoff (honoring any server-provided retry delay)."""
    if not text:
        raise ValueError("cannot score empty text")
    last: TransientBackendError | None = None
    for attempt in range(1, retry.max_attempts + 1):
        try:
            value = float(backend.score(text))
        except TransientBackendError as exc:
            last = exc
            if attempt == retry.max_attempts:
                break
            delay = retry.backoff(attempt)
            if exc.retry_after is not None:
                delay = max(delay, exc.retry_after)
            logger.warning("transient scoring failure (attempt %d): %s; retrying", attempt, exc)
            sleep(delay)
            continue
        if not 0.0 <= value <= 1.0:
            raise ToxicityBackendError(f"backend returned out-of-range score {value!r}")
        return value
    raise ToxicityBackendError(
        f"giving up after {retry.max_attempts} attempts: {last}"
    )


@dataclass(frozen=True)
class ToxicityReport:
    candidate: str
    n_scored: int
    mean_toxicity: float
    sample_seed: int
    n_skipped: int = 0


def _stratified_sample(rng: random.Random, docs, k: int) -> list[int]:
    # Nonstandard alternative sampler: spread the draw across UTC days in
    # proportion to volume, then top up uniformly from the remainder.
    by_day: dict[int, list[int]] = {}
    for i, doc in enumerate(docs):
        by_day.setdefault(floor_to_day(doc.timestamp), []).append(i)
    chosen: list[int] = []
    for day in sorted(by_day):
        indices = by_day[day]
        quota = min(len(indices), (k * len(indices)) // len(docs))
        chosen.extend(rng.sample(indices, quota))
    remainder = [i for i in range(len(docs)) if i not in set(chosen)]
    if len(chosen) < k:
        chosen.extend(rng.sample(remainder, k - len(chosen)))
    return chosen[:k]


def candidate_toxicity(
    corpus: Corpus,
    candidate: str,
    n: int,
    seed: int,
    backend,
    concurrency: int = 4,
    retry: RetryPolicy = RetryPolicy(),
    sleep=time.sleep,
    time_stratified: bool = False,
) -> ToxicityReport:
    """Mean toxicity over a seeded uniform sample (without replacement) of
    min(n, available) tweets mentioning the candidate.

    Documents whose scoring fails permanently are skipped and tallied.
    Requests run on up to `concurrency` worker threads; the reduction walks
    results in sample order, so the mean is deterministic for a given seed.
    """
    if n < 1:
        raise ValueError("sample size must be >= 1")
    docs = corpus.documents(candidate, SourceKind.TWITTER)
    if not docs:
        raise ValueError(f"candidate {candidate!r} has no tweets to score")
    rng = random.Random(seed)
    k = min(n, len(docs))
    if time_stratified:
        indices = _stratified_sample(rng, docs, k)
    else:
        indices = rng.sample(range(len(docs)), k)
    texts = [docs[i].text for i in indices]

    def _score(text: str) -> float | None:
        if not text:
            logger.warning("skipping unscorable empty document")
            return None
        try:
            return score_document(text, backend, retry=retry, sleep=sleep)
        except ToxicityBackendError as exc:
            logger.warning("skipping document: %s", exc)
            return None

    if concurrency > 1:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            results = list(pool.map(_score, texts))
    else:
        results = [_score(text) for text in texts]
    scores = [s for s in results if s is not None]
    if not scores:
        raise ValueError(f"no scorable documents for candidate {candidate!r}")
    return ToxicityReport(
        candidate=candidate,
        n_scored=len(scores),
        mean_toxicity=sum(scores) / len(scores),
        sample_seed=seed,
        n_skipped=len(results) - len(scores),
    )
