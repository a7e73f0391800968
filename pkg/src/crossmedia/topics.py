"""Topic matching via averaged word embeddings and cosine similarity.

Each document embeds as the mean vector of its in-vocabulary tokens and is
assigned to the topic with the highest cosine similarity, subject to a
minimum cutoff.  Per-candidate, per-source distributions over the topic
list then quantify how differently the sources frame a candidate; the
distance between two distributions is the base-2 Jensen-Shannon divergence.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Corpus, SourceKind

__all__ = [
    "EmbeddingTable",
    "Topic",
    "TopicDistribution",
    "load_embeddings",
    "load_topics",
    "build_topics",
    "embed_text",
    "match_topic",
    "topic_distribution",
    "mismatch",
    "jensen_shannon",
]

_WORD_RE = re.compile(r"[a-z0-9']+")

DEFAULT_CUTOFF = 0.3


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: Mapping[str, np.ndarray]

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("embedding table must not be empty")

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class Topic:
    name: str
    description: str
    vector: np.ndarray


@dataclass(frozen=True)
class TopicDistribution:
    candidate: str
    source: SourceKind
    percentages: Mapping[str, float]
    matched_count: int
    discarded_count: int
    unembeddable_count: int


def load_embeddings(path) -> EmbeddingTable:
    """Parse the text format: first line `V D`, then V lines `token v1..vD`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}:1: expected header 'V D'")
        try:
            vocab_size, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ValueError(f"{path}:1: expected integer header 'V D'") from None
        if vocab_size < 1 or dim < 1:
            raise ValueError(f"{path}:1: V and D must be positive")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                raise ValueError(
                    f"{path}:{lineno}: expected token plus {dim} floats, got "
                    f"{len(parts) - 1} values"
                )
            token = parts[0]
            if token in vectors:
                raise ValueError(f"{path}:{lineno}: duplicate token {token!r}")
            try:
                vectors[token] = np.array([float(v) for v in parts[1:]])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: unparsable vector component") from None
    if len(vectors) != vocab_size:
        raise ValueError(f"{path}: header declares {vocab_size} tokens, found {len(vectors)}")
    return EmbeddingTable(dimension=dim, vectors=vectors)


def embed_text(text: str, table: EmbeddingTable) -> np.ndarray | None:
    """Mean of the in-vocabulary token vectors (lowercased, punctuation
    stripped); None when no token is known."""
    tokens = _WORD_RE.findall(text.lower())
    hits = [table.vectors[t] for t in tokens if t in table.vectors]
    if not hits:
        return None
    return np.mean(hits, axis=0)


def load_topics(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"{path}: expected a non-empty JSON array of topics")
    for i, entry in enumerate(raw):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("name"), str)
            or not isinstance(entry.get("description"), str)
        ):
            raise ValueError(f"{path}: topic #{i} must have string 'name' and 'description'")
    return raw


def build_topics(entries: Sequence[Mapping[str, str]], table: EmbeddingTable) -> tuple[Topic, ...]:
    """Embed each topic from its name plus description; a topic with no
    in-vocabulary token cannot be matched and is an error."""
    topics: list[Topic] = []
    for entry in entries:
        name = entry["name"]
        vector = embed_text(f"{name} {entry['description']}", table)
        if vector is None or float(np.linalg.norm(vector)) == 0.0:
            raise ValueError(f"topic {name!r} has no embeddable tokens")
        topics.append(Topic(name=name, description=entry["description"], vector=vector))
    names = [t.name for t in topics]
    if len(set(names)) != len(names):
        raise ValueError("duplicate topic names")
    return tuple(topics)


def match_topic(
    doc_vector: np.ndarray, topics: Sequence[Topic], cutoff: float = DEFAULT_CUTOFF
) -> Topic | None:
    """Cosine-similarity argmax over topics; None below the cutoff or for a
    zero-norm document vector.  Ties break to the earlier topic."""
    if not topics:
        raise ValueError("topics must not be empty")
    if not -1.0 <= cutoff <= 1.0:
        raise ValueError(f"cutoff must be in [-1, 1], got {cutoff!r}")
    v = np.asarray(doc_vector, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return None
    sims = np.array(
        [float(np.dot(v, t.vector)) / (norm * float(np.linalg.norm(t.vector))) for t in topics]
    )
    best = int(np.argmax(sims))
    if sims[best] < cutoff:
        return None
    return topics[best]


def topic_distribution(
    corpus: Corpus,
    candidate: str,
    source: SourceKind,
    topics: Sequence[Topic],
    table: EmbeddingTable,
    cutoff: float = DEFAULT_CUTOFF,
) -> TopicDistribution:
    """Match every in-scope document and normalize per candidate: each
    topic's share is its matched count over all matched documents.
    Unembeddable documents count as discarded but are also reported apart."""
    docs = corpus.documents(candidate, SourceKind(source))
    if not docs:
        raise ValueError(f"no documents for candidate {candidate!r} in source {source!r}")
    counts = {t.name: 0 for t in topics}
    discarded = 0
    unembeddable = 0
    for doc in docs:
        vector = embed_text(doc.text, table)
        if vector is None:
            discarded += 1
            unembeddable += 1
            continue
        topic = match_topic(vector, topics, cutoff)
        if topic is None:
            discarded += 1
        else:
            counts[topic.name] += 1
    matched = sum(counts.values())
    if matched == 0:
        raise ValueError(
            f"no documents matched any topic for {candidate!r}/{SourceKind(source).value}; "
            f"consider lowering the cutoff (currently {cutoff})"
        )
    percentages = {name: count / matched for name, count in counts.items()}
    return TopicDistribution(
        candidate=candidate,
        source=SourceKind(source),
        percentages=percentages,
        matched_count=matched,
        discarded_count=discarded,
        unembeddable_count=unembeddable,
    )


def _aligned(dist: TopicDistribution | Mapping[str, float], keys: list[str]) -> np.ndarray:
    mapping = dist.percentages if isinstance(dist, TopicDistribution) else dist
    return np.array([float(mapping[k]) for k in keys])


def mismatch(dist_a, dist_b) -> float:
    """Jensen-Shannon divergence (log base 2) between two distributions over
    the same topic list: 0 for identical, 1 for disjoint supports."""
    keys_a = list((dist_a.percentages if isinstance(dist_a, TopicDistribution) else dist_a))
    keys_b = list((dist_b.percentages if isinstance(dist_b, TopicDistribution) else dist_b))
    if sorted(keys_a) != sorted(keys_b):
        raise ValueError("distributions cover different topic lists")
    p = _aligned(dist_a, keys_a)
    q = _aligned(dist_b, keys_a)
    return jensen_shannon(p, q)


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """JSD(p, q) = H(m) - (H(p) + H(q))/2 with m the midpoint, in bits."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions must have the same length")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("probabilities must be non-negative")
    total = 0.0
    for pi, qi in zip(p, q):
        mi = 0.5 * (pi + qi)
        # Pair the two terms before accumulating so the result is
        # bit-for-bit symmetric in (p, q).
        term_p = 0.5 * pi * math.log2(pi / mi) if pi > 0 else 0.0
        term_q = 0.5 * qi * math.log2(qi / mi) if qi > 0 else 0.0
        total += term_p + term_q
    return min(1.0, max(0.0, total))
