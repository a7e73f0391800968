#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixture under fixtures/.

Deterministic (fixed seed): a 40-day corpus for three synthetic candidates
with coupled twitter/news streams (news echoes a thinned copy of tweets
3 hours later, so the lag analyses have something to find), plus a small
sentiment lexicon, topic list, embedding table, and a ready-to-run config.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from crossmedia.timeutil import DAY, HOUR, format_date, format_rfc3339  # noqa: E402

ROOT = Path(__file__).resolve().parents[1] / "fixtures"

START = 1577836800  # 2020-01-01T00:00:00Z
N_DAYS = 40
END = START + N_DAYS * DAY

CANDIDATES = ["alder", "birch", "cedar"]
TWEET_RATE_PER_HOUR = {"alder": 2.2, "birch": 1.5, "cedar": 0.9}
NEWS_ECHO_FRACTION = {"alder": 0.30, "birch": 0.25, "cedar": 0.20}
NEWS_BACKGROUND_PER_HOUR = 0.15
OWN_TWEET_RATE_PER_HOUR = 0.12
NEWS_ECHO_DELAY = 3 * HOUR

OUTLETS = {
    "harbor_post": "liberal",
    "union_wire": "central",
    "ridge_gazette": "conservative",
}

POSITIVE_WORDS = {
    "admirable": 2.3, "bright": 1.6, "decent": 1.4, "excellent": 2.9,
    "favorable": 1.9, "great": 2.5, "hopeful": 1.8, "inspiring": 2.4,
    "progress": 1.5, "strong": 1.7, "succeed": 2.0, "thrive": 2.1,
}
NEGATIVE_WORDS = {
    "awful": -2.7, "bleak": -1.9, "chaotic": -1.6, "decline": -1.5,
    "dreadful": -2.8, "failure": -2.2, "grim": -2.0, "hollow": -1.3,
    "reckless": -2.1, "scandal": -2.4, "vile": -3.0, "weak": -1.4,
}
TOXIC_WORDS = ["vile", "dreadful", "awful", "reckless"]

TOPIC_CLUSTERS = {
    "healthcare": ["healthcare", "hospital", "insurance", "medicine", "clinic", "patients", "coverage", "doctors"],
    "economy": ["economy", "jobs", "wages", "taxes", "budget", "trade", "industry", "growth"],
    "climate": ["climate", "energy", "emissions", "solar", "wind", "carbon", "environment", "renewable"],
    "security": ["security", "defense", "cyber", "border", "military", "threat", "intelligence", "safety"],
    "education": ["education", "schools", "teachers", "students", "tuition", "college", "literacy", "training"],
}
TOPIC_DESCRIPTIONS = {
    "healthcare": "hospital insurance medicine coverage",
    "economy": "jobs wages taxes budget",
    "climate": "energy emissions carbon renewable",
    "security": "defense cyber border military",
    "education": "schools teachers students college",
}
FILLER_WORDS = [
    "about", "after", "again", "along", "around", "because", "before", "being",
    "campaign", "candidate", "county", "debate", "evening", "forum", "meeting",
    "morning", "people", "plan", "press", "rally", "report", "speech", "state",
    "today", "tonight", "town", "update", "voters", "week", "statement",
]


def poisson_times(rng: np.random.Generator, rate_per_hour: float) -> np.ndarray:
    """Homogeneous Poisson events with a mild daily cycle, via thinning."""
    peak = rate_per_hour * 1.4 / HOUR
    n = rng.poisson(peak * (END - START))
    ts = np.sort(rng.integers(START, END, size=n))
    hour_of_day = ((ts - START) % DAY) / HOUR
    accept = rng.random(n) < (1.0 + 0.4 * np.sin(2 * np.pi * hour_of_day / 24.0)) / 1.4
    return ts[accept].astype(np.int64)


def make_text(rng, candidate: str, positive_bias: float) -> tuple[str, str]:
    """Return (text, topic) mixing one topic's words with sentiment/filler."""
    topic = list(TOPIC_CLUSTERS)[rng.integers(0, len(TOPIC_CLUSTERS))]
    words = [candidate]
    words += list(rng.choice(TOPIC_CLUSTERS[topic], size=rng.integers(2, 5), replace=False))
    words += list(rng.choice(FILLER_WORDS, size=rng.integers(1, 4), replace=False))
    pool = POSITIVE_WORDS if rng.random() < positive_bias else NEGATIVE_WORDS
    words += list(rng.choice(sorted(pool), size=rng.integers(1, 3), replace=False))
    if rng.random() < 0.08:
        words.append("not")
    order = rng.permutation(len(words))
    return " ".join(words[i] for i in order), topic


# Per-candidate positive-word probability per bias category; 'alder' carries
# a planted liberal-vs-conservative gap for the t-test outputs.
NEWS_POSITIVE_BIAS = {
    "alder": {"liberal": 0.76, "central": 0.60, "conservative": 0.44},
    "birch": {"liberal": 0.62, "central": 0.55, "conservative": 0.60},
    "cedar": {"liberal": 0.58, "central": 0.62, "conservative": 0.57},
}
TWEET_POSITIVE_BIAS = {"alder": 0.58, "birch": 0.66, "cedar": 0.49}


def main() -> None:
    rng = np.random.default_rng(20260811)
    corpus = ROOT / "corpus"
    (corpus / "events").mkdir(parents=True, exist_ok=True)
    (corpus / "series").mkdir(parents=True, exist_ok=True)

    manifest = {
        "candidates": CANDIDATES,
        "start": format_rfc3339(START),
        "end": format_rfc3339(END),
        "sources": ["twitter", "news", "candidate_twitter"],
        "sampling_rates": {"alder": {"twitter": 0.5}},
    }
    (corpus / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    outlet_names = sorted(OUTLETS)
    counter = 0

    def record(ts: int, kind: str, candidate: str, text: str, outlet: str = "", bias: str = "unknown") -> str:
        nonlocal counter
        counter += 1
        return json.dumps(
            {
                "id": f"doc-{counter:06d}",
                "ts": format_rfc3339(int(ts)),
                "source_kind": kind,
                "outlet": outlet,
                "bias": bias,
                "candidate": candidate,
                "text": text,
            }
        )

    tweet_lines: list[str] = []
    news_lines: list[str] = []
    own_lines: list[str] = []
    tweet_times: dict[str, np.ndarray] = {}

    for candidate in CANDIDATES:
        times = poisson_times(rng, TWEET_RATE_PER_HOUR[candidate])
        tweet_times[candidate] = times
        for ts in times:
            text, _ = make_text(rng, candidate, TWEET_POSITIVE_BIAS[candidate])
            tweet_lines.append(record(int(ts), "twitter", candidate, text))

        echo = times[rng.random(times.size) < NEWS_ECHO_FRACTION[candidate]] + NEWS_ECHO_DELAY
        background = poisson_times(rng, NEWS_BACKGROUND_PER_HOUR)
        news_times = np.sort(np.concatenate([echo[echo < END], background]))
        for ts in news_times:
            outlet = outlet_names[int(rng.integers(0, len(outlet_names)))]
            bias = OUTLETS[outlet]
            text, _ = make_text(rng, candidate, NEWS_POSITIVE_BIAS[candidate][bias])
            news_lines.append(record(int(ts), "news", candidate, text, outlet=outlet, bias=bias))

        for ts in poisson_times(rng, OWN_TWEET_RATE_PER_HOUR):
            text, _ = make_text(rng, candidate, 0.85)
            own_lines.append(record(int(ts), "candidate_twitter", candidate, text))

    (corpus / "events" / "twitter.jsonl").write_text("\n".join(tweet_lines) + "\n", encoding="utf-8")
    (corpus / "events" / "news.jsonl").write_text("\n".join(news_lines) + "\n", encoding="utf-8")
    (corpus / "events" / "candidate_twitter.jsonl").write_text("\n".join(own_lines) + "\n", encoding="utf-8")

    for candidate in CANDIDATES:
        daily = np.bincount((tweet_times[candidate] - START) // DAY, minlength=N_DAYS)
        trends = np.clip(daily * (0.8 + 0.4 * rng.random(N_DAYS)), 0, None)
        poll = np.clip(20 + np.cumsum(rng.normal(0, 0.6, N_DAYS)), 1, None)
        for label, values in (("trends", trends), ("polls", poll)):
            lines = ["date,value"]
            for day in range(N_DAYS):
                lines.append(f"{format_date(START + day * DAY)},{values[day]:.2f}")
            (corpus / "series" / f"{candidate}__{label}.csv").write_text(
                "\n".join(lines) + "\n", encoding="utf-8"
            )

    lexicon_lines = [f"{token}\t{valence}" for token, valence in
                     sorted({**POSITIVE_WORDS, **NEGATIVE_WORDS}.items())]
    (ROOT / "lexicon.tsv").write_text("\n".join(lexicon_lines) + "\n", encoding="utf-8")

    vocab: dict[str, np.ndarray] = {}
    dim = 12
    for name, members in TOPIC_CLUSTERS.items():
        center = rng.normal(0, 1, dim)
        center /= np.linalg.norm(center)
        for word in members:
            vec = center + rng.normal(0, 0.18, dim)
            vocab[word] = vec / np.linalg.norm(vec)
    for word in FILLER_WORDS + CANDIDATES + sorted({**POSITIVE_WORDS, **NEGATIVE_WORDS}):
        if word not in vocab:
            vec = rng.normal(0, 1, dim)
            vocab[word] = 0.35 * vec / np.linalg.norm(vec)
    emb_lines = [f"{len(vocab)} {dim}"]
    for word in sorted(vocab):
        emb_lines.append(word + " " + " ".join(f"{v:.6f}" for v in vocab[word]))
    (ROOT / "embeddings.txt").write_text("\n".join(emb_lines) + "\n", encoding="utf-8")

    topics_payload = [
        {"name": name, "description": TOPIC_DESCRIPTIONS[name]} for name in TOPIC_CLUSTERS
    ]
    (ROOT / "topics.json").write_text(json.dumps(topics_payload, indent=2) + "\n", encoding="utf-8")

    config = {
        "corpus": "corpus",
        "out": "out",
        "seed": 7,
        "granger": {"max_lag": 24},
        "sentiment": {"lexicon": "lexicon.tsv"},
        "topics": {"topics_file": "topics.json", "embeddings": "embeddings.txt", "cutoff": 0.3},
        "toxicity": {
            "backend": "mock",
            "toxic_words": TOXIC_WORDS,
            "sample_size": 150,
            "seed": 11,
            "concurrency": 4,
        },
    }
    (ROOT / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    print(f"fixture written under {ROOT}: {counter} events")


if __name__ == "__main__":
    main()
