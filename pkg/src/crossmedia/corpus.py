"""Corpus ingestion and count-series construction.

A corpus directory looks like:

    manifest.json       candidate list, UTC time range, source declarations,
                        optional per-(candidate, source) sampling rates
    events/*.jsonl      one document per line with keys exactly
                        id, ts, source_kind, outlet, bias, candidate, text
    series/*.csv        optional daily value series named
                        <candidate>__<label>.csv with header `date,value`

Ingestion is strict: malformed records fail fast with the file and line
number, and the resulting Corpus is immutable.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .timeutil import DAY, ceil_div, floor_to_day, parse_date, parse_rfc3339

__all__ = [
    "SourceKind",
    "Bias",
    "DocumentEvent",
    "EventSeries",
    "BinnedSeries",
    "ValueSeries",
    "SummaryRow",
    "CorpusSummary",
    "DistributionStats",
    "Corpus",
    "IngestError",
    "ingest_corpus",
    "bin_events",
    "daily_counts",
    "corpus_summary",
    "distribution_stats",
    "format_count",
    "format_rate",
    "format_ratio",
]

_EVENT_KEYS = frozenset({"id", "ts", "source_kind", "outlet", "bias", "candidate", "text"})


class SourceKind(str, enum.Enum):
    TWITTER = "twitter"
    NEWS = "news"
    CANDIDATE_TWITTER = "candidate_twitter"


class Bias(str, enum.Enum):
    LIBERAL = "liberal"
    CENTRAL = "central"
    CONSERVATIVE = "conservative"
    UNKNOWN = "unknown"


class IngestError(Exception):
    """Raised for malformed corpus input; the message names file and line."""


@dataclass(frozen=True)
class DocumentEvent:
    id: str
    timestamp: int
    source_kind: SourceKind
    outlet: str
    bias: Bias
    candidate: str
    text: str


@dataclass(frozen=True)
class EventSeries:
    """Sorted publication timestamps for one (candidate, source) stream."""

    candidate: str
    source_kind: SourceKind
    timestamps: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.int64)
        if ts.size > 1 and np.any(np.diff(ts) < 0):
            raise ValueError("EventSeries timestamps must be sorted ascending")
        object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return int(self.timestamps.size)


@dataclass(frozen=True)
class BinnedSeries:
    """Event counts on a uniform grid; bin k covers [t0 + k*w, t0 + (k+1)*w)."""

    t0: int
    bin_width: int
    counts: np.ndarray

    def __post_init__(self):
        if self.bin_width <= 0:
            raise ValueError("bin_width must be positive")
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.size < 1:
            raise ValueError("counts must not be empty")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    def __len__(self) -> int:
        return int(self.counts.size)


@dataclass(frozen=True)
class ValueSeries:
    """One real value per calendar day, starting at UTC midnight t0."""

    t0: int
    values: np.ndarray

    def __post_init__(self):
        if self.t0 % DAY != 0:
            raise ValueError("ValueSeries t0 must be a UTC midnight")
        values = np.asarray(self.values, dtype=float)
        if values.size < 1:
            raise ValueError("values must not be empty")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class SummaryRow:
    avg_tweets_per_day: float
    avg_articles_per_day: float
    ratio: float | None
    twitter_sampling_rate: float = 1.0
    news_sampling_rate: float = 1.0


@dataclass(frozen=True)
class CorpusSummary:
    rows: Mapping[str, SummaryRow]


@dataclass(frozen=True)
class DistributionStats:
    mean: float
    median: float
    p5: float
    p25: float
    p75: float
    p95: float
    max_value: float


@dataclass(frozen=True)
class Corpus:
    """Immutable in-memory index of an ingested corpus directory."""

    root: Path
    candidates: tuple[str, ...]
    start: int
    end: int
    events: Mapping[tuple[str, SourceKind], tuple[DocumentEvent, ...]]
    value_series: Mapping[tuple[str, str], ValueSeries]
    sampling_rates: Mapping[tuple[str, SourceKind], float] = field(default_factory=dict)

    def documents(self, candidate: str, source_kind: SourceKind) -> tuple[DocumentEvent, ...]:
        return self.events.get((candidate, SourceKind(source_kind)), ())

    def event_series(self, candidate: str, source_kind: SourceKind) -> EventSeries:
        kind = SourceKind(source_kind)
        ts = np.sort(
            np.array([d.timestamp for d in self.documents(candidate, kind)], dtype=np.int64)
        )
        return EventSeries(candidate=candidate, source_kind=kind, timestamps=ts)

    def series_labels(self) -> tuple[str, ...]:
        return tuple(sorted({label for (_, label) in self.value_series}))

    def sampling_rate(self, candidate: str, source_kind: SourceKind) -> float:
        return self.sampling_rates.get((candidate, SourceKind(source_kind)), 1.0)


def _load_manifest(root: Path) -> dict:
    path = root / "manifest.json"
    if not path.is_file():
        raise IngestError(f"{path}: manifest.json not found")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(manifest, dict):
        raise IngestError(f"{path}: manifest must be a JSON object")
    candidates = manifest.get("candidates")
    if not isinstance(candidates, list) or not candidates or not all(
        isinstance(c, str) and c for c in candidates
    ):
        raise IngestError(f"{path}: 'candidates' must be a non-empty list of names")
    if len(set(candidates)) != len(candidates):
        raise IngestError(f"{path}: duplicate candidate names")
    for key in ("start", "end"):
        if not isinstance(manifest.get(key), str):
            raise IngestError(f"{path}: '{key}' must be an RFC-3339 timestamp string")
    try:
        start = parse_rfc3339(manifest["start"])
        end = parse_rfc3339(manifest["end"])
    except ValueError as exc:
        raise IngestError(f"{path}: {exc}") from None
    if start >= end:
        raise IngestError(f"{path}: 'start' must precede 'end'")
    sources = manifest.get("sources", [k.value for k in SourceKind])
    if not isinstance(sources, list) or not all(isinstance(s, str) for s in sources):
        raise IngestError(f"{path}: 'sources' must be a list of source kinds")
    try:
        declared = tuple(SourceKind(s) for s in sources)
    except ValueError as exc:
        raise IngestError(f"{path}: {exc}") from None
    rates: dict[tuple[str, SourceKind], float] = {}
    raw_rates = manifest.get("sampling_rates", {})
    if not isinstance(raw_rates, dict):
        raise IngestError(f"{path}: 'sampling_rates' must be an object")
    for cand, per_source in raw_rates.items():
        if cand not in candidates:
            raise IngestError(f"{path}: sampling_rates names unknown candidate {cand!r}")
        if not isinstance(per_source, dict):
            raise IngestError(f"{path}: sampling_rates[{cand!r}] must be an object")
        for source, rate in per_source.items():
            try:
                kind = SourceKind(source)
            except ValueError:
                raise IngestError(
                    f"{path}: sampling_rates[{cand!r}] names unknown source {source!r}"
                ) from None
            if not isinstance(rate, (int, float)) or not 0 < rate <= 1:
                raise IngestError(
                    f"{path}: sampling rate for ({cand}, {source}) must be in (0, 1]"
                )
            rates[(cand, kind)] = float(rate)
    return {
        "candidates": tuple(candidates),
        "start": start,
        "end": end,
        "sources": declared,
        "rates": rates,
    }


def _parse_event(raw: str, where: str, manifest: dict) -> DocumentEvent:
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise IngestError(f"{where}: invalid JSON: {exc}") from None
    if not isinstance(record, dict):
        raise IngestError(f"{where}: event must be a JSON object")
    keys = set(record)
    missing = _EVENT_KEYS - keys
    if missing:
        raise IngestError(f"{where}: missing keys {sorted(missing)}")
    extra = keys - _EVENT_KEYS
    if extra:
        raise IngestError(f"{where}: unexpected keys {sorted(extra)}")
    for key in _EVENT_KEYS:
        if not isinstance(record[key], str):
            raise IngestError(f"{where}: field {key!r} must be a string")
    try:
        ts = parse_rfc3339(record["ts"])
    except ValueError as exc:
        raise IngestError(f"{where}: {exc}") from None
    if not manifest["start"] <= ts <= manifest["end"]:
        raise IngestError(f"{where}: timestamp {record['ts']} outside the declared range")
    try:
        kind = SourceKind(record["source_kind"])
    except ValueError:
        raise IngestError(f"{where}: unknown source_kind {record['source_kind']!r}") from None
    try:
        bias = Bias(record["bias"])
    except ValueError:
        raise IngestError(f"{where}: unknown bias {record['bias']!r}") from None
    if kind is not SourceKind.NEWS and bias is not Bias.UNKNOWN:
        raise IngestError(f"{where}: bias must be 'unknown' for source_kind {kind.value!r}")
    candidate = record["candidate"]
    if candidate not in manifest["candidates"]:
        raise IngestError(f"{where}: candidate {candidate!r} not in the declared list")
    if not record["id"]:
        raise IngestError(f"{where}: empty document id")
    return DocumentEvent(
        id=record["id"],
        timestamp=ts,
        source_kind=kind,
        outlet=record["outlet"],
        bias=bias,
        candidate=candidate,
        text=record["text"],
    )


def _load_value_series(path: Path) -> ValueSeries:
    days: list[int] = []
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "date,value":
            raise IngestError(f"{path}:1: expected header 'date,value', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise IngestError(f"{path}:{lineno}: expected 'date,value'")
            try:
                day = parse_date(parts[0])
                value = float(parts[1])
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
            if days and day != days[-1] + DAY:
                raise IngestError(
                    f"{path}:{lineno}: dates must be consecutive calendar days "
                    "(fill or drop gaps before ingest)"
                )
            days.append(day)
            values.append(value)
    if not days:
        raise IngestError(f"{path}: empty value series")
    return ValueSeries(t0=days[0], values=np.array(values))


def ingest_corpus(path) -> Corpus:
    """Load and validate a corpus directory into an immutable index.

    Deterministic: event files are read in sorted name order and line order
    is preserved within each (candidate, source) group.
    """
    root = Path(path)
    if not root.is_dir():
        raise IngestError(f"{root}: not a directory")
    manifest = _load_manifest(root)
    events: dict[tuple[str, SourceKind], list[DocumentEvent]] = {}
    seen_ids: set[str] = set()
    event_files = sorted((root / "events").glob("*.jsonl"))
    for file in event_files:
        with open(file, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                event = _parse_event(line, f"{file}:{lineno}", manifest)
                if event.id in seen_ids:
                    raise IngestError(f"{file}:{lineno}: duplicate document id {event.id!r}")
                seen_ids.add(event.id)
                events.setdefault((event.candidate, event.source_kind), []).append(event)
    if not events:
        raise IngestError(f"{root}: corpus contains no events")
    series: dict[tuple[str, str], ValueSeries] = {}
    series_dir = root / "series"
    if series_dir.is_dir():
        for file in sorted(series_dir.glob("*.csv")):
            name = file.stem
            if "__" not in name:
                raise IngestError(f"{file}: series files must be named <candidate>__<label>.csv")
            candidate, label = name.split("__", 1)
            if candidate not in manifest["candidates"]:
                raise IngestError(f"{file}: candidate {candidate!r} not in the declared list")
            series[(candidate, label)] = _load_value_series(file)
    return Corpus(
        root=root,
        candidates=manifest["candidates"],
        start=manifest["start"],
        end=manifest["end"],
        events={key: tuple(docs) for key, docs in events.items()},
        value_series=series,
        sampling_rates=manifest["rates"],
    )


def bin_events(series, bin_width: int, t0: int, t1: int) -> BinnedSeries:
    """Count events into [t0 + k*w, t0 + (k+1)*w) bins; events outside
    [t0, t1) are dropped."""
    if t1 <= t0:
        raise ValueError(f"t0={t0} must precede t1={t1}")
    if bin_width <= 0:
        raise ValueError(f"bin_width must be positive, got {bin_width!r}")
    ts = np.asarray(getattr(series, "timestamps", series), dtype=np.int64)
    n_bins = ceil_div(int(t1) - int(t0), int(bin_width))
    inside = ts[(ts >= t0) & (ts < t1)]
    idx = (inside - int(t0)) // int(bin_width)
    counts = np.bincount(idx, minlength=n_bins)
    return BinnedSeries(t0=int(t0), bin_width=int(bin_width), counts=counts)


def daily_counts(series, start: int | None = None, end: int | None = None) -> BinnedSeries:
    """Per-day counts on UTC-midnight-aligned bins covering the range.

    The range defaults to the series' own extent; pass the corpus range to
    get date-aligned series across candidates.
    """
    ts = np.asarray(getattr(series, "timestamps", series), dtype=np.int64)
    if start is None or end is None:
        if ts.size == 0:
            raise ValueError("daily_counts needs a non-empty series or an explicit range")
        start = int(ts[0]) if start is None else start
        end = int(ts[-1]) + 1 if end is None else end
    t0 = floor_to_day(int(start))
    n_days = max(ceil_div(int(end) - t0, DAY), 1)
    return bin_events(ts, DAY, t0, t0 + n_days * DAY)


def corpus_summary(corpus: Corpus) -> CorpusSummary:
    """Per-candidate average tweets/day, articles/day, and their ratio over
    the corpus-declared range.  Counts are raw; sampling rates are carried
    alongside so callers may rescale."""
    n_days = max(ceil_div(corpus.end - floor_to_day(corpus.start), DAY), 1)
    rows: dict[str, SummaryRow] = {}
    for candidate in corpus.candidates:
        tweets = len(corpus.documents(candidate, SourceKind.TWITTER))
        articles = len(corpus.documents(candidate, SourceKind.NEWS))
        tpd = tweets / n_days
        apd = articles / n_days
        rows[candidate] = SummaryRow(
            avg_tweets_per_day=tpd,
            avg_articles_per_day=apd,
            ratio=(tpd / apd) if apd > 0 else None,
            twitter_sampling_rate=corpus.sampling_rate(candidate, SourceKind.TWITTER),
            news_sampling_rate=corpus.sampling_rate(candidate, SourceKind.NEWS),
        )
    return CorpusSummary(rows=rows)


def distribution_stats(daily: BinnedSeries) -> DistributionStats:
    """Order statistics of the per-day counts (linear interpolation between
    closest ranks; even-length median is the mean of the central pair)."""
    counts = np.asarray(daily.counts, dtype=float)
    p5, p25, p50, p75, p95 = np.percentile(counts, [5, 25, 50, 75, 95])
    return DistributionStats(
        mean=float(counts.mean()),
        median=float(p50),
        p5=float(p5),
        p25=float(p25),
        p75=float(p75),
        p95=float(p95),
        max_value=float(counts.max()),
    )


def format_count(x: float) -> str:
    """Whole-count presentation: thousands separators, no decimals."""
    return f"{x:,.0f}"


def format_rate(x: float) -> str:
    """Per-day-rate presentation with two decimals."""
    return f"{x:,.2f}"


def format_ratio(ratio: float | None) -> str:
    """Ratio presentation: nearest integer with thousands separators, or an
    em dash when undefined."""
    if ratio is None:
        return "—"
    return f"{round(ratio):,}"
