"""Run configuration: JSON file, schema validation, flag overrides.

The CLI loads a JSON config (see CONFIG_SCHEMA), applies any command-line
overrides, then validates types, ranges, and that referenced paths exist.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .influence import HeatmapSpec
from .timeutil import HOUR, MINUTE

__all__ = ["ConfigError", "RunConfig", "load_config", "CONFIG_SCHEMA"]

# Published schema: key -> (type, constraint description).  Types are
# checked structurally; ranges are enforced in the loaders below.
CONFIG_SCHEMA = {
    "corpus": "string path to a corpus directory (required by most commands)",
    "out": "string output directory (default 'out')",
    "seed": "integer >= 0; master seed for all randomized steps (default 0)",
    "heatmap.window_hours": "integer > 0 (default 336 = 2 weeks)",
    "heatmap.stride_hours": "integer > 0 (default 12)",
    "heatmap.max_offset_hours": "integer > 0 (default 48)",
    "heatmap.offset_step_hours": "integer > 0 dividing max_offset_hours (default 1)",
    "heatmap.grid_step_minutes": "integer > 0 (default 5)",
    "heatmap.half_life_minutes": "number > 0 or null = per-series average event period",
    "granger.max_lag": "integer >= 1 (default 24)",
    "granger.half_life_minutes": "number > 0 or null = per-series average event period",
    "sentiment.lexicon": "string path to a token<TAB>valence TSV",
    "sentiment.positive_threshold": "number in (0, 1) (default 0.05)",
    "sentiment.negative_threshold": "number in (-1, 0) (default -0.05)",
    "topics.topics_file": "string path to a JSON array of {name, description}",
    "topics.embeddings": "string path to a 'V D' header embedding text file",
    "topics.cutoff": "number in [-1, 1] (default 0.3)",
    "toxicity.backend": "'mock' or 'perspective' (default 'mock')",
    "toxicity.toxic_words": "list of strings for the mock backend",
    "toxicity.sample_size": "integer >= 1 (default 1000)",
    "toxicity.seed": "integer >= 0 or null = master seed",
    "toxicity.concurrency": "integer >= 1 (default 4)",
    "toxicity.time_stratified": "boolean (default false; nonstandard sampler)",
}


class ConfigError(Exception):
    """Invalid configuration: unknown keys, bad types/ranges, missing paths."""


@dataclass(frozen=True)
class HeatmapConfig:
    window_hours: int = 336
    stride_hours: int = 12
    max_offset_hours: int = 48
    offset_step_hours: int = 1
    grid_step_minutes: int = 5
    half_life_minutes: float | None = None

    def to_spec(self) -> HeatmapSpec:
        step = self.offset_step_hours * HOUR
        n = (self.max_offset_hours * HOUR) // step
        offsets = tuple(int(k * step) for k in range(-n, n + 1))
        return HeatmapSpec(
            window=self.window_hours * HOUR,
            stride=self.stride_hours * HOUR,
            offsets=offsets,
            half_life=(
                self.half_life_minutes * MINUTE if self.half_life_minutes is not None else None
            ),
            grid_step=self.grid_step_minutes * MINUTE,
        )


@dataclass(frozen=True)
class GrangerConfig:
    max_lag: int = 24
    half_life_minutes: float | None = None


@dataclass(frozen=True)
class SentimentConfig:
    lexicon: str | None = None
    positive_threshold: float = 0.05
    negative_threshold: float = -0.05


@dataclass(frozen=True)
class TopicsConfig:
    topics_file: str | None = None
    embeddings: str | None = None
    cutoff: float = 0.3


@dataclass(frozen=True)
class ToxicityConfig:
    backend: str = "mock"
    toxic_words: tuple[str, ...] = ()
    sample_size: int = 1000
    seed: int | None = None
    concurrency: int = 4
    time_stratified: bool = False


@dataclass(frozen=True)
class RunConfig:
    corpus: str | None = None
    out: str = "out"
    seed: int = 0
    heatmap: HeatmapConfig = field(default_factory=HeatmapConfig)
    granger: GrangerConfig = field(default_factory=GrangerConfig)
    sentiment: SentimentConfig = field(default_factory=SentimentConfig)
    topics: TopicsConfig = field(default_factory=TopicsConfig)
    toxicity: ToxicityConfig = field(default_factory=ToxicityConfig)

    def require_corpus(self) -> str:
        if not self.corpus:
            raise ConfigError("corpus path is required (pass --corpus or set 'corpus' in the config)")
        if not Path(self.corpus).is_dir():
            raise ConfigError(f"corpus directory does not exist: {self.corpus}")
        return self.corpus

    def require_lexicon(self) -> str:
        if not self.sentiment.lexicon:
            raise ConfigError("sentiment.lexicon is required for this command")
        return self.sentiment.lexicon

    def require_topics(self) -> tuple[str, str]:
        if not self.topics.topics_file or not self.topics.embeddings:
            raise ConfigError("topics.topics_file and topics.embeddings are required for this command")
        return self.topics.topics_file, self.topics.embeddings


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _int(section: dict, key: str, where: str, minimum: int | None = None) -> int:
    value = section[key]
    _check(isinstance(value, int) and not isinstance(value, bool), f"{where}.{key}: expected an integer")
    if minimum is not None:
        _check(value >= minimum, f"{where}.{key}: must be >= {minimum}")
    return value


def _number(section: dict, key: str, where: str) -> float:
    value = section[key]
    _check(isinstance(value, (int, float)) and not isinstance(value, bool), f"{where}.{key}: expected a number")
    return float(value)


def _section(raw: dict, name: str, allowed: set[str]) -> dict:
    section = raw.get(name, {})
    _check(isinstance(section, dict), f"{name}: expected an object")
    unknown = set(section) - allowed
    _check(not unknown, f"{name}: unknown keys {sorted(unknown)} (see CONFIG_SCHEMA)")
    return section


def config_from_dict(raw: dict, base: Path | None = None) -> RunConfig:
    _check(isinstance(raw, dict), "config root must be a JSON object")
    allowed_top = {"corpus", "out", "seed", "heatmap", "granger", "sentiment", "topics", "toxicity"}
    unknown = set(raw) - allowed_top
    _check(not unknown, f"unknown config keys {sorted(unknown)} (see CONFIG_SCHEMA)")

    def _path(value: str | None) -> str | None:
        if value is None or base is None:
            return value
        p = Path(value)
        return value if p.is_absolute() else str(base / p)

    config = RunConfig()
    if "corpus" in raw:
        _check(isinstance(raw["corpus"], str), "corpus: expected a string path")
        config = replace(config, corpus=_path(raw["corpus"]))
    if "out" in raw:
        # Output paths stay relative to the working directory, not the config.
        _check(isinstance(raw["out"], str), "out: expected a string path")
        config = replace(config, out=raw["out"])
    if "seed" in raw:
        config = replace(config, seed=_int(raw, "seed", "config", minimum=0))

    hm = _section(raw, "heatmap", {
        "window_hours", "stride_hours", "max_offset_hours", "offset_step_hours",
        "grid_step_minutes", "half_life_minutes",
    })
    heatmap = HeatmapConfig()
    for key in ("window_hours", "stride_hours", "max_offset_hours", "offset_step_hours", "grid_step_minutes"):
        if key in hm:
            heatmap = replace(heatmap, **{key: _int(hm, key, "heatmap", minimum=1)})
    if "half_life_minutes" in hm and hm["half_life_minutes"] is not None:
        value = _number(hm, "half_life_minutes", "heatmap")
        _check(value > 0, "heatmap.half_life_minutes: must be positive")
        heatmap = replace(heatmap, half_life_minutes=value)
    _check(
        heatmap.max_offset_hours % heatmap.offset_step_hours == 0,
        "heatmap.offset_step_hours must divide heatmap.max_offset_hours",
    )

    gr = _section(raw, "granger", {"max_lag", "half_life_minutes"})
    granger = GrangerConfig()
    if "max_lag" in gr:
        granger = replace(granger, max_lag=_int(gr, "max_lag", "granger", minimum=1))
    if "half_life_minutes" in gr and gr["half_life_minutes"] is not None:
        value = _number(gr, "half_life_minutes", "granger")
        _check(value > 0, "granger.half_life_minutes: must be positive")
        granger = replace(granger, half_life_minutes=value)

    se = _section(raw, "sentiment", {"lexicon", "positive_threshold", "negative_threshold"})
    sent = SentimentConfig()
    if "lexicon" in se:
        _check(isinstance(se["lexicon"], str), "sentiment.lexicon: expected a string path")
        sent = replace(sent, lexicon=_path(se["lexicon"]))
    if "positive_threshold" in se:
        value = _number(se, "positive_threshold", "sentiment")
        _check(0 < value < 1, "sentiment.positive_threshold: must be in (0, 1)")
        sent = replace(sent, positive_threshold=value)
    if "negative_threshold" in se:
        value = _number(se, "negative_threshold", "sentiment")
        _check(-1 < value < 0, "sentiment.negative_threshold: must be in (-1, 0)")
        sent = replace(sent, negative_threshold=value)

    tp = _section(raw, "topics", {"topics_file", "embeddings", "cutoff"})
    top = TopicsConfig()
    for key in ("topics_file", "embeddings"):
        if key in tp:
            _check(isinstance(tp[key], str), f"topics.{key}: expected a string path")
            top = replace(top, **{key: _path(tp[key])})
    if "cutoff" in tp:
        value = _number(tp, "cutoff", "topics")
        _check(-1.0 <= value <= 1.0, "topics.cutoff: must be in [-1, 1]")
        top = replace(top, cutoff=value)

    tx = _section(raw, "toxicity", {
        "backend", "toxic_words", "sample_size", "seed", "concurrency", "time_stratified",
    })
    tox = ToxicityConfig()
    if "backend" in tx:
        _check(tx["backend"] in ("mock", "perspective"), "toxicity.backend: expected 'mock' or 'perspective'")
        tox = replace(tox, backend=tx["backend"])
    if "toxic_words" in tx:
        words = tx["toxic_words"]
        _check(
            isinstance(words, list) and all(isinstance(w, str) for w in words),
            "toxicity.toxic_words: expected a list of strings",
        )
        tox = replace(tox, toxic_words=tuple(words))
    if "sample_size" in tx:
        tox = replace(tox, sample_size=_int(tx, "sample_size", "toxicity", minimum=1))
    if "seed" in tx and tx["seed"] is not None:
        tox = replace(tox, seed=_int(tx, "seed", "toxicity", minimum=0))
    if "concurrency" in tx:
        tox = replace(tox, concurrency=_int(tx, "concurrency", "toxicity", minimum=1))
    if "time_stratified" in tx:
        _check(isinstance(tx["time_stratified"], bool), "toxicity.time_stratified: expected a boolean")
        tox = replace(tox, time_stratified=tx["time_stratified"])

    return replace(
        config, heatmap=heatmap, granger=granger, sentiment=sent, topics=top, toxicity=tox
    )


def load_config(path) -> RunConfig:
    """Load a JSON config file; relative paths resolve against its directory."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file does not exist: {p}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from None
    return config_from_dict(raw, base=p.parent)


def validate_paths(config: RunConfig) -> None:
    """Check that every path referenced by the config exists."""
    if config.corpus is not None and not Path(config.corpus).is_dir():
        raise ConfigError(f"corpus directory does not exist: {config.corpus}")
    for label, value in (
        ("sentiment.lexicon", config.sentiment.lexicon),
        ("topics.topics_file", config.topics.topics_file),
        ("topics.embeddings", config.topics.embeddings),
    ):
        if value is not None and not Path(value).is_file():
            raise ConfigError(f"{label} does not exist: {value}")


def validate_ranges(config: RunConfig) -> None:
    """Re-check numeric invariants; flag overrides bypass the JSON loader."""
    hm = config.heatmap
    for name, value in (
        ("heatmap.window_hours", hm.window_hours),
        ("heatmap.stride_hours", hm.stride_hours),
        ("heatmap.max_offset_hours", hm.max_offset_hours),
        ("heatmap.offset_step_hours", hm.offset_step_hours),
        ("heatmap.grid_step_minutes", hm.grid_step_minutes),
        ("granger.max_lag", config.granger.max_lag),
        ("toxicity.sample_size", config.toxicity.sample_size),
        ("toxicity.concurrency", config.toxicity.concurrency),
    ):
        _check(value >= 1, f"{name}: must be >= 1")
    _check(
        hm.max_offset_hours % hm.offset_step_hours == 0,
        "heatmap.offset_step_hours must divide heatmap.max_offset_hours",
    )
    for name, value in (
        ("heatmap.half_life_minutes", hm.half_life_minutes),
        ("granger.half_life_minutes", config.granger.half_life_minutes),
    ):
        if value is not None:
            _check(value > 0, f"{name}: must be positive")
    _check(-1.0 <= config.topics.cutoff <= 1.0, "topics.cutoff: must be in [-1, 1]")
    _check(config.seed >= 0, "seed: must be >= 0")
