"""Correlation analyses between streams: cross-source daily correlations,
candidate co-correlations, and windowed lag-correlation heatmaps.

The heatmap fixes one smoothed series (tweets) and slides windows over it;
the other series (news) is sampled at the same windows shifted by each
offset.  Positive offsets therefore mean the fixed series leads, negative
offsets mean the shifted series leads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import hawkes, stats
from .corpus import BinnedSeries, Corpus, SourceKind, ValueSeries, daily_counts
from .timeutil import DAY, HOUR, MINUTE, ceil_div

__all__ = [
    "HeatmapSpec",
    "LagHeatmap",
    "PairCorrelation",
    "CoCorrelation",
    "CoCorrelationMatrix",
    "cross_source_correlation",
    "co_correlation",
    "co_correlation_matrix",
    "lag_heatmap",
]


def _default_offsets() -> tuple[int, ...]:
    return tuple(o * HOUR for o in range(-48, 49))


@dataclass(frozen=True)
class HeatmapSpec:
    """Geometry of a lag heatmap: window length, row stride, offset set,
    smoothing half-life (None = per-series average event period), grid step."""

    window: int = 14 * DAY
    stride: int = 12 * HOUR
    offsets: tuple[int, ...] = field(default_factory=_default_offsets)
    half_life: float | None = None
    grid_step: int = 5 * MINUTE

    def __post_init__(self):
        if self.window <= 0 or self.stride <= 0 or self.grid_step <= 0:
            raise ValueError("window, stride, and grid_step must be positive")
        offsets = tuple(int(o) for o in self.offsets)
        if 0 not in offsets or set(offsets) != {-o for o in offsets}:
            raise ValueError("offsets must include 0 and be symmetric about 0")
        if sorted(offsets) != list(offsets):
            raise ValueError("offsets must be sorted ascending")
        for value, name in ((self.window, "window"), (self.stride, "stride")):
            if value % self.grid_step != 0:
                raise ValueError(f"grid_step must divide {name}")
        if any(o % self.grid_step != 0 for o in offsets):
            raise ValueError("every offset must be a multiple of grid_step")
        if self.half_life is not None and self.half_life <= 0:
            raise ValueError("half_life must be positive")
        object.__setattr__(self, "offsets", offsets)

    @property
    def max_offset(self) -> int:
        return max(abs(o) for o in self.offsets)


@dataclass(frozen=True)
class LagHeatmap:
    """Windowed correlations: rows are window starts, columns offsets.

    matrix[i, j] is the Pearson r between the fixed-series window starting
    at row_starts[i] and the shifted-series window offset by offsets[j];
    NaN marks cells undefined because a window had no variance.
    """

    spec: HeatmapSpec
    row_starts: np.ndarray
    offsets: np.ndarray
    matrix: np.ndarray
    candidate: str = ""
    fixed_source: SourceKind = SourceKind.TWITTER
    shifted_source: SourceKind = SourceKind.NEWS

    def n_defined(self) -> int:
        return int(np.isfinite(self.matrix).sum())


@dataclass(frozen=True)
class PairCorrelation:
    r: float | None
    n_days: int


@dataclass(frozen=True)
class CoCorrelation:
    r: float | None
    pairs: tuple[tuple[float, float], ...]
    n_days: int


@dataclass(frozen=True)
class CoCorrelationMatrix:
    source_kind: SourceKind
    pairs: Mapping[tuple[str, str], PairCorrelation]
    mean_r: float | None
    n_undefined: int
    quantiles: Mapping[str, float]


def _daily_values(series) -> tuple[int, np.ndarray]:
    if isinstance(series, ValueSeries):
        return series.t0, np.asarray(series.values, dtype=float)
    if isinstance(series, BinnedSeries):
        if series.bin_width != DAY or series.t0 % DAY != 0:
            raise ValueError("expected a daily, midnight-aligned binned series")
        return series.t0, np.asarray(series.counts, dtype=float)
    raise TypeError(f"expected a daily series, got {type(series).__name__}")


def align_daily(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Intersect two daily series on their shared dates."""
    t0a, va = _daily_values(a)
    t0b, vb = _daily_values(b)
    lo = max(t0a, t0b)
    hi = min(t0a + len(va) * DAY, t0b + len(vb) * DAY)
    n = (hi - lo) // DAY
    if n < 2:
        raise ValueError(f"fewer than 2 overlapping days (got {max(n, 0)})")
    ia = (lo - t0a) // DAY
    ib = (lo - t0b) // DAY
    return va[ia : ia + n], vb[ib : ib + n]


def cross_source_correlation(a, b) -> float | None:
    """Pearson r between two date-aligned daily series; None on zero variance."""
    x, y = align_daily(a, b)
    return stats.pearson(x, y)


def co_correlation(candidate_x, candidate_y) -> CoCorrelation:
    """Correlation between two candidates' daily counts on one platform,
    with the per-day scatter points kept for export."""
    x, y = align_daily(candidate_x, candidate_y)
    return CoCorrelation(
        r=stats.pearson(x, y),
        pairs=tuple(zip(x.tolist(), y.tolist())),
        n_days=len(x),
    )


def co_correlation_matrix(corpus: Corpus, source_kind: SourceKind) -> CoCorrelationMatrix:
    """All unordered candidate pairs on one platform; undefined pairs are
    skipped from the mean and counted."""
    kind = SourceKind(source_kind)
    if len(corpus.candidates) < 2:
        raise ValueError("co-correlation needs at least 2 candidates")
    daily = {
        cand: daily_counts(corpus.event_series(cand, kind), corpus.start, corpus.end)
        for cand in corpus.candidates
    }
    pairs: dict[tuple[str, str], PairCorrelation] = {}
    defined: list[float] = []
    n_undefined = 0
    for x, y in itertools.combinations(corpus.candidates, 2):
        xv, yv = align_daily(daily[x], daily[y])
        r = stats.pearson(xv, yv)
        pairs[(x, y)] = PairCorrelation(r=r, n_days=len(xv))
        if r is None:
            n_undefined += 1
        else:
            defined.append(r)
    if defined:
        qs = np.percentile(defined, [5, 25, 50, 75, 95])
        quantiles = {"p5": qs[0], "p25": qs[1], "p50": qs[2], "p75": qs[3], "p95": qs[4]}
        mean_r = float(np.mean(defined))
    else:
        quantiles = {}
        mean_r = None
    return CoCorrelationMatrix(
        source_kind=kind,
        pairs=pairs,
        mean_r=mean_r,
        n_undefined=n_undefined,
        quantiles=quantiles,
    )


def lag_heatmap(
    tweets,
    news,
    spec: HeatmapSpec | None = None,
    t_start: int | None = None,
    t_end: int | None = None,
) -> LagHeatmap:
    """Build the windowed lag-correlation heatmap for one candidate.

    Both event series are smoothed onto one shared grid; for each window
    start s_i (stride apart) and offset o_j, the cell is the Pearson r of
    the fixed window [s_i, s_i+w) against the shifted window
    [s_i+o_j, s_i+w+o_j).  Rows whose shifted windows would leave the data
    range are dropped rather than padded.
    """
    spec = spec or HeatmapSpec()
    tw_ts = np.asarray(getattr(tweets, "timestamps", tweets), dtype=np.int64)
    nw_ts = np.asarray(getattr(news, "timestamps", news), dtype=np.int64)
    if tw_ts.size == 0 or nw_ts.size == 0:
        raise ValueError("both event series must be non-empty")
    step = spec.grid_step
    lo = int(min(tw_ts[0], nw_ts[0])) if t_start is None else int(t_start)
    hi = int(max(tw_ts[-1], nw_ts[-1]) + 1) if t_end is None else int(t_end)
    grid_start = (lo // step) * step
    n_grid = ceil_div(hi - grid_start, step)
    grid_span = n_grid * step
    max_off = spec.max_offset
    usable = grid_span - spec.window - 2 * max_off
    if usable < 0:
        raise ValueError(
            "data range too short for any heatmap row: need at least "
            f"window + 2*max_offset = {spec.window + 2 * max_off} s, have {grid_span} s"
        )
    n_rows = usable // spec.stride + 1
    grid_end = grid_start + grid_span

    def _smoothed(ts: np.ndarray) -> np.ndarray:
        hl = spec.half_life if spec.half_life is not None else hawkes.average_period(ts)
        return hawkes.smooth(ts, grid_start, grid_end, step, hl).values

    fixed = _smoothed(tw_ts)
    shifted = _smoothed(nw_ts)
    n_win = spec.window // step
    stride_idx = spec.stride // step
    base_idx = max_off // step
    offsets = np.asarray(spec.offsets, dtype=np.int64)
    off_idx = offsets // step
    row_starts = grid_start + (base_idx + stride_idx * np.arange(n_rows, dtype=np.int64)) * step
    matrix = np.full((n_rows, len(offsets)), np.nan)
    for i in range(n_rows):
        a = base_idx + i * stride_idx
        window_fixed = fixed[a : a + n_win]
        for j, shift in enumerate(off_idx):
            b = a + int(shift)
            r = stats.pearson(window_fixed, shifted[b : b + n_win])
            if r is not None:
                matrix[i, j] = r
    return LagHeatmap(
        spec=spec,
        row_starts=row_starts,
        offsets=offsets,
        matrix=matrix,
        candidate=getattr(tweets, "candidate", ""),
        fixed_source=getattr(tweets, "source_kind", SourceKind.TWITTER),
        shifted_source=getattr(news, "source_kind", SourceKind.NEWS),
    )
