"""Granger causality between two smoothed intensity series.

For each lag L, the restricted model regresses the effect series on an
intercept and its own L lags; the unrestricted model adds L lags of the
candidate cause.  The nested-SSR F-test then asks whether the cause lags
bought any predictive power.  Both directions come from two calls with the
arguments swapped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hawkes, stats
from .hawkes import IntensitySeries
from .timeutil import HOUR

__all__ = ["LagTest", "GrangerResult", "granger_test", "prepare_granger_series", "result_to_dict"]


@dataclass(frozen=True)
class LagTest:
    lag: int
    f_statistic: float
    p_value: float


@dataclass(frozen=True)
class GrangerResult:
    cause: str
    effect: str
    lags: tuple[LagTest, ...]
    avg_p: float


def _standardize(values: np.ndarray, name: str) -> np.ndarray:
    std = values.std()
    if std == 0.0:
        raise ValueError(f"{name} series is constant; Granger test is degenerate")
    return (values - values.mean()) / std


def granger_test(
    effect: IntensitySeries,
    cause: IntensitySeries,
    max_lag: int,
    *,
    cause_name: str = "cause",
    effect_name: str = "effect",
) -> GrangerResult:
    """Per-lag F-tests of whether `cause` helps predict `effect`.

    Both series must share one uniform grid.  The first max_lag points are
    trimmed from every regression so all lags are fitted on the same sample
    window; series are standardized first (the F statistics are unchanged,
    the designs are better conditioned).
    """
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    if effect.t0 != cause.t0 or effect.step != cause.step or len(effect) != len(cause):
        raise ValueError(
            "series are on different grids: "
            f"(t0={effect.t0}, step={effect.step}, n={len(effect)}) vs "
            f"(t0={cause.t0}, step={cause.step}, n={len(cause)})"
        )
    n = len(effect)
    if n <= 3 * max_lag + 1:
        raise ValueError(
            f"insufficient length: need more than {3 * max_lag + 1} grid points "
            f"for max_lag={max_lag}, got {n}"
        )
    ze = _standardize(np.asarray(effect.values, dtype=float), "effect")
    zc = _standardize(np.asarray(cause.values, dtype=float), "cause")
    n_used = n - max_lag
    y = ze[max_lag:]
    # Column l-1 holds the series lagged by l, aligned with y.
    effect_lags = np.column_stack([ze[max_lag - l : n - l] for l in range(1, max_lag + 1)])
    cause_lags = np.column_stack([zc[max_lag - l : n - l] for l in range(1, max_lag + 1)])
    intercept = np.ones((n_used, 1))
    rows: list[LagTest] = []
    for lag in range(1, max_lag + 1):
        restricted = np.hstack([intercept, effect_lags[:, :lag]])
        unrestricted = np.hstack([intercept, effect_lags[:, :lag], cause_lags[:, :lag]])
        try:
            fit_r = stats.ols_fit(restricted, y)
            fit_u = stats.ols_fit(unrestricted, y)
        except ValueError as exc:
            raise ValueError(f"degenerate Granger design at lag {lag}: {exc}") from None
        df_denom = n_used - (2 * lag + 1)
        result = stats.f_test_nested(fit_r.ssr, fit_u.ssr, q=lag, df_denom=df_denom)
        rows.append(LagTest(lag=lag, f_statistic=result.statistic, p_value=result.p_value))
    avg_p = float(np.mean([row.p_value for row in rows]))
    return GrangerResult(cause=cause_name, effect=effect_name, lags=tuple(rows), avg_p=avg_p)


def prepare_granger_series(
    events, t0: int | None = None, t1: int | None = None, half_life: float | None = None
) -> IntensitySeries:
    """Hourly-grid smoothing with half-life equal to the series' average
    event period (overridable)."""
    ts = np.asarray(getattr(events, "timestamps", events), dtype=np.int64)
    if half_life is None:
        half_life = hawkes.average_period(ts)
    if t0 is None:
        t0 = (int(ts[0]) // HOUR) * HOUR
    if t1 is None:
        t1 = int(ts[-1]) + 1
    return hawkes.smooth(ts, t0, t1, HOUR, half_life)


def result_to_dict(result: GrangerResult) -> dict:
    """JSON-ready form: {direction, lags: [{lag, F, p}], avg_p}."""
    return {
        "direction": [result.cause, result.effect],
        "lags": [
            {"lag": row.lag, "F": row.f_statistic, "p": row.p_value} for row in result.lags
        ],
        "avg_p": result.avg_p,
    }
