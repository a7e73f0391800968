"""Granger causality: composition, direction recovery, invariances."""

import numpy as np
import pytest

from crossmedia import granger, hawkes
from crossmedia.hawkes import IntensitySeries
from crossmedia.timeutil import HOUR


def wrap(values, t0=0, step=HOUR):
    return IntensitySeries(t0=t0, step=step, values=np.asarray(values, dtype=float), half_life=1.0)


def simulate_var(seed, n=2000, phi=0.5, beta=0.8, lag=3):
    rng = np.random.default_rng(seed)
    cause = rng.standard_normal(n)
    noise = rng.standard_normal(n)
    effect = np.zeros(n)
    for t in range(lag, n):
        effect[t] = phi * effect[t - 1] + beta * cause[t - lag] + noise[t]
    return cause, effect


class TestPrepare:
    def test_composition_identity(self):
        rng = np.random.default_rng(51)
        ts = np.sort(rng.integers(0, 40 * HOUR, size=500)).astype(np.int64)
        prepared = granger.prepare_granger_series(ts)
        t0 = (int(ts[0]) // HOUR) * HOUR
        manual = hawkes.smooth(ts, t0, int(ts[-1]) + 1, HOUR, hawkes.average_period(ts))
        assert prepared.t0 == manual.t0
        assert prepared.step == HOUR
        assert np.array_equal(prepared.values, manual.values)
        assert prepared.half_life == hawkes.average_period(ts)

    def test_regular_half_hour_events(self):
        ts = np.arange(0, 50 * 1800, 1800, dtype=np.int64)
        prepared = granger.prepare_granger_series(ts)
        assert prepared.half_life == 1800.0

    def test_explicit_range_and_half_life(self):
        ts = np.array([0, HOUR, 2 * HOUR], dtype=np.int64)
        prepared = granger.prepare_granger_series(ts, t0=0, t1=10 * HOUR, half_life=600.0)
        assert len(prepared) == 10
        assert prepared.half_life == 600.0


class TestGrangerTest:
    def test_recovers_planted_direction(self):
        cause, effect = simulate_var(seed=7)
        fwd = granger.granger_test(wrap(effect), wrap(cause), 8)
        assert all(row.p_value < 0.01 for row in fwd.lags if row.lag >= 3)
        rev = granger.granger_test(wrap(cause), wrap(effect), 8)
        assert rev.avg_p > 0.05

    def test_lag_rows_and_average(self):
        cause, effect = simulate_var(seed=8, n=600)
        result = granger.granger_test(wrap(effect), wrap(cause), 5,
                                      cause_name="news", effect_name="twitter")
        assert [row.lag for row in result.lags] == [1, 2, 3, 4, 5]
        assert result.avg_p == pytest.approx(np.mean([row.p_value for row in result.lags]))
        assert result.cause == "news" and result.effect == "twitter"
        assert all(row.f_statistic >= 0.0 for row in result.lags)
        assert all(0.0 <= row.p_value <= 1.0 for row in result.lags)

    def test_deterministic(self):
        cause, effect = simulate_var(seed=9, n=500)
        a = granger.granger_test(wrap(effect), wrap(cause), 6)
        b = granger.granger_test(wrap(effect), wrap(cause), 6)
        assert a == b

    def test_affine_invariance(self):
        cause, effect = simulate_var(seed=10, n=800)
        base = granger.granger_test(wrap(effect), wrap(cause), 6)
        scaled = granger.granger_test(wrap(3.0 * effect + 11.0), wrap(0.5 * cause - 2.0), 6)
        for x, y in zip(base.lags, scaled.lags):
            assert y.f_statistic == pytest.approx(x.f_statistic, rel=1e-6, abs=1e-6)
            assert y.p_value == pytest.approx(x.p_value, rel=1e-6, abs=1e-9)

    def test_identical_series_degenerate(self):
        values = np.sin(np.arange(200) / 5.0)
        with pytest.raises(ValueError, match="degenerate"):
            granger.granger_test(wrap(values), wrap(values.copy()), 3)

    def test_grid_mismatch(self):
        a = wrap(np.arange(100), t0=0)
        b = wrap(np.arange(100), t0=HOUR)
        with pytest.raises(ValueError, match="different grids"):
            granger.granger_test(a, b, 3)

    def test_insufficient_length_names_requirement(self):
        a = wrap(np.random.default_rng(0).standard_normal(30))
        b = wrap(np.random.default_rng(1).standard_normal(30))
        with pytest.raises(ValueError, match="more than 31"):
            granger.granger_test(a, b, 10)

    def test_constant_series_degenerate(self):
        a = wrap(np.ones(100))
        b = wrap(np.random.default_rng(2).standard_normal(100))
        with pytest.raises(ValueError, match="constant"):
            granger.granger_test(a, b, 3)

    def test_result_json_shape(self):
        cause, effect = simulate_var(seed=11, n=400)
        result = granger.granger_test(wrap(effect), wrap(cause), 3,
                                      cause_name="news", effect_name="twitter")
        payload = granger.result_to_dict(result)
        assert payload["direction"] == ["news", "twitter"]
        assert len(payload["lags"]) == 3
        assert set(payload["lags"][0]) == {"lag", "F", "p"}
        assert payload["avg_p"] == result.avg_p
