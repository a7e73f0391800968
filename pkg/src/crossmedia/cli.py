"""Command-line surface: ingest -> analyze -> export tables and figures.

Every subcommand is a thin adapter over one module operation; `report`
runs the whole pipeline into one output directory.  Exit codes: 0 success,
1 validation problem (flags, config, corpus format), 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import granger as granger_mod
from . import influence, render, sentiment, topics, toxicity
from .config import (
    ConfigError,
    RunConfig,
    config_from_dict,
    load_config,
    validate_paths,
    validate_ranges,
)
from .corpus import (
    Corpus,
    IngestError,
    SourceKind,
    corpus_summary,
    daily_counts,
    distribution_stats,
    format_count,
    format_rate,
    format_ratio,
    ingest_corpus,
)
from .timeutil import MINUTE, format_rfc3339


class _Parser(argparse.ArgumentParser):
    # Usage problems are validation errors: exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if not np.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return format(x, ".12g")
    return str(x)


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def build_parser() -> tuple[_Parser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="crossmedia", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    by_name: dict[str, argparse.ArgumentParser] = {}

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON run-config file (flags override it)")
        p.add_argument("--corpus", help="corpus directory")
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--candidate", help="restrict to one candidate")
        p.add_argument("--seed", type=int, help="master random seed")
        by_name[name] = p
        return p

    add("ingest-check", "validate a corpus directory and print its shape")
    add("summary", "per-candidate tweets/articles-per-day table")
    add("correlate", "daily cross-source correlation table per candidate")
    p = add("cocorr", "candidate co-correlation matrix per platform")
    p.add_argument("--source", choices=["twitter", "news"], help="restrict to one platform")
    p = add("heatmap", "windowed lag-correlation heatmap (CSV + SVG)")
    p.add_argument("--window-hours", type=int, help="window length in hours")
    p.add_argument("--stride-hours", type=int, help="row stride in hours")
    p.add_argument("--max-offset-hours", type=int, help="offset range in hours")
    p.add_argument("--half-life-minutes", type=float, help="smoothing half-life override")
    p = add("granger", "bidirectional Granger causality per candidate")
    p.add_argument("--max-lag", type=int, help="number of hourly lags")
    p.add_argument("--half-life-minutes", type=float, help="smoothing half-life override")
    p = add("sentiment", "sentiment summaries and bias comparison")
    p.add_argument("--lexicon", help="token<TAB>valence TSV path")
    p = add("topics", "topic distributions and cross-source mismatch")
    p.add_argument("--topics-file", help="JSON topic list path")
    p.add_argument("--embeddings", help="embedding table path")
    p.add_argument("--cutoff", type=float, help="cosine-similarity cutoff")
    p = add("toxicity", "mean toxicity per candidate over a seeded sample")
    p.add_argument("--sample-size", type=int, help="documents to sample per candidate")
    p.add_argument("--backend", choices=["mock", "perspective"], help="scoring backend")
    add("report", "run everything and emit all tables and figures")
    return parser, by_name


def _resolve_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else config_from_dict({})
    if args.corpus:
        config = replace(config, corpus=args.corpus)
    if args.out:
        config = replace(config, out=args.out)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if getattr(args, "window_hours", None) is not None:
        config = replace(config, heatmap=replace(config.heatmap, window_hours=args.window_hours))
    if getattr(args, "stride_hours", None) is not None:
        config = replace(config, heatmap=replace(config.heatmap, stride_hours=args.stride_hours))
    if getattr(args, "max_offset_hours", None) is not None:
        config = replace(
            config, heatmap=replace(config.heatmap, max_offset_hours=args.max_offset_hours)
        )
    if getattr(args, "half_life_minutes", None) is not None:
        config = replace(
            config,
            heatmap=replace(config.heatmap, half_life_minutes=args.half_life_minutes),
            granger=replace(config.granger, half_life_minutes=args.half_life_minutes),
        )
    if getattr(args, "max_lag", None) is not None:
        config = replace(config, granger=replace(config.granger, max_lag=args.max_lag))
    if getattr(args, "lexicon", None):
        config = replace(config, sentiment=replace(config.sentiment, lexicon=args.lexicon))
    if getattr(args, "topics_file", None):
        config = replace(config, topics=replace(config.topics, topics_file=args.topics_file))
    if getattr(args, "embeddings", None):
        config = replace(config, topics=replace(config.topics, embeddings=args.embeddings))
    if getattr(args, "cutoff", None) is not None:
        config = replace(config, topics=replace(config.topics, cutoff=args.cutoff))
    if getattr(args, "sample_size", None) is not None:
        config = replace(config, toxicity=replace(config.toxicity, sample_size=args.sample_size))
    if getattr(args, "backend", None):
        config = replace(config, toxicity=replace(config.toxicity, backend=args.backend))
    validate_ranges(config)
    validate_paths(config)
    return config


def _candidates(corpus: Corpus, args) -> tuple[str, ...]:
    if args.candidate:
        if args.candidate not in corpus.candidates:
            raise ConfigError(
                f"unknown candidate {args.candidate!r}; corpus declares {list(corpus.candidates)}"
            )
        return (args.candidate,)
    return corpus.candidates


# --- subcommand bodies -----------------------------------------------------


def _cmd_ingest_check(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    print(f"corpus ok: {len(corpus.candidates)} candidates, "
          f"{format_rfc3339(corpus.start)} .. {format_rfc3339(corpus.end)}")
    for (candidate, kind), docs in sorted(corpus.events.items()):
        print(f"  {candidate}/{kind.value}: {len(docs)} events")
    for (candidate, label), series in sorted(corpus.value_series.items()):
        print(f"  {candidate}/series:{label}: {len(series)} days")
    return 0


def _summary_rows(corpus: Corpus, candidates=None):
    summary = corpus_summary(corpus)
    for candidate in candidates or corpus.candidates:
        row = summary.rows[candidate]
        yield [
            candidate,
            row.avg_tweets_per_day,
            row.avg_articles_per_day,
            row.ratio,
            format_count(row.avg_tweets_per_day),
            format_rate(row.avg_articles_per_day),
            format_ratio(row.ratio),
            row.twitter_sampling_rate,
            row.news_sampling_rate,
        ]


_SUMMARY_HEADER = [
    "candidate", "avg_tweets_per_day", "avg_articles_per_day", "ratio",
    "tpd_display", "apd_display", "ratio_display",
    "twitter_sampling_rate", "news_sampling_rate",
]


def _cmd_summary(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    out = Path(config.out)
    _write_csv(
        out / "table1_summary.csv", _SUMMARY_HEADER,
        _summary_rows(corpus, _candidates(corpus, args)),
    )
    print(f"wrote {out / 'table1_summary.csv'}")
    return 0


def _correlation_table(corpus: Corpus, candidates=None):
    labels = corpus.series_labels()
    header = ["candidate", "news_twitter"]
    header += [f"news_{label}" for label in labels]
    header += [f"twitter_{label}" for label in labels]
    rows = []
    for candidate in candidates or corpus.candidates:
        news = daily_counts(corpus.event_series(candidate, SourceKind.NEWS),
                            corpus.start, corpus.end)
        tweets = daily_counts(corpus.event_series(candidate, SourceKind.TWITTER),
                              corpus.start, corpus.end)
        row = [candidate, influence.cross_source_correlation(news, tweets)]
        for base in (news, tweets):
            for label in labels:
                series = corpus.value_series.get((candidate, label))
                row.append(
                    influence.cross_source_correlation(base, series) if series else None
                )
        rows.append(row)
    # Closing row: per-column mean over candidates with a defined value.
    averages: list = ["average"]
    for col in range(1, len(header)):
        defined = [row[col] for row in rows if row[col] is not None]
        averages.append(sum(defined) / len(defined) if defined else None)
    rows.append(averages)
    return header, rows


def _cmd_correlate(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    header, rows = _correlation_table(corpus, _candidates(corpus, args))
    out = Path(config.out)
    _write_csv(out / "table2_source_correlations.csv", header, rows)
    print(f"wrote {out / 'table2_source_correlations.csv'}")
    return 0


def _cocorr_csv(matrix: influence.CoCorrelationMatrix):
    rows = [
        [x, y, pair.r, pair.n_days]
        for (x, y), pair in sorted(matrix.pairs.items())
    ]
    rows.append(["mean", "", matrix.mean_r, ""])
    return ["candidate_x", "candidate_y", "r", "n_days"], rows


def _cmd_cocorr(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    _candidates(corpus, args)  # co-correlation always pairs the full list; just validate
    out = Path(config.out)
    kinds = (
        [SourceKind(args.source)]
        if getattr(args, "source", None)
        else [SourceKind.TWITTER, SourceKind.NEWS]
    )
    for kind in kinds:
        matrix = influence.co_correlation_matrix(corpus, kind)
        header, rows = _cocorr_csv(matrix)
        path = out / f"cocorrelation_matrix_{kind.value}.csv"
        _write_csv(path, header, rows)
        print(f"wrote {path}")
    return 0


def _heatmap_csv(hm: influence.LagHeatmap):
    header = ["window_start"] + [render.offset_label(int(o)) for o in hm.offsets]
    rows = []
    for i, start in enumerate(hm.row_starts):
        row: list = [format_rfc3339(int(start))]
        for value in hm.matrix[i]:
            row.append(float(value) if np.isfinite(value) else None)
        rows.append(row)
    return header, rows


def _build_heatmap(corpus: Corpus, candidate: str, config: RunConfig) -> influence.LagHeatmap:
    spec = config.heatmap.to_spec()
    return influence.lag_heatmap(
        corpus.event_series(candidate, SourceKind.TWITTER),
        corpus.event_series(candidate, SourceKind.NEWS),
        spec,
        t_start=corpus.start,
        t_end=corpus.end,
    )


def _cmd_heatmap(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    out = Path(config.out)
    for candidate in _candidates(corpus, args):
        hm = _build_heatmap(corpus, candidate, config)
        header, rows = _heatmap_csv(hm)
        _write_csv(out / f"heatmap_{candidate}.csv", header, rows)
        _write_text(out / f"heatmap_{candidate}.svg", render.render_heatmap_svg(hm))
        print(f"wrote {out / f'heatmap_{candidate}.csv'} (+.svg)")
    return 0


def _granger_pair(corpus: Corpus, candidate: str, config: RunConfig):
    tweets = corpus.event_series(candidate, SourceKind.TWITTER)
    news = corpus.event_series(candidate, SourceKind.NEWS)
    hl = (
        config.granger.half_life_minutes * MINUTE
        if config.granger.half_life_minutes is not None
        else None
    )
    t0 = (corpus.start // 3600) * 3600
    tw = granger_mod.prepare_granger_series(tweets, t0=t0, t1=corpus.end, half_life=hl)
    nw = granger_mod.prepare_granger_series(news, t0=t0, t1=corpus.end, half_life=hl)
    news_to_twitter = granger_mod.granger_test(
        tw, nw, config.granger.max_lag, cause_name="news", effect_name="twitter"
    )
    twitter_to_news = granger_mod.granger_test(
        nw, tw, config.granger.max_lag, cause_name="twitter", effect_name="news"
    )
    return news_to_twitter, twitter_to_news


def _granger_csv(n2t: granger_mod.GrangerResult, t2n: granger_mod.GrangerResult):
    header = ["lag", "F_news_to_twitter", "p_news_to_twitter", "F_twitter_to_news", "p_twitter_to_news"]
    rows = [
        [a.lag, a.f_statistic, a.p_value, b.f_statistic, b.p_value]
        for a, b in zip(n2t.lags, t2n.lags)
    ]
    return header, rows


def _cmd_granger(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    out = Path(config.out)
    for candidate in _candidates(corpus, args):
        n2t, t2n = _granger_pair(corpus, candidate, config)
        payload = [granger_mod.result_to_dict(n2t), granger_mod.result_to_dict(t2n)]
        _write_text(out / f"granger_{candidate}.json", json.dumps(payload, indent=2) + "\n")
        header, rows = _granger_csv(n2t, t2n)
        _write_csv(out / f"granger_{candidate}.csv", header, rows)
        print(
            f"{candidate}: avg p news->twitter {n2t.avg_p:.3g}, "
            f"twitter->news {t2n.avg_p:.3g}"
        )
    return 0


def _cmd_sentiment(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    lexicon = sentiment.load_lexicon(config.require_lexicon())
    out = Path(config.out)
    rows = []
    for candidate in _candidates(corpus, args):
        for scope in sentiment.SCOPES:
            try:
                s = sentiment.sentiment_summary(
                    corpus, candidate, scope, lexicon,
                    config.sentiment.positive_threshold, config.sentiment.negative_threshold,
                )
            except ValueError:
                continue  # scope empty for this candidate
            ratio = _fmt(s.ratio) if s.ratio is not None else "∞"
            rows.append(
                [candidate, scope, s.positive, s.negative, s.neutral,
                 ratio, s.mean_daily_sentiment]
            )
    _write_csv(
        out / "sentiment_summary.csv",
        ["candidate", "scope", "pos", "neg", "neu", "ratio", "mean_daily"],
        rows,
    )
    test_rows = []
    for candidate in _candidates(corpus, args):
        try:
            comparison = sentiment.bias_comparison(corpus, candidate, lexicon)
        except ValueError:
            continue
        for (a, b), result in sorted(comparison.tests.items()):
            test_rows.append([candidate, a, b, result.statistic, result.p_value, result.df])
    _write_csv(
        out / "sentiment_bias_tests.csv",
        ["candidate", "category_a", "category_b", "t", "p", "df"],
        test_rows,
    )
    print(f"wrote {out / 'sentiment_summary.csv'} and {out / 'sentiment_bias_tests.csv'}")
    return 0


_TOPIC_SOURCES = (SourceKind.NEWS, SourceKind.TWITTER, SourceKind.CANDIDATE_TWITTER)


def _topic_distributions(corpus: Corpus, config: RunConfig, candidates):
    table = topics.load_embeddings(config.topics.embeddings)
    topic_list = topics.build_topics(topics.load_topics(config.topics.topics_file), table)
    dists: dict[tuple[str, str], topics.TopicDistribution] = {}
    for candidate in candidates:
        for kind in _TOPIC_SOURCES:
            try:
                dists[(candidate, kind.value)] = topics.topic_distribution(
                    corpus, candidate, kind, topic_list, table, config.topics.cutoff
                )
            except ValueError:
                continue  # no documents or no matches for this cell
    return topic_list, dists


def _cmd_topics(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    config.require_topics()
    out = Path(config.out)
    topic_list, dists = _topic_distributions(corpus, config, _candidates(corpus, args))
    columns = sorted(dists)
    header = ["topic"] + [f"{cand}/{source}" for cand, source in columns]
    rows = []
    for topic in topic_list:
        rows.append([topic.name] + [dists[col].percentages[topic.name] for col in columns])
    _write_csv(out / "topic_distribution.csv", header, rows)
    mismatch_rows = []
    for candidate in _candidates(corpus, args):
        for i, a in enumerate(_TOPIC_SOURCES):
            for b in _TOPIC_SOURCES[i + 1 :]:
                da = dists.get((candidate, a.value))
                db = dists.get((candidate, b.value))
                if da and db:
                    mismatch_rows.append(
                        [candidate, a.value, b.value, topics.mismatch(da, db)]
                    )
    _write_csv(
        out / "topic_mismatch.csv",
        ["candidate", "source_a", "source_b", "jsd"],
        mismatch_rows,
    )
    print(f"wrote {out / 'topic_distribution.csv'} and {out / 'topic_mismatch.csv'}")
    return 0


def _toxicity_backend(config: RunConfig):
    if config.toxicity.backend == "mock":
        return toxicity.MockBackend(config.toxicity.toxic_words)
    return toxicity.PerspectiveBackend()


def _toxicity_rows(corpus: Corpus, config: RunConfig, candidates):
    backend = _toxicity_backend(config)
    seed = config.toxicity.seed if config.toxicity.seed is not None else config.seed
    rows = []
    for candidate in candidates:
        report = toxicity.candidate_toxicity(
            corpus,
            candidate,
            config.toxicity.sample_size,
            seed,
            backend,
            concurrency=config.toxicity.concurrency,
            time_stratified=config.toxicity.time_stratified,
        )
        rows.append(
            [candidate, report.n_scored, report.mean_toxicity, report.n_skipped, report.sample_seed]
        )
    return rows


_TOXICITY_HEADER = ["candidate", "n_scored", "mean_toxicity", "n_skipped", "seed"]


def _cmd_toxicity(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    rows = _toxicity_rows(corpus, config, _candidates(corpus, args))
    out = Path(config.out)
    _write_csv(out / "toxicity.csv", _TOXICITY_HEADER, rows)
    print(f"wrote {out / 'toxicity.csv'}")
    return 0


def _cmd_report(config: RunConfig, args) -> int:
    corpus = ingest_corpus(config.require_corpus())
    out = Path(config.out)
    candidates = _candidates(corpus, args)
    written: list[Path] = []

    def emit_csv(name: str, header, rows):
        path = out / name
        _write_csv(path, header, rows)
        written.append(path)

    def emit_text(name: str, text: str):
        path = out / name
        _write_text(path, text)
        written.append(path)

    # Tables 1 and 2.
    emit_csv("table1_summary.csv", _SUMMARY_HEADER, _summary_rows(corpus, candidates))
    header, rows = _correlation_table(corpus, candidates)
    emit_csv("table2_source_correlations.csv", header, rows)

    # Daily-count distributions per candidate and platform.
    dist_rows = []
    box_stats = {SourceKind.TWITTER: [], SourceKind.NEWS: []}
    for candidate in candidates:
        for kind in (SourceKind.TWITTER, SourceKind.NEWS):
            daily = daily_counts(corpus.event_series(candidate, kind), corpus.start, corpus.end)
            st = distribution_stats(daily)
            dist_rows.append(
                [candidate, kind.value, st.mean, st.median, st.p5, st.p25, st.p75, st.p95, st.max_value]
            )
            box_stats[kind].append(st)
    emit_csv(
        "fig01_daily_distribution_stats.csv",
        ["candidate", "source", "mean", "median", "p5", "p25", "p75", "p95", "max"],
        dist_rows,
    )
    for kind, stats_list in box_stats.items():
        emit_text(
            f"fig01_daily_{kind.value}.svg",
            render.render_box_svg(candidates, stats_list, f"documents per day ({kind.value})"),
        )

    # Sentiment ratios, bias deltas, and tests.
    lexicon = sentiment.load_lexicon(config.require_lexicon())
    news_ratio_rows, news_values = [], []
    twitter_rows, twitter_values = [], []
    for candidate in candidates:
        for scope, rows_out, values in (
            ("news", news_ratio_rows, news_values),
            ("twitter", twitter_rows, twitter_values),
        ):
            try:
                s = sentiment.sentiment_summary(corpus, candidate, scope, lexicon,
                                                config.sentiment.positive_threshold,
                                                config.sentiment.negative_threshold)
            except ValueError:
                continue
            rows_out.append([candidate, s.positive, s.negative, s.neutral, s.ratio,
                             sentiment.format_pos_neg_ratio(s.ratio), s.mean_daily_sentiment])
            values.append((candidate, s.ratio))
    emit_csv("fig03_news_ratio.csv",
             ["candidate", "pos", "neg", "neu", "ratio", "ratio_display", "mean_daily"],
             news_ratio_rows)
    defined = [(c, r) for c, r in news_values if r is not None]
    if defined:
        emit_text("fig03_news_ratio.svg",
                  render.render_bar_svg([c for c, _ in defined], [r for _, r in defined],
                                        "positive:negative news ratio", "ratio"))
    bias_rows, bias_test_rows, bias_bars = [], [], []
    for candidate in candidates:
        try:
            comparison = sentiment.bias_comparison(corpus, candidate, lexicon)
        except ValueError:
            continue
        for category, ratio in sorted(comparison.ratios.items()):
            delta = comparison.deltas[category]
            bias_rows.append([candidate, category, ratio, delta])
            if delta is not None:
                bias_bars.append((f"{candidate}:{category[:3]}", delta))
        for (a, b), result in sorted(comparison.tests.items()):
            bias_test_rows.append([candidate, a, b, result.statistic, result.p_value, result.df])
    emit_csv("fig04_bias_ratio_delta.csv", ["candidate", "category", "ratio", "delta"], bias_rows)
    if bias_bars:
        emit_text("fig04_bias_ratio_delta.svg",
                  render.render_bar_svg([l for l, _ in bias_bars], [v for _, v in bias_bars],
                                        "news ratio by bias (mean-shifted)", "delta"))
    emit_csv("fig04_bias_tests.csv",
             ["candidate", "category_a", "category_b", "t", "p", "df"], bias_test_rows)
    twitter_deltas = sentiment.ratio_deltas(dict(twitter_values))
    emit_csv("fig05_twitter_ratio_delta.csv",
             ["candidate", "pos", "neg", "neu", "ratio", "ratio_display", "mean_daily"],
             twitter_rows)
    defined_deltas = [(c, d) for c, d in twitter_deltas.items() if d is not None]
    if defined_deltas:
        emit_text("fig05_twitter_ratio_delta.svg",
                  render.render_bar_svg([c for c, _ in defined_deltas],
                                        [d for _, d in defined_deltas],
                                        "positive:negative tweet ratio (mean-shifted)", "delta"))

    # Co-correlations: matrices, strongest-pair scatter, distribution boxes.
    cocorr_box_labels, cocorr_box_stats = [], []
    for kind in (SourceKind.NEWS, SourceKind.TWITTER):
        matrix = influence.co_correlation_matrix(corpus, kind)
        header, rows = _cocorr_csv(matrix)
        emit_csv(f"cocorrelation_matrix_{kind.value}.csv", header, rows)
        defined_pairs = {pair: pc for pair, pc in matrix.pairs.items() if pc.r is not None}
        if defined_pairs:
            (x, y), _ = max(defined_pairs.items(), key=lambda kv: (kv[1].r, kv[0]))
            daily_x = daily_counts(corpus.event_series(x, kind), corpus.start, corpus.end)
            daily_y = daily_counts(corpus.event_series(y, kind), corpus.start, corpus.end)
            co = influence.co_correlation(daily_x, daily_y)
            emit_csv(f"fig06_cocorrelation_scatter_{kind.value}.csv",
                     [f"{x}_per_day", f"{y}_per_day"], [list(p) for p in co.pairs])
            emit_text(f"fig06_cocorrelation_scatter_{kind.value}.svg",
                      render.render_scatter_svg(co.pairs, x, y,
                                                f"{kind.value} co-correlation r={co.r:.2f}"))
        if matrix.quantiles:
            cocorr_box_labels.append(kind.value)
            cocorr_box_stats.append(matrix)
    emit_csv("fig07_cocorrelation_distribution.csv",
             ["source", "mean_r", "n_undefined", "p5", "p25", "p50", "p75", "p95"],
             [[m.source_kind.value, m.mean_r, m.n_undefined,
               m.quantiles.get("p5"), m.quantiles.get("p25"), m.quantiles.get("p50"),
               m.quantiles.get("p75"), m.quantiles.get("p95")]
              for m in cocorr_box_stats])
    if cocorr_box_stats:
        class _Q:  # adapt quantile dicts to the box renderer's field names
            def __init__(self, q):
                self.p5, self.p25, self.median = q["p5"], q["p25"], q["p50"]
                self.p75, self.p95 = q["p75"], q["p95"]
        emit_text("fig07_cocorrelation_distribution.svg",
                  render.render_box_svg(cocorr_box_labels,
                                        [_Q(m.quantiles) for m in cocorr_box_stats],
                                        "co-correlation distribution"))

    # Lag heatmaps (one per candidate).
    for candidate in candidates:
        try:
            hm = _build_heatmap(corpus, candidate, config)
        except ValueError:
            continue  # a stream is empty or the range is too short
        header, rows = _heatmap_csv(hm)
        emit_csv(f"fig08to10_heatmap_{candidate}.csv", header, rows)
        emit_text(f"fig08to10_heatmap_{candidate}.svg", render.render_heatmap_svg(hm))

    # Topic distributions and mismatch.
    if config.topics.topics_file and config.topics.embeddings:
        topic_list, dists = _topic_distributions(corpus, config, candidates)
        columns = sorted(dists)
        emit_csv("fig11_topic_distribution.csv",
                 ["topic"] + [f"{cand}/{source}" for cand, source in columns],
                 [[t.name] + [dists[col].percentages[t.name] for col in columns]
                  for t in topic_list])
        if columns:
            matrix = np.array(
                [[dists[col].percentages[t.name] for col in columns] for t in topic_list]
            )
            emit_text("fig11_topic_distribution.svg",
                      render.render_matrix_svg([t.name for t in topic_list],
                                               [f"{c}/{s}" for c, s in columns],
                                               matrix, "topic distribution"))
        mismatch_rows = []
        for candidate in candidates:
            for i, a in enumerate(_TOPIC_SOURCES):
                for b in _TOPIC_SOURCES[i + 1 :]:
                    da, db = dists.get((candidate, a.value)), dists.get((candidate, b.value))
                    if da and db:
                        mismatch_rows.append([candidate, a.value, b.value, topics.mismatch(da, db)])
        emit_csv("fig11_topic_mismatch.csv",
                 ["candidate", "source_a", "source_b", "jsd"], mismatch_rows)

    # Granger causality per candidate.
    for candidate in candidates:
        try:
            n2t, t2n = _granger_pair(corpus, candidate, config)
        except ValueError:
            continue  # degenerate or too-short series
        _write_text(out / f"granger_{candidate}.json",
                    json.dumps([granger_mod.result_to_dict(n2t),
                                granger_mod.result_to_dict(t2n)], indent=2) + "\n")
        written.append(out / f"granger_{candidate}.json")
        header, rows = _granger_csv(n2t, t2n)
        emit_csv(f"fig12_granger_{candidate}.csv", header, rows)
        lags = [row.lag for row in n2t.lags]
        emit_text(f"fig12_granger_{candidate}.svg",
                  render.render_line_svg(
                      {"news -> twitter": (lags, [r.f_statistic for r in n2t.lags]),
                       "twitter -> news": (lags, [r.f_statistic for r in t2n.lags])},
                      "lag (hours)", "F statistic", f"{candidate} Granger causality"))

    # Toxicity (mock backend by default so reports run offline).
    tox_rows = _toxicity_rows(corpus, config, candidates)
    emit_csv("fig13_toxicity.csv", _TOXICITY_HEADER, tox_rows)
    emit_text("fig13_toxicity.svg",
              render.render_bar_svg([r[0] for r in tox_rows], [r[2] for r in tox_rows],
                                    "mean toxicity per candidate", "toxicity"))

    manifest = "\n".join(sorted(str(p.relative_to(out)) for p in written)) + "\n"
    _write_text(out / "MANIFEST.txt", manifest)
    print(f"report complete: {len(written) + 1} files in {out}")
    return 0


_HANDLERS = {
    "ingest-check": _cmd_ingest_check,
    "summary": _cmd_summary,
    "correlate": _cmd_correlate,
    "cocorr": _cmd_cocorr,
    "heatmap": _cmd_heatmap,
    "granger": _cmd_granger,
    "sentiment": _cmd_sentiment,
    "topics": _cmd_topics,
    "toxicity": _cmd_toxicity,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _resolve_config(args)
        if args.command == "report":
            config.require_corpus()
            config.require_lexicon()
        return _HANDLERS[args.command](config, args)
    except (ConfigError, IngestError) as exc:
        print(subparsers[args.command].format_usage(), end="", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # analysis/runtime failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
