"""Lexicon scoring rules (hand-computed compounds) and corpus summaries."""

import math

import numpy as np
import pytest

from crossmedia import sentiment
from crossmedia.corpus import ingest_corpus
from crossmedia.sentiment import Lexicon, RuleConstants, Sentiment, classify, score
from crossmedia.timeutil import DAY

from conftest import START_2020, event, write_corpus_dir

GOOD = Lexicon(valences={"good": 2.0, "bad": -1.5})
ALPHA = 15.0


def compound(s):
    return s / math.sqrt(s * s + ALPHA)


class TestLoadLexicon:
    def test_two_line_file(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good\t2.0\nbad\t-1.5\n")
        lex = sentiment.load_lexicon(path)
        assert lex.valences == {"good": 2.0, "bad": -1.5}
        assert lex.constants == RuleConstants()

    def test_duplicate_token(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good\t2.0\ngood\t1.0\n")
        with pytest.raises(ValueError, match="lex.tsv:2.*duplicate"):
            sentiment.load_lexicon(path)

    def test_unparsable_valence_names_line(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good\t2.0\nbad\tnope\n")
        with pytest.raises(ValueError, match="lex.tsv:2"):
            sentiment.load_lexicon(path)

    def test_constants_header_override(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("#!normalization_alpha=20\n# plain comment\ngood\t2.0\n")
        lex = sentiment.load_lexicon(path)
        assert lex.constants.normalization_alpha == 20.0
        assert lex.constants.negation_factor == 0.74

    def test_unknown_constant_rejected(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("#!mystery=1\ngood\t2.0\n")
        with pytest.raises(ValueError, match="unknown rule constant"):
            sentiment.load_lexicon(path)

    def test_large_file_count_matches_lines(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("".join(f"tok{i}\t{(i % 7) - 3}.5\n" for i in range(7000)))
        lex = sentiment.load_lexicon(path)
        assert len(lex.valences) == 7000


class TestScore:
    def test_empty_text(self):
        assert score("", GOOD) == 0.0
        assert score("nothing matches here", GOOD) == 0.0

    def test_single_positive_token(self):
        assert score("good", GOOD) == pytest.approx(2.0 / math.sqrt(4.0 + 15.0), abs=1e-12)

    def test_negation_flips_and_scales(self):
        expected = compound(-0.74 * 2.0)
        assert score("not good", GOOD) == pytest.approx(expected, abs=1e-12)
        assert score("not good", GOOD) < 0

    def test_negation_window_is_three_tokens(self):
        assert score("not entirely sure but good", GOOD) > 0  # negation out of reach
        assert score("not very entirely good", GOOD) < 0

    def test_booster_adds_toward_sign(self):
        assert score("very good", GOOD) == pytest.approx(compound(2.0 + 0.293), abs=1e-12)
        assert score("very bad", GOOD) == pytest.approx(compound(-1.5 - 0.293), abs=1e-12)

    def test_two_boosters_add_twice(self):
        assert score("really very good", GOOD) == pytest.approx(
            compound(2.0 + 2 * 0.293), abs=1e-12
        )

    def test_caps_boost_in_mixed_case_text(self):
        assert score("GOOD morning", GOOD) == pytest.approx(compound(2.0 + 0.733), abs=1e-12)

    def test_no_caps_boost_when_everything_is_caps(self):
        assert score("GOOD MORNING", GOOD) == pytest.approx(compound(2.0), abs=1e-12)

    def test_booster_then_negation_order(self):
        # booster applies to the raw valence, negation flips the boosted value
        expected = compound(-0.74 * (2.0 + 0.293))
        assert score("not very good", GOOD) == pytest.approx(expected, abs=1e-12)

    def test_urls_stripped(self):
        assert score("good https://example.com/bad", GOOD) == score("good", GOOD)

    def test_neutral_tokens_do_not_change_compound(self):
        base = score("good", GOOD)
        assert score("good morning everyone today", GOOD) == pytest.approx(base, abs=1e-15)

    def test_bounded_open_interval(self):
        lex = Lexicon(valences={f"w{i}": 4.0 for i in range(50)})
        text = " ".join(f"w{i}" for i in range(50))
        assert 0.0 < score(text, lex) < 1.0
        assert -1.0 < score("not " + text, lex) < 1.0  # stays inside (-1, 1)

    def test_raising_valence_never_decreases_compound(self):
        for low, high in ((0.5, 1.0), (-1.0, 2.0), (-2.0, -0.5)):
            s_low = score("quite good indeed", Lexicon(valences={"good": low}))
            s_high = score("quite good indeed", Lexicon(valences={"good": high}))
            assert s_high >= s_low


class TestClassify:
    def test_thresholds(self):
        assert classify(0.0) is Sentiment.NEUTRAL
        assert classify(0.05) is Sentiment.POSITIVE
        assert classify(-0.05) is Sentiment.NEGATIVE
        assert classify(-0.2) is Sentiment.NEGATIVE
        assert classify(0.049) is Sentiment.NEUTRAL


def _labeled_corpus(tmp_path, texts, kind="news", candidate="alpha"):
    events = []
    for i, text in enumerate(texts):
        ts = START_2020 + (i % 7) * DAY + (i % 24) * 3600
        events.append(
            event(
                f"d{i}",
                ts,
                candidate=candidate,
                kind=kind,
                outlet="wire" if kind == "news" else "",
                bias="central" if kind == "news" else "unknown",
                text=text,
            )
        )
    return ingest_corpus(write_corpus_dir(tmp_path, events, candidates=(candidate,)))


class TestSummary:
    def test_counts_and_ratio(self, tmp_path):
        texts = ["good"] * 30 + ["bad"] * 10 + ["nothing"] * 5
        corpus = _labeled_corpus(tmp_path / "c", texts)
        summary = sentiment.sentiment_summary(corpus, "alpha", "news", GOOD)
        assert (summary.positive, summary.negative, summary.neutral) == (30, 10, 5)
        assert summary.ratio == 3.0
        assert sentiment.format_pos_neg_ratio(summary.ratio) == "3"

    def test_all_positive_ratio_undefined(self, tmp_path):
        corpus = _labeled_corpus(tmp_path / "c", ["good"] * 8)
        summary = sentiment.sentiment_summary(corpus, "alpha", "news", GOOD)
        assert summary.ratio is None
        assert sentiment.format_pos_neg_ratio(summary.ratio) == "∞"

    def test_counts_match_per_document_oracle(self, tmp_path):
        rng = np.random.default_rng(61)
        pool = ["good", "bad", "so good", "not good", "fine then", "very bad", "GOOD stuff"]
        texts = [pool[rng.integers(0, len(pool))] for _ in range(1000)]
        corpus = _labeled_corpus(tmp_path / "c", texts)
        summary = sentiment.sentiment_summary(corpus, "alpha", "news", GOOD)
        expected = {"positive": 0, "negative": 0, "neutral": 0}
        for text in texts:
            c = score(text, GOOD)
            if c >= 0.05:
                expected["positive"] += 1
            elif c <= -0.05:
                expected["negative"] += 1
            else:
                expected["neutral"] += 1
        assert summary.positive == expected["positive"]
        assert summary.negative == expected["negative"]
        assert summary.neutral == expected["neutral"]
        if expected["negative"]:
            assert summary.ratio == expected["positive"] / expected["negative"]

    def test_empty_scope_errors(self, tmp_path):
        corpus = _labeled_corpus(tmp_path / "c", ["good"], kind="twitter")
        with pytest.raises(ValueError, match="no documents"):
            sentiment.sentiment_summary(corpus, "alpha", "news", GOOD)

    def test_unknown_scope(self, tmp_path):
        corpus = _labeled_corpus(tmp_path / "c", ["good"])
        with pytest.raises(ValueError, match="unknown scope"):
            sentiment.sentiment_summary(corpus, "alpha", "radio", GOOD)


def _valence_for_compound(c, alpha=ALPHA):
    # invert s / sqrt(s^2 + alpha) = c
    return c * math.sqrt(alpha / (1.0 - c * c))


def _bias_corpus(tmp_path, daily_by_category):
    """One news doc per day per category whose compound is the planted value."""
    events = []
    valences = {}
    i = 0
    outlets = {"liberal": "harbor", "central": "union", "conservative": "ridge"}
    n_days = max(len(v) for v in daily_by_category.values())
    for category, values in daily_by_category.items():
        for day, target in enumerate(values):
            token = f"tok{i}"
            valences[token] = _valence_for_compound(target)
            events.append(
                event(
                    f"d{i}",
                    START_2020 + day * DAY + 3600,
                    kind="news",
                    outlet=outlets[category],
                    bias=category,
                    text=token,
                )
            )
            i += 1
    corpus = ingest_corpus(
        write_corpus_dir(
            tmp_path, events, candidates=("alpha",),
            start=START_2020, end=START_2020 + (n_days + 1) * DAY,
        )
    )
    return corpus, Lexicon(valences=valences)


class TestBiasComparison:
    def test_identical_categories(self, tmp_path):
        values = [0.2, -0.1, 0.3, 0.15, -0.05] * 4
        corpus, lex = _bias_corpus(
            tmp_path / "c", {"liberal": values, "conservative": list(values)}
        )
        result = sentiment.bias_comparison(corpus, "alpha", lex)
        assert result.deltas["liberal"] == pytest.approx(0.0, abs=1e-12)
        assert result.deltas["conservative"] == pytest.approx(0.0, abs=1e-12)
        test = result.tests[("liberal", "conservative")]
        assert test.statistic == 0.0
        assert test.p_value == pytest.approx(1.0, abs=1e-12)
        assert result.omitted == ("central",)

    def test_planted_gap_matches_hand_welch(self, tmp_path):
        rng = np.random.default_rng(62)
        lib = np.clip(rng.normal(0.1, 0.05, 100), -0.9, 0.9)
        con = np.clip(rng.normal(0.3, 0.05, 100), -0.9, 0.9)
        corpus, lex = _bias_corpus(
            tmp_path / "c", {"liberal": lib.tolist(), "conservative": con.tolist()}
        )
        result = sentiment.bias_comparison(corpus, "alpha", lex)
        test = result.tests[("liberal", "conservative")]
        # hand Welch formula on the planted daily means
        va, vb = lib.var(ddof=1), con.var(ddof=1)
        t_hand = (lib.mean() - con.mean()) / math.sqrt(va / 100 + vb / 100)
        assert test.statistic == pytest.approx(t_hand, abs=1e-9)
        assert test.p_value < 1e-6

    def test_single_category_errors(self, tmp_path):
        corpus, lex = _bias_corpus(tmp_path / "c", {"liberal": [0.1, 0.2, 0.3]})
        with pytest.raises(ValueError, match="2 bias categories"):
            sentiment.bias_comparison(corpus, "alpha", lex)

    def test_ratio_deltas_centered(self, tmp_path):
        rng = np.random.default_rng(63)
        corpus, lex = _bias_corpus(
            tmp_path / "c",
            {
                "liberal": np.clip(rng.normal(0.2, 0.2, 60), -0.9, 0.9).tolist(),
                "central": np.clip(rng.normal(0.0, 0.2, 60), -0.9, 0.9).tolist(),
                "conservative": np.clip(rng.normal(-0.1, 0.2, 60), -0.9, 0.9).tolist(),
            },
        )
        result = sentiment.bias_comparison(corpus, "alpha", lex)
        defined = [d for d in result.deltas.values() if d is not None]
        assert sum(defined) == pytest.approx(0.0, abs=1e-9)


def test_ratio_deltas_mean_shift():
    deltas = sentiment.ratio_deltas({"a": 3.0, "b": 1.0, "c": None})
    assert deltas == {"a": 1.0, "b": -1.0, "c": None}
    assert sentiment.ratio_deltas({"a": None}) == {"a": None}


def test_daily_mean_skips_empty_days(tmp_path):
    events = [
        event("a", START_2020 + 3600, kind="news", outlet="w", bias="central", text="good"),
        event("b", START_2020 + 2 * DAY, kind="news", outlet="w", bias="central", text="good good"),
    ]
    corpus = ingest_corpus(write_corpus_dir(tmp_path / "c", events, candidates=("alpha",)))
    daily = sentiment.daily_mean_sentiment(corpus.documents("alpha", "news"), GOOD)
    assert len(daily) == 2  # the empty middle day is absent, not zero-filled
