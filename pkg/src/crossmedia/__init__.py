"""crossmedia: batch analytics relating social-media and news event streams.

Pipeline pieces: corpus ingestion and binning, exponential-decay intensity
smoothing, windowed lag-correlation heatmaps, Granger causality, lexicon
sentiment, embedding topic matching, and toxicity aggregation, plus a CLI
(`crossmedia report`) that runs everything into one output directory.
"""

from .corpus import (
    Bias,
    BinnedSeries,
    Corpus,
    CorpusSummary,
    DocumentEvent,
    EventSeries,
    IngestError,
    SourceKind,
    ValueSeries,
    bin_events,
    corpus_summary,
    daily_counts,
    distribution_stats,
    ingest_corpus,
)
from .granger import GrangerResult, granger_test, prepare_granger_series
from .hawkes import IntensitySeries, average_period, decay_rate, smooth
from .influence import (
    CoCorrelationMatrix,
    HeatmapSpec,
    LagHeatmap,
    co_correlation,
    co_correlation_matrix,
    cross_source_correlation,
    lag_heatmap,
)
from .sentiment import Lexicon, bias_comparison, classify, load_lexicon, score, sentiment_summary
from .stats import TestResult, f_test_nested, ols_fit, pearson, welch_t_test
from .topics import (
    EmbeddingTable,
    Topic,
    TopicDistribution,
    embed_text,
    load_embeddings,
    match_topic,
    mismatch,
    topic_distribution,
)
from .toxicity import MockBackend, PerspectiveBackend, ToxicityReport, candidate_toxicity

__version__ = "0.1.0"
