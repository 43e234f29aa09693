"""affekt: emotion-aware news analytics.

Ingest news headlines, classify emotions through a pool of JSON-constrained
inference endpoints (round-robin with failover, checkpointed for crash-safe
resumption), derive valence/arousal and cross-outlet polarization metrics,
and serve them over a read-only HTTP API.
"""

from .ingest import (
    CleaningReport,
    IngestConfig,
    NewsRecord,
    RawRecord,
    deduplicate,
    filter_record,
    ingest,
    language_ratio,
    load_corpus,
    normalize_text,
    write_corpus,
)
from .metrics import (
    AffectScores,
    EmotionDistribution,
    MatchConfig,
    MatchedStoryGroup,
    OutletEmotionProfile,
    PolarizationReport,
    affect_of,
    api_index,
    build_trends,
    distribution,
    jsd,
    match_stories,
    mean_valence_by_emotion,
    negativity_ratio,
    outlet_profiles,
    polarization_report,
    rolling_mean,
    write_metric_artifacts,
)
from .taxonomy import (
    COARSE_CLASSES,
    DEFAULT_NEGATIVE_SET,
    LABELS,
    Taxonomy,
    default_taxonomy,
    parse_label,
)

__version__ = "0.1.0"
