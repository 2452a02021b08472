"""Python interface to the engagement-coefficient toolkit.

Everything heavy lives in the compiled ``engage._core`` extension; this
package just re-exports it under friendlier names.
"""

from engage._core import (
    BotClustering,
    Date,
    EngagementModel,
    EngageError,
    ExcludedTopic,
    FeatureRow,
    FeatureTable,
    FitReport,
    InteractionDataset,
    InteractionKindSet,
    Post,
    PricePoint,
    PriceSeries,
    RawCorpus,
    Timestamp,
    TopicMeta,
    UserProfile,
    build_dataset,
    build_feature_table,
    cluster_bot_probabilities,
    compute_return,
    engagement_feature,
    fit_closed_form,
    fit_numeric,
    load_corpus,
    log_likelihood,
    mean_bot_probability,
    quartile_thresholds,
    roc_auc,
    sample_synthetic,
    spearman,
    tweet_volume,
)

__all__ = [
    "BotClustering",
    "Date",
    "EngagementModel",
    "EngageError",
    "ExcludedTopic",
    "FeatureRow",
    "FeatureTable",
    "FitReport",
    "InteractionDataset",
    "InteractionKindSet",
    "Post",
    "PricePoint",
    "PriceSeries",
    "RawCorpus",
    "Timestamp",
    "TopicMeta",
    "UserProfile",
    "build_dataset",
    "build_feature_table",
    "cluster_bot_probabilities",
    "compute_return",
    "engagement_feature",
    "fit_closed_form",
    "fit_numeric",
    "load_corpus",
    "log_likelihood",
    "mean_bot_probability",
    "quartile_thresholds",
    "roc_auc",
    "sample_synthetic",
    "spearman",
    "tweet_volume",
]

__version__ = "0.1.0"
