#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engage/corpus.hpp"
#include "engage/model.hpp"

namespace engage {

enum class EstimationMode { in_sample, prior_data };

std::string_view to_string(EstimationMode mode);
EstimationMode parse_estimation_mode(std::string_view text);

// The competing per-topic signals.
enum class FeatureKind { engagement, volume, bot_probability };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);
inline constexpr FeatureKind kAllFeatureKinds[] = {
    FeatureKind::engagement, FeatureKind::volume, FeatureKind::bot_probability};

// Engagement coefficients above this are flagged as possible manipulation.
inline constexpr double kManipulationThreshold = 1e-3;

struct FeatureRow {
    std::string topic_id;
    Date creation_date{};
    // Absent when the fit excluded the topic ("no estimate", distinct from 0).
    std::optional<double> engagement;
    std::int64_t tweet_volume = 0;
    std::optional<double> mean_bot_probability;
    bool manipulation_flag = false;
};

struct FeatureTable {
    EstimationMode mode = EstimationMode::in_sample;
    std::map<std::string, FeatureRow> rows;  // keyed by topic_id

    // The row's value for one feature kind, absent when undefined.
    static std::optional<double> value(const FeatureRow& row, FeatureKind kind);
};

// Dataset for prior-data estimation at a cutoff: posts at or before the
// cutoff, over topics whose first-month windows start before it.
InteractionDataset prior_dataset(const RawCorpus& corpus, Timestamp cutoff,
                                 bool strict_users = true);

// Engagement coefficient of one topic. in_sample fits the whole corpus;
// prior_data fits only posts at or before the topic's first-month cutoff,
// over topics whose own windows start before that cutoff. Absent when the
// fit excluded the topic.
std::optional<double> engagement_feature(const RawCorpus& corpus,
                                         const std::string& topic_id,
                                         EstimationMode mode,
                                         bool strict_users = true);

// Posts about the topic inside its first-month window.
std::int64_t tweet_volume(const RawCorpus& corpus, const std::string& topic_id);

// Mean bot probability over the distinct users with at least one in-window
// post on the topic and a known probability; absent when there is none.
std::optional<double> mean_bot_probability(const RawCorpus& corpus,
                                           const std::string& topic_id);

// All three features for every topic. prior_data mode fits once per distinct
// cutoff and reuses the fit across topics sharing it.
FeatureTable build_feature_table(const RawCorpus& corpus, EstimationMode mode,
                                 bool strict_users = true);

struct BotClustering {
    int k = 0;
    std::vector<double> centers;  // ascending
    std::map<std::string, int> assignment;
    double inertia = 0.0;
};

// 1-D k-means: Lloyd iterations from k-means++ seeds, best of `restarts`
// runs by inertia. Deterministic for a given seed; restart r always uses the
// same derived stream, so growing `restarts` can only improve the result.
BotClustering cluster_bot_probabilities(
    const std::map<std::string, double>& values, int k,
    std::uint64_t seed = 0, int restarts = 32);

}  // namespace engage
