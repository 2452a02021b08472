#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engage/types.hpp"

namespace engage {

// Parsed corpus files, before aggregation. Posts' count vectors follow
// `kinds`. `warnings` collects non-fatal oddities (ignored columns, unsorted
// price rows, ...).
struct RawCorpus {
    InteractionKindSet kinds;
    std::vector<TopicMeta> topics;
    std::vector<UserProfile> users;
    std::vector<Post> posts;
    std::map<std::string, PriceSeries> prices;
    std::vector<std::string> warnings;

    const TopicMeta* find_topic(const std::string& topic_id) const;
};

// Reads topics.csv, users.csv, posts.csv, and prices.csv from `dir`.
// Every row is either parsed or reported; any rejected row fails the load
// with a CorpusError listing file, line, and column for each one.
RawCorpus load_corpus(const std::filesystem::path& dir,
                      const InteractionKindSet& kinds = InteractionKindSet::standard());

struct TopicAggregates {
    std::int64_t interactions = 0;             // n_c
    std::int64_t exposure = 0;                 // v_c = sum_u m_cu * f_u
    std::int64_t post_count = 0;
    std::vector<std::int64_t> kind_interactions;  // per-kind share of n_c
};

struct PairAggregates {
    std::int64_t interactions = 0;             // n_cu
    std::int64_t post_count = 0;               // m_cu
    std::vector<std::int64_t> kind_interactions;  // n_cui
};

// Immutable aggregated view of a (possibly time-windowed) corpus, carrying
// every sufficient statistic the engagement model needs.
struct InteractionDataset {
    InteractionKindSet kinds;
    std::map<std::string, TopicMeta> topics;
    std::map<std::string, UserProfile> profiles;
    std::vector<Post> posts;  // retained posts only

    std::int64_t total_interactions = 0;           // n
    std::vector<std::int64_t> kind_totals;         // l_i
    std::map<std::string, TopicAggregates> topic_stats;
    std::map<std::pair<std::string, std::string>, PairAggregates> pair_stats;

    std::int64_t dropped_posts = 0;  // strict_users=false casualties
    std::vector<std::string> warnings;

    std::int64_t n() const { return total_interactions; }
    std::int64_t n_c(const std::string& topic) const;
    std::int64_t n_cu(const std::string& topic, const std::string& user) const;
    std::int64_t n_cui(const std::string& topic, const std::string& user,
                       std::size_t kind) const;
    std::int64_t l(std::size_t kind) const { return kind_totals.at(kind); }
    std::int64_t exposure(const std::string& topic) const;  // v_c
    bool covered(const std::string& topic) const;
    std::vector<std::string> uncovered_topics() const;
};

// Aggregates posts against the given topics/profiles. Shared by the corpus
// builder and the synthetic sampler so the statistics have one definition.
InteractionDataset assemble_dataset(const InteractionKindSet& kinds,
                                    std::vector<TopicMeta> topics,
                                    std::vector<UserProfile> profiles,
                                    std::vector<Post> posts,
                                    bool strict_users = true);

// Retains posts with timestamp <= cutoff (all posts when absent) and computes
// the aggregate statistics. With strict_users=false, posts whose user has no
// profile are dropped and counted instead of failing the build.
InteractionDataset build_dataset(const RawCorpus& corpus,
                                 std::optional<Timestamp> cutoff = std::nullopt,
                                 bool strict_users = true);

// [creation at 00:00 UTC, +30 days).
TimeWindow first_month_window(const TopicMeta& topic);

inline constexpr int kWindowDays = 30;

}  // namespace engage
