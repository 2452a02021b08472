#include "engage/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "engage/errors.hpp"
#include "engage/random.hpp"

namespace engage {

namespace {

const TopicMeta& topic_or_throw(const RawCorpus& corpus,
                                const std::string& topic_id) {
    const TopicMeta* topic = corpus.find_topic(topic_id);
    if (!topic) throw Error("unknown topic '" + topic_id + "'");
    return *topic;
}

std::optional<double> alpha_of(const FitReport& report,
                               const std::string& topic_id) {
    auto it = report.model.alpha.find(topic_id);
    if (it == report.model.alpha.end()) return std::nullopt;
    return it->second;
}

struct KmeansRun {
    std::vector<double> centers;
    std::vector<int> assignment;
    double inertia = std::numeric_limits<double>::infinity();
};

int nearest_center(const std::vector<double>& centers, double x) {
    int best = 0;
    double best_d = std::fabs(x - centers[0]);
    for (int j = 1; j < static_cast<int>(centers.size()); ++j) {
        const double d = std::fabs(x - centers[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

KmeansRun lloyd_once(const std::vector<double>& xs, int k,
                     std::mt19937_64& rng) {
    const int n = static_cast<int>(xs.size());

    // k-means++ seeding: each next center drawn with probability
    // proportional to squared distance from the chosen ones.
    std::vector<double> centers;
    centers.push_back(xs[std::min<int>(n - 1, static_cast<int>(uniform01(rng) * n))]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers) best = std::min(best, (xs[i] - c) * (xs[i] - c));
            d2[i] = best;
            total += best;
        }
        int pick = -1;
        const double target = uniform01(rng) * total;
        double cum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            cum += d2[i];
            pick = i;
            if (cum > target) break;
        }
        centers.push_back(xs[pick]);
    }

    KmeansRun run;
    run.centers = std::move(centers);
    run.assignment.assign(n, -1);
    for (int iter = 0; iter < 1000; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const int j = nearest_center(run.centers, xs[i]);
            if (j != run.assignment[i]) {
                run.assignment[i] = j;
                changed = true;
            }
        }
        if (!changed) break;

        std::vector<double> sum(k, 0.0);
        std::vector<int> count(k, 0);
        for (int i = 0; i < n; ++i) {
            sum[run.assignment[i]] += xs[i];
            ++count[run.assignment[i]];
        }
        for (int j = 0; j < k; ++j) {
            if (count[j] > 0) {
                run.centers[j] = sum[j] / count[j];
                continue;
            }
            // Empty cluster: restart it at the point farthest from its center.
            int far = 0;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                const double d = xs[i] - run.centers[run.assignment[i]];
                if (d * d > far_d) {
                    far_d = d * d;
                    far = i;
                }
            }
            run.centers[j] = xs[far];
        }
    }

    run.inertia = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = xs[i] - run.centers[run.assignment[i]];
        run.inertia += d * d;
    }
    return run;
}

}  // namespace

InteractionDataset prior_dataset(const RawCorpus& corpus, Timestamp cutoff,
                                 bool strict_users) {
    std::vector<TopicMeta> topics;
    std::set<std::string> kept;
    for (const auto& topic : corpus.topics) {
        if (first_month_window(topic).start < cutoff) {
            topics.push_back(topic);
            kept.insert(topic.topic_id);
        }
    }
    std::vector<Post> posts;
    for (const auto& post : corpus.posts) {
        if (post.timestamp <= cutoff && kept.count(post.topic_id)) {
            posts.push_back(post);
        }
    }
    return assemble_dataset(corpus.kinds, std::move(topics), corpus.users,
                            std::move(posts), strict_users);
}

std::string_view to_string(EstimationMode mode) {
    return mode == EstimationMode::in_sample ? "in_sample" : "prior_data";
}

EstimationMode parse_estimation_mode(std::string_view text) {
    if (text == "in_sample") return EstimationMode::in_sample;
    if (text == "prior_data") return EstimationMode::prior_data;
    throw Error("unknown estimation mode '" + std::string(text) +
                "' (expected in_sample or prior_data)");
}

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::engagement: return "engagement";
        case FeatureKind::volume: return "volume";
        case FeatureKind::bot_probability: return "bot_probability";
    }
    return "?";
}

FeatureKind parse_feature_kind(std::string_view text) {
    for (FeatureKind kind : kAllFeatureKinds) {
        if (text == to_string(kind)) return kind;
    }
    throw Error("unknown feature '" + std::string(text) +
                "' (expected engagement, volume, or bot_probability)");
}

std::optional<double> FeatureTable::value(const FeatureRow& row,
                                          FeatureKind kind) {
    switch (kind) {
        case FeatureKind::engagement: return row.engagement;
        case FeatureKind::volume:
            return static_cast<double>(row.tweet_volume);
        case FeatureKind::bot_probability: return row.mean_bot_probability;
    }
    return std::nullopt;
}

std::optional<double> engagement_feature(const RawCorpus& corpus,
                                         const std::string& topic_id,
                                         EstimationMode mode,
                                         bool strict_users) {
    const TopicMeta& topic = topic_or_throw(corpus, topic_id);
    if (mode == EstimationMode::in_sample) {
        return alpha_of(
            fit_closed_form(build_dataset(corpus, std::nullopt, strict_users)),
            topic_id);
    }
    const Timestamp cutoff = first_month_window(topic).end;
    return alpha_of(
        fit_closed_form(prior_dataset(corpus, cutoff, strict_users)), topic_id);
}

std::int64_t tweet_volume(const RawCorpus& corpus,
                          const std::string& topic_id) {
    const TopicMeta& topic = topic_or_throw(corpus, topic_id);
    const TimeWindow window = first_month_window(topic);
    std::int64_t count = 0;
    for (const auto& post : corpus.posts) {
        if (post.topic_id == topic_id && window.contains(post.timestamp)) {
            ++count;
        }
    }
    return count;
}

std::optional<double> mean_bot_probability(const RawCorpus& corpus,
                                           const std::string& topic_id) {
    const TopicMeta& topic = topic_or_throw(corpus, topic_id);
    const TimeWindow window = first_month_window(topic);
    std::set<std::string> posters;
    for (const auto& post : corpus.posts) {
        if (post.topic_id == topic_id && window.contains(post.timestamp)) {
            posters.insert(post.user_id);
        }
    }
    double sum = 0.0;
    std::int64_t known = 0;
    for (const auto& user : corpus.users) {
        if (user.bot_probability && posters.count(user.user_id)) {
            sum += *user.bot_probability;
            ++known;
        }
    }
    if (known == 0) return std::nullopt;
    return sum / static_cast<double>(known);
}

FeatureTable build_feature_table(const RawCorpus& corpus, EstimationMode mode,
                                 bool strict_users) {
    FeatureTable table;
    table.mode = mode;

    std::map<std::string, std::optional<double>> engagement;
    if (mode == EstimationMode::in_sample) {
        const FitReport report = fit_closed_form(
            build_dataset(corpus, std::nullopt, strict_users));
        for (const auto& topic : corpus.topics) {
            engagement[topic.topic_id] = alpha_of(report, topic.topic_id);
        }
    } else {
        // One fit per distinct cutoff; topics created the same day share it.
        std::map<std::int64_t, std::vector<const TopicMeta*>> by_cutoff;
        for (const auto& topic : corpus.topics) {
            by_cutoff[first_month_window(topic).end.seconds].push_back(&topic);
        }
        for (const auto& [seconds, group] : by_cutoff) {
            const FitReport report = fit_closed_form(
                prior_dataset(corpus, Timestamp{seconds}, strict_users));
            for (const TopicMeta* topic : group) {
                engagement[topic->topic_id] = alpha_of(report, topic->topic_id);
            }
        }
    }

    for (const auto& topic : corpus.topics) {
        FeatureRow row;
        row.topic_id = topic.topic_id;
        row.creation_date = topic.creation_date;
        row.engagement = engagement[topic.topic_id];
        row.tweet_volume = tweet_volume(corpus, topic.topic_id);
        row.mean_bot_probability = mean_bot_probability(corpus, topic.topic_id);
        row.manipulation_flag =
            row.engagement && *row.engagement > kManipulationThreshold;
        table.rows.emplace(topic.topic_id, std::move(row));
    }
    return table;
}

BotClustering cluster_bot_probabilities(
    const std::map<std::string, double>& values, int k,
    std::uint64_t seed, int restarts) {
    if (k < 1) throw Error("k must be at least 1");
    if (restarts < 1) throw Error("restarts must be at least 1");
    std::vector<std::string> ids;
    std::vector<double> xs;
    for (const auto& [id, value] : values) {
        ids.push_back(id);
        xs.push_back(value);
    }
    const std::set<double> distinct(xs.begin(), xs.end());
    if (static_cast<int>(distinct.size()) < k) {
        throw Error("need at least " + std::to_string(k) +
                    " distinct values for " + std::to_string(k) +
                    " clusters, have " + std::to_string(distinct.size()));
    }

    KmeansRun best;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(r), 0));
        KmeansRun run = lloyd_once(xs, k, rng);
        if (run.inertia < best.inertia) best = std::move(run);
    }

    // Relabel clusters so centers come out ascending.
    std::vector<int> order(k);
    for (int j = 0; j < k; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return best.centers[a] < best.centers[b];
    });
    std::vector<int> rank(k);
    for (int j = 0; j < k; ++j) rank[order[j]] = j;

    BotClustering out;
    out.k = k;
    out.centers.resize(k);
    for (int j = 0; j < k; ++j) out.centers[j] = best.centers[order[j]];
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out.assignment[ids[i]] = rank[best.assignment[i]];
    }
    out.inertia = best.inertia;
    return out;
}

}  // namespace engage
