#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "engage/types.hpp"

namespace engage {

// Everything needed to generate a corpus directory from the model's
// generative direction, either from CLI flags or a JSON spec file.
struct SimulateSpec {
    InteractionKindSet kinds = InteractionKindSet::standard();
    std::map<std::string, double> beta;  // unlisted kinds default to 1

    struct TopicSpec {
        std::string topic_id;
        double alpha = 0.0;
        std::optional<Date> creation_date;
    };
    std::vector<TopicSpec> topics;  // explicit topics win over n_topics
    int n_topics = 0;               // log-spaced alphas in [alpha_min, alpha_max]
    double alpha_min = 1e-4;
    double alpha_max = 1e-3;
    Date start_date = Date{18631};  // 2021-01-04; creations go a week apart

    int user_count = 100;
    std::int64_t follower_min = 100;  // log-uniform follower counts
    std::int64_t follower_max = 100000;
    bool bot_probabilities = false;  // draw uniform [0,1] per user

    std::int64_t posts_per_topic = 1000;  // spread evenly over users

    // flat: constant base_price. alpha_linked: each topic's price compounds
    // daily at drift_scale * (log10 alpha - midpoint), so returns increase
    // strictly with alpha and straddle zero.
    std::string price_mode = "flat";
    int price_days = 400;
    double base_price = 100.0;
    double drift_scale = 0.005;
};

SimulateSpec simulate_spec_from_json(const std::string& text);

// Writes topics.csv, users.csv, posts.csv, prices.csv, and truth.json (the
// planted model) into out_dir. Identical spec + seed => identical bytes.
void write_synthetic_corpus(const SimulateSpec& spec, std::uint64_t seed,
                            const std::filesystem::path& out_dir);

}  // namespace engage
