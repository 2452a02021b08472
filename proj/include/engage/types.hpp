#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engage/time.hpp"

namespace engage {

struct TopicMeta {
    std::string topic_id;
    Date creation_date;
    std::string display_name;
};

struct UserProfile {
    std::string user_id;
    std::int64_t follower_count = 0;
    std::optional<double> bot_probability;
};

// One post; `counts` is aligned with the kind set the corpus was loaded with.
struct Post {
    std::string topic_id;
    std::string user_id;
    Timestamp timestamp;
    std::vector<std::int64_t> counts;
};

// The declared interaction kinds. The reference kind is the one whose
// interaction coefficient is pinned to 1 when fitting.
struct InteractionKindSet {
    std::vector<std::string> names;
    std::size_t reference_index = 0;

    static InteractionKindSet standard();  // like, retweet, reply

    const std::string& reference_kind() const { return names[reference_index]; }
    std::size_t size() const { return names.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    // Throws Error if names are empty/duplicated or the reference is invalid.
    void validate() const;
};

struct PricePoint {
    Date date;
    double price = 0.0;
};

// Daily price observations, strictly increasing in date, prices positive.
struct PriceSeries {
    std::string topic_id;
    std::vector<PricePoint> observations;
};

}  // namespace engage
