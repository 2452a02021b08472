#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "engage/errors.hpp"
#include "engage/model.hpp"
#include "engage/random.hpp"

namespace engage {

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Kind set implied by a model: reference kind first, the rest in name order.
InteractionKindSet kinds_of(const EngagementModel& model) {
    InteractionKindSet kinds;
    kinds.names.push_back(model.reference_kind);
    for (const auto& [name, beta] : model.beta) {
        if (name != model.reference_kind) kinds.names.push_back(name);
    }
    kinds.reference_index = 0;
    kinds.validate();
    return kinds;
}

}  // namespace

InteractionDataset sample_synthetic(const EngagementModel& model,
                                    const std::vector<UserProfile>& profiles,
                                    const SamplePlan& plan,
                                    std::uint64_t seed,
                                    std::vector<TopicMeta> topics) {
    InteractionKindSet kinds = kinds_of(model);
    std::vector<double> beta(kinds.size(), 0.0);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        beta[k] = model.beta.at(kinds.names[k]);
    }

    std::map<std::string, const UserProfile*> by_user;
    for (const auto& profile : profiles) by_user[profile.user_id] = &profile;

    if (topics.empty()) {
        Date base = *Date::parse("2021-01-04");
        int week = 0;
        for (const auto& [topic_id, alpha] : model.alpha) {
            topics.push_back({topic_id, base.plus_days(7 * week), topic_id});
            ++week;
        }
    }
    std::map<std::string, const TopicMeta*> by_topic;
    for (const auto& topic : topics) by_topic[topic.topic_id] = &topic;

    std::vector<Post> posts;
    for (const auto& [topic_id, per_user] : plan.posts) {
        auto alpha_it = model.alpha.find(topic_id);
        if (alpha_it == model.alpha.end()) {
            throw Error("sample plan references topic '" + topic_id +
                        "' absent from the model");
        }
        auto meta_it = by_topic.find(topic_id);
        if (meta_it == by_topic.end()) {
            throw Error("sample plan references topic '" + topic_id +
                        "' absent from the topic list");
        }
        const double alpha = alpha_it->second;
        const Timestamp start = Timestamp::from_date(meta_it->second->creation_date);
        for (const auto& [user_id, count] : per_user) {
            auto user_it = by_user.find(user_id);
            if (user_it == by_user.end()) {
                throw Error("sample plan references user '" + user_id +
                            "' with no profile");
            }
            const double followers =
                static_cast<double>(user_it->second->follower_count);
            // One substream per (topic, user): the same seed gives the same
            // counts no matter how the plan is ordered or split.
            std::mt19937_64 rng(
                substream_seed(seed, fnv1a(topic_id), fnv1a(user_id)));
            for (std::int64_t k = 0; k < count; ++k) {
                Post post;
                post.topic_id = topic_id;
                post.user_id = user_id;
                // Hourly slots across the 30-day window, then second offsets,
                // so every post lands inside the topic's first month.
                post.timestamp =
                    Timestamp{start.seconds + (k % 720) * 3600 + k / 720};
                post.counts.resize(kinds.size());
                for (std::size_t i = 0; i < kinds.size(); ++i) {
                    post.counts[i] =
                        poisson_draw(rng, beta[i] * alpha * followers);
                }
                posts.push_back(std::move(post));
            }
        }
    }

    return assemble_dataset(kinds, std::move(topics),
                            std::vector<UserProfile>(profiles),
                            std::move(posts));
}

}  // namespace engage
