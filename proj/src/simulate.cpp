#include "engage/simulate.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "engage/csv.hpp"
#include "engage/errors.hpp"
#include "engage/model.hpp"
#include "engage/random.hpp"
#include "engage/serialize.hpp"

namespace engage {

namespace {

std::string pluralize(const std::string& kind) {
    if (!kind.empty() && kind.back() == 'y') {
        return kind.substr(0, kind.size() - 1) + "ies";
    }
    return kind + "s";
}

std::string padded(const char* prefix, int index, int count) {
    std::size_t width = 1;
    for (int rest = count; rest >= 10; rest /= 10) ++width;
    std::string digits = std::to_string(index + 1);
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }
    return prefix + digits;
}

Date json_date(const nlohmann::json& value, const char* what) {
    const auto parsed = Date::parse(value.get<std::string>());
    if (!parsed) {
        throw Error(std::string("bad ") + what + " '" +
                    value.get<std::string>() + "' in simulate spec");
    }
    return *parsed;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace

SimulateSpec simulate_spec_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad simulate spec: ") + e.what());
    }
    SimulateSpec spec;
    try {
        if (doc.contains("kinds")) {
            spec.kinds.names = doc["kinds"].get<std::vector<std::string>>();
            spec.kinds.reference_index = 0;
        }
        if (doc.contains("reference_kind")) {
            const auto ref = spec.kinds.index_of(doc["reference_kind"].get<std::string>());
            if (!ref) {
                throw Error("reference kind '" +
                            doc["reference_kind"].get<std::string>() +
                            "' not in the kind list");
            }
            spec.kinds.reference_index = *ref;
        }
        if (doc.contains("beta")) {
            for (const auto& [kind, value] : doc["beta"].items()) {
                spec.beta[kind] = value.get<double>();
            }
        }
        if (doc.contains("topics")) {
            for (const auto& entry : doc["topics"]) {
                SimulateSpec::TopicSpec topic;
                topic.topic_id = entry.at("topic_id").get<std::string>();
                topic.alpha = entry.at("alpha").get<double>();
                if (entry.contains("creation_date")) {
                    topic.creation_date = json_date(entry["creation_date"], "creation_date");
                }
                spec.topics.push_back(std::move(topic));
            }
        }
        spec.n_topics = doc.value("n_topics", spec.n_topics);
        spec.alpha_min = doc.value("alpha_min", spec.alpha_min);
        spec.alpha_max = doc.value("alpha_max", spec.alpha_max);
        if (doc.contains("start_date")) {
            spec.start_date = json_date(doc["start_date"], "start_date");
        }
        if (doc.contains("users")) {
            const auto& users = doc["users"];
            spec.user_count = users.value("count", spec.user_count);
            spec.follower_min = users.value("follower_min", spec.follower_min);
            spec.follower_max = users.value("follower_max", spec.follower_max);
            spec.bot_probabilities =
                users.value("bot_probabilities", spec.bot_probabilities);
        }
        spec.posts_per_topic = doc.value("posts_per_topic", spec.posts_per_topic);
        spec.price_mode = doc.value("price_mode", spec.price_mode);
        spec.price_days = doc.value("price_days", spec.price_days);
        spec.base_price = doc.value("base_price", spec.base_price);
        spec.drift_scale = doc.value("drift_scale", spec.drift_scale);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad simulate spec: ") + e.what());
    }
    return spec;
}

void write_synthetic_corpus(const SimulateSpec& spec, std::uint64_t seed,
                            const std::filesystem::path& out_dir) {
    spec.kinds.validate();
    if (spec.price_mode != "flat" && spec.price_mode != "alpha_linked") {
        throw Error("price_mode must be flat or alpha_linked");
    }
    if (spec.user_count < 1) throw Error("need at least one user");
    if (spec.follower_min < 1 || spec.follower_max < spec.follower_min) {
        throw Error("follower range must satisfy 1 <= min <= max");
    }
    if (spec.posts_per_topic < 0) throw Error("posts_per_topic must be >= 0");

    // Resolve the topic list.
    std::vector<SimulateSpec::TopicSpec> topic_specs = spec.topics;
    if (topic_specs.empty()) {
        if (spec.n_topics < 1) {
            throw Error("give explicit topics or n_topics >= 1");
        }
        if (spec.alpha_min <= 0 || spec.alpha_max < spec.alpha_min) {
            throw Error("alpha range must satisfy 0 < min <= max");
        }
        const double lo = std::log10(spec.alpha_min);
        const double hi = std::log10(spec.alpha_max);
        for (int j = 0; j < spec.n_topics; ++j) {
            SimulateSpec::TopicSpec topic;
            topic.topic_id = padded("T", j, spec.n_topics);
            topic.alpha =
                spec.n_topics == 1
                    ? spec.alpha_min
                    : std::pow(10.0, lo + (hi - lo) * j / (spec.n_topics - 1));
            topic_specs.push_back(std::move(topic));
        }
    }
    std::vector<TopicMeta> topics;
    EngagementModel model;
    model.reference_kind = spec.kinds.reference_kind();
    for (std::size_t j = 0; j < topic_specs.size(); ++j) {
        auto& t = topic_specs[j];
        if (t.alpha < 0) throw Error("alpha must be >= 0");
        if (!t.creation_date) {
            t.creation_date = spec.start_date.plus_days(7 * static_cast<int>(j));
        }
        if (model.alpha.count(t.topic_id)) {
            throw Error("duplicate topic_id '" + t.topic_id + "'");
        }
        model.alpha[t.topic_id] = t.alpha;
        topics.push_back({t.topic_id, *t.creation_date, t.topic_id});
    }
    for (const auto& kind : spec.kinds.names) {
        auto it = spec.beta.find(kind);
        model.beta[kind] = it == spec.beta.end() ? 1.0 : it->second;
        if (model.beta[kind] < 0) throw Error("beta must be >= 0");
    }
    if (model.beta[model.reference_kind] != 1.0) {
        throw Error("the reference kind's coefficient must be 1");
    }

    // Users: log-uniform follower counts, optional uniform bot probabilities.
    std::vector<UserProfile> users;
    std::mt19937_64 user_rng(substream_seed(seed, 0x75736572, 0));  // "user"
    const double f_lo = std::log(static_cast<double>(spec.follower_min));
    const double f_hi = std::log(static_cast<double>(spec.follower_max));
    for (int i = 0; i < spec.user_count; ++i) {
        UserProfile user;
        user.user_id = padded("u", i, spec.user_count);
        user.follower_count = static_cast<std::int64_t>(
            std::llround(std::exp(f_lo + (f_hi - f_lo) * uniform01(user_rng))));
        if (spec.bot_probabilities) user.bot_probability = uniform01(user_rng);
        users.push_back(std::move(user));
    }

    SamplePlan plan;
    for (const auto& topic : topics) {
        auto& per_user = plan.posts[topic.topic_id];
        const std::int64_t base = spec.posts_per_topic / spec.user_count;
        const std::int64_t extra = spec.posts_per_topic % spec.user_count;
        for (int i = 0; i < spec.user_count; ++i) {
            const std::int64_t m = base + (i < extra ? 1 : 0);
            if (m > 0) per_user[users[i].user_id] = m;
        }
    }

    const InteractionDataset dataset =
        sample_synthetic(model, users, plan, seed, topics);

    std::filesystem::create_directories(out_dir);

    std::string text = csv_line({"topic_id", "creation_date", "display_name"});
    for (const auto& [id, topic] : dataset.topics) {
        text += csv_line({id, topic.creation_date.str(), topic.display_name});
    }
    write_file(out_dir / "topics.csv", text);

    std::vector<std::string> header = {"user_id", "follower_count"};
    if (spec.bot_probabilities) header.push_back("bot_probability");
    text = csv_line(header);
    for (const auto& user : users) {
        std::vector<std::string> row = {user.user_id,
                                        std::to_string(user.follower_count)};
        if (spec.bot_probabilities) {
            row.push_back(format_double(*user.bot_probability));
        }
        text += csv_line(row);
    }
    write_file(out_dir / "users.csv", text);

    header = {"topic_id", "user_id", "timestamp"};
    for (const auto& kind : spec.kinds.names) header.push_back(pluralize(kind));
    text = csv_line(header);
    for (const auto& post : dataset.posts) {
        std::vector<std::string> row = {post.topic_id, post.user_id,
                                        post.timestamp.str()};
        for (std::int64_t count : post.counts) row.push_back(std::to_string(count));
        text += csv_line(row);
    }
    write_file(out_dir / "posts.csv", text);

    double pivot = 0.0;
    if (spec.price_mode == "alpha_linked") {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& [id, alpha] : model.alpha) {
            if (alpha > 0) {
                lo = std::min(lo, std::log10(alpha));
                hi = std::max(hi, std::log10(alpha));
            }
        }
        pivot = lo <= hi ? (lo + hi) / 2.0 : 0.0;
    }
    text = csv_line({"topic_id", "date", "price"});
    for (const auto& [id, topic] : dataset.topics) {
        double rate = 0.0;
        const double alpha = model.alpha.at(id);
        if (spec.price_mode == "alpha_linked" && alpha > 0) {
            rate = spec.drift_scale * (std::log10(alpha) - pivot);
        }
        for (int d = 0; d <= spec.price_days; ++d) {
            const double price = spec.base_price * std::pow(1.0 + rate, d);
            text += csv_line({id, topic.creation_date.plus_days(d).str(),
                              format_double(price)});
        }
    }
    write_file(out_dir / "prices.csv", text);

    write_file(out_dir / "truth.json", model_to_json(model));
}

}  // namespace engage
