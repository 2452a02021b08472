#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "engage/commands.hpp"
#include "engage/errors.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

// "1..12", or a comma list like "1,3,6,12".
std::vector<int> parse_horizons(const std::string& text) {
    std::vector<int> out;
    const auto range = text.find("..");
    try {
        if (range != std::string::npos) {
            const int lo = std::stoi(text.substr(0, range));
            const int hi = std::stoi(text.substr(range + 2));
            if (lo < 1 || hi < lo) throw engage::Error("bad horizon range '" + text + "'");
            for (int h = lo; h <= hi; ++h) out.push_back(h);
        } else {
            for (const auto& item : split(text, ',')) {
                const int h = std::stoi(item);
                if (h < 1) throw engage::Error("horizons must be >= 1");
                out.push_back(h);
            }
        }
    } catch (const std::logic_error&) {
        throw engage::Error("cannot parse horizons '" + text + "'");
    }
    if (out.empty()) throw engage::Error("no horizons given");
    return out;
}

std::vector<engage::Date> parse_dates(const std::string& text) {
    std::vector<engage::Date> out;
    for (const auto& item : split(text, ',')) {
        const auto date = engage::Date::parse(item);
        if (!date) throw engage::Error("cannot parse date '" + item + "'");
        out.push_back(*date);
    }
    return out;
}

// "like=1,retweet=0.31,reply=0.19"
std::map<std::string, double> parse_beta(const std::string& text) {
    std::map<std::string, double> out;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw engage::Error("expected kind=value in '" + item + "'");
        }
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw engage::Error("cannot parse coefficient in '" + item + "'");
        }
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw engage::Error("cannot parse number '" + item + "'");
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw engage::Error("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct CliOptions {
    std::string corpus;
    std::string out;
    std::string kinds = "like,retweet,reply";
    std::string reference_kind = "like";
    std::uint64_t seed = 0;
    std::string mode = "in_sample";
    std::string horizons = "1..12";
    std::string investment_dates;
    bool strict_users = true;
    int clusters = 3;
    int restarts = 32;
};

void add_common(CLI::App* sub, CliOptions& opt, bool needs_corpus) {
    if (needs_corpus) {
        sub->add_option("--corpus", opt.corpus, "corpus directory")->required();
    }
    sub->add_option("--out", opt.out, "output directory")->required();
    sub->add_option("--kinds", opt.kinds, "interaction kinds, comma separated");
    sub->add_option("--reference-kind", opt.reference_kind,
                    "kind whose coefficient is pinned to 1");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--mode", opt.mode, "in_sample or prior_data");
    sub->add_option("--horizons", opt.horizons, "months, e.g. 1..12 or 1,3,6");
    sub->add_option("--investment-dates", opt.investment_dates,
                    "historical backtest dates, comma separated");
    sub->add_flag("--strict-users,!--no-strict-users", opt.strict_users,
                  "fail on posts whose user has no profile");
    sub->add_option("--clusters", opt.clusters, "bot probability clusters");
    sub->add_option("--restarts", opt.restarts, "k-means restarts");
}

engage::RunConfig make_config(const CliOptions& opt, const std::string& name) {
    engage::RunConfig config;
    config.subcommand = name;
    config.corpus_dir = opt.corpus;
    config.out_dir = opt.out;
    config.kind_names = split(opt.kinds, ',');
    config.reference_kind = opt.reference_kind;
    config.seed = opt.seed;
    config.mode = engage::parse_estimation_mode(opt.mode);
    config.horizons = parse_horizons(opt.horizons);
    if (!opt.investment_dates.empty()) {
        config.investment_dates = parse_dates(opt.investment_dates);
    }
    config.strict_users = opt.strict_users;
    config.clusters = opt.clusters;
    config.restarts = opt.restarts;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"engagement coefficient toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    auto* validate = app.add_subcommand("validate", "load and check a corpus");
    add_common(validate, opt, true);
    auto* fit = app.add_subcommand("fit", "fit the engagement model");
    add_common(fit, opt, true);
    auto* features = app.add_subcommand("features", "compute the feature table");
    add_common(features, opt, true);
    auto* evaluate =
        app.add_subcommand("evaluate", "dependence and cluster return curves");
    add_common(evaluate, opt, true);
    auto* backtest =
        app.add_subcommand("backtest", "threshold portfolio backtests");
    add_common(backtest, opt, true);
    auto* pipeline =
        app.add_subcommand("pipeline", "features, evaluation, and backtests");
    add_common(pipeline, opt, true);

    auto* simulate =
        app.add_subcommand("simulate", "write a synthetic corpus");
    add_common(simulate, opt, false);
    std::string spec_file, alphas, betas, followers, price_mode, start_date;
    int n_topics = 0, users = 0, price_days = 0;
    std::int64_t posts_per_topic = -1;
    double alpha_min = 0, alpha_max = 0, base_price = 0, drift_scale = 0;
    bool bot_probabilities = false;
    simulate->add_option("--spec", spec_file, "JSON spec file");
    simulate->add_option("--alpha", alphas,
                         "planted alphas, one topic each (comma separated)");
    simulate->add_option("--topics", n_topics, "topic count (log-spaced alphas)");
    simulate->add_option("--alpha-min", alpha_min, "smallest log-spaced alpha");
    simulate->add_option("--alpha-max", alpha_max, "largest log-spaced alpha");
    simulate->add_option("--beta", betas, "kind=value list");
    simulate->add_option("--users", users, "user count");
    simulate->add_option("--followers", followers,
                         "log-uniform follower range min,max");
    simulate->add_flag("--bot-probabilities", bot_probabilities,
                       "draw a bot probability per user");
    simulate->add_option("--posts-per-topic", posts_per_topic, "posts per topic");
    simulate->add_option("--price-mode", price_mode, "flat or alpha_linked");
    simulate->add_option("--price-days", price_days,
                         "days of price history per topic");
    simulate->add_option("--base-price", base_price, "price at creation");
    simulate->add_option("--drift-scale", drift_scale,
                         "alpha_linked daily drift per decade of alpha");
    simulate->add_option("--start-date", start_date, "first creation date");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(make_config(opt, "validate"));
        if (fit->parsed()) return cmd_fit(make_config(opt, "fit"));
        if (features->parsed()) return cmd_features(make_config(opt, "features"));
        if (evaluate->parsed()) return cmd_evaluate(make_config(opt, "evaluate"));
        if (backtest->parsed()) return cmd_backtest(make_config(opt, "backtest"));
        if (pipeline->parsed()) return cmd_pipeline(make_config(opt, "pipeline"));

        engage::SimulateSpec spec;
        if (!spec_file.empty()) {
            spec = engage::simulate_spec_from_json(read_file(spec_file));
        }
        if (simulate->count("--kinds")) {
            spec.kinds.names = split(opt.kinds, ',');
            spec.kinds.reference_index = 0;
        }
        if (simulate->count("--reference-kind")) {
            const auto ref = spec.kinds.index_of(opt.reference_kind);
            if (!ref) {
                throw engage::Error("reference kind '" + opt.reference_kind +
                                    "' not in the kind list");
            }
            spec.kinds.reference_index = *ref;
        }
        if (!alphas.empty()) {
            spec.topics.clear();
            const auto values = parse_doubles(alphas);
            for (std::size_t j = 0; j < values.size(); ++j) {
                engage::SimulateSpec::TopicSpec topic;
                char buf[16];
                std::snprintf(buf, sizeof buf, "T%02zu", j + 1);
                topic.topic_id = buf;
                topic.alpha = values[j];
                spec.topics.push_back(topic);
            }
        }
        if (n_topics > 0) spec.n_topics = n_topics;
        if (simulate->count("--alpha-min")) spec.alpha_min = alpha_min;
        if (simulate->count("--alpha-max")) spec.alpha_max = alpha_max;
        if (!betas.empty()) spec.beta = parse_beta(betas);
        if (users > 0) spec.user_count = users;
        if (!followers.empty()) {
            const auto range = parse_doubles(followers);
            if (range.size() != 2) {
                throw engage::Error("--followers wants min,max");
            }
            spec.follower_min = static_cast<std::int64_t>(range[0]);
            spec.follower_max = static_cast<std::int64_t>(range[1]);
        }
        if (bot_probabilities) spec.bot_probabilities = true;
        if (posts_per_topic >= 0) spec.posts_per_topic = posts_per_topic;
        if (!price_mode.empty()) spec.price_mode = price_mode;
        if (price_days > 0) spec.price_days = price_days;
        if (simulate->count("--base-price")) spec.base_price = base_price;
        if (simulate->count("--drift-scale")) spec.drift_scale = drift_scale;
        if (!start_date.empty()) {
            const auto date = engage::Date::parse(start_date);
            if (!date) throw engage::Error("cannot parse date '" + start_date + "'");
            spec.start_date = *date;
        }
        return cmd_simulate(make_config(opt, "simulate"), spec);
    } catch (const engage::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
