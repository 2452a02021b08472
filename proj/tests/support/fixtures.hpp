#pragma once

// Shared test helpers: temp dirs, corpus builders, and the independent
// oracles the suites check library results against.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "engage/corpus.hpp"
#include "engage/model.hpp"

namespace testutil {

class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("engage_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --- in-memory corpus construction ---------------------------------------

inline engage::Date date(const char* text) {
    return *engage::Date::parse(text);
}

inline engage::Timestamp ts(const char* text) {
    return *engage::Timestamp::parse(text);
}

struct CorpusBuilder {
    engage::RawCorpus corpus;

    explicit CorpusBuilder(
        engage::InteractionKindSet kinds = engage::InteractionKindSet::standard()) {
        corpus.kinds = std::move(kinds);
    }

    CorpusBuilder& topic(const std::string& id, const char* creation) {
        corpus.topics.push_back({id, date(creation), id});
        return *this;
    }
    CorpusBuilder& user(const std::string& id, std::int64_t followers,
                        std::optional<double> bot = std::nullopt) {
        corpus.users.push_back({id, followers, bot});
        return *this;
    }
    CorpusBuilder& post(const std::string& topic, const std::string& user,
                        const char* when, std::vector<std::int64_t> counts) {
        counts.resize(corpus.kinds.size(), 0);
        corpus.posts.push_back({topic, user, ts(when), std::move(counts)});
        return *this;
    }
    CorpusBuilder& price(const std::string& topic, const char* day, double p) {
        auto& series = corpus.prices[topic];
        series.topic_id = topic;
        series.observations.push_back({date(day), p});
        return *this;
    }

    engage::InteractionDataset dataset(
        std::optional<engage::Timestamp> cutoff = std::nullopt) const {
        return engage::build_dataset(corpus, cutoff);
    }
};

// The two-topic reference fixture: kinds (like=ref, retweet); topic A has one
// user with 1000 followers and 10 posts carrying 40 likes / 12 retweets in
// total, topic B one user with 500 followers and 4 posts carrying 5 likes /
// 3 retweets. Expected fit: beta_retweet = 1/3, alpha_A = 0.0039,
// alpha_B = 0.003.
inline CorpusBuilder two_topic_fixture() {
    engage::InteractionKindSet kinds{{"like", "retweet"}, 0};
    CorpusBuilder builder(kinds);
    builder.topic("A", "2021-01-04").topic("B", "2021-01-06");
    builder.user("ua", 1000).user("ub", 500);
    for (int k = 0; k < 10; ++k) {
        builder.post("A", "ua", "2021-01-05T00:00:00Z",
                     {k == 0 ? 40 : 0, k == 0 ? 12 : 0});
    }
    for (int k = 0; k < 4; ++k) {
        builder.post("B", "ub", "2021-01-07T00:00:00Z",
                     {k == 0 ? 5 : 0, k == 0 ? 3 : 0});
    }
    return builder;
}

// --- oracles ---------------------------------------------------------------

// Central finite differences of the exact log-likelihood, one parameter at a
// time. Step sizes are scaled to the parameter.
struct FiniteDiffGradient {
    std::map<std::string, double> d_alpha;
    std::map<std::string, double> d_beta;  // non-reference kinds
};

inline FiniteDiffGradient finite_diff_gradient(
    const engage::InteractionDataset& dataset,
    const engage::EngagementModel& model) {
    FiniteDiffGradient out;
    const auto value = [&](const engage::EngagementModel& m) {
        return engage::log_likelihood(dataset, m).value;
    };
    for (const auto& [topic, alpha] : model.alpha) {
        const double h = 1e-5 * std::max(std::fabs(alpha), 1e-3);
        engage::EngagementModel up = model;
        engage::EngagementModel down = model;
        up.alpha[topic] = alpha + h;
        down.alpha[topic] = alpha - h;
        out.d_alpha[topic] = (value(up) - value(down)) / (2 * h);
    }
    for (const auto& [kind, beta] : model.beta) {
        if (kind == model.reference_kind) continue;
        const double h = 1e-5 * std::max(std::fabs(beta), 1e-3);
        engage::EngagementModel up = model;
        engage::EngagementModel down = model;
        up.beta[kind] = beta + h;
        down.beta[kind] = beta - h;
        out.d_beta[kind] = (value(up) - value(down)) / (2 * h);
    }
    return out;
}

// AUC by counting every (positive, negative) pair; ties worth one half.
inline double pair_count_auc(const std::vector<double>& scores,
                             const std::vector<int>& labels) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

// Average ranks straight from the definition: one minus-count and one
// tie-count per element.
inline std::vector<double> definition_ranks(const std::vector<double>& xs) {
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (xs[j] < xs[i]) ++less;
            else if (xs[j] == xs[i]) ++equal;
        }
        ranks[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return ranks;
}

inline double definition_spearman(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
    const auto rx = definition_ranks(xs);
    const auto ry = definition_ranks(ys);
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += rx[i]; my += ry[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Optimal 1-D k-means by dynamic programming over the sorted values:
// cost[i][j] = best within-cluster sum of squares for the first i points in
// j clusters. O(n^2 k) with prefix sums; returns the minimal inertia.
inline double optimal_kmeans_inertia(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    const int n = static_cast<int>(values.size());
    std::vector<double> pre(n + 1, 0.0), pre2(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        pre[i + 1] = pre[i] + values[i];
        pre2[i + 1] = pre2[i] + values[i] * values[i];
    }
    // cost of one cluster covering [a, b)
    const auto segment = [&](int a, int b) {
        const double s = pre[b] - pre[a];
        const double s2 = pre2[b] - pre2[a];
        const double m = static_cast<double>(b - a);
        return s2 - s * s / m;
    };
    constexpr double kInf = 1e300;
    std::vector<std::vector<double>> cost(
        static_cast<std::size_t>(k) + 1, std::vector<double>(n + 1, kInf));
    cost[0][0] = 0.0;
    for (int j = 1; j <= k; ++j) {
        for (int i = j; i <= n; ++i) {
            for (int split = j - 1; split < i; ++split) {
                const double candidate = cost[j - 1][split] + segment(split, i);
                cost[j][i] = std::min(cost[j][i], candidate);
            }
        }
    }
    return cost[k][n];
}

// Nearest-rank percentile on a sorted copy.
inline double nearest_rank(std::vector<double> values, int q) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const std::size_t rank = (static_cast<std::size_t>(q) * n + 99) / 100;
    return values[rank - 1];
}

// --- process spawning for CLI tests ---------------------------------------

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

inline RunResult run_command(const std::string& command) {
    RunResult result;
    FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) {
        result.output.append(buf, got);
    }
    const int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace testutil
