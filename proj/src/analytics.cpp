#include "engage/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "engage/errors.hpp"

namespace engage {

namespace {

constexpr int kLookbackDays = 7;

// Average (fractional) ranks, 1-based; tied values share the mean rank.
std::vector<double> rankify(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

bool has_ties(const std::vector<double>& xs) {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

bool is_constant(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [&](double v) { return v == xs.front(); });
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2]
                      : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

std::optional<double> price_at(const PriceSeries& series, Date date) {
    const auto& obs = series.observations;
    auto it = std::upper_bound(
        obs.begin(), obs.end(), date,
        [](Date d, const PricePoint& p) { return d < p.date; });
    if (it == obs.begin()) return std::nullopt;
    --it;
    if (date.days - it->date.days > kLookbackDays) return std::nullopt;
    return it->price;
}

std::optional<double> compute_return(const PriceSeries& series,
                                     Date creation_date, int horizon_months) {
    if (horizon_months < 1) throw Error("horizon must be at least 1 month");
    const Date reference = creation_date.plus_days(kWindowDays);
    const Date target = reference.plus_days(kWindowDays * horizon_months);
    const auto p_ref = price_at(series, reference);
    const auto p_target = price_at(series, target);
    if (!p_ref || !p_target) return std::nullopt;
    // 100*(pt - pr)/pr rather than 100*(pt/pr - 1): symmetric moves like
    // +10%/-10% then cancel exactly in a portfolio mean.
    return 100.0 * (*p_target - *p_ref) / *p_ref;
}

std::optional<double> ReturnMatrix::at(const std::string& topic_id,
                                       int horizon) const {
    auto row = cells.find(topic_id);
    if (row == cells.end()) return std::nullopt;
    auto it = std::find(horizons.begin(), horizons.end(), horizon);
    if (it == horizons.end()) return std::nullopt;
    return row->second[static_cast<std::size_t>(it - horizons.begin())];
}

std::vector<int> default_horizons() {
    std::vector<int> months(12);
    std::iota(months.begin(), months.end(), 1);
    return months;
}

ReturnMatrix build_return_matrix(
    const std::vector<TopicMeta>& topics,
    const std::map<std::string, PriceSeries>& prices,
    const std::vector<int>& horizons) {
    ReturnMatrix matrix;
    matrix.horizons = horizons;
    static const PriceSeries kEmpty;
    for (const auto& topic : topics) {
        auto it = prices.find(topic.topic_id);
        const PriceSeries& series = it == prices.end() ? kEmpty : it->second;
        auto& row = matrix.cells[topic.topic_id];
        row.reserve(horizons.size());
        for (int h : horizons) {
            row.push_back(compute_return(series, topic.creation_date, h));
        }
    }
    return matrix;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error("spearman: length mismatch");
    if (xs.size() < 2) throw Error("spearman: need at least 2 observations");
    if (is_constant(xs) || is_constant(ys)) {
        throw Error("spearman: undefined for constant input");
    }
    const std::vector<double> rx = rankify(xs);
    const std::vector<double> ry = rankify(ys);
    if (!has_ties(xs) && !has_ties(ys)) {
        // With distinct values the ranks are integers and the textbook
        // 1 - 6*sum(d^2)/(n(n^2-1)) identity is exact — monotone data comes
        // out at exactly +-1.
        const double n = static_cast<double>(xs.size());
        double d2 = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
        }
        return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    }
    return std::clamp(pearson(rx, ry), -1.0, 1.0);
}

double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw Error("roc_auc: length mismatch");
    std::int64_t n_pos = 0, n_neg = 0;
    for (int label : labels) {
        if (label == 1) {
            ++n_pos;
        } else if (label == 0) {
            ++n_neg;
        } else {
            throw Error("roc_auc: labels must be 0 or 1");
        }
    }
    if (n_pos == 0 || n_neg == 0) {
        throw Error("roc_auc: undefined with a single class");
    }
    const std::vector<double> ranks = rankify(scores);
    double pos_rank_sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) pos_rank_sum += ranks[i];
    }
    const double np = static_cast<double>(n_pos);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) /
           (np * static_cast<double>(n_neg));
}

DependenceCurves dependence_curves(const FeatureTable& features,
                                   const ReturnMatrix& returns) {
    DependenceCurves curves;
    curves.horizons = returns.horizons;
    for (FeatureKind kind : kAllFeatureKinds) {
        auto& cells = curves.cells[kind];
        for (std::size_t h = 0; h < returns.horizons.size(); ++h) {
            std::vector<double> values;
            std::vector<double> rets;
            std::vector<int> labels;
            for (const auto& [topic_id, row] : features.rows) {
                const auto value = FeatureTable::value(row, kind);
                if (!value) continue;
                auto cell = returns.cells.find(topic_id);
                if (cell == returns.cells.end() || !cell->second[h]) continue;
                values.push_back(*value);
                rets.push_back(*cell->second[h]);
                labels.push_back(*cell->second[h] > 0.0 ? 1 : 0);
            }
            DependenceCell out;
            out.n_topics = static_cast<int>(values.size());
            if (out.n_topics >= 2) {
                try {
                    out.abs_spearman = std::fabs(spearman(values, rets));
                } catch (const Error&) {
                }
                try {
                    out.auc = roc_auc(values, labels);
                } catch (const Error&) {
                }
            }
            cells.push_back(out);
        }
    }
    return curves;
}

ClusterReturnCurves median_cluster_returns(const BotClustering& clustering,
                                           const ReturnMatrix& returns) {
    ClusterReturnCurves curves;
    curves.horizons = returns.horizons;
    curves.centers = clustering.centers;
    curves.cells.assign(clustering.centers.size(),
                        std::vector<ClusterReturnCell>(returns.horizons.size()));
    for (std::size_t j = 0; j < clustering.centers.size(); ++j) {
        for (std::size_t h = 0; h < returns.horizons.size(); ++h) {
            std::vector<double> values;
            for (const auto& [topic_id, cluster] : clustering.assignment) {
                if (cluster != static_cast<int>(j)) continue;
                auto cell = returns.cells.find(topic_id);
                if (cell == returns.cells.end() || !cell->second[h]) continue;
                values.push_back(*cell->second[h]);
            }
            auto& out = curves.cells[j][h];
            out.n_topics = static_cast<int>(values.size());
            if (!values.empty()) out.median_return = median_of(values);
        }
    }
    return curves;
}

}  // namespace engage
