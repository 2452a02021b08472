#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "engage/features.hpp"
#include "engage/types.hpp"

namespace engage {

// Last observed price at or before `date`, looking back at most 7 days.
std::optional<double> price_at(const PriceSeries& series, Date date);

// Percent return from the reference date (creation + 30 days) to
// reference + 30*horizon_months days, both prices resolved with the 7-day
// lookback. Absent when either price is unresolvable.
std::optional<double> compute_return(const PriceSeries& series,
                                     Date creation_date, int horizon_months);

struct ReturnMatrix {
    std::vector<int> horizons;  // months, ascending
    // topic_id -> one optional cell per horizon.
    std::map<std::string, std::vector<std::optional<double>>> cells;

    std::optional<double> at(const std::string& topic_id, int horizon) const;
};

std::vector<int> default_horizons();  // 1..12

ReturnMatrix build_return_matrix(
    const std::vector<TopicMeta>& topics,
    const std::map<std::string, PriceSeries>& prices,
    const std::vector<int>& horizons);

// Spearman rank correlation: Pearson correlation of average ranks.
// Throws on length mismatch, n < 2, or a constant input.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Exact AUC = P(pos score > neg score) + 0.5 * P(tie), via pooled midranks.
// Labels must be 0/1 with both classes present.
double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels);

struct DependenceCell {
    int n_topics = 0;
    std::optional<double> abs_spearman;  // absent when degenerate
    std::optional<double> auc;           // absent when single-class
};

struct DependenceCurves {
    std::vector<int> horizons;
    // feature -> one cell per horizon.
    std::map<FeatureKind, std::vector<DependenceCell>> cells;
};

// |Spearman| and sign-of-return AUC per feature and horizon. A topic enters
// a cell only when both its feature and that horizon's return are defined;
// the label is 1 iff the return is strictly positive.
DependenceCurves dependence_curves(const FeatureTable& features,
                                   const ReturnMatrix& returns);

struct ClusterReturnCell {
    int n_topics = 0;
    std::optional<double> median_return;
};

struct ClusterReturnCurves {
    std::vector<int> horizons;
    std::vector<double> centers;                        // per cluster
    std::vector<std::vector<ClusterReturnCell>> cells;  // [cluster][horizon]
};

// Median return per bot-probability cluster and horizon; an even count
// takes the mean of the two middle values.
ClusterReturnCurves median_cluster_returns(const BotClustering& clustering,
                                           const ReturnMatrix& returns);

}  // namespace engage
