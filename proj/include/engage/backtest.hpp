#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "engage/analytics.hpp"
#include "engage/features.hpp"
#include "engage/types.hpp"

namespace engage {

// [0, Q25, Q50, Q75, Q100] with nearest-rank quantiles; 0 is the baseline
// threshold that admits every topic. Requires at least 4 values.
std::vector<double> quartile_thresholds(std::vector<double> values);

struct StrategySpec {
    FeatureKind feature = FeatureKind::engagement;
    double threshold = 0.0;
    int holding_months = 1;
    std::optional<Date> investment_date;  // set by the historical variant
};

struct Trade {
    std::string topic_id;
    Date buy_date{};
    Date sell_date{};
    double percent_return = 0.0;
};

struct SkippedTopic {
    std::string topic_id;
    std::string reason;
};

struct BacktestResult {
    StrategySpec spec;
    std::vector<Trade> trades;
    // Equal fixed-dollar positions: the arithmetic mean of trade returns.
    // Absent when nothing traded (undefined, not 0).
    std::optional<double> portfolio_return;
    std::vector<SkippedTopic> skipped;
};

// Buys every topic whose feature is >= spec.threshold at its reference date
// (creation + 30 days) and sells 30*holding_months days later, prices
// resolved with the 7-day lookback. Topics without a feature value or a
// resolvable price are listed in `skipped` with the reason.
BacktestResult run_threshold_backtest(
    const FeatureTable& features,
    const std::map<std::string, PriceSeries>& prices,
    const StrategySpec& spec);

// Historical variant: the threshold is the given quantile (25/50/75/100) of
// the feature over topics created strictly before investment_date, and only
// topics created strictly after it are traded.
BacktestResult run_historical_backtest(
    const FeatureTable& features,
    const std::map<std::string, PriceSeries>& prices, FeatureKind feature,
    int quantile, int holding_months, Date investment_date);

}  // namespace engage
