#include "engage/backtest.hpp"

#include <algorithm>

#include "engage/errors.hpp"

namespace engage {

std::vector<double> quartile_thresholds(std::vector<double> values) {
    const std::size_t n = values.size();
    if (n < 4) {
        throw Error("quartile thresholds need at least 4 values, have " +
                    std::to_string(n));
    }
    std::sort(values.begin(), values.end());
    auto nearest_rank = [&](std::size_t q) {
        return values[(q * n + 99) / 100 - 1];  // ceil(q*n/100), 1-based
    };
    return {0.0, nearest_rank(25), nearest_rank(50), nearest_rank(75),
            nearest_rank(100)};
}

BacktestResult run_threshold_backtest(
    const FeatureTable& features,
    const std::map<std::string, PriceSeries>& prices,
    const StrategySpec& spec) {
    if (spec.holding_months < 1) {
        throw Error("holding time must be at least 1 month");
    }
    BacktestResult result;
    result.spec = spec;
    static const PriceSeries kEmpty;
    double sum = 0.0;
    for (const auto& [topic_id, row] : features.rows) {
        const auto value = FeatureTable::value(row, spec.feature);
        if (!value) {
            result.skipped.push_back({topic_id, "no feature value"});
            continue;
        }
        if (*value < spec.threshold) continue;
        auto it = prices.find(topic_id);
        const PriceSeries& series = it == prices.end() ? kEmpty : it->second;
        const Date buy_date = row.creation_date.plus_days(kWindowDays);
        const Date sell_date = buy_date.plus_days(kWindowDays * spec.holding_months);
        const auto buy = price_at(series, buy_date);
        if (!buy) {
            result.skipped.push_back({topic_id, "no buy price"});
            continue;
        }
        const auto sell = price_at(series, sell_date);
        if (!sell) {
            result.skipped.push_back({topic_id, "no sell price"});
            continue;
        }
        const double ret = 100.0 * (*sell - *buy) / *buy;
        result.trades.push_back({topic_id, buy_date, sell_date, ret});
        sum += ret;
    }
    if (!result.trades.empty()) {
        result.portfolio_return = sum / static_cast<double>(result.trades.size());
    }
    return result;
}

BacktestResult run_historical_backtest(
    const FeatureTable& features,
    const std::map<std::string, PriceSeries>& prices, FeatureKind feature,
    int quantile, int holding_months, Date investment_date) {
    std::size_t q_index = 0;
    switch (quantile) {
        case 25: q_index = 1; break;
        case 50: q_index = 2; break;
        case 75: q_index = 3; break;
        case 100: q_index = 4; break;
        default:
            throw Error("quantile must be one of 25, 50, 75, 100");
    }

    std::vector<double> prior_values;
    FeatureTable universe;
    universe.mode = features.mode;
    for (const auto& [topic_id, row] : features.rows) {
        const auto value = FeatureTable::value(row, feature);
        if (row.creation_date < investment_date) {
            if (value) prior_values.push_back(*value);
        } else if (investment_date < row.creation_date) {
            universe.rows.emplace(topic_id, row);
        }
        // Topics created on the investment date itself are in neither set.
    }
    if (prior_values.size() < 4) {
        throw Error("threshold unavailable: only " +
                    std::to_string(prior_values.size()) +
                    " topics with a feature value predate " +
                    investment_date.str() + " (need 4)");
    }

    StrategySpec spec;
    spec.feature = feature;
    spec.threshold = quartile_thresholds(std::move(prior_values))[q_index];
    spec.holding_months = holding_months;
    spec.investment_date = investment_date;
    return run_threshold_backtest(universe, prices, spec);
}

}  // namespace engage
