#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "engage/features.hpp"
#include "engage/simulate.hpp"
#include "engage/types.hpp"

namespace engage {

// Effective parameters of one CLI run; echoed to run_config.json so every
// artifact records how it was produced.
struct RunConfig {
    std::string subcommand;
    std::filesystem::path corpus_dir;
    std::filesystem::path out_dir;
    std::vector<std::string> kind_names = {"like", "retweet", "reply"};
    std::string reference_kind = "like";
    std::uint64_t seed = 0;
    EstimationMode mode = EstimationMode::in_sample;
    std::vector<int> horizons;  // defaults to 1..12
    std::vector<Date> investment_dates;
    bool strict_users = true;
    int clusters = 3;
    int restarts = 32;

    InteractionKindSet kinds() const;
};

int cmd_validate(const RunConfig& config);
int cmd_fit(const RunConfig& config);
int cmd_features(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_backtest(const RunConfig& config);
int cmd_pipeline(const RunConfig& config);
int cmd_simulate(const RunConfig& config, const SimulateSpec& spec);

}  // namespace engage
