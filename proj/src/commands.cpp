#include "engage/commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <set>

#include "engage/analytics.hpp"
#include "engage/backtest.hpp"
#include "engage/corpus.hpp"
#include "engage/csv.hpp"
#include "engage/errors.hpp"
#include "engage/log.hpp"
#include "engage/model.hpp"
#include "engage/serialize.hpp"

namespace engage {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + path.string());
}

std::vector<int> effective_horizons(const RunConfig& config) {
    return config.horizons.empty() ? default_horizons() : config.horizons;
}

void write_run_config(const RunConfig& config) {
    JsonWriter w;
    w.begin_object();
    w.key("subcommand").value(config.subcommand);
    w.key("corpus_dir").value(config.corpus_dir.string());
    w.key("out_dir").value(config.out_dir.string());
    w.key("kinds").begin_array();
    for (const auto& kind : config.kind_names) w.value(kind);
    w.end_array();
    w.key("reference_kind").value(config.reference_kind);
    w.key("seed").value(config.seed);
    w.key("mode").value(to_string(config.mode));
    w.key("horizons").begin_array();
    for (int h : effective_horizons(config)) w.value(h);
    w.end_array();
    w.key("investment_dates").begin_array();
    for (const Date& d : config.investment_dates) w.value(d.str());
    w.end_array();
    w.key("strict_users").value(config.strict_users);
    w.key("clusters").value(config.clusters);
    w.key("restarts").value(config.restarts);
    w.end_object();
    write_file(config.out_dir / "run_config.json", w.take());
}

void write_error_record(const RunConfig& config, const std::string& type,
                        const Error& error) {
    JsonWriter w;
    w.begin_object();
    w.key("error").begin_object();
    w.key("type").value(type);
    w.key("message").value(error.what());
    if (const auto* corpus = dynamic_cast<const CorpusError*>(&error)) {
        w.key("rows").begin_array();
        for (const auto& row : corpus->rows()) {
            w.begin_object();
            w.key("file").value(row.file);
            w.key("row").value(static_cast<std::int64_t>(row.row));
            w.key("column").value(row.column);
            w.key("message").value(row.message);
            w.end_object();
        }
        w.end_array();
    }
    w.end_object();
    w.end_object();
    try {
        write_file(config.out_dir / "error.json", w.take());
    } catch (const Error&) {
        // stderr already carries the message
    }
}

int run_guarded(const RunConfig& config, const std::function<void()>& work) {
    try {
        std::filesystem::create_directories(config.out_dir);
        write_run_config(config);
        work();
        return 0;
    } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_record(config, "corpus", e);
        return 1;
    } catch (const FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_record(config, "fit", e);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_record(config, "error", e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

RawCorpus load(const RunConfig& config) {
    return load_corpus(config.corpus_dir, config.kinds());
}

std::string opt_field(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

std::string features_csv(const FeatureTable& table) {
    std::string text = csv_line({"topic_id", "creation_date",
                                 "engagement_coefficient", "tweet_volume",
                                 "mean_bot_probability", "estimation_mode",
                                 "manipulation_flag"});
    for (const auto& [id, row] : table.rows) {
        text += csv_line({id, row.creation_date.str(), opt_field(row.engagement),
                          std::to_string(row.tweet_volume),
                          opt_field(row.mean_bot_probability),
                          std::string(to_string(table.mode)),
                          row.manipulation_flag ? "true" : "false"});
    }
    return text;
}

std::string dependence_csv(const DependenceCurves& curves) {
    std::string text = csv_line(
        {"feature", "horizon_months", "abs_spearman", "auc", "n_topics"});
    for (const auto& [kind, cells] : curves.cells) {
        for (std::size_t h = 0; h < curves.horizons.size(); ++h) {
            text += csv_line({std::string(to_string(kind)),
                              std::to_string(curves.horizons[h]),
                              opt_field(cells[h].abs_spearman),
                              opt_field(cells[h].auc),
                              std::to_string(cells[h].n_topics)});
        }
    }
    return text;
}

std::string cluster_returns_csv(const ClusterReturnCurves& curves) {
    std::string text = csv_line(
        {"cluster", "center", "horizon_months", "median_return", "n_topics"});
    for (std::size_t j = 0; j < curves.centers.size(); ++j) {
        for (std::size_t h = 0; h < curves.horizons.size(); ++h) {
            const auto& cell = curves.cells[j][h];
            text += csv_line({std::to_string(j), format_double(curves.centers[j]),
                              std::to_string(curves.horizons[h]),
                              opt_field(cell.median_return),
                              std::to_string(cell.n_topics)});
        }
    }
    return text;
}

struct BacktestOutput {
    std::string results = csv_line({"feature", "threshold", "holding_months",
                                    "investment_date", "portfolio_return",
                                    "n_traded", "n_skipped"});
    std::string trades = csv_line({"feature", "threshold", "holding_months",
                                   "investment_date", "topic_id", "buy_date",
                                   "sell_date", "percent_return"});

    void add(const BacktestResult& result) {
        const std::string date = result.spec.investment_date
                                     ? result.spec.investment_date->str()
                                     : std::string();
        const std::string feature(to_string(result.spec.feature));
        const std::string threshold = format_double(result.spec.threshold);
        const std::string holding = std::to_string(result.spec.holding_months);
        results += csv_line({feature, threshold, holding, date,
                             opt_field(result.portfolio_return),
                             std::to_string(result.trades.size()),
                             std::to_string(result.skipped.size())});
        for (const auto& trade : result.trades) {
            trades += csv_line({feature, threshold, holding, date,
                                trade.topic_id, trade.buy_date.str(),
                                trade.sell_date.str(),
                                format_double(trade.percent_return)});
        }
    }
};

// The full grid: per feature, the five quartile thresholds crossed with
// every holding time; then the historical variant per investment date.
void run_backtests(const RunConfig& config, const RawCorpus& corpus,
                   const FeatureTable& features, BacktestOutput& out,
                   std::vector<std::string>& notes) {
    const std::vector<int> horizons = effective_horizons(config);
    for (FeatureKind kind : kAllFeatureKinds) {
        std::vector<double> values;
        for (const auto& [id, row] : features.rows) {
            if (const auto value = FeatureTable::value(row, kind)) {
                values.push_back(*value);
            }
        }
        if (values.size() < 4) {
            notes.push_back(std::string("backtest skipped for ") +
                            std::string(to_string(kind)) + ": only " +
                            std::to_string(values.size()) +
                            " topics with a value (need 4)");
            continue;
        }
        for (double threshold : quartile_thresholds(values)) {
            for (int holding : horizons) {
                StrategySpec spec;
                spec.feature = kind;
                spec.threshold = threshold;
                spec.holding_months = holding;
                out.add(run_threshold_backtest(features, corpus.prices, spec));
            }
        }
        for (const Date& date : config.investment_dates) {
            for (int quantile : {25, 50, 75, 100}) {
                for (int holding : horizons) {
                    try {
                        out.add(run_historical_backtest(features, corpus.prices,
                                                        kind, quantile, holding,
                                                        date));
                    } catch (const Error& e) {
                        notes.push_back(std::string("historical backtest (") +
                                        std::string(to_string(kind)) + ", " +
                                        date.str() + "): " + e.what());
                        break;  // same threshold failure for every holding
                    }
                }
            }
        }
    }
}

std::optional<BotClustering> cluster_or_note(const RunConfig& config,
                                             const FeatureTable& features,
                                             std::vector<std::string>& notes) {
    std::map<std::string, double> values;
    for (const auto& [id, row] : features.rows) {
        if (row.mean_bot_probability) values[id] = *row.mean_bot_probability;
    }
    std::set<double> distinct;
    for (const auto& [id, v] : values) distinct.insert(v);
    if (static_cast<int>(distinct.size()) < config.clusters) {
        notes.push_back("cluster_returns.csv skipped: " +
                        std::to_string(distinct.size()) +
                        " distinct bot probabilities (need " +
                        std::to_string(config.clusters) + ")");
        return std::nullopt;
    }
    return cluster_bot_probabilities(values, config.clusters, config.seed,
                                     config.restarts);
}

void write_summary(const RunConfig& config, const RawCorpus& corpus,
                   const std::vector<std::string>& notes,
                   const std::vector<std::string>& outputs) {
    JsonWriter w;
    w.begin_object();
    w.key("topics").value(static_cast<std::int64_t>(corpus.topics.size()));
    w.key("users").value(static_cast<std::int64_t>(corpus.users.size()));
    w.key("posts").value(static_cast<std::int64_t>(corpus.posts.size()));
    w.key("outputs").begin_array();
    for (const auto& name : outputs) w.value(name);
    w.end_array();
    w.key("warnings").begin_array();
    for (const auto& warning : corpus.warnings) w.value(warning);
    w.end_array();
    w.key("notes").begin_array();
    for (const auto& note : notes) w.value(note);
    w.end_array();
    w.end_object();
    write_file(config.out_dir / "run_summary.json", w.take());
}

std::string fit_report_json(const FitReport& report,
                            const std::vector<std::string>& warnings) {
    JsonWriter w;
    w.begin_object();
    w.key("method").value(report.method);
    w.key("log_likelihood").value(report.log_likelihood_at_fit);
    w.key("likelihood_impossible").value(report.likelihood_impossible);
    w.key("gradient_sup_norm").value(report.gradient_sup_norm_at_fit);
    w.key("converged").value(report.converged);
    w.key("iterations").value(report.iterations);
    w.key("topics_fitted")
        .value(static_cast<std::int64_t>(report.model.alpha.size()));
    w.key("excluded_topics").begin_array();
    for (const auto& excluded : report.excluded_topics) {
        w.begin_object();
        w.key("topic_id").value(excluded.topic_id);
        w.key("reason").value(excluded.reason);
        w.end_object();
    }
    w.end_array();
    w.key("warnings").begin_array();
    for (const auto& warning : warnings) w.value(warning);
    w.end_array();
    w.end_object();
    return w.take();
}

std::string safe_name(const std::string& id) {
    std::string out = id;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                        c == '-';
        if (!ok) c = '_';
    }
    return out;
}

}  // namespace

InteractionKindSet RunConfig::kinds() const {
    InteractionKindSet set;
    set.names = kind_names;
    const auto ref = set.index_of(reference_kind);
    if (!ref) {
        throw Error("reference kind '" + reference_kind +
                    "' is not one of the declared kinds");
    }
    set.reference_index = *ref;
    set.validate();
    return set;
}

int cmd_validate(const RunConfig& config) {
    return run_guarded(config, [&] {
        const RawCorpus corpus = load(config);
        const InteractionDataset dataset =
            build_dataset(corpus, std::nullopt, config.strict_users);
        JsonWriter w;
        w.begin_object();
        w.key("topics").value(static_cast<std::int64_t>(corpus.topics.size()));
        w.key("users").value(static_cast<std::int64_t>(corpus.users.size()));
        w.key("posts").value(static_cast<std::int64_t>(corpus.posts.size()));
        w.key("price_series")
            .value(static_cast<std::int64_t>(corpus.prices.size()));
        w.key("total_interactions").value(dataset.total_interactions);
        w.key("dropped_posts").value(dataset.dropped_posts);
        w.key("uncovered_topics").begin_array();
        for (const auto& id : dataset.uncovered_topics()) w.value(id);
        w.end_array();
        w.key("warnings").begin_array();
        for (const auto& warning : dataset.warnings) w.value(warning);
        w.end_array();
        w.end_object();
        write_file(config.out_dir / "validation.json", w.take());
        std::cout << "corpus ok: " << corpus.topics.size() << " topics, "
                  << corpus.users.size() << " users, " << corpus.posts.size()
                  << " posts, " << dataset.total_interactions
                  << " interactions\n";
    });
}

int cmd_fit(const RunConfig& config) {
    return run_guarded(config, [&] {
        const RawCorpus corpus = load(config);
        if (config.mode == EstimationMode::in_sample) {
            const InteractionDataset dataset =
                build_dataset(corpus, std::nullopt, config.strict_users);
            const FitReport report = fit_closed_form(dataset);
            write_file(config.out_dir / "model.json", model_to_json(report));
            write_file(config.out_dir / "fit_report.json",
                       fit_report_json(report, dataset.warnings));
            std::cout << "fitted " << report.model.alpha.size() << " topics ("
                      << report.excluded_topics.size() << " excluded)\n";
            return;
        }

        // prior_data: one fit per distinct first-month cutoff, one model
        // file per topic.
        std::filesystem::create_directories(config.out_dir / "models");
        std::map<std::int64_t, FitReport> by_cutoff;
        JsonWriter w;
        w.begin_object();
        w.key("mode").value("prior_data");
        w.key("topics").begin_array();
        for (const auto& topic : corpus.topics) {
            const Timestamp cutoff = first_month_window(topic).end;
            auto it = by_cutoff.find(cutoff.seconds);
            if (it == by_cutoff.end()) {
                it = by_cutoff
                         .emplace(cutoff.seconds,
                                  fit_closed_form(prior_dataset(
                                      corpus, cutoff, config.strict_users)))
                         .first;
            }
            write_file(config.out_dir / "models" /
                           (safe_name(topic.topic_id) + ".json"),
                       model_to_json(it->second));
            const auto alpha_it = it->second.model.alpha.find(topic.topic_id);
            w.begin_object();
            w.key("topic_id").value(topic.topic_id);
            w.key("cutoff").value(cutoff.str());
            if (alpha_it != it->second.model.alpha.end()) {
                w.key("alpha").value(alpha_it->second);
            } else {
                w.key("alpha").null();
            }
            w.key("gradient_sup_norm").value(it->second.gradient_sup_norm_at_fit);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        write_file(config.out_dir / "fit_report.json", w.take());
        std::cout << "fitted " << by_cutoff.size() << " prior-data cutoffs for "
                  << corpus.topics.size() << " topics\n";
    });
}

int cmd_features(const RunConfig& config) {
    return run_guarded(config, [&] {
        const RawCorpus corpus = load(config);
        const FeatureTable table = build_feature_table(corpus, config.mode, config.strict_users);
        write_file(config.out_dir / "features.csv", features_csv(table));
        std::cout << "wrote features.csv (" << table.rows.size() << " topics)\n";
    });
}

int cmd_evaluate(const RunConfig& config) {
    return run_guarded(config, [&] {
        const RawCorpus corpus = load(config);
        const FeatureTable table = build_feature_table(corpus, config.mode, config.strict_users);
        const ReturnMatrix returns = build_return_matrix(
            corpus.topics, corpus.prices, effective_horizons(config));
        std::vector<std::string> notes;
        std::vector<std::string> outputs = {"dependence.csv"};
        write_file(config.out_dir / "dependence.csv",
                   dependence_csv(dependence_curves(table, returns)));
        if (const auto clustering = cluster_or_note(config, table, notes)) {
            write_file(config.out_dir / "cluster_returns.csv",
                       cluster_returns_csv(
                           median_cluster_returns(*clustering, returns)));
            outputs.push_back("cluster_returns.csv");
        }
        write_summary(config, corpus, notes, outputs);
        std::cout << "wrote dependence.csv for " << table.rows.size()
                  << " topics\n";
    });
}

int cmd_backtest(const RunConfig& config) {
    return run_guarded(config, [&] {
        const RawCorpus corpus = load(config);
        const FeatureTable table = build_feature_table(corpus, config.mode, config.strict_users);
        BacktestOutput out;
        std::vector<std::string> notes;
        run_backtests(config, corpus, table, out, notes);
        write_file(config.out_dir / "backtest.csv", out.results);
        write_file(config.out_dir / "trades.csv", out.trades);
        write_summary(config, corpus, notes, {"backtest.csv", "trades.csv"});
        std::cout << "wrote backtest.csv and trades.csv\n";
    });
}

int cmd_pipeline(const RunConfig& config) {
    return run_guarded(config, [&] {
        const RawCorpus corpus = load(config);
        const FeatureTable table = build_feature_table(corpus, config.mode, config.strict_users);
        const ReturnMatrix returns = build_return_matrix(
            corpus.topics, corpus.prices, effective_horizons(config));
        std::vector<std::string> notes;
        std::vector<std::string> outputs = {"features.csv", "dependence.csv"};

        write_file(config.out_dir / "features.csv", features_csv(table));
        write_file(config.out_dir / "dependence.csv",
                   dependence_csv(dependence_curves(table, returns)));
        if (const auto clustering = cluster_or_note(config, table, notes)) {
            write_file(config.out_dir / "cluster_returns.csv",
                       cluster_returns_csv(
                           median_cluster_returns(*clustering, returns)));
            outputs.push_back("cluster_returns.csv");
        }
        BacktestOutput out;
        run_backtests(config, corpus, table, out, notes);
        write_file(config.out_dir / "backtest.csv", out.results);
        write_file(config.out_dir / "trades.csv", out.trades);
        outputs.push_back("backtest.csv");
        outputs.push_back("trades.csv");
        write_summary(config, corpus, notes, outputs);
        std::cout << "pipeline complete: " << outputs.size()
                  << " report files in " << config.out_dir.string() << "\n";
    });
}

int cmd_simulate(const RunConfig& config, const SimulateSpec& spec) {
    return run_guarded(config, [&] {
        write_synthetic_corpus(spec, config.seed, config.out_dir);
        std::cout << "wrote synthetic corpus to " << config.out_dir.string()
                  << "\n";
    });
}

}  // namespace engage
