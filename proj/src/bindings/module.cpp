#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "engage/analytics.hpp"
#include "engage/backtest.hpp"
#include "engage/corpus.hpp"
#include "engage/errors.hpp"
#include "engage/features.hpp"
#include "engage/model.hpp"
#include "engage/serialize.hpp"

namespace py = pybind11;
using namespace engage;

namespace {

Date parse_date(const std::string& text) {
    const auto date = Date::parse(text);
    if (!date) throw Error("cannot parse date '" + text + "'");
    return *date;
}

Timestamp parse_timestamp(const std::string& text) {
    const auto ts = Timestamp::parse(text);
    if (!ts) throw Error("cannot parse timestamp '" + text + "'");
    return *ts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Poisson engagement model toolkit";

    py::register_exception<Error>(m, "EngageError");

    py::class_<Date>(m, "Date")
        .def(py::init(&parse_date), py::arg("text"))
        .def_readonly("days", &Date::days)
        .def("plus_days", &Date::plus_days)
        .def("__str__", &Date::str)
        .def("__repr__", [](const Date& d) { return "Date('" + d.str() + "')"; })
        .def("__eq__", [](const Date& a, const Date& b) { return a == b; })
        .def("__lt__", [](const Date& a, const Date& b) { return a < b; });

    py::class_<Timestamp>(m, "Timestamp")
        .def(py::init(&parse_timestamp), py::arg("text"))
        .def_readonly("seconds", &Timestamp::seconds)
        .def("date", &Timestamp::date)
        .def("__str__", &Timestamp::str)
        .def("__repr__",
             [](const Timestamp& t) { return "Timestamp('" + t.str() + "')"; });

    py::class_<InteractionKindSet>(m, "InteractionKindSet")
        .def(py::init([](std::vector<std::string> names, std::size_t reference) {
                 InteractionKindSet kinds{std::move(names), reference};
                 kinds.validate();
                 return kinds;
             }),
             py::arg("names"), py::arg("reference_index") = 0)
        .def_static("standard", &InteractionKindSet::standard)
        .def_readonly("names", &InteractionKindSet::names)
        .def_readonly("reference_index", &InteractionKindSet::reference_index)
        .def_property_readonly("reference_kind",
                               &InteractionKindSet::reference_kind);

    py::class_<TopicMeta>(m, "TopicMeta")
        .def(py::init([](std::string id, const std::string& date,
                         std::string name) {
                 return TopicMeta{std::move(id), parse_date(date),
                                  std::move(name)};
             }),
             py::arg("topic_id"), py::arg("creation_date"),
             py::arg("display_name") = "")
        .def_readonly("topic_id", &TopicMeta::topic_id)
        .def_readonly("creation_date", &TopicMeta::creation_date)
        .def_readonly("display_name", &TopicMeta::display_name);

    py::class_<UserProfile>(m, "UserProfile")
        .def(py::init([](std::string id, std::int64_t followers,
                         std::optional<double> bot) {
                 return UserProfile{std::move(id), followers, bot};
             }),
             py::arg("user_id"), py::arg("follower_count"),
             py::arg("bot_probability") = py::none())
        .def_readonly("user_id", &UserProfile::user_id)
        .def_readonly("follower_count", &UserProfile::follower_count)
        .def_readonly("bot_probability", &UserProfile::bot_probability);

    py::class_<Post>(m, "Post")
        .def(py::init([](std::string topic_id, std::string user_id,
                         const std::string& timestamp,
                         std::vector<std::int64_t> counts) {
                 Post post;
                 post.topic_id = std::move(topic_id);
                 post.user_id = std::move(user_id);
                 post.timestamp = parse_timestamp(timestamp);
                 post.counts = std::move(counts);
                 return post;
             }),
             py::arg("topic_id"), py::arg("user_id"), py::arg("timestamp"),
             py::arg("counts"))
        .def_readonly("topic_id", &Post::topic_id)
        .def_readonly("user_id", &Post::user_id)
        .def_readonly("timestamp", &Post::timestamp)
        .def_readonly("counts", &Post::counts);

    py::class_<PricePoint>(m, "PricePoint")
        .def_readonly("date", &PricePoint::date)
        .def_readonly("price", &PricePoint::price);

    py::class_<PriceSeries>(m, "PriceSeries")
        .def(py::init([](std::string topic_id,
                         const std::vector<std::pair<std::string, double>>& rows) {
                 PriceSeries series;
                 series.topic_id = std::move(topic_id);
                 for (const auto& [date, price] : rows) {
                     series.observations.push_back({parse_date(date), price});
                 }
                 return series;
             }),
             py::arg("topic_id"), py::arg("observations"))
        .def_readonly("topic_id", &PriceSeries::topic_id)
        .def_readonly("observations", &PriceSeries::observations);

    py::class_<RawCorpus>(m, "RawCorpus")
        .def(py::init<>())
        .def_readwrite("kinds", &RawCorpus::kinds)
        .def_readwrite("topics", &RawCorpus::topics)
        .def_readwrite("users", &RawCorpus::users)
        .def_readwrite("posts", &RawCorpus::posts)
        .def_readwrite("prices", &RawCorpus::prices)
        .def_readonly("warnings", &RawCorpus::warnings);

    py::class_<InteractionDataset>(m, "InteractionDataset")
        .def_readonly("kinds", &InteractionDataset::kinds)
        .def_readonly("posts", &InteractionDataset::posts)
        .def_readonly("total_interactions",
                      &InteractionDataset::total_interactions)
        .def_readonly("kind_totals", &InteractionDataset::kind_totals)
        .def_readonly("dropped_posts", &InteractionDataset::dropped_posts)
        .def_readonly("warnings", &InteractionDataset::warnings)
        .def("n", &InteractionDataset::n)
        .def("n_c", &InteractionDataset::n_c, py::arg("topic_id"))
        .def("l", &InteractionDataset::l, py::arg("kind_index"))
        .def("exposure", &InteractionDataset::exposure, py::arg("topic_id"))
        .def("covered", &InteractionDataset::covered, py::arg("topic_id"))
        .def("uncovered_topics", &InteractionDataset::uncovered_topics);

    py::class_<EngagementModel>(m, "EngagementModel")
        .def(py::init([](std::string reference_kind,
                         std::map<std::string, double> beta,
                         std::map<std::string, double> alpha) {
                 return EngagementModel{std::move(reference_kind),
                                        std::move(beta), std::move(alpha)};
             }),
             py::arg("reference_kind"), py::arg("beta"), py::arg("alpha"))
        .def_readonly("reference_kind", &EngagementModel::reference_kind)
        .def_readonly("beta", &EngagementModel::beta)
        .def_readonly("alpha", &EngagementModel::alpha)
        .def("beta_sum", &EngagementModel::beta_sum)
        .def("to_json",
             [](const EngagementModel& model) { return model_to_json(model); });

    py::class_<ExcludedTopic>(m, "ExcludedTopic")
        .def_readonly("topic_id", &ExcludedTopic::topic_id)
        .def_readonly("reason", &ExcludedTopic::reason);

    py::class_<FitReport>(m, "FitReport")
        .def_readonly("model", &FitReport::model)
        .def_readonly("log_likelihood_at_fit", &FitReport::log_likelihood_at_fit)
        .def_readonly("likelihood_impossible", &FitReport::likelihood_impossible)
        .def_readonly("gradient_sup_norm_at_fit",
                      &FitReport::gradient_sup_norm_at_fit)
        .def_readonly("excluded_topics", &FitReport::excluded_topics)
        .def_readonly("converged", &FitReport::converged)
        .def_readonly("iterations", &FitReport::iterations)
        .def_readonly("method", &FitReport::method)
        .def("to_json", [](const FitReport& r) { return model_to_json(r); });

    m.def(
        "load_corpus",
        [](const std::filesystem::path& dir,
           std::optional<InteractionKindSet> kinds) {
            return load_corpus(dir, kinds ? *kinds
                                          : InteractionKindSet::standard());
        },
        py::arg("directory"), py::arg("kinds") = py::none());

    m.def(
        "build_dataset",
        [](const RawCorpus& corpus, std::optional<std::string> cutoff,
           bool strict_users) {
            std::optional<Timestamp> ts;
            if (cutoff) ts = parse_timestamp(*cutoff);
            return build_dataset(corpus, ts, strict_users);
        },
        py::arg("corpus"), py::arg("cutoff") = py::none(),
        py::arg("strict_users") = true);

    m.def("fit_closed_form", &fit_closed_form, py::arg("dataset"));
    m.def("fit_numeric", &fit_numeric, py::arg("dataset"),
          py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 10000);
    m.def(
        "log_likelihood",
        [](const InteractionDataset& dataset, const EngagementModel& model) {
            const Likelihood like = log_likelihood(dataset, model);
            return py::make_tuple(like.value, like.impossible);
        },
        py::arg("dataset"), py::arg("model"),
        "Returns (value, impossible_data).");

    m.def(
        "sample_synthetic",
        [](const EngagementModel& model, const std::vector<UserProfile>& users,
           const std::map<std::string, std::map<std::string, std::int64_t>>&
               plan,
           std::uint64_t seed, std::vector<TopicMeta> topics) {
            return sample_synthetic(model, users, SamplePlan{plan}, seed,
                                    std::move(topics));
        },
        py::arg("model"), py::arg("profiles"), py::arg("posts_plan"),
        py::arg("seed"), py::arg("topics") = std::vector<TopicMeta>());

    py::class_<FeatureRow>(m, "FeatureRow")
        .def_readonly("topic_id", &FeatureRow::topic_id)
        .def_readonly("creation_date", &FeatureRow::creation_date)
        .def_readonly("engagement", &FeatureRow::engagement)
        .def_readonly("tweet_volume", &FeatureRow::tweet_volume)
        .def_readonly("mean_bot_probability", &FeatureRow::mean_bot_probability)
        .def_readonly("manipulation_flag", &FeatureRow::manipulation_flag);

    py::class_<FeatureTable>(m, "FeatureTable")
        .def_readonly("rows", &FeatureTable::rows)
        .def_property_readonly("mode", [](const FeatureTable& table) {
            return std::string(to_string(table.mode));
        });

    m.def(
        "build_feature_table",
        [](const RawCorpus& corpus, const std::string& mode, bool strict) {
            return build_feature_table(corpus, parse_estimation_mode(mode),
                                       strict);
        },
        py::arg("corpus"), py::arg("mode") = "in_sample",
        py::arg("strict_users") = true);

    m.def(
        "engagement_feature",
        [](const RawCorpus& corpus, const std::string& topic,
           const std::string& mode, bool strict) {
            return engagement_feature(corpus, topic,
                                      parse_estimation_mode(mode), strict);
        },
        py::arg("corpus"), py::arg("topic_id"), py::arg("mode") = "in_sample",
        py::arg("strict_users") = true);
    m.def("tweet_volume", &tweet_volume, py::arg("corpus"), py::arg("topic_id"));
    m.def("mean_bot_probability", &mean_bot_probability, py::arg("corpus"),
          py::arg("topic_id"));

    py::class_<BotClustering>(m, "BotClustering")
        .def_readonly("k", &BotClustering::k)
        .def_readonly("centers", &BotClustering::centers)
        .def_readonly("assignment", &BotClustering::assignment)
        .def_readonly("inertia", &BotClustering::inertia);

    m.def("cluster_bot_probabilities", &cluster_bot_probabilities,
          py::arg("values"), py::arg("k"), py::arg("seed") = 0,
          py::arg("restarts") = 32);

    m.def("spearman", &spearman, py::arg("xs"), py::arg("ys"));
    m.def("roc_auc", &roc_auc, py::arg("scores"), py::arg("labels"));
    m.def(
        "compute_return",
        [](const PriceSeries& series, const std::string& creation,
           int horizon_months) {
            return compute_return(series, parse_date(creation), horizon_months);
        },
        py::arg("series"), py::arg("creation_date"), py::arg("horizon_months"));
    m.def("quartile_thresholds", &quartile_thresholds, py::arg("values"));
}
