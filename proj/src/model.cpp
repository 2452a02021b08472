#include "engage/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "engage/errors.hpp"

namespace engage {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Statistics of the fittable part of a dataset: topics with posts and
// positive follower exposure. Totals are restricted to those topics.
struct FitStats {
    std::vector<std::string> topics;  // included, sorted
    std::vector<ExcludedTopic> excluded;
    std::map<std::string, std::int64_t> n_c;
    std::map<std::string, std::int64_t> v_c;
    std::vector<std::int64_t> l;  // per kind
    std::int64_t n = 0;
};

FitStats collect_fit_stats(const InteractionDataset& ds) {
    FitStats stats;
    stats.l.assign(ds.kinds.size(), 0);
    for (const auto& [id, topic] : ds.topic_stats) {
        if (topic.post_count == 0) {
            stats.excluded.push_back({id, "no posts in dataset"});
            continue;
        }
        if (topic.exposure == 0) {
            stats.excluded.push_back({id, "zero follower exposure"});
            continue;
        }
        stats.topics.push_back(id);
        stats.n_c[id] = topic.interactions;
        stats.v_c[id] = topic.exposure;
        stats.n += topic.interactions;
        for (std::size_t k = 0; k < ds.kinds.size(); ++k) {
            stats.l[k] += topic.kind_interactions[k];
        }
    }
    return stats;
}

void check_fittable(const InteractionDataset& ds, const FitStats& stats) {
    if (stats.n == 0) {
        throw FitError("empty data: no interactions on fittable topics");
    }
    const std::size_t ref = ds.kinds.reference_index;
    if (stats.l[ref] == 0) {
        throw FitError("cannot normalize: reference kind '" +
                       ds.kinds.reference_kind() +
                       "' has no interactions; choose another reference kind");
    }
}

double alpha_or_zero(const EngagementModel& model, const std::string& topic) {
    auto it = model.alpha.find(topic);
    return it == model.alpha.end() ? 0.0 : it->second;
}

// Gradient restricted to the model's own topics, plus the sup-norm over free
// parameters. A parameter is free when its matching count total is positive.
struct GradientDetail {
    ModelGradient grad;
    double free_sup_norm = 0.0;
};

GradientDetail gradient_detail(const InteractionDataset& ds,
                               const EngagementModel& model) {
    const auto& kinds = ds.kinds;
    std::vector<double> beta(kinds.size(), 0.0);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        auto it = model.beta.find(kinds.names[k]);
        if (it == model.beta.end()) {
            throw FitError("model has no coefficient for kind '" +
                           kinds.names[k] + "'");
        }
        beta[k] = it->second;
    }
    double beta_sum = 0.0;
    for (double b : beta) beta_sum += b;

    GradientDetail out;
    double exposure_mass = 0.0;  // sum_c alpha_c v_c
    std::vector<std::int64_t> l(kinds.size(), 0);
    for (const auto& [topic, alpha] : model.alpha) {
        auto it = ds.topic_stats.find(topic);
        if (it == ds.topic_stats.end()) continue;
        exposure_mass += alpha * static_cast<double>(it->second.exposure);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            l[k] += it->second.kind_interactions[k];
        }
    }

    for (const auto& [topic, alpha] : model.alpha) {
        auto it = ds.topic_stats.find(topic);
        const std::int64_t n_c =
            it == ds.topic_stats.end() ? 0 : it->second.interactions;
        const std::int64_t v_c =
            it == ds.topic_stats.end() ? 0 : it->second.exposure;
        double d = -static_cast<double>(v_c) * beta_sum;
        if (n_c > 0) {
            if (alpha <= 0.0) {
                throw FitError("singular gradient: alpha is zero for topic '" +
                               topic + "' with nonzero counts");
            }
            d += static_cast<double>(n_c) / alpha;
            out.free_sup_norm = std::max(out.free_sup_norm, std::fabs(d));
        }
        out.grad.d_alpha[topic] = d;
    }
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (k == kinds.reference_index) continue;
        double d = -exposure_mass;
        if (l[k] > 0) {
            if (beta[k] <= 0.0) {
                throw FitError("singular gradient: beta is zero for kind '" +
                               kinds.names[k] + "' with nonzero counts");
            }
            d += static_cast<double>(l[k]) / beta[k];
            out.free_sup_norm = std::max(out.free_sup_norm, std::fabs(d));
        }
        out.grad.d_beta[kinds.names[k]] = d;
    }
    return out;
}

}  // namespace

double EngagementModel::beta_sum() const {
    double sum = 0.0;
    for (const auto& [kind, value] : beta) sum += value;
    return sum;
}

double ModelGradient::sup_norm() const {
    double sup = 0.0;
    for (const auto& [key, value] : d_alpha) sup = std::max(sup, std::fabs(value));
    for (const auto& [key, value] : d_beta) sup = std::max(sup, std::fabs(value));
    return sup;
}

Likelihood log_likelihood(const InteractionDataset& dataset,
                          const EngagementModel& model) {
    const auto& kinds = dataset.kinds;
    std::vector<double> beta(kinds.size(), 0.0);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        auto it = model.beta.find(kinds.names[k]);
        if (it == model.beta.end()) {
            throw FitError("model has no coefficient for kind '" +
                           kinds.names[k] + "'");
        }
        beta[k] = it->second;
    }

    double total = 0.0;
    for (const auto& post : dataset.posts) {
        const double alpha = alpha_or_zero(model, post.topic_id);
        const double followers = static_cast<double>(
            dataset.profiles.at(post.user_id).follower_count);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            const double mean = beta[k] * alpha * followers;
            const std::int64_t count = post.counts[k];
            if (mean > 0.0) {
                total += -mean +
                         static_cast<double>(count) * std::log(mean) -
                         std::lgamma(static_cast<double>(count) + 1.0);
            } else if (count > 0) {
                return Likelihood{kNegInf, true};
            }
            // mean == 0 with count == 0 contributes log(1) = 0
        }
    }
    return Likelihood{total, false};
}

ModelGradient gradient(const InteractionDataset& dataset,
                       const EngagementModel& model) {
    return gradient_detail(dataset, model).grad;
}

FitReport fit_closed_form(const InteractionDataset& dataset) {
    const auto& kinds = dataset.kinds;
    kinds.validate();
    FitStats stats = collect_fit_stats(dataset);
    check_fittable(dataset, stats);

    const std::size_t ref = kinds.reference_index;
    const double l_ref = static_cast<double>(stats.l[ref]);
    const double n = static_cast<double>(stats.n);

    FitReport report;
    report.method = "closed_form";
    report.excluded_topics = std::move(stats.excluded);
    auto& model = report.model;
    model.reference_kind = kinds.reference_kind();
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        model.beta[kinds.names[k]] =
            k == ref ? 1.0 : static_cast<double>(stats.l[k]) / l_ref;
    }
    const bool single_kind = kinds.size() == 1;
    for (const auto& topic : stats.topics) {
        const double n_c = static_cast<double>(stats.n_c[topic]);
        const double v_c = static_cast<double>(stats.v_c[topic]);
        model.alpha[topic] =
            single_kind ? n_c / v_c : (n_c * l_ref) / (v_c * n);
    }

    const Likelihood like = log_likelihood(dataset, model);
    report.log_likelihood_at_fit = like.value;
    report.likelihood_impossible = like.impossible;
    report.gradient_sup_norm_at_fit = gradient_detail(dataset, model).free_sup_norm;
    return report;
}

FitReport fit_numeric(const InteractionDataset& dataset, double tolerance,
                      std::int64_t max_iterations) {
    const auto& kinds = dataset.kinds;
    kinds.validate();
    FitStats stats = collect_fit_stats(dataset);
    check_fittable(dataset, stats);

    const std::size_t ref = kinds.reference_index;

    // Parameter-free part of the likelihood over fittable topics, skipping
    // terms that are impossible under any parameters (zero-follower users
    // with counts); those would swamp the convergence scale.
    double constant = 0.0;
    const std::set<std::string> included(stats.topics.begin(),
                                         stats.topics.end());
    for (const auto& post : dataset.posts) {
        if (!included.count(post.topic_id)) continue;
        const double followers = static_cast<double>(
            dataset.profiles.at(post.user_id).follower_count);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            const std::int64_t count = post.counts[k];
            if (count == 0) continue;
            if (followers > 0.0) {
                constant += static_cast<double>(count) * std::log(followers) -
                            std::lgamma(static_cast<double>(count) + 1.0);
            }
        }
    }

    EngagementModel model;
    model.reference_kind = kinds.reference_kind();
    for (const auto& name : kinds.names) model.beta[name] = 1.0;
    for (const auto& topic : stats.topics) model.alpha[topic] = 1.0;

    FitReport report;
    report.method = "coordinate_ascent";
    report.converged = false;

    double sup_norm = std::numeric_limits<double>::infinity();
    std::int64_t iteration = 0;
    while (iteration < max_iterations) {
        ++iteration;
        // Each stationarity equation has a closed-form solution given the
        // other block: alpha_c = n_c / (v_c * beta_sum), then
        // beta_i = l_i / sum_c alpha_c v_c.
        double beta_sum = 0.0;
        for (const auto& [kind, b] : model.beta) beta_sum += b;
        for (const auto& topic : stats.topics) {
            model.alpha[topic] = static_cast<double>(stats.n_c[topic]) /
                                 (static_cast<double>(stats.v_c[topic]) * beta_sum);
        }
        double exposure_mass = 0.0;
        for (const auto& topic : stats.topics) {
            exposure_mass +=
                model.alpha[topic] * static_cast<double>(stats.v_c[topic]);
        }
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            if (k == ref) continue;
            model.beta[kinds.names[k]] =
                static_cast<double>(stats.l[k]) / exposure_mass;
        }

        // Aggregate-form likelihood at the current point, for the scale of
        // the convergence threshold.
        beta_sum = 0.0;
        for (const auto& [kind, b] : model.beta) beta_sum += b;
        double value = constant;
        for (const auto& topic : stats.topics) {
            const double alpha = model.alpha[topic];
            value -= alpha * static_cast<double>(stats.v_c[topic]) * beta_sum;
            if (stats.n_c[topic] > 0) {
                value += static_cast<double>(stats.n_c[topic]) * std::log(alpha);
            }
        }
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            if (stats.l[k] > 0) {
                value += static_cast<double>(stats.l[k]) *
                         std::log(model.beta[kinds.names[k]]);
            }
        }

        sup_norm = gradient_detail(dataset, model).free_sup_norm;
        if (sup_norm <= tolerance * std::max(1.0, std::fabs(value))) {
            report.converged = true;
            break;
        }
    }

    report.model = std::move(model);
    report.excluded_topics = std::move(stats.excluded);
    report.iterations = iteration;
    const Likelihood like = log_likelihood(dataset, report.model);
    report.log_likelihood_at_fit = like.value;
    report.likelihood_impossible = like.impossible;
    report.gradient_sup_norm_at_fit = sup_norm;
    return report;
}

}  // namespace engage
