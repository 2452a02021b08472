#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "engage/corpus.hpp"

namespace engage {

// Fitted engagement model: one engagement coefficient per topic, one
// interaction coefficient per kind, with the reference kind pinned to 1.
// The mean count for a post is beta_i * alpha_c * f_u.
struct EngagementModel {
    std::string reference_kind;
    std::map<std::string, double> beta;   // includes reference_kind -> 1
    std::map<std::string, double> alpha;  // topics with positive exposure

    double beta_sum() const;
};

struct Likelihood {
    double value = 0.0;
    // True when some observed count is positive while its model mean is zero;
    // `value` is then -infinity.
    bool impossible = false;
};

// Exact log-probability of the dataset under the model, including the
// -log(n!) terms. Topics absent from model.alpha are treated as alpha = 0.
Likelihood log_likelihood(const InteractionDataset& dataset,
                          const EngagementModel& model);

// Analytic gradient over the topics/kinds covered by the model. The
// reference kind is pinned and therefore excluded from d_beta. Parameters
// sitting at zero with zero matching counts get their one-sided derivative.
struct ModelGradient {
    std::map<std::string, double> d_alpha;
    std::map<std::string, double> d_beta;

    double sup_norm() const;
};

ModelGradient gradient(const InteractionDataset& dataset,
                       const EngagementModel& model);

struct ExcludedTopic {
    std::string topic_id;
    std::string reason;
};

struct FitReport {
    EngagementModel model;
    // Log-likelihood of the fitted topics' posts at the fitted parameters.
    double log_likelihood_at_fit = 0.0;
    bool likelihood_impossible = false;
    // Sup-norm of the analytic gradient over free parameters, i.e. those not
    // pinned at the zero boundary by zero counts.
    double gradient_sup_norm_at_fit = 0.0;
    std::vector<ExcludedTopic> excluded_topics;
    bool converged = true;
    std::int64_t iterations = 0;
    std::string method;
};

// Maximum-likelihood estimates in closed form, normalized so the reference
// kind's coefficient is exactly 1:
//   beta_i  = l_i / l_ref
//   alpha_c = n_c * l_ref / (v_c * n)
// which satisfies the stationarity conditions of the log-likelihood and the
// identity sum_c alpha_c * v_c = l_ref. Topics without posts or without
// follower exposure are excluded and listed with reasons. Totals are taken
// over the fitted topics.
FitReport fit_closed_form(const InteractionDataset& dataset);

// Independent maximizer used to validate the closed form: cyclic coordinate
// ascent on the same likelihood, each step solving one stationarity equation
// with the others held fixed. Stops when the free-parameter gradient
// sup-norm drops below tolerance * max(1, |log-likelihood|) or after
// max_iterations sweeps, and reports which happened.
FitReport fit_numeric(const InteractionDataset& dataset,
                      double tolerance = 1e-10,
                      std::int64_t max_iterations = 10000);

// Plan for the generative direction: posts per (topic, user).
struct SamplePlan {
    std::map<std::string, std::map<std::string, std::int64_t>> posts;
};

// Draws every count independently from Poisson(beta_i * alpha_c * f_u).
// A fixed seed reproduces the dataset exactly; each (topic, user) pair uses
// its own derived substream, so the draw order never matters. When `topics`
// is empty, metadata is synthesized with creation dates a week apart.
InteractionDataset sample_synthetic(const EngagementModel& model,
                                    const std::vector<UserProfile>& profiles,
                                    const SamplePlan& plan,
                                    std::uint64_t seed,
                                    std::vector<TopicMeta> topics = {});

}  // namespace engage
