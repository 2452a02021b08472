#include "engage/random.hpp"

#include <cmath>

namespace engage {

namespace {

std::int64_t poisson_inversion(std::mt19937_64& rng, double mean) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double product = uniform01(rng);
    while (product > limit) {
        ++k;
        product *= uniform01(rng);
    }
    return k;
}

// Hormann's PTRS transformed rejection, valid for mean >= 10.
std::int64_t poisson_ptrs(std::mt19937_64& rng, double mean) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    while (true) {
        double u = uniform01(rng) - 0.5;
        const double v = uniform01(rng);
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) {
            return static_cast<std::int64_t>(kf);
        }
        if (kf < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        const double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::int64_t>(kf);
        }
    }
}

}  // namespace

std::int64_t poisson_draw(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) return poisson_inversion(rng, mean);
    return poisson_ptrs(rng, mean);
}

}  // namespace engage
