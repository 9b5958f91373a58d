#include "modequest/iless_stats.hpp"

#include <math.h>

#include <cmath>
#include <stdexcept>

namespace modequest {

namespace {

// std::lgamma writes the global signgam, a data race across parallel
// trials; use the reentrant form where the platform provides it.
inline double log_gamma(double x) {
#ifdef __GLIBC__
    int sign = 0;
    return lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

void check_pair(const ObservationState& state, int a, int b) {
    if (a == b) throw std::invalid_argument("community pair must be distinct");
    if (a < 0 || b < 0 || a >= state.k() || b >= state.k()) {
        throw std::invalid_argument("community index out of range");
    }
    if (state.t() < 1) throw std::invalid_argument("statistic undefined at t = 0");
}

// sum_i N_i log phat_i with 0 log 0 := 0, optionally skipping two indices
double empirical_log_likelihood(std::span<const std::int64_t> counts, std::int64_t t,
                                int skip_a = -1, int skip_b = -1) {
    double acc = 0.0;
    const double log_t = std::log(static_cast<double>(t));
    for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
        if (i == skip_a || i == skip_b || counts[i] == 0) continue;
        acc += static_cast<double>(counts[i]) *
               (std::log(static_cast<double>(counts[i])) - log_t);
    }
    return acc;
}

}  // namespace

double log_multinomial_beta_ratio(std::span<const std::int64_t> counts) {
    const auto k = static_cast<double>(counts.size());
    std::int64_t t = 0;
    double acc = 0.0;
    for (auto n : counts) {
        t += n;
        acc += log_gamma(static_cast<double>(n) + 1.0);
    }
    return acc - log_gamma(static_cast<double>(t) + k) + log_gamma(k);
}

double z_ab(const ObservationState& state, int a, int b) {
    check_pair(state, a, b);
    const auto counts = state.counts();
    const auto t = state.t();
    const double lbr = log_multinomial_beta_ratio(counts);
    if (counts[a] >= counts[b]) {
        const double pooled =
            static_cast<double>(counts[a] + counts[b]) / (2.0 * static_cast<double>(t));
        double pooled_term = 0.0;
        if (counts[a] + counts[b] > 0) {
            pooled_term = static_cast<double>(counts[a] + counts[b]) * std::log(pooled);
        }
        return lbr - empirical_log_likelihood(counts, t, a, b) - pooled_term;
    }
    return lbr - empirical_log_likelihood(counts, t);
}

double z_tilde_ab(const ObservationState& state, int a, int b) {
    check_pair(state, a, b);
    const double na = static_cast<double>(state.count(a));
    const double nb = static_cast<double>(state.count(b));
    return log_gamma(na + 1.0) + log_gamma(nb + 1.0) - log_gamma(na + nb + 2.0) +
           (na + nb) * std::log(2.0);
}

IlessStatReport z_stat(const ObservationState& state) {
    if (state.t() < 1) throw std::invalid_argument("statistic undefined at t = 0");
    auto [a, b] = top_two(state.counts());
    IlessStatReport report;
    report.a_hat = a;
    report.b_hat = b;
    report.z = z_ab(state, a, b);
    report.z_tilde = z_tilde_ab(state, a, b);
    return report;
}

std::vector<double> constrained_mle(std::span<const std::int64_t> counts, int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= static_cast<int>(counts.size()) ||
        b >= static_cast<int>(counts.size())) {
        throw std::invalid_argument("community pair must be distinct and in range");
    }
    std::int64_t t = 0;
    for (auto n : counts) t += n;
    if (t < 1) throw std::invalid_argument("statistic undefined at t = 0");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
    }
    if (counts[a] >= counts[b]) {
        p[a] = p[b] = static_cast<double>(counts[a] + counts[b]) / (2.0 * static_cast<double>(t));
    }
    return p;
}

}  // namespace modequest
