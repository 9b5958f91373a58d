#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modequest/core.hpp"

namespace modequest {

/// Per-epoch identityless statistics. a_hat/b_hat hold the communities with
/// the largest and second largest sample counts (lowest-index tie-break).
/// z <= z_tilde on every state.
struct IlessStatReport {
    double z = 0.0;
    double z_tilde = 0.0;
    int a_hat = 0;
    int b_hat = 1;
};

/// log of B(N_1+1, ..., N_K+1) / B(1, ..., 1) where B is the multinomial
/// beta function: sum_j lgamma(N_j+1) - lgamma(t+K) + lgamma(K).
double log_multinomial_beta_ratio(std::span<const std::int64_t> counts);

/// GLR statistic Z_{a,b}(t): log of the Dirichlet(1,...,1)-averaged
/// likelihood over the maximum likelihood subject to p'_a <= p'_b.
/// Closed form: when phat_a >= phat_b,
///   logBetaRatio - sum_{i not in {a,b}} N_i log phat_i
///                - (N_a+N_b) log((phat_a+phat_b)/2),
/// otherwise logBetaRatio - sum_i N_i log phat_i  (0 log 0 := 0).
double z_ab(const ObservationState& state, int a, int b);

/// Pairwise statistic Z~_{a,b}(t) = log B(N_a+1, N_b+1) + (N_a+N_b) log 2.
double z_tilde_ab(const ObservationState& state, int a, int b);

/// Z(t) = max_a min_{b != a} Z_{a,b}(t) = Z_{a_hat, b_hat}(t); the report
/// also carries Z~(t) = Z~_{a_hat, b_hat}(t) for the 1v1 rule.
IlessStatReport z_stat(const ObservationState& state);

/// Maximizer of the likelihood over the simplex subject to p'_a <= p'_b:
/// when phat_a >= phat_b, p*_a = p*_b = (N_a+N_b)/(2t) with the remaining
/// coordinates at their empirical frequencies; otherwise p* = phat.
std::vector<double> constrained_mle(std::span<const std::int64_t> counts, int a, int b);

}  // namespace modequest
